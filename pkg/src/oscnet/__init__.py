"""Oscillation dynamics on weighted directed networks.

Builds graph Laplacians and their degree-normalized variants, analyzes
spectra and principal matrix square roots, integrates the second-order wave
form and its two first-order doubled-state factorizations, and follows a
detached saturated cluster into its echo-chamber phase dynamics.  Hot
integration loops run in a compiled extension when available, with a
pure-numpy fallback selected automatically at import.
"""

from ._kernels import backend_name
from .dynamics import (
    AnticommutationReport,
    DoubledState,
    IntegratorConfig,
    PauliPair,
    RealState,
    Trajectory,
    boson_generator,
    fermion_generator,
    integrate_boson,
    integrate_fermion,
    integrate_wave,
    pauli_pair,
    project_state,
    project_trajectory,
    verify_anticommutation,
    wave_energy,
    wave_residual,
)
from .echo import (
    EchoParams,
    PhaseState,
    PsiState,
    ScenarioReport,
    SweepPoint,
    SyncReport,
    block_matrix,
    c_coefficient,
    integrate_block,
    integrate_locked,
    integrate_phase,
    phase_to_psi,
    psi_series,
    psi_to_phase,
    run_scenario,
    sweep_lock,
    sync_diagnostics,
)
from .errors import (
    ComplexSpectrum,
    ConvergenceFailure,
    DimensionMismatch,
    DuplicateEdge,
    EmptyTrajectory,
    IndexOutOfRange,
    InvalidSize,
    InvalidSubset,
    InvalidValue,
    IoError,
    MissingKey,
    NegativeEigenvalue,
    NonFiniteState,
    NonPositiveWeight,
    NonUniformSampling,
    NumericalError,
    OddLength,
    OscnetError,
    Overflow,
    ParseError,
    SelfLoop,
    TooFewSamples,
    UnstableStep,
    ValidationError,
    ZeroAmplitude,
    ZeroOutDegree,
)
from .graph import (
    DetachmentResult,
    LaplacianSet,
    WeightedDigraph,
    build_graph,
    complete_graph,
    detach_cluster,
    laplacian_set,
)
from .io import (
    EchoBlock,
    ScenarioConfig,
    load_config,
    load_graph,
    read_timeseries,
    timeseries_payload,
    write_scenario_report,
    write_timeseries,
)
from .spectral import (
    PatternReport,
    RealnessReport,
    Spectrum,
    SqrtResult,
    check_real_spectrum,
    eigen_decompose,
    principal_sqrt,
    sparsity_report,
)

__version__ = "0.1.0"
