"""Echo-chamber dynamics of a detached, saturated cluster.

When a tightly knit community of n users saturates (every internal link at
the same weight w) and cuts its outside links, the dominant oscillation mode
of the cluster reduces to a two-component system: the mode amplitudes
(psi+, psi-) obey

    i d/dt (psi+, psi-) = [[+p, +q], [-q, -p]] (psi+, psi-)

with p = (omega2 + d) / (2 sqrt(d)), q = (omega2 - d) / (2 sqrt(d)),
d = (n - 1) w the node degree and omega2 = n w the squared mode frequency.

Writing psi+- = exp(-+ i theta+-) turns that linear system into coupled
phase equations of Kuramoto type,

    d theta+- / dt = p + q exp(+- i (theta+ + theta-)),

whose real parts drift while the imaginary parts set the amplitudes
|psi+| = exp(+Im theta+), |psi-| = exp(-Im theta-).  When the phase sum
s = Re theta+ + Re theta- sits at pi/2 the amplitudes grow monotonically at
the instantaneous rates C+- = q exp(-+(Im theta+ + Im theta-)); whether a
free run locks onto that state is reported by sync_diagnostics, never
assumed.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .dynamics import IntegratorConfig, Trajectory, integrate_fermion
from .errors import (
    DimensionMismatch,
    EmptyTrajectory,
    InvalidSize,
    InvalidValue,
    NonFiniteState,
    NonPositiveWeight,
    Overflow,
    ZeroAmplitude,
)
from .graph import (
    DetachmentResult,
    WeightedDigraph,
    detach_cluster,
    laplacian_set,
)
from .spectral import (
    PATTERN_THRESHOLD,
    PatternReport,
    check_real_spectrum,
    eigen_decompose,
    principal_sqrt,
    sparsity_report,
)

__all__ = [
    "EchoParams",
    "PhaseState",
    "PsiState",
    "SyncReport",
    "ScenarioReport",
    "SweepPoint",
    "block_matrix",
    "c_coefficient",
    "phase_to_psi",
    "psi_to_phase",
    "psi_series",
    "integrate_block",
    "integrate_phase",
    "integrate_locked",
    "sync_diagnostics",
    "run_scenario",
    "sweep_lock",
]


@dataclass(frozen=True)
class EchoParams:
    """Saturated-cluster parameters: n nodes, uniform weight w.

    Derived: degree d = (n - 1) w and squared mode frequency omega2 = n w,
    the nonzero Laplacian eigenvalue of the complete cluster.
    """

    n: int
    w: float
    d: float = field(init=False)
    omega2: float = field(init=False)

    def __post_init__(self) -> None:
        if not isinstance(self.n, (int, np.integer)) or self.n < 2:
            raise InvalidSize(f"cluster needs n >= 2, got {self.n!r}")
        if not (np.isfinite(self.w) and self.w > 0):
            raise NonPositiveWeight(f"weight must be positive, got {self.w!r}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "w", float(self.w))
        object.__setattr__(self, "d", (self.n - 1) * self.w)
        object.__setattr__(self, "omega2", self.n * self.w)

    @property
    def omega(self) -> float:
        """Mode frequency sqrt(n w)."""
        return math.sqrt(self.omega2)

    @property
    def drift(self) -> float:
        """Common drift rate of both phase real parts."""
        return (self.omega2 + self.d) / (2.0 * math.sqrt(self.d))

    @property
    def coupling(self) -> float:
        """Baseline coupling; equals C+- when the imaginary parts cancel."""
        return (self.omega2 - self.d) / (2.0 * math.sqrt(self.d))


@dataclass(frozen=True)
class PhaseState:
    """Complex phases (theta+, theta-); real parts carry the rotation,
    imaginary parts the log-amplitudes."""

    theta_plus: complex
    theta_minus: complex

    def __post_init__(self) -> None:
        tp = complex(self.theta_plus)
        tm = complex(self.theta_minus)
        for v in (tp, tm):
            if not (math.isfinite(v.real) and math.isfinite(v.imag)):
                raise InvalidValue("phases must be finite")
        object.__setattr__(self, "theta_plus", tp)
        object.__setattr__(self, "theta_minus", tm)

    @property
    def s(self) -> float:
        """Phase sum Re theta+ + Re theta-."""
        return self.theta_plus.real + self.theta_minus.real

    @property
    def m(self) -> float:
        """Imaginary sum Im theta+ + Im theta-."""
        return self.theta_plus.imag + self.theta_minus.imag


@dataclass(frozen=True)
class PsiState:
    """Mode amplitudes (psi+, psi-)."""

    psi_plus: complex
    psi_minus: complex

    def __post_init__(self) -> None:
        pp = complex(self.psi_plus)
        pm = complex(self.psi_minus)
        for v in (pp, pm):
            if not (math.isfinite(v.real) and math.isfinite(v.imag)):
                raise InvalidValue("amplitudes must be finite")
        object.__setattr__(self, "psi_plus", pp)
        object.__setattr__(self, "psi_minus", pm)


def block_matrix(p: EchoParams) -> np.ndarray:
    """The 2x2 generator [[+drift, +coupling], [-coupling, -drift]].

    Traceless with determinant -omega2, so its eigenvalues are +-omega.
    """
    m = np.array(
        [[p.drift, p.coupling], [-p.coupling, -p.drift]], dtype=np.float64
    )
    m.setflags(write=False)
    return m


def c_coefficient(p: EchoParams, im_plus: float, im_minus: float) -> tuple[float, float]:
    """Instantaneous coupling strengths C+- = coupling * exp(-+(Im+ + Im-)).

    Their product is coupling^2 regardless of the imaginary parts.
    """
    if not (math.isfinite(im_plus) and math.isfinite(im_minus)):
        raise InvalidValue("imaginary parts must be finite")
    m = im_plus + im_minus
    with np.errstate(over="ignore"):
        c_plus = p.coupling * np.exp(-m)
        c_minus = p.coupling * np.exp(m)
    if not (np.isfinite(c_plus) and np.isfinite(c_minus)):
        raise Overflow(
            f"coupling coefficient overflows for Im sum {m:.6g}"
        )
    return float(c_plus), float(c_minus)


def phase_to_psi(theta: PhaseState) -> PsiState:
    """psi+- = exp(-+ i theta+-)."""
    return PsiState(
        np.exp(-1j * theta.theta_plus), np.exp(1j * theta.theta_minus)
    )


def psi_to_phase(psi: PsiState, prev: PhaseState | None = None) -> PhaseState:
    """Invert psi+- = exp(-+ i theta+-).

    The real parts are only defined modulo 2 pi; when prev is given, the
    branch nearest the previous phase is chosen so that sampled series
    unwrap continuously.  Zero amplitudes have no phase.
    """
    if psi.psi_plus == 0 or psi.psi_minus == 0:
        raise ZeroAmplitude("phase undefined for zero amplitude")
    tp = 1j * np.log(complex(psi.psi_plus))
    tm = -1j * np.log(complex(psi.psi_minus))
    if prev is not None:
        two_pi = 2.0 * math.pi
        tp += two_pi * round((prev.theta_plus.real - tp.real) / two_pi)
        tm += two_pi * round((prev.theta_minus.real - tm.real) / two_pi)
    return PhaseState(complex(tp), complex(tm))


def psi_series(theta_traj: Trajectory) -> np.ndarray:
    """Map a sampled theta trajectory to (psi+, psi-) samples."""
    states = np.asarray(theta_traj.states, dtype=np.complex128)
    if states.ndim != 2 or states.shape[1] != 2:
        raise DimensionMismatch(
            f"expected [samples, 2] phase states, got {states.shape}"
        )
    out = np.empty_like(states)
    out[:, 0] = np.exp(-1j * states[:, 0])
    out[:, 1] = np.exp(1j * states[:, 1])
    return out


def _require_rk4(cfg: IntegratorConfig) -> None:
    if cfg.scheme != "rk4":
        raise InvalidValue("only rk4 applies to the cluster-mode equations")


def _echo_meta(equation: str, p: EchoParams, cfg: IntegratorConfig,
               components: list[str], extra: dict | None = None) -> dict:
    meta = {
        "equation": equation,
        "n": p.n,
        "w": p.w,
        "d": p.d,
        "omega2": p.omega2,
        "dt": cfg.dt,
        "t_end": cfg.t_end,
        "record_every": cfg.record_every,
        "scheme": cfg.scheme,
        "components": components,
    }
    if extra:
        meta.update(extra)
    return meta


def _check_finite(records: np.ndarray, times: np.ndarray) -> None:
    bad = ~np.all(np.isfinite(records), axis=1)
    if bad.any():
        k = int(np.argmax(bad))
        raise NonFiniteState(f"non-finite state at t={times[k]:.6g}")


def integrate_block(
    p: EchoParams, psi0: PsiState, cfg: IntegratorConfig
) -> Trajectory:
    """Integrate the linear mode equation i psi' = B psi."""
    _require_rk4(cfg)
    y0 = np.array([psi0.psi_plus, psi0.psi_minus], dtype=np.complex128)
    rec = _kernels.rk4_linear_complex(
        -1j * block_matrix(p), y0, cfg.dt, cfg.n_steps, cfg.record_every
    )
    times = cfg.times()
    _check_finite(rec, times)
    meta = _echo_meta("psi", p, cfg, ["psi_plus", "psi_minus"])
    return Trajectory(times, rec, meta)


def integrate_phase(
    p: EchoParams, theta0: PhaseState, cfg: IntegratorConfig
) -> Trajectory:
    """Integrate the coupled phase equations from theta0.

    States are complex (theta+, theta-) samples; the real parts come out
    naturally unwrapped because the equations are integrated, not wrapped.
    Exponential blow-up of C+- surfaces as NonFiniteState.
    """
    _require_rk4(cfg)
    y0 = np.array(
        [
            theta0.theta_plus.real,
            theta0.theta_plus.imag,
            theta0.theta_minus.real,
            theta0.theta_minus.imag,
        ],
        dtype=np.float64,
    )
    rec = _kernels.rk4_phase(
        p.drift, p.coupling, y0, cfg.dt, cfg.n_steps, cfg.record_every
    )
    times = cfg.times()
    _check_finite(rec, times)
    states = np.ascontiguousarray(rec).view(np.complex128)
    meta = _echo_meta("theta", p, cfg, ["theta_plus", "theta_minus"])
    return Trajectory(times, states, meta)


def integrate_locked(
    p: EchoParams,
    theta0: PhaseState,
    cfg: IntegratorConfig,
    s_lock: float = math.pi / 2.0,
) -> Trajectory:
    """Integrate the imaginary parts with the phase sum pinned at s_lock.

    This is the idealized synchronized regime: the real parts are held at
    s_lock / 2 each (theta0's real parts are ignored) and only
    Im theta+' = +C+ sin(s_lock), Im theta-' = -C- sin(s_lock) evolve.
    """
    _require_rk4(cfg)
    if not math.isfinite(s_lock):
        raise InvalidValue("s_lock must be finite")
    rec = _kernels.rk4_locked_imag(
        p.coupling,
        math.sin(s_lock),
        theta0.theta_plus.imag,
        theta0.theta_minus.imag,
        cfg.dt,
        cfg.n_steps,
        cfg.record_every,
    )
    times = cfg.times()
    _check_finite(rec, times)
    states = np.empty((rec.shape[0], 2), dtype=np.complex128)
    states[:, 0] = 0.5 * s_lock + 1j * rec[:, 0]
    states[:, 1] = 0.5 * s_lock + 1j * rec[:, 1]
    meta = _echo_meta(
        "theta", p, cfg, ["theta_plus", "theta_minus"],
        {"locked": True, "s_lock": float(s_lock)},
    )
    return Trajectory(times, states, meta)


@dataclass(frozen=True)
class SyncReport:
    """Synchronization diagnostics of a phase trajectory.

    lock means the phase sum s stayed within lock_tol of pi / 2 for at
    least the dwell time; growth rates are least-squares slopes of the
    log-amplitudes over the locked stretch (None when no lock).
    """

    times: np.ndarray
    s_series: np.ndarray
    amp_plus: np.ndarray
    amp_minus: np.ndarray
    lock_detected: bool
    lock_time: float | None
    growth_rate_plus: float | None
    growth_rate_minus: float | None


_S_TARGET = math.pi / 2.0


def sync_diagnostics(
    theta_traj: Trajectory, lock_tol: float = 0.05, dwell: float = 5.0
) -> SyncReport:
    """Extract s, the amplitudes, and lock/growth diagnostics.

    The distance to the target phase sum is evaluated modulo 2 pi, so
    trajectories that wind around are handled; the first stretch that stays
    within lock_tol for at least dwell time units counts as the lock.
    """
    if len(theta_traj) == 0:
        raise EmptyTrajectory("no samples to diagnose")
    if not (lock_tol > 0 and math.isfinite(lock_tol)):
        raise InvalidValue(f"lock_tol must be positive, got {lock_tol!r}")
    if not (dwell > 0 and math.isfinite(dwell)):
        raise InvalidValue(f"dwell must be positive, got {dwell!r}")

    states = np.asarray(theta_traj.states, dtype=np.complex128)
    if states.shape[1] != 2:
        raise DimensionMismatch(
            f"expected [samples, 2] phase states, got {states.shape}"
        )
    times = theta_traj.times
    s = states[:, 0].real + states[:, 1].real
    amp_plus = np.exp(states[:, 0].imag)
    amp_minus = np.exp(-states[:, 1].imag)

    two_pi = 2.0 * math.pi
    dist = np.abs(np.mod(s - _S_TARGET + math.pi, two_pi) - math.pi)
    within = dist < lock_tol

    lock_start = None
    lock_end = None
    k = 0
    n_samples = within.size
    while k < n_samples:
        if not within[k]:
            k += 1
            continue
        end = k
        while end + 1 < n_samples and within[end + 1]:
            end += 1
        if times[end] - times[k] >= dwell:
            lock_start, lock_end = k, end
            break
        k = end + 1

    if lock_start is None:
        lock_detected = False
        lock_time = None
        rate_plus = None
        rate_minus = None
    else:
        lock_detected = True
        lock_time = float(times[lock_start])
        window = slice(lock_start, lock_end + 1)
        t_win = times[window]
        rate_plus = float(np.polyfit(t_win, states[window, 0].imag, 1)[0])
        rate_minus = float(np.polyfit(t_win, -states[window, 1].imag, 1)[0])

    for arr in (s, amp_plus, amp_minus):
        arr.setflags(write=False)
    return SyncReport(
        times, s, amp_plus, amp_minus,
        lock_detected, lock_time, rate_plus, rate_minus,
    )


@dataclass(frozen=True)
class ScenarioReport:
    """Everything produced by one detach-and-analyze run."""

    base: WeightedDigraph
    detachment: DetachmentResult
    params: EchoParams
    block: np.ndarray
    pre_trajectory: Trajectory
    theta_trajectory: Trajectory
    psi_trajectory: Trajectory
    sync: SyncReport
    pattern: PatternReport
    boson_admissible: bool


def run_scenario(
    base: WeightedDigraph,
    cluster,
    w_sat: float,
    cfg: IntegratorConfig,
    init,
    theta0: PhaseState | None = None,
    lock_tol: float = 0.05,
    dwell: float = 5.0,
    pattern_threshold: float = PATTERN_THRESHOLD,
) -> ScenarioReport:
    """Full pipeline: integrate the base graph, detach the cluster, run its
    mode and phase dynamics, and report synchronization and sparsity.

    init is the doubled state for the pre-detachment run on the base graph;
    theta0 (default zero phases) seeds the cluster phase equations.
    """
    detachment = detach_cluster(base, cluster, w_sat)
    ls_base = laplacian_set(base)
    pre = integrate_fermion(ls_base, init, cfg)

    p = EchoParams(detachment.isolated.n, w_sat)
    block = block_matrix(p)
    if theta0 is None:
        theta0 = PhaseState(0.0, 0.0)
    theta_traj = integrate_phase(p, theta0, cfg)
    psi_traj = integrate_block(p, phase_to_psi(theta0), cfg)
    sync = sync_diagnostics(theta_traj, lock_tol=lock_tol, dwell=dwell)

    ls_iso = laplacian_set(detachment.isolated)
    sqrt_iso = principal_sqrt(ls_iso.L)
    pattern = sparsity_report(ls_iso, sqrt_iso, pattern_threshold)
    realness = check_real_spectrum(ls_iso.L)
    eigs = eigen_decompose(ls_iso.L).eigenvalues.real
    admissible = realness.all_real and bool(
        eigs.min() >= -1e-9 * max(float(np.abs(eigs).max()), 1.0)
    )
    return ScenarioReport(
        base, detachment, p, block, pre, theta_traj, psi_traj,
        sync, pattern, admissible,
    )


@dataclass(frozen=True)
class SweepPoint:
    """Lock diagnostics for one (n, w, s0, m0) grid point.

    s0 and m0 are the initial phase sum and imaginary sum, split evenly
    between theta+ and theta-.  diverged marks runs whose amplitudes left
    floating-point range before t_end.
    """

    n: int
    w: float
    s0: float
    m0: float
    lock_detected: bool
    lock_time: float | None
    growth_rate_plus: float | None
    growth_rate_minus: float | None
    diverged: bool


def sweep_lock(
    n_values,
    w_values,
    s0_values,
    m0_values,
    cfg: IntegratorConfig,
    lock_tol: float = 0.05,
    dwell: float = 5.0,
    max_workers: int | None = None,
) -> tuple[SweepPoint, ...]:
    """Run integrate_phase over a parameter grid and collect lock reports.

    Grid order is the nested product (n, w, s0, m0) with the last axis
    fastest; results always come back in that order regardless of worker
    scheduling.
    """
    grid = list(itertools.product(n_values, w_values, s0_values, m0_values))

    def run_one(point) -> SweepPoint:
        n, w, s0, m0 = point
        p = EchoParams(int(n), float(w))
        theta0 = PhaseState(
            0.5 * s0 + 0.5j * m0, 0.5 * s0 + 0.5j * m0
        )
        try:
            traj = integrate_phase(p, theta0, cfg)
        except NonFiniteState:
            return SweepPoint(
                p.n, p.w, float(s0), float(m0),
                False, None, None, None, True,
            )
        sync = sync_diagnostics(traj, lock_tol=lock_tol, dwell=dwell)
        return SweepPoint(
            p.n, p.w, float(s0), float(m0),
            sync.lock_detected, sync.lock_time,
            sync.growth_rate_plus, sync.growth_rate_minus, False,
        )

    if max_workers == 1 or len(grid) <= 1:
        return tuple(run_one(pt) for pt in grid)
    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        return tuple(pool.map(run_one, grid))
