"""Acceptance gate: one end-to-end check per shipped guarantee.

Each test prints a single [PASS]/[FAIL] line (run pytest with -s to see
them all) and then asserts, so the module doubles as a short report and a
hard gate.  Tolerances here are contracts; loosening them is a bug, not a
fix.  The whole module runs in seconds on the compiled backend and well
under two minutes on the pure-Python one.
"""

import math
from fractions import Fraction

import numpy as np
import scipy.linalg

from oscnet import (
    DoubledState,
    EchoParams,
    IntegratorConfig,
    PhaseState,
    RealState,
    block_matrix,
    boson_generator,
    c_coefficient,
    complete_graph,
    fermion_generator,
    integrate_block,
    integrate_boson,
    integrate_fermion,
    integrate_locked,
    integrate_phase,
    integrate_wave,
    laplacian_set,
    phase_to_psi,
    principal_sqrt,
    project_state,
    project_trajectory,
    psi_series,
    sparsity_report,
    sync_diagnostics,
    verify_anticommutation,
    wave_energy,
    wave_residual,
)
from util import (
    eig_sqrt_oracle,
    path_graph,
    random_digraph,
    random_undirected,
    row_scaled_digraph,
    wave_block,
)


def _verdict(num: int, name: str, ok: bool, detail: str = "") -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {num:02d}: {name}"
    if detail:
        line += f"  ({detail})"
    print(line)
    assert ok, line


def test_criterion_01_pauli_pair_identities():
    """a b + b a = identity and a^2 = b^2 = 0, in exact rational arithmetic."""
    rep = verify_anticommutation()
    one, zero = Fraction(1), Fraction(0)
    identity = ((one, zero), (zero, one))
    null = ((zero, zero), (zero, zero))
    all_rational = all(
        isinstance(entry, Fraction)
        for matrix in (rep.ab, rep.ba, rep.a_squared, rep.b_squared, rep.anticommutator)
        for row in matrix
        for entry in row
    )
    ok = (
        rep.holds
        and all_rational
        and rep.anticommutator == identity
        and rep.a_squared == null
        and rep.b_squared == null
    )
    _verdict(1, "pauli pair identities hold exactly", ok)


def test_criterion_02_laplacian_row_sums_pattern_degrees():
    """100 random graphs, n <= 50: L and H rows sum to zero within 1e-12,
    H keeps L's zero pattern, and D recovers each out-degree sum exactly."""
    rng = np.random.default_rng(8245021)
    worst_row = 0.0
    pattern_ok = True
    degrees_ok = True
    for k in range(100):
        n = int(rng.integers(2, 51))
        g = random_digraph(rng, n) if k % 2 == 0 else random_undirected(rng, n)
        ls = laplacian_set(g)
        worst_row = max(
            worst_row,
            float(np.max(np.abs(ls.L.sum(axis=1)))),
            float(np.max(np.abs(ls.H.sum(axis=1)))),
        )
        pattern_ok = pattern_ok and np.array_equal(ls.H != 0.0, ls.L != 0.0)
        per_node = [[] for _ in range(n)]
        for src, _, w in g.edges:
            per_node[src].append(w)
        oracle = np.array([math.fsum(ws) for ws in per_node])
        degrees_ok = degrees_ok and np.array_equal(np.diag(ls.D), oracle)
    ok = worst_row <= 1e-12 and pattern_ok and degrees_ok
    _verdict(
        2,
        "laplacian row sums, H pattern, exact degrees",
        ok,
        f"worst row sum {worst_row:.2e}, degrees bitwise equal: {degrees_ok}",
    )


def test_criterion_03_square_root_residuals():
    """|R R - L|_F / |L|_F <= 1e-9 on 50 random symmetric Laplacians and 20
    directed real-spectrum ones; symmetric roots match an independent
    eigendecomposition oracle to 1e-8 entrywise."""
    rng = np.random.default_rng(55310)
    worst_rel = 0.0
    worst_entry = 0.0
    for _ in range(50):
        n = int(rng.integers(2, 51))
        ls = laplacian_set(random_undirected(rng, n))
        res = principal_sqrt(ls.L)
        recomputed = np.linalg.norm(res.root @ res.root - ls.L) / np.linalg.norm(ls.L)
        worst_rel = max(worst_rel, recomputed, res.residual)
        worst_entry = max(
            worst_entry, float(np.max(np.abs(res.root - eig_sqrt_oracle(ls.L))))
        )
    worst_dir = 0.0
    for _ in range(20):
        n = int(rng.integers(2, 21))
        ls = laplacian_set(row_scaled_digraph(rng, n))
        res = principal_sqrt(ls.L)
        recomputed = np.linalg.norm(res.root @ res.root - ls.L) / np.linalg.norm(ls.L)
        worst_dir = max(worst_dir, recomputed, res.residual)
    ok = worst_rel <= 1e-9 and worst_dir <= 1e-9 and worst_entry <= 1e-8
    _verdict(
        3,
        "square-root residuals and oracle agreement",
        ok,
        f"sym {worst_rel:.2e}, directed {worst_dir:.2e}, entrywise {worst_entry:.2e}",
    )


def test_criterion_04_path_graph_fill_in():
    """Path graphs, n = 4..20: sqrt(L) is dense off the diagonal (every
    magnitude above 1e-12) while H keeps L's sparsity pattern."""
    ok = True
    min_off = math.inf
    for n in range(4, 21):
        ls = laplacian_set(path_graph(n))
        root = principal_sqrt(ls.L)
        rep = sparsity_report(ls, root)
        ok = (
            ok
            and rep.sqrt_is_complete
            and rep.h_defined
            and np.array_equal(rep.masks["H"], rep.masks["L"])
        )
        off = ~np.eye(n, dtype=bool)
        min_off = min(min_off, float(np.min(np.abs(root.root[off]))))
    ok = ok and min_off > 1e-12
    _verdict(
        4,
        "path-graph square roots fill in, H does not",
        ok,
        f"smallest off-diagonal magnitude {min_off:.2e}",
    )


def test_criterion_05_fermion_projection_solves_wave():
    """20 random doubled initial states on K3, K5, and a random connected
    graph (n = 8): the projected fermion trajectory agrees with the wave
    integrator to 1e-5 sup-norm up to t = 10 at dt = 1e-3, and its
    second-difference residual drops by about 4x when dt is halved."""
    rng = np.random.default_rng(911)
    graphs = [complete_graph(3, 1.0), complete_graph(5, 1.0), random_undirected(rng, 8)]
    counts = (7, 7, 6)
    cfg_long = IntegratorConfig(dt=1e-3, t_end=10.0, record_every=10)
    cfg_coarse = IntegratorConfig(dt=2e-3, t_end=5.0, record_every=1)
    cfg_fine = IntegratorConfig(dt=1e-3, t_end=5.0, record_every=1)
    worst_sup = 0.0
    ratios = []
    for g, count in zip(graphs, counts):
        ls = laplacian_set(g)
        gen = fermion_generator(ls)
        for _ in range(count):
            xhat0 = rng.normal(size=2 * ls.n) + 1j * rng.normal(size=2 * ls.n)
            x0 = project_state(xhat0)
            v0 = project_state(-1j * (gen @ xhat0))
            proj = project_trajectory(
                integrate_fermion(ls, DoubledState(xhat0), cfg_long)
            )
            wave_re = integrate_wave(ls, RealState(x0.real, v0.real), cfg_long)
            wave_im = integrate_wave(ls, RealState(x0.imag, v0.imag), cfg_long)
            combined = wave_re.states + 1j * wave_im.states
            worst_sup = max(worst_sup, float(np.max(np.abs(proj.states - combined))))
            res_coarse = wave_residual(
                project_trajectory(integrate_fermion(ls, DoubledState(xhat0), cfg_coarse)),
                ls,
            )[1]
            res_fine = wave_residual(
                project_trajectory(integrate_fermion(ls, DoubledState(xhat0), cfg_fine)),
                ls,
            )[1]
            ratios.append(float(np.max(res_coarse) / np.max(res_fine)))
    ok = worst_sup <= 1e-5 and min(ratios) >= 3.0 and max(ratios) <= 5.0
    _verdict(
        5,
        "fermion projection solves the wave form",
        ok,
        f"sup {worst_sup:.2e}, halving ratios [{min(ratios):.2f}, {max(ratios):.2f}]",
    )


def test_criterion_06_saturated_cluster_parameters():
    """EchoParams(10, 1): d = 9, omega^2 = 10, the exact 2x2 block, its
    eigenvalues +-sqrt(10) to 1e-10, and C+-(0) = 1/6."""
    p = EchoParams(10, 1.0)
    block = block_matrix(p)
    expected = np.array([[19.0 / 6.0, 1.0 / 6.0], [-1.0 / 6.0, -19.0 / 6.0]])
    omega = math.sqrt(10.0)
    eigs = np.sort_complex(np.linalg.eigvals(block))
    eig_err = float(np.max(np.abs(eigs - np.array([-omega, omega]))))
    ok = (
        p.d == 9.0
        and p.omega2 == 10.0
        and np.array_equal(block, expected)
        and eig_err <= 1e-10
        and c_coefficient(p, 0.0, 0.0) == (1.0 / 6.0, 1.0 / 6.0)
    )
    _verdict(
        6,
        "saturated cluster parameters are exact",
        ok,
        f"eigenvalue error {eig_err:.2e}",
    )


def test_criterion_07_theta_and_psi_routes_agree():
    """20 random initial phases (|Im| <= 1/2): integrating the nonlinear
    phase equations and the linear mode equation gives the same psi series
    to 1e-6 sup-norm up to t = 5."""
    p = EchoParams(10, 1.0)
    rng = np.random.default_rng(4200)
    cfg = IntegratorConfig(dt=1e-3, t_end=5.0, record_every=10)
    worst = 0.0
    for _ in range(20):
        theta0 = PhaseState(
            complex(rng.uniform(-math.pi, math.pi), rng.uniform(-0.5, 0.5)),
            complex(rng.uniform(-math.pi, math.pi), rng.uniform(-0.5, 0.5)),
        )
        phase = integrate_phase(p, theta0, cfg)
        block = integrate_block(p, phase_to_psi(theta0), cfg)
        worst = max(worst, float(np.max(np.abs(psi_series(phase) - block.states))))
    ok = worst <= 1e-6
    _verdict(7, "theta and psi routes agree", ok, f"sup {worst:.2e}")


def test_criterion_08_locked_phase_growth():
    """Phase sum pinned at pi/2: d Im theta+- / dt = +-C+- at the sampling
    truncation level, both amplitudes grow strictly monotonically, and the
    fitted growth rates sit within 5% of the window-averaged C+-."""
    p = EchoParams(10, 1.0)
    cfg = IntegratorConfig(dt=1e-3, t_end=20.0, record_every=1)
    traj = integrate_locked(p, PhaseState(0.15j, 0.15j), cfg)
    im_plus = traj.states[:, 0].imag
    im_minus = traj.states[:, 1].imag
    m_series = im_plus + im_minus
    c_plus = p.coupling * np.exp(-m_series)
    c_minus = p.coupling * np.exp(m_series)
    h = traj.sample_dt
    dev = max(
        float(np.max(np.abs((im_plus[2:] - im_plus[:-2]) / (2 * h) - c_plus[1:-1]))),
        float(np.max(np.abs((im_minus[2:] - im_minus[:-2]) / (2 * h) + c_minus[1:-1]))),
    )
    rep = sync_diagnostics(traj)
    monotone = bool(
        np.all(np.diff(rep.amp_plus) > 0) and np.all(np.diff(rep.amp_minus) > 0)
    )
    rel_plus = abs(rep.growth_rate_plus - c_plus.mean()) / c_plus.mean()
    rel_minus = abs(rep.growth_rate_minus - c_minus.mean()) / c_minus.mean()
    ok = (
        rep.lock_detected
        and rep.lock_time == 0.0
        and dev <= 1e-6
        and monotone
        and rel_plus <= 0.05
        and rel_minus <= 0.05
    )
    _verdict(
        8,
        "locked-phase growth matches the C coefficients",
        ok,
        f"derivative dev {dev:.2e}, rate errors {rel_plus:.3f}/{rel_minus:.3f}",
    )


def test_criterion_09_conservation():
    """Leapfrog wave energy drifts by less than 1e-6 relative over t = 100
    on undirected graphs; C+ C- drifts by less than 1e-8 along a free phase
    trajectory."""
    rng = np.random.default_rng(77)
    graphs = [complete_graph(6, 1.0), random_undirected(rng, 8)]
    worst_drift = 0.0
    for g in graphs:
        ls = laplacian_set(g)
        x0 = rng.uniform(-1.0, 1.0, ls.n)
        v0 = rng.uniform(-1.0, 1.0, ls.n)
        cfg = IntegratorConfig(dt=5e-4, t_end=100.0, scheme="leapfrog", record_every=100)
        traj = integrate_wave(ls, RealState(x0, v0), cfg)
        energy = wave_energy(ls, traj)
        worst_drift = max(
            worst_drift, float(np.max(np.abs(energy - energy[0])) / abs(energy[0]))
        )
    p = EchoParams(10, 1.0)
    traj = integrate_phase(
        p,
        PhaseState(0.3 + 0.2j, -0.1 + 0.1j),
        IntegratorConfig(dt=1e-3, t_end=10.0, record_every=10),
    )
    products = np.array(
        [np.prod(c_coefficient(p, s[0].imag, s[1].imag)) for s in traj.states]
    )
    product_drift = float(np.max(np.abs(products - products[0])) / products[0])
    ok = worst_drift < 1e-6 and product_drift < 1e-8
    _verdict(
        9,
        "leapfrog energy and coupling-product conservation",
        ok,
        f"energy drift {worst_drift:.2e}, product drift {product_drift:.2e}",
    )


def test_criterion_10_integrators_match_matrix_exponentials():
    """Wave, boson, and fermion integrators all reproduce the dense
    matrix-exponential solution at t = 1 to 1e-8 on graphs with n <= 6."""
    rng = np.random.default_rng(31)
    graphs = [complete_graph(3, 1.0), path_graph(4, 0.7), row_scaled_digraph(rng, 4)]
    cfg = IntegratorConfig(dt=1e-3, t_end=1.0, record_every=1000)
    worst = 0.0
    for g in graphs:
        ls = laplacian_set(g)
        root = principal_sqrt(ls.L)
        x0 = rng.uniform(-1.0, 1.0, ls.n)
        v0 = rng.uniform(-1.0, 1.0, ls.n)
        wave = integrate_wave(ls, RealState(x0, v0), cfg)
        expected = scipy.linalg.expm(wave_block(ls.L)) @ np.concatenate([x0, v0])
        final = np.concatenate([wave.states[-1], wave.velocities[-1]])
        worst = max(worst, float(np.max(np.abs(final - expected))))

        xhat0 = rng.normal(size=2 * ls.n) + 1j * rng.normal(size=2 * ls.n)
        boson = integrate_boson(ls, root, DoubledState(xhat0), cfg)
        expected = scipy.linalg.expm(-1j * boson_generator(ls, root)) @ xhat0
        worst = max(worst, float(np.max(np.abs(boson.states[-1] - expected))))

        fermion = integrate_fermion(ls, DoubledState(xhat0), cfg)
        expected = scipy.linalg.expm(-1j * fermion_generator(ls)) @ xhat0
        worst = max(worst, float(np.max(np.abs(fermion.states[-1] - expected))))
    ok = worst <= 1e-8
    _verdict(
        10,
        "linear integrators match dense matrix exponentials",
        ok,
        f"sup {worst:.2e}",
    )
