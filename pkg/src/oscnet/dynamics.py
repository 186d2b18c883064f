"""Oscillation dynamics on a graph and their first-order reformulations.

The second-order wave form x'' = -L x describes how activity propagates
between linked users.  It factors into first-order form in two ways, both
acting on a doubled state vector that interleaves an up and a down component
per node (x+_0, x-_0, x+_1, ...):

* boson form: generator sqrt(L) (x) diag(+1, -1), which requires the
  Laplacian's principal square root and is generally dense;
* fermion form: generator H (x) a + sqrt(D) (x) b, built from the
  semi-normalized Laplacian and the nilpotent pair a, b below, which keeps
  the sparsity of the original links.

Summing the two components per node projects a doubled trajectory back onto
a solution of the wave form; that identity rests on the anticommutation
relation a b + b a = 1 with a^2 = b^2 = 0, verified here in exact rational
arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import sqrt

import numpy as np

from . import _kernels
from .errors import (
    DimensionMismatch,
    InvalidValue,
    NonFiniteState,
    NonUniformSampling,
    OddLength,
    TooFewSamples,
    UnstableStep,
)
from .graph import LaplacianSet
from .spectral import SqrtResult, eigen_decompose

__all__ = [
    "RealState",
    "DoubledState",
    "PauliPair",
    "AnticommutationReport",
    "IntegratorConfig",
    "Trajectory",
    "pauli_pair",
    "verify_anticommutation",
    "integrate_wave",
    "integrate_boson",
    "integrate_fermion",
    "fermion_generator",
    "boson_generator",
    "project_state",
    "project_trajectory",
    "wave_residual",
    "wave_energy",
]

# Fixed-step schemes stay well inside the stability region when
# dt <= _STABILITY_FACTOR / sqrt(lambda_max).
_STABILITY_FACTOR = 0.1


def _finite_1d(values, dtype, what: str) -> np.ndarray:
    arr = np.asarray(values, dtype=dtype)
    if arr.ndim != 1:
        raise DimensionMismatch(f"{what} must be one-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidValue(f"{what} must contain only finite values")
    return arr


@dataclass(frozen=True)
class RealState:
    """Displacement and velocity per node for the second-order form."""

    x: np.ndarray
    v: np.ndarray

    def __post_init__(self) -> None:
        x = _finite_1d(self.x, np.float64, "x")
        v = _finite_1d(self.v, np.float64, "v")
        if x.shape != v.shape:
            raise DimensionMismatch(
                f"x has length {x.size} but v has length {v.size}"
            )
        x.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "v", v)

    @property
    def n(self) -> int:
        return self.x.size


@dataclass(frozen=True)
class DoubledState:
    """Interleaved doubled state (x+_0, x-_0, x+_1, x-_1, ...)."""

    xhat: np.ndarray

    def __post_init__(self) -> None:
        xhat = _finite_1d(self.xhat, np.complex128, "xhat")
        if xhat.size % 2:
            raise OddLength(f"doubled state has odd length {xhat.size}")
        xhat.setflags(write=False)
        object.__setattr__(self, "xhat", xhat)

    @classmethod
    def from_components(cls, x_plus, x_minus) -> "DoubledState":
        p = np.asarray(x_plus, dtype=np.complex128)
        m = np.asarray(x_minus, dtype=np.complex128)
        if p.shape != m.shape or p.ndim != 1:
            raise DimensionMismatch(
                f"component shapes differ: {p.shape} vs {m.shape}"
            )
        xhat = np.empty(2 * p.size, dtype=np.complex128)
        xhat[0::2] = p
        xhat[1::2] = m
        return cls(xhat)

    def components(self) -> tuple[np.ndarray, np.ndarray]:
        return self.xhat[0::2], self.xhat[1::2]

    def project(self) -> np.ndarray:
        return self.xhat[0::2] + self.xhat[1::2]

    @property
    def n(self) -> int:
        return self.xhat.size // 2


def _rational(rows) -> tuple[tuple[Fraction, ...], ...]:
    return tuple(tuple(Fraction(v) for v in row) for row in rows)


_A_EXACT = _rational([[Fraction(1, 2), Fraction(1, 2)],
                      [Fraction(-1, 2), Fraction(-1, 2)]])
_B_EXACT = _rational([[Fraction(1, 2), Fraction(-1, 2)],
                      [Fraction(1, 2), Fraction(-1, 2)]])
_E_EXACT = _rational([[1, 0], [0, 1]])
_O_EXACT = _rational([[0, 0], [0, 0]])


def _rat_mul(x, y):
    return tuple(
        tuple(sum(x[i][k] * y[k][j] for k in range(2)) for j in range(2))
        for i in range(2)
    )


def _rat_add(x, y):
    return tuple(
        tuple(x[i][j] + y[i][j] for j in range(2)) for i in range(2)
    )


@dataclass(frozen=True)
class PauliPair:
    """The 2x2 pair a, b with a b + b a = e and a^2 = b^2 = o."""

    a_hat: np.ndarray
    b_hat: np.ndarray
    e_hat: np.ndarray
    o_hat: np.ndarray


def pauli_pair() -> PauliPair:
    mats = [np.array(m, dtype=np.float64) for m in
            (_A_EXACT, _B_EXACT, _E_EXACT, _O_EXACT)]
    for m in mats:
        m.setflags(write=False)
    return PauliPair(*mats)


_PAULI = pauli_pair()


@dataclass(frozen=True)
class AnticommutationReport:
    """Exact products of the pair a, b, all entries rational."""

    ab: tuple
    ba: tuple
    a_squared: tuple
    b_squared: tuple
    anticommutator: tuple
    holds: bool


def verify_anticommutation() -> AnticommutationReport:
    """Check a b + b a = identity and a^2 = b^2 = 0 in exact arithmetic."""
    ab = _rat_mul(_A_EXACT, _B_EXACT)
    ba = _rat_mul(_B_EXACT, _A_EXACT)
    a2 = _rat_mul(_A_EXACT, _A_EXACT)
    b2 = _rat_mul(_B_EXACT, _B_EXACT)
    anti = _rat_add(ab, ba)
    holds = anti == _E_EXACT and a2 == _O_EXACT and b2 == _O_EXACT
    return AnticommutationReport(ab, ba, a2, b2, anti, holds)


@dataclass(frozen=True)
class IntegratorConfig:
    """Fixed-step integration settings.

    scheme is "rk4" (any equation) or "leapfrog" (wave form only);
    record_every thins the stored samples without changing the step.
    """

    dt: float
    t_end: float
    scheme: str = "rk4"
    record_every: int = 1

    def __post_init__(self) -> None:
        if not (np.isfinite(self.dt) and self.dt > 0):
            raise InvalidValue(f"dt must be positive and finite, got {self.dt!r}")
        if not (np.isfinite(self.t_end) and self.t_end > 0):
            raise InvalidValue(f"t_end must be positive and finite, got {self.t_end!r}")
        if self.dt >= self.t_end:
            raise InvalidValue(
                f"dt ({self.dt}) must be smaller than t_end ({self.t_end})"
            )
        scheme = str(self.scheme).lower()
        if scheme not in ("rk4", "leapfrog"):
            raise InvalidValue(f"unknown scheme {self.scheme!r}")
        object.__setattr__(self, "scheme", scheme)
        if not isinstance(self.record_every, (int, np.integer)) or self.record_every < 1:
            raise InvalidValue(
                f"record_every must be a positive int, got {self.record_every!r}"
            )
        object.__setattr__(self, "record_every", int(self.record_every))

    @property
    def n_steps(self) -> int:
        return max(1, int(round(self.t_end / self.dt)))

    @property
    def n_records(self) -> int:
        return self.n_steps // self.record_every

    @property
    def sample_dt(self) -> float:
        return self.dt * self.record_every

    def times(self) -> np.ndarray:
        return np.arange(self.n_records + 1) * self.sample_dt


@dataclass(frozen=True)
class Trajectory:
    """Uniformly sampled time series of states, plus provenance metadata.

    states is [samples, components]; velocities rides along for the wave
    form only and is excluded from serialized output.
    """

    times: np.ndarray
    states: np.ndarray
    meta: dict
    velocities: np.ndarray | None = None

    def __post_init__(self) -> None:
        times = np.asarray(self.times, dtype=np.float64)
        states = np.asarray(self.states)
        if times.ndim != 1:
            raise DimensionMismatch(f"times must be 1-D, got shape {times.shape}")
        if states.ndim != 2:
            raise DimensionMismatch(f"states must be 2-D, got shape {states.shape}")
        if times.size != states.shape[0]:
            raise DimensionMismatch(
                f"{times.size} times but {states.shape[0]} state rows"
            )
        if times.size >= 2:
            diffs = np.diff(times)
            if diffs[0] <= 0 or not np.allclose(diffs, diffs[0], rtol=1e-9, atol=0.0):
                raise NonUniformSampling("sample times must increase uniformly")
        vel = self.velocities
        if vel is not None:
            vel = np.asarray(vel)
            if vel.shape != states.shape:
                raise DimensionMismatch(
                    f"velocities shape {vel.shape} does not match states {states.shape}"
                )
            vel.setflags(write=False)
        times.setflags(write=False)
        states.setflags(write=False)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "velocities", vel)

    def __len__(self) -> int:
        return self.times.size

    @property
    def sample_dt(self) -> float:
        if len(self) < 2:
            return 0.0
        return float(self.times[1] - self.times[0])


def _max_real_eigenvalue(ls: LaplacianSet) -> float:
    return max(eigen_decompose(ls.L).max_real, 0.0)


def _check_stability(cfg: IntegratorConfig, lam_max: float) -> None:
    if lam_max <= 0.0:
        return
    bound = _STABILITY_FACTOR / sqrt(lam_max)
    if cfg.dt > bound:
        raise UnstableStep(
            f"dt={cfg.dt:g} exceeds the stability bound "
            f"{_STABILITY_FACTOR:g}/sqrt(lambda_max)={bound:.6g}"
        )


def _check_finite(records: np.ndarray, times: np.ndarray) -> None:
    bad = ~np.all(np.isfinite(records), axis=1)
    if bad.any():
        k = int(np.argmax(bad))
        raise NonFiniteState(f"non-finite state at t={times[k]:.6g}")


def _meta(equation: str, ls: LaplacianSet, cfg: IntegratorConfig,
          components: list[str], extra: dict | None) -> dict:
    meta = {
        "equation": equation,
        "graph": ls.graph.fingerprint(),
        "n": ls.n,
        "dt": cfg.dt,
        "t_end": cfg.t_end,
        "record_every": cfg.record_every,
        "scheme": cfg.scheme,
        "components": components,
    }
    if extra:
        meta.update(extra)
    return meta


def integrate_wave(
    ls: LaplacianSet,
    init: RealState,
    cfg: IntegratorConfig,
    extra_meta: dict | None = None,
) -> Trajectory:
    """Integrate x'' = -L x from (x0, v0).

    RK4 runs on the equivalent first-order system in (x, v); leapfrog
    (velocity Verlet) steps the second-order form directly and conserves
    the discrete energy of symmetric Laplacians.
    """
    n = ls.n
    if init.n != n:
        raise DimensionMismatch(f"state has {init.n} nodes, graph has {n}")
    _check_stability(cfg, _max_real_eigenvalue(ls))

    if cfg.scheme == "leapfrog":
        xs, vs = _kernels.leapfrog_wave(
            ls.L, init.x, init.v, cfg.dt, cfg.n_steps, cfg.record_every
        )
    else:
        block = np.zeros((2 * n, 2 * n))
        block[:n, n:] = np.eye(n)
        block[n:, :n] = -ls.L
        y0 = np.concatenate([init.x, init.v])
        rec = _kernels.rk4_linear_real(
            block, y0, cfg.dt, cfg.n_steps, cfg.record_every
        )
        xs, vs = rec[:, :n], rec[:, n:]

    times = cfg.times()
    _check_finite(xs, times)
    _check_finite(vs, times)
    components = [f"x_{i}" for i in range(n)]
    meta = _meta("wave", ls, cfg, components, extra_meta)
    return Trajectory(times, xs, meta, velocities=vs)


def integrate_boson(
    ls: LaplacianSet,
    sqrt_l: SqrtResult,
    init: DoubledState,
    cfg: IntegratorConfig,
    extra_meta: dict | None = None,
) -> Trajectory:
    """Integrate the boson form i xhat' = (sqrt(L) (x) diag(+1, -1)) xhat."""
    n = ls.n
    root = np.asarray(sqrt_l.root)
    if root.shape != (n, n):
        raise DimensionMismatch(
            f"square root shape {root.shape} does not match the graph ({n} nodes)"
        )
    if init.n != n:
        raise DimensionMismatch(f"state has {init.n} nodes, graph has {n}")
    if cfg.scheme != "rk4":
        raise InvalidValue("leapfrog applies to the wave form only")
    _check_stability(cfg, _max_real_eigenvalue(ls))

    generator = np.kron(root, np.diag([1.0, -1.0]))
    rec = _kernels.rk4_linear_complex(
        -1j * generator, init.xhat, cfg.dt, cfg.n_steps, cfg.record_every
    )
    times = cfg.times()
    _check_finite(rec, times)
    components = [f"xhat_{i}" for i in range(2 * n)]
    meta = _meta("boson", ls, cfg, components, extra_meta)
    return Trajectory(times, rec, meta)


def integrate_fermion(
    ls: LaplacianSet,
    init: DoubledState,
    cfg: IntegratorConfig,
    extra_meta: dict | None = None,
) -> Trajectory:
    """Integrate the fermion form i xhat' = (H (x) a + sqrt(D) (x) b) xhat.

    Works on any graph with positive out-degrees, including graphs whose
    Laplacian spectrum is complex; no matrix square root is involved.
    """
    n = ls.n
    if init.n != n:
        raise DimensionMismatch(f"state has {init.n} nodes, graph has {n}")
    if cfg.scheme != "rk4":
        raise InvalidValue("leapfrog applies to the wave form only")
    h = ls.H
    _check_stability(cfg, _max_real_eigenvalue(ls))

    sqrt_d = np.diag(np.sqrt(ls.degrees))
    generator = np.kron(h, _PAULI.a_hat) + np.kron(sqrt_d, _PAULI.b_hat)
    rec = _kernels.rk4_linear_complex(
        -1j * generator, init.xhat, cfg.dt, cfg.n_steps, cfg.record_every
    )
    times = cfg.times()
    _check_finite(rec, times)
    components = [f"xhat_{i}" for i in range(2 * n)]
    meta = _meta("fermion", ls, cfg, components, extra_meta)
    return Trajectory(times, rec, meta)


def fermion_generator(ls: LaplacianSet) -> np.ndarray:
    """The 2n x 2n matrix H (x) a + sqrt(D) (x) b (node-major interleaving)."""
    sqrt_d = np.diag(np.sqrt(ls.degrees))
    return np.kron(ls.H, _PAULI.a_hat) + np.kron(sqrt_d, _PAULI.b_hat)


def boson_generator(ls: LaplacianSet, sqrt_l: SqrtResult) -> np.ndarray:
    """The 2n x 2n matrix sqrt(L) (x) diag(+1, -1)."""
    root = np.asarray(sqrt_l.root)
    if root.shape != (ls.n, ls.n):
        raise DimensionMismatch(
            f"square root shape {root.shape} does not match the graph ({ls.n} nodes)"
        )
    return np.kron(root, np.diag([1.0, -1.0]))


def project_state(state) -> np.ndarray:
    """Sum the up/down components per node: xhat -> x."""
    if isinstance(state, DoubledState):
        return state.project()
    arr = np.asarray(state, dtype=np.complex128)
    if arr.ndim != 1:
        raise DimensionMismatch(f"expected a vector, got shape {arr.shape}")
    if arr.size % 2:
        raise OddLength(f"doubled state has odd length {arr.size}")
    return arr[0::2] + arr[1::2]


def project_trajectory(traj: Trajectory) -> Trajectory:
    """Apply the component-sum projection to every sample of a trajectory."""
    states = np.asarray(traj.states)
    if states.shape[1] % 2:
        raise OddLength(f"doubled states have odd width {states.shape[1]}")
    projected = states[:, 0::2] + states[:, 1::2]
    n = projected.shape[1]
    meta = dict(traj.meta)
    meta["equation"] = f"{meta.get('equation', 'unknown')}_projected"
    meta["components"] = [f"x_{i}" for i in range(n)]
    return Trajectory(traj.times, projected, meta)


def wave_residual(traj: Trajectory, ls: LaplacianSet) -> tuple[np.ndarray, np.ndarray]:
    """Second-difference residual |(x_{k+1} - 2 x_k + x_{k-1})/dt^2 + L x_k|.

    Vanishes at the truncation order O(dt^2) of the central difference when
    the sampled series solves the wave form.  Returns (interior times,
    residual norms).
    """
    states = np.asarray(traj.states)
    if states.shape[1] != ls.n:
        raise DimensionMismatch(
            f"states have {states.shape[1]} columns, graph has {ls.n} nodes"
        )
    if len(traj) < 3:
        raise TooFewSamples("residual needs at least three samples")
    dt = traj.sample_dt
    second = (states[2:] - 2.0 * states[1:-1] + states[:-2]) / dt**2
    residual = second + states[1:-1] @ ls.L.T
    return traj.times[1:-1], np.linalg.norm(residual, axis=1)


def wave_energy(ls: LaplacianSet, traj: Trajectory) -> np.ndarray:
    """Discrete energy 0.5 |v|^2 + 0.5 x . (L x) per sample."""
    if traj.velocities is None:
        raise InvalidValue("trajectory has no velocities; integrate the wave form")
    x = np.asarray(traj.states)
    if x.shape[1] != ls.n:
        raise DimensionMismatch(
            f"states have {x.shape[1]} columns, graph has {ls.n} nodes"
        )
    v = np.asarray(traj.velocities)
    return 0.5 * np.einsum("ki,ki->k", v, v) + 0.5 * np.einsum(
        "ki,ij,kj->k", x, ls.L, x
    )
