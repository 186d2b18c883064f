"""Pure-numpy integration kernels.

Reference implementations of the loops in _core.pyx; selected automatically
when the compiled extension is unavailable (or forced via OSCNET_PURE_PYTHON).
Each kernel records every `record_every`-th step, including the initial
state, and returns raw arrays; finiteness checks belong to the callers.
"""

from __future__ import annotations

import math

import numpy as np


def _exp(x: float) -> float:
    # C exp() saturates to inf; math.exp raises OverflowError instead.
    try:
        return math.exp(x)
    except OverflowError:
        return math.inf


def _trig(s: float) -> tuple[float, float]:
    # cos/sin of non-finite arguments raise in pure Python; C returns NaN.
    if not math.isfinite(s):
        return math.nan, math.nan
    return math.cos(s), math.sin(s)


def rk4_linear_complex(
    a: np.ndarray, y0: np.ndarray, dt: float, n_steps: int, record_every: int
) -> np.ndarray:
    """Classical RK4 for y' = A y with complex A; returns [K+1, m] records."""
    a = np.ascontiguousarray(a, dtype=np.complex128)
    y = np.array(y0, dtype=np.complex128)
    out = np.empty((n_steps // record_every + 1, y.size), dtype=np.complex128)
    out[0] = y
    half = 0.5 * dt
    sixth = dt / 6.0
    for step in range(1, n_steps + 1):
        k1 = a @ y
        k2 = a @ (y + half * k1)
        k3 = a @ (y + half * k2)
        k4 = a @ (y + dt * k3)
        y = y + sixth * (k1 + 2.0 * (k2 + k3) + k4)
        if step % record_every == 0:
            out[step // record_every] = y
    return out


def rk4_linear_real(
    a: np.ndarray, y0: np.ndarray, dt: float, n_steps: int, record_every: int
) -> np.ndarray:
    """Classical RK4 for y' = A y with real A; returns [K+1, m] records."""
    a = np.ascontiguousarray(a, dtype=np.float64)
    y = np.array(y0, dtype=np.float64)
    out = np.empty((n_steps // record_every + 1, y.size), dtype=np.float64)
    out[0] = y
    half = 0.5 * dt
    sixth = dt / 6.0
    for step in range(1, n_steps + 1):
        k1 = a @ y
        k2 = a @ (y + half * k1)
        k3 = a @ (y + half * k2)
        k4 = a @ (y + dt * k3)
        y = y + sixth * (k1 + 2.0 * (k2 + k3) + k4)
        if step % record_every == 0:
            out[step // record_every] = y
    return out


def leapfrog_wave(
    lap: np.ndarray,
    x0: np.ndarray,
    v0: np.ndarray,
    dt: float,
    n_steps: int,
    record_every: int,
) -> tuple[np.ndarray, np.ndarray]:
    """Velocity-Verlet for x'' = -L x with synchronized samples."""
    lap = np.ascontiguousarray(lap, dtype=np.float64)
    x = np.array(x0, dtype=np.float64)
    v = np.array(v0, dtype=np.float64)
    n_rec = n_steps // record_every + 1
    xs = np.empty((n_rec, x.size), dtype=np.float64)
    vs = np.empty((n_rec, v.size), dtype=np.float64)
    xs[0] = x
    vs[0] = v
    acc = -(lap @ x)
    half = 0.5 * dt
    for step in range(1, n_steps + 1):
        v_half = v + half * acc
        x = x + dt * v_half
        acc = -(lap @ x)
        v = v_half + half * acc
        if step % record_every == 0:
            xs[step // record_every] = x
            vs[step // record_every] = v
    return xs, vs


def _phase_rhs(
    alpha: float, beta: float, rp: float, ip: float, rm: float, im: float
) -> tuple[float, float, float, float]:
    s = rp + rm
    m = ip + im
    if not (math.isfinite(s) and math.isfinite(m)):
        return math.nan, math.nan, math.nan, math.nan
    cp = beta * _exp(-m)
    cm = beta * _exp(m)
    cos_s, sin_s = _trig(s)
    return (
        alpha + cp * cos_s,
        cp * sin_s,
        alpha + cm * cos_s,
        -cm * sin_s,
    )


def rk4_phase(
    alpha: float,
    beta: float,
    y0: np.ndarray,
    dt: float,
    n_steps: int,
    record_every: int,
) -> np.ndarray:
    """RK4 for the coupled phase system.

    State order (Re+, Im+, Re-, Im-); rates are alpha + C() cos(s) for the
    real parts and +-C() sin(s) for the imaginary parts, with
    C(+-) = beta * exp(-+(Im+ + Im-)) and s = Re+ + Re-.
    """
    rp, ip, rm, im = (float(v) for v in y0)
    out = np.empty((n_steps // record_every + 1, 4), dtype=np.float64)
    out[0] = (rp, ip, rm, im)
    half = 0.5 * dt
    sixth = dt / 6.0
    for step in range(1, n_steps + 1):
        a1, b1, c1, d1 = _phase_rhs(alpha, beta, rp, ip, rm, im)
        a2, b2, c2, d2 = _phase_rhs(
            alpha, beta, rp + half * a1, ip + half * b1, rm + half * c1, im + half * d1
        )
        a3, b3, c3, d3 = _phase_rhs(
            alpha, beta, rp + half * a2, ip + half * b2, rm + half * c2, im + half * d2
        )
        a4, b4, c4, d4 = _phase_rhs(
            alpha, beta, rp + dt * a3, ip + dt * b3, rm + dt * c3, im + dt * d3
        )
        rp += sixth * (a1 + 2.0 * (a2 + a3) + a4)
        ip += sixth * (b1 + 2.0 * (b2 + b3) + b4)
        rm += sixth * (c1 + 2.0 * (c2 + c3) + c4)
        im += sixth * (d1 + 2.0 * (d2 + d3) + d4)
        if step % record_every == 0:
            out[step // record_every] = (rp, ip, rm, im)
    return out


def _locked_rhs(
    beta: float, sin_s: float, ip: float, im: float
) -> tuple[float, float]:
    m = ip + im
    if not math.isfinite(m):
        return math.nan, math.nan
    return beta * _exp(-m) * sin_s, -beta * _exp(m) * sin_s


def rk4_locked_imag(
    beta: float,
    sin_s: float,
    ip0: float,
    im0: float,
    dt: float,
    n_steps: int,
    record_every: int,
) -> np.ndarray:
    """RK4 for the imaginary parts alone with the phase sum pinned.

    With s frozen the real parts decouple; the remaining system is
    Im+' = +C(+) sin(s), Im-' = -C(-) sin(s).  Returns [K+1, 2] records.
    """
    ip, im = float(ip0), float(im0)
    out = np.empty((n_steps // record_every + 1, 2), dtype=np.float64)
    out[0] = (ip, im)
    half = 0.5 * dt
    sixth = dt / 6.0
    for step in range(1, n_steps + 1):
        b1, d1 = _locked_rhs(beta, sin_s, ip, im)
        b2, d2 = _locked_rhs(beta, sin_s, ip + half * b1, im + half * d1)
        b3, d3 = _locked_rhs(beta, sin_s, ip + half * b2, im + half * d2)
        b4, d4 = _locked_rhs(beta, sin_s, ip + dt * b3, im + dt * d3)
        ip += sixth * (b1 + 2.0 * (b2 + b3) + b4)
        im += sixth * (d1 + 2.0 * (d2 + d3) + d4)
        if step % record_every == 0:
            out[step // record_every] = (ip, im)
    return out
