# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled integration kernels; _fallback.py holds the reference versions."""

import numpy as np

from libc.math cimport NAN, cos, exp, isfinite, sin

ctypedef double complex zdouble


cdef void _zmatvec(zdouble[:, ::1] a, zdouble[::1] x, zdouble[::1] out) noexcept nogil:
    cdef Py_ssize_t i, j, m = a.shape[0]
    cdef zdouble acc
    for i in range(m):
        acc = 0
        for j in range(m):
            acc = acc + a[i, j] * x[j]
        out[i] = acc


cdef void _dmatvec(double[:, ::1] a, double[::1] x, double[::1] out) noexcept nogil:
    cdef Py_ssize_t i, j, m = a.shape[0]
    cdef double acc
    for i in range(m):
        acc = 0.0
        for j in range(m):
            acc = acc + a[i, j] * x[j]
        out[i] = acc


def rk4_linear_complex(a, y0, double dt, Py_ssize_t n_steps, Py_ssize_t record_every):
    """Classical RK4 for y' = A y with complex A; returns [K+1, m] records."""
    a_arr = np.array(a, dtype=np.complex128, order="C")
    y_arr = np.array(y0, dtype=np.complex128)
    cdef zdouble[:, ::1] A = a_arr
    cdef zdouble[::1] y = y_arr
    cdef Py_ssize_t m = y.shape[0]
    out_arr = np.empty((n_steps // record_every + 1, m), dtype=np.complex128)
    cdef zdouble[:, ::1] out = out_arr
    k1_arr = np.empty(m, dtype=np.complex128)
    k2_arr = np.empty(m, dtype=np.complex128)
    k3_arr = np.empty(m, dtype=np.complex128)
    k4_arr = np.empty(m, dtype=np.complex128)
    tmp_arr = np.empty(m, dtype=np.complex128)
    cdef zdouble[::1] k1 = k1_arr, k2 = k2_arr, k3 = k3_arr, k4 = k4_arr, tmp = tmp_arr
    cdef double half = 0.5 * dt, sixth = dt / 6.0
    cdef Py_ssize_t step, i
    with nogil:
        for i in range(m):
            out[0, i] = y[i]
        for step in range(1, n_steps + 1):
            _zmatvec(A, y, k1)
            for i in range(m):
                tmp[i] = y[i] + half * k1[i]
            _zmatvec(A, tmp, k2)
            for i in range(m):
                tmp[i] = y[i] + half * k2[i]
            _zmatvec(A, tmp, k3)
            for i in range(m):
                tmp[i] = y[i] + dt * k3[i]
            _zmatvec(A, tmp, k4)
            for i in range(m):
                y[i] = y[i] + sixth * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i])
            if step % record_every == 0:
                for i in range(m):
                    out[step // record_every, i] = y[i]
    return out_arr


def rk4_linear_real(a, y0, double dt, Py_ssize_t n_steps, Py_ssize_t record_every):
    """Classical RK4 for y' = A y with real A; returns [K+1, m] records."""
    a_arr = np.array(a, dtype=np.float64, order="C")
    y_arr = np.array(y0, dtype=np.float64)
    cdef double[:, ::1] A = a_arr
    cdef double[::1] y = y_arr
    cdef Py_ssize_t m = y.shape[0]
    out_arr = np.empty((n_steps // record_every + 1, m), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    k1_arr = np.empty(m, dtype=np.float64)
    k2_arr = np.empty(m, dtype=np.float64)
    k3_arr = np.empty(m, dtype=np.float64)
    k4_arr = np.empty(m, dtype=np.float64)
    tmp_arr = np.empty(m, dtype=np.float64)
    cdef double[::1] k1 = k1_arr, k2 = k2_arr, k3 = k3_arr, k4 = k4_arr, tmp = tmp_arr
    cdef double half = 0.5 * dt, sixth = dt / 6.0
    cdef Py_ssize_t step, i
    with nogil:
        for i in range(m):
            out[0, i] = y[i]
        for step in range(1, n_steps + 1):
            _dmatvec(A, y, k1)
            for i in range(m):
                tmp[i] = y[i] + half * k1[i]
            _dmatvec(A, tmp, k2)
            for i in range(m):
                tmp[i] = y[i] + half * k2[i]
            _dmatvec(A, tmp, k3)
            for i in range(m):
                tmp[i] = y[i] + dt * k3[i]
            _dmatvec(A, tmp, k4)
            for i in range(m):
                y[i] = y[i] + sixth * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i])
            if step % record_every == 0:
                for i in range(m):
                    out[step // record_every, i] = y[i]
    return out_arr


def leapfrog_wave(lap, x0, v0, double dt, Py_ssize_t n_steps, Py_ssize_t record_every):
    """Velocity-Verlet for x'' = -L x with synchronized samples."""
    lap_arr = np.array(lap, dtype=np.float64, order="C")
    x_arr = np.array(x0, dtype=np.float64)
    v_arr = np.array(v0, dtype=np.float64)
    cdef double[:, ::1] L = lap_arr
    cdef double[::1] x = x_arr
    cdef double[::1] v = v_arr
    cdef Py_ssize_t m = x.shape[0]
    cdef Py_ssize_t n_rec = n_steps // record_every + 1
    xs_arr = np.empty((n_rec, m), dtype=np.float64)
    vs_arr = np.empty((n_rec, m), dtype=np.float64)
    cdef double[:, ::1] xs = xs_arr
    cdef double[:, ::1] vs = vs_arr
    acc_arr = np.empty(m, dtype=np.float64)
    cdef double[::1] acc = acc_arr
    cdef double half = 0.5 * dt
    cdef Py_ssize_t step, i
    with nogil:
        for i in range(m):
            xs[0, i] = x[i]
            vs[0, i] = v[i]
        _dmatvec(L, x, acc)
        for i in range(m):
            acc[i] = -acc[i]
        for step in range(1, n_steps + 1):
            for i in range(m):
                v[i] = v[i] + half * acc[i]
                x[i] = x[i] + dt * v[i]
            _dmatvec(L, x, acc)
            for i in range(m):
                acc[i] = -acc[i]
                v[i] = v[i] + half * acc[i]
            if step % record_every == 0:
                for i in range(m):
                    xs[step // record_every, i] = x[i]
                    vs[step // record_every, i] = v[i]
    return xs_arr, vs_arr


cdef inline void _phase_rhs(double alpha, double beta, double rp, double ip,
                            double rm, double im, double* o) noexcept nogil:
    cdef double s = rp + rm
    cdef double msum = ip + im
    cdef double cp, cm, cos_s, sin_s
    if not (isfinite(s) and isfinite(msum)):
        o[0] = NAN
        o[1] = NAN
        o[2] = NAN
        o[3] = NAN
        return
    cp = beta * exp(-msum)
    cm = beta * exp(msum)
    cos_s = cos(s)
    sin_s = sin(s)
    o[0] = alpha + cp * cos_s
    o[1] = cp * sin_s
    o[2] = alpha + cm * cos_s
    o[3] = -cm * sin_s


def rk4_phase(double alpha, double beta, y0, double dt,
              Py_ssize_t n_steps, Py_ssize_t record_every):
    """RK4 for the coupled phase system; see the fallback for the equations."""
    y_in = np.asarray(y0, dtype=np.float64)
    cdef double[4] y, k1, k2, k3, k4, tmp
    cdef Py_ssize_t i
    for i in range(4):
        y[i] = y_in[i]
    out_arr = np.empty((n_steps // record_every + 1, 4), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef double half = 0.5 * dt, sixth = dt / 6.0
    cdef Py_ssize_t step
    with nogil:
        for i in range(4):
            out[0, i] = y[i]
        for step in range(1, n_steps + 1):
            _phase_rhs(alpha, beta, y[0], y[1], y[2], y[3], &k1[0])
            for i in range(4):
                tmp[i] = y[i] + half * k1[i]
            _phase_rhs(alpha, beta, tmp[0], tmp[1], tmp[2], tmp[3], &k2[0])
            for i in range(4):
                tmp[i] = y[i] + half * k2[i]
            _phase_rhs(alpha, beta, tmp[0], tmp[1], tmp[2], tmp[3], &k3[0])
            for i in range(4):
                tmp[i] = y[i] + dt * k3[i]
            _phase_rhs(alpha, beta, tmp[0], tmp[1], tmp[2], tmp[3], &k4[0])
            for i in range(4):
                y[i] = y[i] + sixth * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i])
            if step % record_every == 0:
                for i in range(4):
                    out[step // record_every, i] = y[i]
    return out_arr


cdef inline void _locked_rhs(double beta, double sin_s, double ip, double im,
                             double* o) noexcept nogil:
    cdef double msum = ip + im
    if not isfinite(msum):
        o[0] = NAN
        o[1] = NAN
        return
    o[0] = beta * exp(-msum) * sin_s
    o[1] = -beta * exp(msum) * sin_s


def rk4_locked_imag(double beta, double sin_s, double ip0, double im0,
                    double dt, Py_ssize_t n_steps, Py_ssize_t record_every):
    """RK4 for the imaginary parts alone with the phase sum pinned."""
    cdef double[2] y, k1, k2, k3, k4, tmp
    y[0] = ip0
    y[1] = im0
    out_arr = np.empty((n_steps // record_every + 1, 2), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef double half = 0.5 * dt, sixth = dt / 6.0
    cdef Py_ssize_t step, i
    with nogil:
        out[0, 0] = y[0]
        out[0, 1] = y[1]
        for step in range(1, n_steps + 1):
            _locked_rhs(beta, sin_s, y[0], y[1], &k1[0])
            for i in range(2):
                tmp[i] = y[i] + half * k1[i]
            _locked_rhs(beta, sin_s, tmp[0], tmp[1], &k2[0])
            for i in range(2):
                tmp[i] = y[i] + half * k2[i]
            _locked_rhs(beta, sin_s, tmp[0], tmp[1], &k3[0])
            for i in range(2):
                tmp[i] = y[i] + dt * k3[i]
            _locked_rhs(beta, sin_s, tmp[0], tmp[1], &k4[0])
            for i in range(2):
                y[i] = y[i] + sixth * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i])
            if step % record_every == 0:
                out[step // record_every, 0] = y[0]
                out[step // record_every, 1] = y[1]
    return out_arr
