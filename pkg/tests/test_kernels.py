"""Backend selection and compiled-vs-pure agreement on every kernel."""

import numpy as np
import pytest

from oscnet import backend_name
from oscnet import _kernels
from oscnet._kernels import pure
from util import wave_block

compiled = _kernels.compiled

needs_compiled = pytest.mark.skipif(
    compiled is None, reason="compiled extension not built"
)


def test_backend_name_is_known():
    assert backend_name() in {"compiled", "pure"}


def test_active_kernels_are_callable():
    for name in (
        "rk4_linear_complex",
        "rk4_linear_real",
        "leapfrog_wave",
        "rk4_phase",
        "rk4_locked_imag",
    ):
        assert callable(getattr(_kernels, name))


class TestRecordLayout:
    def test_includes_initial_sample(self):
        a = np.zeros((2, 2))
        rec = pure.rk4_linear_real(a, np.array([1.0, 2.0]), 0.1, 10, 1)
        assert rec.shape == (11, 2)
        np.testing.assert_array_equal(rec[0], [1.0, 2.0])

    def test_thinning(self):
        a = np.zeros((2, 2))
        rec = pure.rk4_linear_real(a, np.array([1.0, 2.0]), 0.1, 10, 3)
        # Records at steps 0, 3, 6, 9.
        assert rec.shape == (4, 2)

    def test_leapfrog_returns_positions_and_velocities(self):
        lap = np.array([[1.0, -1.0], [-1.0, 1.0]])
        xs, vs = pure.leapfrog_wave(
            lap, np.array([1.0, -1.0]), np.zeros(2), 1e-2, 100, 10
        )
        assert xs.shape == (11, 2)
        assert vs.shape == (11, 2)

    def test_phase_record_width(self):
        rec = pure.rk4_phase(1.0, 0.1, np.zeros(4), 1e-2, 50, 5)
        assert rec.shape == (11, 4)

    def test_locked_record_width(self):
        rec = pure.rk4_locked_imag(0.1, 1.0, 0.0, 0.0, 1e-2, 50, 5)
        assert rec.shape == (11, 2)


class TestPureCorrectness:
    def test_rk4_real_exponential(self):
        # y' = -y from 1: y(1) = e^-1, RK4 global error O(dt^4).
        a = np.array([[-1.0]])
        rec = pure.rk4_linear_real(a, np.array([1.0]), 1e-3, 1000, 1000)
        assert rec[-1, 0] == pytest.approx(np.exp(-1.0), abs=1e-12)

    def test_rk4_complex_rotation(self):
        # y' = i y from 1: y(t) = e^{it}.
        a = np.array([[1j]])
        rec = pure.rk4_linear_complex(a, np.array([1.0 + 0j]), 1e-3, 1000, 1000)
        assert rec[-1, 0] == pytest.approx(np.exp(1j), abs=1e-12)

    def test_phase_blowup_yields_non_finite_not_exception(self):
        # An imaginary offset of 800 puts exp(m) past the float range right
        # away; the kernel must carry inf/nan through instead of raising.
        rec = pure.rk4_phase(0.0, 1.0, np.array([1.0, 800.0, 0.5707, 0.0]), 1e-2, 5, 1)
        assert not np.isfinite(rec[-1]).all()


@needs_compiled
class TestBackendParity:
    def test_rk4_linear_real(self, rng):
        lap = rng.normal(size=(6, 6))
        a = wave_block(lap + lap.T)
        y0 = rng.normal(size=12)
        ours = compiled.rk4_linear_real(a, y0, 1e-3, 500, 10)
        ref = pure.rk4_linear_real(a, y0, 1e-3, 500, 10)
        assert ours.shape == ref.shape
        np.testing.assert_allclose(ours, ref, rtol=1e-10, atol=1e-12)

    def test_rk4_linear_complex(self, rng):
        a = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
        a = -0.05 * (a @ a.conj().T)  # contractive so values stay tame
        y0 = rng.normal(size=5) + 1j * rng.normal(size=5)
        ours = compiled.rk4_linear_complex(a, y0, 1e-3, 500, 10)
        ref = pure.rk4_linear_complex(a, y0, 1e-3, 500, 10)
        np.testing.assert_allclose(ours, ref, rtol=1e-10, atol=1e-12)

    def test_leapfrog_wave(self, rng):
        lap = rng.normal(size=(6, 6))
        lap = lap @ lap.T
        x0 = rng.normal(size=6)
        v0 = rng.normal(size=6)
        xs_c, vs_c = compiled.leapfrog_wave(lap, x0, v0, 1e-3, 1000, 25)
        xs_p, vs_p = pure.leapfrog_wave(lap, x0, v0, 1e-3, 1000, 25)
        np.testing.assert_allclose(xs_c, xs_p, rtol=1e-10, atol=1e-12)
        np.testing.assert_allclose(vs_c, vs_p, rtol=1e-10, atol=1e-12)

    def test_rk4_phase(self):
        y0 = np.array([0.3, -0.2, 0.9, 0.1])
        ours = compiled.rk4_phase(19.0 / 6.0, 1.0 / 6.0, y0, 1e-4, 2000, 50)
        ref = pure.rk4_phase(19.0 / 6.0, 1.0 / 6.0, y0, 1e-4, 2000, 50)
        np.testing.assert_allclose(ours, ref, rtol=1e-12, atol=1e-14)

    def test_rk4_locked_imag(self):
        ours = compiled.rk4_locked_imag(1.0 / 6.0, 1.0, 0.2, -0.1, 1e-3, 3000, 100)
        ref = pure.rk4_locked_imag(1.0 / 6.0, 1.0, 0.2, -0.1, 1e-3, 3000, 100)
        np.testing.assert_allclose(ours, ref, rtol=1e-12, atol=1e-14)

    def test_read_only_inputs_accepted(self):
        # Integrators hand the kernels read-only matrices; the compiled
        # entry points must copy rather than demand writable buffers.
        lap = np.array([[1.0, -1.0], [-1.0, 1.0]])
        lap.setflags(write=False)
        x0 = np.array([1.0, -1.0])
        x0.setflags(write=False)
        xs, _ = compiled.leapfrog_wave(lap, x0, np.zeros(2), 1e-2, 10, 1)
        assert xs.shape == (11, 2)

    def test_phase_blowup_parity(self):
        y0 = np.array([1.0, 800.0, 0.5707, 0.0])
        rec_c = compiled.rk4_phase(0.0, 1.0, y0, 1e-2, 5, 1)
        rec_p = pure.rk4_phase(0.0, 1.0, y0, 1e-2, 5, 1)
        assert not np.isfinite(rec_c[-1]).all()
        finite_c = np.isfinite(rec_c).all(axis=1)
        finite_p = np.isfinite(rec_p).all(axis=1)
        np.testing.assert_array_equal(finite_c, finite_p)
