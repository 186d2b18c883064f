"""Eigenstructure analysis and principal matrix square roots.

The dynamics below only make sense on matrices whose spectrum is real and
non-negative, so everything here is gated on that: eigen_decompose verifies
its own residuals, check_real_spectrum reports conjugate pairs that fall off
the real axis, and principal_sqrt refuses matrices that fail either test.

The square root itself takes two routes.  Symmetric matrices go through a
real eigendecomposition (orthonormal basis, so V sqrt(W) V^T is exact to
rounding).  General matrices with a real non-negative spectrum go through a
complex Schur form and the standard triangular recurrence

    U_ii = sqrt(T_ii),   U_ij = (T_ij - sum_k U_ik U_kj) / (U_ii + U_jj),

which avoids inverting an eigenvector matrix that may be badly conditioned.
A warning is emitted when the eigenbasis looks numerically defective.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import (
    ComplexSpectrum,
    ConvergenceFailure,
    DimensionMismatch,
    InvalidValue,
    NegativeEigenvalue,
    ZeroOutDegree,
)
from .graph import LaplacianSet

__all__ = [
    "REALNESS_TOL",
    "RESIDUAL_RTOL",
    "PATTERN_THRESHOLD",
    "Spectrum",
    "RealnessReport",
    "SqrtResult",
    "PatternReport",
    "eigen_decompose",
    "check_real_spectrum",
    "principal_sqrt",
    "sparsity_report",
]

# Absolute tolerance for treating an eigenvalue's imaginary part as zero.
REALNESS_TOL = 1e-10
# Relative tolerance for eigenpair and square-root residuals.
RESIDUAL_RTOL = 1e-9
# Entries at or below this magnitude count as structural zeros.
PATTERN_THRESHOLD = 1e-12
# Eigenvector-matrix condition number beyond which the matrix is flagged
# as numerically non-diagonalizable.
_ILL_CONDITIONED = 1e12


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues (ascending by real part, then imaginary part), matching
    eigenvector columns, and a per-eigenvalue realness flag."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    is_real: np.ndarray

    @property
    def max_real(self) -> float:
        """Largest real part; 0.0 for an empty spectrum."""
        if self.eigenvalues.size == 0:
            return 0.0
        return float(self.eigenvalues.real.max())


@dataclass(frozen=True)
class RealnessReport:
    """Either the whole spectrum is real (within tolerance) or the offending
    conjugate pairs are listed, upper-half-plane member first."""

    all_real: bool
    complex_pairs: tuple[tuple[complex, complex], ...]


@dataclass(frozen=True)
class SqrtResult:
    """Principal square root and its relative residual |R R - M| / |M|."""

    root: np.ndarray
    residual: float


@dataclass(frozen=True)
class PatternReport:
    """Nonzero patterns of L, its square root, and H at a shared threshold.

    masks/fill_counts are keyed "L", "sqrtL", "H"; fill counts exclude the
    diagonal.  sqrt_is_complete says every off-diagonal entry of the root is
    above threshold.  h_defined is False when some node has zero out-degree,
    in which case the H mask is all-false.
    """

    masks: dict[str, np.ndarray]
    fill_counts: dict[str, int]
    sqrt_is_complete: bool
    h_defined: bool
    threshold: float


def _as_square(m) -> np.ndarray:
    a = np.asarray(m, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InvalidValue("matrix entries must be finite")
    return a


def eigen_decompose(
    m,
    realness_tol: float = REALNESS_TOL,
    residual_rtol: float = RESIDUAL_RTOL,
) -> Spectrum:
    """Full eigendecomposition with verified residuals.

    Each eigenpair is checked against |M v - lambda v| <= rtol * |M|_F; a
    violation or a LAPACK failure raises ConvergenceFailure.
    """
    a = _as_square(m)
    n = a.shape[0]
    if n == 0:
        empty = np.empty(0, dtype=complex)
        return Spectrum(empty, empty.reshape(0, 0), np.empty(0, dtype=bool))
    try:
        values, vectors = np.linalg.eig(a)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(f"eigendecomposition failed: {exc}") from exc

    norm = np.linalg.norm(a)
    resid = np.linalg.norm(a @ vectors - vectors * values, axis=0)
    bound = residual_rtol * max(norm, 1e-300)
    if np.any(resid > bound):
        raise ConvergenceFailure(
            f"eigenpair residual {resid.max():.3e} exceeds {bound:.3e}"
        )

    order = np.lexsort((values.imag, values.real))
    values = values[order]
    vectors = vectors[:, order]
    is_real = np.abs(values.imag) <= realness_tol
    for arr in (values, vectors, is_real):
        arr.setflags(write=False)
    return Spectrum(values, vectors, is_real)


def check_real_spectrum(m, tol: float = REALNESS_TOL) -> RealnessReport:
    """Report whether every eigenvalue sits on the real axis within tol."""
    spec = eigen_decompose(m, realness_tol=tol)
    if bool(spec.is_real.all()):
        return RealnessReport(True, ())
    offenders = spec.eigenvalues[~spec.is_real]
    upper = sorted(
        (complex(v) for v in offenders if v.imag > 0),
        key=lambda z: (z.real, z.imag),
    )
    lower = sorted(
        (complex(v) for v in offenders if v.imag < 0),
        key=lambda z: (z.real, -z.imag),
    )
    pairs = list(zip(upper, lower))
    # A real matrix has exactly matching conjugates; tolerate any numerical
    # stragglers by pairing them with their own conjugate.
    for extra in upper[len(pairs):] + lower[len(pairs):]:
        pairs.append((extra, extra.conjugate()))
    return RealnessReport(False, tuple(pairs))


def _warn_if_defective(spec: Spectrum) -> None:
    try:
        cond = np.linalg.cond(spec.eigenvectors)
    except np.linalg.LinAlgError:
        cond = np.inf
    if not np.isfinite(cond) or cond > _ILL_CONDITIONED:
        warnings.warn(
            "matrix appears non-diagonalizable (eigenvector condition "
            f"number {cond:.2e}); square root computed from the Schur form",
            RuntimeWarning,
            stacklevel=3,
        )


def _sqrt_triangular(t: np.ndarray, diag: np.ndarray, scale: float) -> np.ndarray:
    """Square root of an upper-triangular matrix with the given (clamped,
    real non-negative) diagonal."""
    n = t.shape[0]
    u = np.zeros_like(t)
    np.fill_diagonal(u, np.sqrt(diag.astype(complex)))
    small = 1e-13 * max(scale, 1.0)
    for j in range(1, n):
        for i in range(j - 1, -1, -1):
            s = t[i, j] - u[i, i + 1 : j] @ u[i + 1 : j, j]
            denom = u[i, i] + u[j, j]
            if abs(denom) > 0:
                u[i, j] = s / denom
            elif abs(s) <= small:
                u[i, j] = 0.0
            else:
                raise ConvergenceFailure(
                    "no principal square root: defective zero eigenvalue "
                    f"couples entries ({i}, {j})"
                )
    return u


def principal_sqrt(m, tol: float = RESIDUAL_RTOL) -> SqrtResult:
    """Principal square root of a matrix with real non-negative spectrum.

    Eigenvalues with imaginary parts beyond the realness tolerance raise
    ComplexSpectrum; real parts below -tol * |M|_F raise NegativeEigenvalue.
    Tiny negative eigenvalues inside that band are clamped to zero.  The
    returned residual |R R - M|_F / |M|_F is verified against tol.
    """
    a = _as_square(m)
    n = a.shape[0]
    if n == 0:
        return SqrtResult(a.copy(), 0.0)

    norm = np.linalg.norm(a)
    spec = eigen_decompose(a)
    if not bool(spec.is_real.all()):
        worst = spec.eigenvalues[np.argmax(np.abs(spec.eigenvalues.imag))]
        raise ComplexSpectrum(
            f"eigenvalue {worst:.6g} is off the real axis; no principal "
            "square root over the reals"
        )
    floor = -tol * max(norm, 1e-300)
    low = spec.eigenvalues.real.min()
    if low < floor:
        raise NegativeEigenvalue(
            f"eigenvalue {low:.6g} below {floor:.3e}; principal square root "
            "undefined"
        )

    symmetric = np.allclose(a, a.T, rtol=0.0, atol=1e-13 * max(norm, 1.0))
    if symmetric:
        w, v = np.linalg.eigh(a)
        w = np.clip(w, 0.0, None)
        root = (v * np.sqrt(w)) @ v.T
        root = 0.5 * (root + root.T)
    else:
        _warn_if_defective(spec)
        t, q = scipy.linalg.schur(a.astype(complex), output="complex")
        diag = np.clip(t.diagonal().real, 0.0, None)
        u = _sqrt_triangular(t, diag, norm)
        root_c = q @ u @ q.conj().T
        imag = np.abs(root_c.imag).max() if n else 0.0
        if imag > 1e-8 * max(np.abs(root_c).max(), 1.0):
            raise ConvergenceFailure(
                f"square root has imaginary residue {imag:.3e}; input "
                "spectrum too close to the admissibility boundary"
            )
        root = root_c.real.copy()

    residual = np.linalg.norm(root @ root - a) / max(norm, 1e-300)
    if norm == 0.0:
        residual = float(np.linalg.norm(root @ root))
    if residual > tol:
        raise ConvergenceFailure(
            f"square-root residual {residual:.3e} exceeds tolerance {tol:.1e}"
        )
    root.setflags(write=False)
    return SqrtResult(root, float(residual))


def _offdiag_count(mask: np.ndarray) -> int:
    return int(mask.sum() - np.diag(mask).sum())


def sparsity_report(
    ls: LaplacianSet, sqrt_l: SqrtResult, threshold: float = PATTERN_THRESHOLD
) -> PatternReport:
    """Compare the nonzero patterns of L, sqrt(L), and H.

    The point of the comparison: taking a matrix square root generally turns
    a sparse Laplacian dense (long-range couplings appear), while the row
    rescaling that produces H never creates a new nonzero.
    """
    root = np.asarray(sqrt_l.root)
    if root.shape != ls.L.shape:
        raise DimensionMismatch(
            f"square root shape {root.shape} does not match L {ls.L.shape}"
        )
    masks = {
        "L": np.abs(ls.L) > threshold,
        "sqrtL": np.abs(root) > threshold,
    }
    try:
        h = ls.H
        masks["H"] = np.abs(h) > threshold
        h_defined = True
    except ZeroOutDegree:
        masks["H"] = np.zeros_like(masks["L"])
        h_defined = False
    for v in masks.values():
        v.setflags(write=False)

    fill = {k: _offdiag_count(v) for k, v in masks.items()}
    n = ls.L.shape[0]
    off = ~np.eye(n, dtype=bool)
    sqrt_complete = bool(masks["sqrtL"][off].all()) if n else False
    return PatternReport(masks, fill, sqrt_complete, h_defined, float(threshold))
