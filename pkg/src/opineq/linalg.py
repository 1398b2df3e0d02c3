"""Dense Hermitian matrix arithmetic.

Eigendecomposition (cyclic complex Jacobi), real matrix powers through the
spectral calculus, the Loewner-order gap, and operator norms.  Everything
downstream (means, maps, the inequality checker) routes matrix functions
through :func:`eigh`, so the accuracy contract lives here: reconstruction
within 1e-10 relative Frobenius error.

Matrices are plain ``numpy.ndarray`` values in ``complex128``.  Real input
is accepted anywhere and promoted.
"""

from __future__ import annotations

import contextlib
import contextvars
from typing import NamedTuple

import numpy as np

from .errors import (
    DimensionMismatch,
    NonHermitianInput,
    NotPositiveSemidefinite,
    SingularMatrix,
)

# Scales the Jacobi convergence threshold.  The tightness search re-verifies
# candidate counterexamples at scale 0.01 (two extra digits) before trusting
# a negative gap; see suite.tightness_search.
_threshold_scale: contextvars.ContextVar[float] = contextvars.ContextVar(
    "opineq_eigh_threshold_scale", default=1.0
)


@contextlib.contextmanager
def threshold_scale(scale: float):
    """Temporarily scale the Jacobi convergence threshold (e.g. 0.01 to
    demand two extra digits when re-verifying a suspected violation)."""
    token = _threshold_scale.set(scale)
    try:
        yield
    finally:
        _threshold_scale.reset(token)

JACOBI_THRESHOLD = 1e-13
JACOBI_MAX_SWEEPS = 64

# Tolerance policy (scale-invariant):
HERM_TOL = 1e-12          # symmetry:  |A - A*| <= HERM_TOL * (1 + max|entry|)
PSD_TOL = 1e-10           # eigenvalue counts as >= 0 when lam >= -PSD_TOL*(1+lam_max)
SINGULAR_TOL = 1e-12      # negative powers need lam_min > SINGULAR_TOL * lam_max


class SpectralDecomposition(NamedTuple):
    """Eigenvalues sorted ascending, eigenvectors as matching columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def as_matrix(A) -> np.ndarray:
    """Coerce to a square complex128 array without copying when possible."""
    M = np.asarray(A, dtype=np.complex128)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {M.shape}")
    return M


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.complex128)


def require_hermitian(A) -> np.ndarray:
    """Validate the Hermitian-symmetry invariant and return the matrix."""
    M = as_matrix(A)
    scale = 1.0 + (np.max(np.abs(M)) if M.size else 0.0)
    if np.max(np.abs(M - M.conj().T)) > HERM_TOL * scale:
        raise NonHermitianInput(
            f"matrix deviates from Hermitian symmetry beyond {HERM_TOL:g}*(1+max|entry|)"
        )
    return M


def hermitize(A) -> np.ndarray:
    """Project onto the Hermitian part, (A + A*)/2.

    Used after products like U diag U* whose rounding errors are not exactly
    symmetric; keeps every intermediate inside the Hermitian invariant.
    """
    M = as_matrix(A)
    return 0.5 * (M + M.conj().T)


def _offdiag_mass(A: np.ndarray) -> float:
    # Computed directly rather than as sqrt(|A|^2 - |diag|^2): the subtraction
    # form cancels catastrophically near convergence and signals convergence
    # several orders of magnitude too early.
    B = A.copy()
    np.fill_diagonal(B, 0.0)
    return float(np.linalg.norm(B))


def eigh(A) -> SpectralDecomposition:
    """Full eigendecomposition of a Hermitian matrix.

    Cyclic Jacobi on the complex Hermitian matrix: each (p, q) plane is
    diagonalized by a unitary rotation built from the phase of A[p, q];
    sweeps continue until the off-diagonal Frobenius mass drops below
    ``1e-13 * ||A||_F`` (times the context threshold scale), at most 64
    sweeps.  Eigenvalues come back sorted ascending with matching columns.
    """
    M = require_hermitian(A).copy()
    n = M.shape[0]
    V = np.eye(n, dtype=np.complex128)
    if n == 1:
        return SpectralDecomposition(np.array([M[0, 0].real]), V)
    fro = float(np.linalg.norm(M))
    if fro == 0.0:
        return SpectralDecomposition(np.zeros(n), V)
    target = JACOBI_THRESHOLD * _threshold_scale.get() * fro
    for _sweep in range(JACOBI_MAX_SWEEPS):
        if _offdiag_mass(M) <= target:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = M[p, q]
                g = abs(apq)
                if g == 0.0:
                    continue
                phase = apq / g
                app = M[p, p].real
                aqq = M[q, q].real
                tau = (aqq - app) / (2.0 * g)
                t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + np.hypot(1.0, tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                sph = s * np.conj(phase)
                colp = M[:, p].copy()
                colq = M[:, q].copy()
                M[:, p] = c * colp - sph * colq
                M[:, q] = s * colp + c * np.conj(phase) * colq
                rowp = M[p, :].copy()
                rowq = M[q, :].copy()
                M[p, :] = c * rowp - s * phase * rowq
                M[q, :] = s * rowp + c * phase * rowq
                M[p, q] = 0.0
                M[q, p] = 0.0
                M[p, p] = M[p, p].real
                M[q, q] = M[q, q].real
                vp = V[:, p].copy()
                vq = V[:, q].copy()
                V[:, p] = c * vp - sph * vq
                V[:, q] = s * vp + c * np.conj(phase) * vq
    w = np.diagonal(M).real.copy()
    idx = np.argsort(w, kind="stable")
    return SpectralDecomposition(w[idx], np.ascontiguousarray(V[:, idx]))


def reconstruct(decomp: SpectralDecomposition) -> np.ndarray:
    w, U = decomp
    return hermitize((U * w) @ U.conj().T)


def matrix_power(A, t: float) -> np.ndarray:
    """Real power A^t through the spectral calculus.

    Policy: nonnegative-integer t works for any Hermitian input; fractional
    t >= 0 requires PSD (eigenvalues within -1e-10*(1+lam_max) are clamped
    to zero, below that raises NotPositiveSemidefinite); t < 0 additionally
    requires lam_min > 1e-12 * lam_max, else SingularMatrix.
    """
    t = float(t)
    M = require_hermitian(A)
    if t == 0.0:
        return identity(M.shape[0])
    if t == 1.0:
        return M.copy()
    w, U = eigh(M)
    if t == round(t) and t > 0:
        pw = w ** t
    else:
        lam_max = float(w[-1])
        if t < 0:
            if w[0] <= SINGULAR_TOL * max(lam_max, 0.0):
                raise SingularMatrix(
                    f"negative power {t} of a matrix with lam_min={w[0]:.3e}"
                )
            pw = w ** t
        else:
            floor = -PSD_TOL * (1.0 + max(lam_max, 0.0))
            if w[0] < floor:
                raise NotPositiveSemidefinite(
                    f"fractional power {t} of a matrix with lam_min={w[0]:.3e}"
                )
            pw = np.clip(w, 0.0, None) ** t
    return hermitize((U * pw) @ U.conj().T)


def loewner_gap(A, B) -> float:
    """lambda_min(B - A): nonnegative exactly when A <= B in Loewner order."""
    MA = as_matrix(A)
    MB = as_matrix(B)
    if MA.shape != MB.shape:
        raise DimensionMismatch(f"shapes {MA.shape} and {MB.shape} differ")
    w, _ = eigh(hermitize(MB - MA))
    return float(w[0])


def op_norm(A) -> float:
    """Operator (spectral) norm of a Hermitian matrix: max |lambda_i|."""
    w, _ = eigh(A)
    return float(max(abs(w[0]), abs(w[-1])))


def spectral_norm(X) -> float:
    """Operator norm of an arbitrary (possibly non-Hermitian) matrix.

    Computed as sqrt(lambda_max(X* X)); needed for products like A B of two
    positive matrices, which are not Hermitian.
    """
    M = np.asarray(X, dtype=np.complex128)
    if M.ndim != 2:
        raise DimensionMismatch(f"expected a matrix, got shape {M.shape}")
    w, _ = eigh(hermitize(M.conj().T @ M))
    return float(np.sqrt(max(w[-1], 0.0)))


def is_psd(A, tol: float = PSD_TOL) -> bool:
    w, _ = eigh(A)
    return w[0] >= -tol * (1.0 + max(float(w[-1]), 0.0))
