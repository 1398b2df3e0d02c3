"""Weighted operator means and the bracket expression.

Convention: the weight nu attaches to the SECOND argument in both means,

    arithmetic_mean(A, B, nu) = (1 - nu) A + nu B
    geometric_mean(A, B, nu)  = A^{1/2} (A^{-1/2} B A^{-1/2})^nu A^{1/2}

so the arithmetic-geometric inequality holds with matching weights and the
scalar case collapses to a^{1-nu} b^nu.  The unsubscripted means inside
bracket_term use nu = 1/2.
"""

from __future__ import annotations

import numpy as np

from .errors import BadBounds, DimensionMismatch, WeightOutOfRange
from .linalg import as_matrix, hermitize, matrix_power


def _check_pair(A, B):
    MA = as_matrix(A)
    MB = as_matrix(B)
    if MA.shape != MB.shape:
        raise DimensionMismatch(f"shapes {MA.shape} and {MB.shape} differ")
    return MA, MB


def _check_nu(nu: float) -> float:
    nu = float(nu)
    if not 0.0 <= nu <= 1.0:
        raise WeightOutOfRange(f"nu must be in [0, 1], got {nu}")
    return nu


def arithmetic_mean(A, B, nu: float) -> np.ndarray:
    """(1 - nu) A + nu B."""
    MA, MB = _check_pair(A, B)
    nu = _check_nu(nu)
    return (1.0 - nu) * MA + nu * MB


def geometric_mean(A, B, nu: float) -> np.ndarray:
    """A^{1/2} (A^{-1/2} B A^{-1/2})^nu A^{1/2}.

    A must be positive definite (SingularMatrix otherwise); B positive
    semidefinite (NotPositiveSemidefinite surfaces from the inner power).
    """
    MA, MB = _check_pair(A, B)
    nu = _check_nu(nu)
    Ah = matrix_power(MA, 0.5)
    Aih = matrix_power(MA, -0.5)
    inner = hermitize(Aih @ MB @ Aih)
    core = matrix_power(inner, nu)
    return hermitize(Ah @ core @ Ah)


def bracket_term(A, B, m: float, M: float, nu: float) -> np.ndarray:
    """A nabla_nu B + 2 r M m (A^{-1} nabla B^{-1} - A^{-1} # B^{-1}).

    The enlarged left-hand side of the squared/power reverse inequalities;
    r = min{nu, 1 - nu}, and the unsubscripted nabla and # carry weight 1/2.
    Dominates A nabla_nu B because the subtracted pair is an AM-GM defect of
    (A^{-1}, B^{-1}), which is positive semidefinite.
    """
    m = float(m)
    M = float(M)
    if not 0.0 < m <= M:
        raise BadBounds(f"need 0 < m <= M, got m={m}, M={M}")
    nu = _check_nu(nu)
    MA, MB = _check_pair(A, B)
    r = min(nu, 1.0 - nu)
    base = arithmetic_mean(MA, MB, nu)
    if r == 0.0:
        return base
    Ai = matrix_power(MA, -1.0)
    Bi = matrix_power(MB, -1.0)
    defect = arithmetic_mean(Ai, Bi, 0.5) - geometric_mean(Ai, Bi, 0.5)
    return hermitize(base + 2.0 * r * M * m * defect)
