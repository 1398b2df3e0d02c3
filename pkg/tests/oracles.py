"""Independent scalar oracles used to cross-check closed forms.

Kept deliberately dumb: a golden-section minimizer and the secant-ratio
objective, with no shared code paths into the package under test.
"""

import math

INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_section_min(f, lo, hi, tol=1e-13, max_iter=200):
    """Minimize a unimodal function on [lo, hi]; returns (x, f(x))."""
    a, b = lo, hi
    c = b - INVPHI * (b - a)
    d = a + INVPHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if abs(b - a) < tol * (1.0 + abs(a) + abs(b)):
            break
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INVPHI * (b - a)
            fd = f(d)
    x = (a + b) / 2.0
    return x, f(x)


def secant_ratio_min(m, M, nu):
    """min over [m, M] of (secant line of x^nu through the endpoints) / x^nu.

    The independent characterization of the weighted reverse constant.
    """

    def ratio(t):
        secant = m ** nu + (M ** nu - m ** nu) * (t - m) / (M - m)
        return secant / t ** nu

    _, val = golden_section_min(ratio, m, M)
    # guard against a flat or endpoint-minimal objective
    return min(val, ratio(m), ratio(M))
