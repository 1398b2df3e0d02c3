"""The inequality registry and the per-instance checker.

Every displayed inequality is a registry entry.  Where a theorem states two
conclusions — the map of the mean versus the mean of the map images — each
is its own entry, suffixed ``-phi-inside`` (right side built from
Phi(A #_nu B)) and ``-phi-outside`` (right side built from
Phi(A) #_nu Phi(B)).

`asserted` marks the entries whose soundness the suite enforces; entries
with asserted=False are computed and reported for diagnosis only.  Three
families are informational by design:

* ``lh-p2-demo`` — the power-monotonicity implication at p = 2, which is
  known to fail and is recorded to demonstrate the caveat;
* ``thm3.3`` (outer-ratio variant) and ``thm2.9-proof`` / ``lee-printed`` —
  printed forms whose constant disagrees with the variant that actually
  holds; both variants are computed so the discrepancy stays visible.

``thm3.4`` is asserted as stated even though random testing refutes it (see
the README); an honest failing verdict is more useful than a silently
weakened check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import constants as C
from .constants import CaseParams, SandwichBounds, bound_constant, kantorovich, weights
from .errors import (
    HypothesisNotMet,
    IncompatibleEntries,
    NonPositiveArgument,
    UnknownInequality,
    WeightOutOfRange,
    ConfigInvalid,
    DegenerateInterval,
)
from .linalg import loewner_gap, matrix_power, op_norm, spectral_norm
from .maps import MapSpec, apply_map
from .means import arithmetic_mean, bracket_term, geometric_mean
from .sampler import Instance, verify_instance

DEFAULT_TOL = 1e-9

NU_GRID = tuple(i / 10.0 for i in range(11))
ALPHA_GRID = (1.0, 1.25, 1.5, 2.0)


@dataclass(frozen=True)
class RegistryEntry:
    """Metadata for one inequality.

    nu_mode: "grid" (the weight is a free parameter), "half" (the display
    fixes nu = 1/2), or "any" (nu does not enter; echoed only).
    p_grid: powers exercised by the default suite — the minimal admissible
    power and minimal + 1.5 where a minimum exists, a documented two-point
    grid for interval-constrained powers.  "2a" means {2 alpha, 2 alpha + 1.5}.
    """

    ineq_id: str
    summary: str
    form: str = "loewner"        # "loewner" | "norm"
    uses_phi: bool = True
    nu_mode: str = "grid"
    p_grid: tuple | str = (1.0,)
    needs_alpha: bool = False
    asserted: bool = True

    @property
    def base(self) -> str:
        return C.base_name(self.ineq_id)

    @property
    def kinds(self) -> tuple[str, ...]:
        return C.instance_kinds(self.ineq_id)


def _both_forms(base, summary, **kw):
    return [
        RegistryEntry(f"{base}-phi-inside", summary + " (right side from the mapped mean)", **kw),
        RegistryEntry(f"{base}-phi-outside", summary + " (right side from the mean of map images)", **kw),
    ]


def _build_registry() -> dict[str, RegistryEntry]:
    entries: list[RegistryEntry] = [
        RegistryEntry(
            "amgm",
            "weighted arithmetic-geometric mean inequality A #_nu B <= A nabla_nu B",
            uses_phi=False,
        ),
        RegistryEntry(
            "lin",
            "reverse AM-GM under a positive unital map: Phi(A nabla B) <= K(h) Phi(A # B)",
            nu_mode="half",
        ),
        *_both_forms(
            "lin-squared",
            "squared reverse AM-GM with constant K(h)^2",
            nu_mode="half",
            p_grid=(2.0,),
        ),
        *_both_forms(
            "lin-power",
            "reverse AM-GM at powers 0 < p <= 2 with constant K(h)^p",
            nu_mode="half",
            p_grid=(0.5, 2.0),
        ),
        RegistryEntry(
            "lh",
            "power monotonicity: X <= Y implies X^p <= Y^p for 0 < p <= 1",
            uses_phi=False,
            nu_mode="any",
            p_grid=(0.5, 1.0),
        ),
        RegistryEntry(
            "lh-p2-demo",
            "power monotonicity tried at p = 2 (recorded counterexample feed, not asserted)",
            uses_phi=False,
            nu_mode="any",
            p_grid=(2.0,),
            asserted=False,
        ),
        *_both_forms(
            "thm1.1",
            "reverse AM-GM at powers p >= 2 with constant ((M+m)^2 / (4^{2/p} M m))^p",
            nu_mode="half",
            p_grid=(2.0, 3.5),
        ),
        *_both_forms(
            "thm1.2",
            "bracket reverse inequality at any p > 0, constant max{K(h), (M+m)^2/(4^{2/p}Mm)}^p",
            p_grid=(0.5, 2.0),
        ),
        *_both_forms(
            "thm1.3",
            "separated-spectra reverse inequality, constant (K(h)/(4^{2/p-1} K^r(h')))^p, p >= 2",
            p_grid=(2.0, 3.5),
        ),
        RegistryEntry(
            "choi",
            "map of the inverse dominates the inverse of the map: Phi(A)^{-1} <= Phi(A^{-1})",
            nu_mode="any",
        ),
        RegistryEntry(
            "lemma2.2-i",
            "norm bound ||A B|| <= (1/4) ||A + B||^2 for positive A, B",
            form="norm",
            uses_phi=False,
            nu_mode="any",
        ),
        RegistryEntry(
            "lemma2.2-ii",
            "norm bound ||A^a + B^a|| <= ||(A + B)^a||, exercised for a >= 1",
            form="norm",
            uses_phi=False,
            nu_mode="any",
            needs_alpha=True,
        ),
        RegistryEntry(
            "lemma2.2-iii",
            "A <= t B at t = ||A^{1/2} B^{-1/2}||^2 (the norm criterion, checked at its tight constant)",
            uses_phi=False,
            nu_mode="any",
        ),
        RegistryEntry(
            "lemma2.3",
            "scalar refinement transferred to inverses: 2r(AM-GM defect) + K^{r1}(sqrt(h')) (A^{-1} #_nu B^{-1}) <= A^{-1} nabla_nu B^{-1}",
            uses_phi=False,
        ),
        *_both_forms(
            "thm2.4",
            "squared bracket reverse inequality with constant (K(h)/K^{r1}(sqrt(h')))^2",
            p_grid=(2.0,),
        ),
        *_both_forms(
            "cor2.6",
            "bracket reverse inequality at 0 < p <= 2 with constant (K(h)/K^{r1}(sqrt(h')))^p",
            p_grid=(0.5, 2.0),
        ),
        *_both_forms(
            "thm2.7",
            "bracket reverse inequality at p >= 2 with constant (K(h)/(4^{2/p-1} K^{r1}(sqrt(h'))))^p",
            p_grid=(2.0, 3.5),
        ),
        RegistryEntry(
            "norm-refinement",
            "operator-norm refinement: ||Phi^p(A nabla_nu B)|| <= ||Phi^p(bracket)||, p >= 1",
            form="norm",
            p_grid=(1.0, 2.5),
        ),
        *_both_forms(
            "zhang",
            "reverse AM-GM at p >= 4 with constant (K(h)(M^2+m^2)/(4^{2/p} M m))^p",
            nu_mode="half",
            p_grid=(4.0, 5.5),
        ),
        *_both_forms(
            "zhang-refined",
            "separated-spectra sharpening of the p >= 4 reverse with divisor K^r(h')",
            p_grid=(4.0, 5.5),
        ),
        *_both_forms(
            "thm2.9",
            "bracket form of the p >= 4 reverse with divisor K^r(h') (displayed constant)",
            p_grid=(4.0, 5.5),
        ),
        *_both_forms(
            "thm2.9-proof",
            "bracket form of the p >= 4 reverse with the proof-side divisor K^{r1}(sqrt(h'))",
            p_grid=(4.0, 5.5),
            asserted=False,
        ),
        *_both_forms(
            "thm2.10",
            "alpha-interpolated bracket reverse, constant (K^{-r1 a/2}(sqrt(h')) K^{a/2}(h)(M^a+m^a))^{2p/a}/(16 M^p m^p)",
            p_grid="2a",
            needs_alpha=True,
        ),
        RegistryEntry(
            "eq217",
            "map of the geometric mean is dominated: Phi(A # B) <= Phi(A) # Phi(B)",
            nu_mode="half",
        ),
        RegistryEntry(
            "ando",
            "weighted map domination: Phi(A #_nu B) <= Phi(A) #_nu Phi(B)",
        ),
        RegistryEntry(
            "lee",
            "reverse of the geometric-mean domination, constant (m+M)/(2 sqrt(mM)) in the cross ratios",
            nu_mode="half",
        ),
        RegistryEntry(
            "lee-printed",
            "the same reverse with the constant exactly as printed, (sqrt(M)+sqrt(m))/(2 sqrt(Mm))",
            nu_mode="half",
            asserted=False,
        ),
        RegistryEntry(
            "seo",
            "weighted reverse of the map domination with constant K(m, M, nu)^{-1}",
        ),
        RegistryEntry(
            "thm3.3",
            "mean comparison A nabla_nu B >= K^r(h) (A #_nu B) with the outer ratio, as printed",
            uses_phi=False,
            asserted=False,
        ),
        RegistryEntry(
            "thm3.3-hprime",
            "mean comparison A nabla_nu B >= K^r(h') (A #_nu B) with the inner ratio",
            uses_phi=False,
        ),
        RegistryEntry(
            "thm3.4",
            "claimed sharpening of the weighted reverse by the extra factor K(h)^{-r}",
        ),
    ]
    reg = {}
    for e in entries:
        if e.ineq_id in reg:
            raise ValueError(f"duplicate registry id {e.ineq_id}")
        C.instance_kinds(e.ineq_id)  # fail fast if the constant table disagrees
        reg[e.ineq_id] = e
    return reg


REGISTRY: dict[str, RegistryEntry] = _build_registry()

# Constant-ratio claims asserted by the suite: constant(a) / constant(b) <= 1
# on any shared hypothesis set.
REFINEMENT_CLAIMS = (
    ("thm2.7", "thm1.1"),
    ("thm2.9", "zhang"),
    ("thm3.4", "seo"),
)


def registry_ids() -> tuple[str, ...]:
    return tuple(sorted(REGISTRY))


def get_entry(ineq_id: str) -> RegistryEntry:
    try:
        return REGISTRY[ineq_id]
    except KeyError:
        raise UnknownInequality(f"no registry entry named {ineq_id!r}") from None


@dataclass(frozen=True)
class InequalityCase:
    ineq_id: str
    instance: Instance
    phi: MapSpec
    params: CaseParams


@dataclass(frozen=True)
class Verdict:
    ineq_id: str
    lhs_norm: float
    rhs_norm: float
    gap: float
    relative_gap: float
    holds: bool
    seed: int
    params: dict


def _gate(entry: RegistryEntry, case: InequalityCase):
    bounds = case.instance.bounds
    if bounds.kind not in entry.kinds:
        raise HypothesisNotMet(
            f"{entry.ineq_id} expects bounds of kind {'/'.join(entry.kinds)}, "
            f"got {bounds.kind}"
        )
    if entry.base == "thm3.4" and not bounds.M1 < bounds.m2:
        raise HypothesisNotMet(
            f"thm3.4 requires M1 < m2, got M1 = {bounds.M1:g}, m2 = {bounds.m2:g}"
        )
    if entry.base == "lh" or entry.base == "lh-p2-demo":
        if entry.base == "lh" and not 0.0 < case.params.p <= 1.0:
            raise HypothesisNotMet(
                f"lh requires 0 < p <= 1, got p = {case.params.p:g}"
            )
    elif entry.base == "norm-refinement":
        if case.params.p < 1.0:
            raise HypothesisNotMet(
                f"norm-refinement requires p >= 1, got p = {case.params.p:g}"
            )
    elif entry.base not in ("amgm", "choi", "lemma2.2-i", "lemma2.2-ii",
                            "lemma2.2-iii", "lemma2.3", "eq217", "ando",
                            "lee", "lee-printed", "seo", "thm3.3",
                            "thm3.3-hprime"):
        # delegate the p/alpha domain check to the constant table
        bound_constant(entry.ineq_id, bounds, case.params)
    if case.phi is not None and case.phi.n != case.instance.n:
        raise HypothesisNotMet(
            f"map dimension {case.phi.n} does not match instance dimension "
            f"{case.instance.n}"
        )


def _rhs_mean(entry: RegistryEntry, case: InequalityCase, nu: float) -> np.ndarray:
    """Phi^p-ready geometric-mean block for the two displayed conclusions."""
    inst = case.instance
    if entry.ineq_id.endswith("-phi-outside"):
        return geometric_mean(apply_map(case.phi, inst.A), apply_map(case.phi, inst.B), nu)
    return apply_map(case.phi, geometric_mean(inst.A, inst.B, nu))


def _assemble(entry: RegistryEntry, case: InequalityCase):
    """Return ('loewner', lhs, rhs) or ('norm', lhs_scalar, rhs_scalar)."""
    inst = case.instance
    prm = case.params
    bounds = inst.bounds
    base = entry.base
    A, B = inst.A, inst.B
    nu = prm.nu if entry.nu_mode == "grid" else 0.5
    p = prm.p

    if base == "amgm":
        return "loewner", geometric_mean(A, B, nu), arithmetic_mean(A, B, nu)

    if base == "lh" or base == "lh-p2-demo":
        lo_op, hi_op = (B, A) if bounds.kind == "sandwich_B_low" else (A, B)
        return "loewner", matrix_power(lo_op, p), matrix_power(hi_op, p)

    if base == "choi":
        pa = apply_map(case.phi, A)
        return "loewner", matrix_power(pa, -1.0), apply_map(case.phi, matrix_power(A, -1.0))

    if base == "lemma2.2-i":
        return "norm", spectral_norm(A @ B), 0.25 * op_norm(A + B) ** 2

    if base == "lemma2.2-ii":
        a = prm.alpha
        lhs = op_norm(matrix_power(A, a) + matrix_power(B, a))
        rhs = op_norm(matrix_power(A + B, a))
        return "norm", lhs, rhs

    if base == "lemma2.2-iii":
        t = spectral_norm(matrix_power(A, 0.5) @ matrix_power(B, -0.5)) ** 2
        return "loewner", A, t * B

    if base == "lemma2.3":
        m, M = bounds.outer()
        r, r1 = weights(nu)
        Ai = matrix_power(A, -1.0)
        Bi = matrix_power(B, -1.0)
        defect = arithmetic_mean(Ai, Bi, 0.5) - geometric_mean(Ai, Bi, 0.5)
        lhs = 2.0 * r * defect + kantorovich(math.sqrt(bounds.hp)) ** r1 * geometric_mean(Ai, Bi, nu)
        return "loewner", lhs, arithmetic_mean(Ai, Bi, nu)

    if base == "eq217" or base == "ando":
        lhs = apply_map(case.phi, geometric_mean(A, B, nu))
        rhs = geometric_mean(apply_map(case.phi, A), apply_map(case.phi, B), nu)
        return "loewner", lhs, rhs

    if base in ("lee", "lee-printed", "seo", "thm3.4"):
        const = bound_constant(entry.ineq_id, bounds, CaseParams(nu=nu, p=prm.p, alpha=prm.alpha))
        lhs = geometric_mean(apply_map(case.phi, A), apply_map(case.phi, B), nu)
        rhs = const * apply_map(case.phi, geometric_mean(A, B, nu))
        return "loewner", lhs, rhs

    if base in ("thm3.3", "thm3.3-hprime"):
        const = bound_constant(entry.ineq_id, bounds, CaseParams(nu=nu))
        return "loewner", const * geometric_mean(A, B, nu), arithmetic_mean(A, B, nu)

    if base == "norm-refinement":
        m, M = bounds.outer()
        plain = matrix_power(apply_map(case.phi, arithmetic_mean(A, B, nu)), p)
        fat = matrix_power(apply_map(case.phi, bracket_term(A, B, m, M, nu)), p)
        return "norm", op_norm(plain), op_norm(fat)

    # remaining families: Phi^p(left block) <= constant * (mean block)^p
    const = bound_constant(entry.ineq_id, bounds, CaseParams(nu=nu, p=p, alpha=prm.alpha))
    if base in ("lin", "lin-squared", "lin-power", "thm1.1", "thm1.3",
                "zhang", "zhang-refined"):
        m, M = bounds.outer()
        left_block = arithmetic_mean(A, B, nu)
    else:  # thm1.2, thm2.4, cor2.6, thm2.7, thm2.9, thm2.9-proof, thm2.10
        m, M = bounds.outer()
        left_block = bracket_term(A, B, m, M, nu)
    lhs = matrix_power(apply_map(case.phi, left_block), p)
    rhs = const * matrix_power(_rhs_mean(entry, case, nu), p)
    return "loewner", lhs, rhs


def check_case(
    case: InequalityCase,
    tol: float = DEFAULT_TOL,
    constant_scale: float = 1.0,
) -> Verdict:
    """Evaluate one inequality on one instance.

    constant_scale multiplies the assembled right-hand side; it exists so
    the suite can deliberately break an inequality and prove the checker
    notices (mutation sensitivity).
    """
    entry = get_entry(case.ineq_id)
    _gate(entry, case)
    verify_instance(case.instance)
    kind, lhs, rhs = _assemble(entry, case)
    if kind == "norm":
        lhs_norm = float(lhs)
        rhs_norm = float(rhs) * constant_scale
        gap = rhs_norm - lhs_norm
    else:
        if constant_scale != 1.0:
            rhs = rhs * constant_scale
        gap = loewner_gap(lhs, rhs)
        lhs_norm = op_norm(lhs)
        rhs_norm = op_norm(rhs)
    relative_gap = gap / (1.0 + rhs_norm)
    nu = case.params.nu if entry.nu_mode == "grid" else 0.5
    echo = {
        "nu": nu,
        "p": case.params.p,
        "alpha": case.params.alpha,
        "map": case.phi.describe() if case.phi is not None else "none",
        "bounds": case.instance.bounds.to_dict(),
    }
    return Verdict(
        ineq_id=case.ineq_id,
        lhs_norm=lhs_norm,
        rhs_norm=rhs_norm,
        gap=gap,
        relative_gap=relative_gap,
        holds=bool(relative_gap >= -tol),
        seed=case.instance.seed,
        params=echo,
    )


def scalar_lemma_gap(x: float, nu: float) -> float:
    """Slack of the scalar refinement behind the bracket lemmas.

    Returns (1 - nu) + nu x - 2 r ((1+x)/2 - sqrt(x)) - K^{r1}(sqrt(x)) x^nu,
    which is nonnegative for every x > 0 and nu in [0, 1], and identically
    zero at nu in {0, 1/4, 1/2, 3/4, 1}.
    """
    if x <= 0.0:
        raise NonPositiveArgument(f"need x > 0, got {x}")
    if not 0.0 <= nu <= 1.0:
        raise WeightOutOfRange(f"nu must be in [0, 1], got {nu}")
    r, r1 = weights(nu)
    root = math.sqrt(x)
    return (
        (1.0 - nu)
        + nu * x
        - 2.0 * r * ((1.0 + x) / 2.0 - root)
        - kantorovich(root) ** r1 * x ** nu
    )


@dataclass(frozen=True)
class FCheckReport:
    max_value: float
    mu0: float
    max_deviation: float
    endpoint_residual_lo: float
    endpoint_residual_hi: float
    passed: bool


def scalar_F_check(m: float, M: float, nu: float, grid_size: int) -> FCheckReport:
    """Grid check that F(t) = nu t^{1-nu} + (1-nu) lambda0 t^{-nu} attains
    its maximum mu0 at both endpoints of [m, M]."""
    if m <= 0.0:
        raise NonPositiveArgument(f"need m > 0, got {m}")
    if m >= M:
        raise DegenerateInterval(f"need m < M, got m={m}, M={M}")
    if not 0.0 < nu < 1.0:
        raise WeightOutOfRange(f"need nu strictly inside (0, 1), got {nu}")
    if grid_size < 3:
        raise ConfigInvalid(f"need grid_size >= 3, got {grid_size}")
    gk = C.generalized_kantorovich(m, M, nu)
    ts = np.linspace(m, M, grid_size)
    F = nu * ts ** (1.0 - nu) + (1.0 - nu) * gk.lambda0 * ts ** (-nu)
    fmax = float(np.max(F))
    tol = 1e-9 * (1.0 + gk.mu0)
    report = FCheckReport(
        max_value=fmax,
        mu0=gk.mu0,
        max_deviation=abs(fmax - gk.mu0),
        endpoint_residual_lo=abs(float(F[0]) - gk.mu0),
        endpoint_residual_hi=abs(float(F[-1]) - gk.mu0),
        passed=bool(
            abs(fmax - gk.mu0) <= tol
            and abs(float(F[0]) - gk.mu0) <= tol
            and abs(float(F[-1]) - gk.mu0) <= tol
        ),
    )
    return report


def compare_constants(
    id_a: str, id_b: str, bounds: SandwichBounds, params: CaseParams
) -> float:
    """bound_constant(id_a) / bound_constant(id_b) on a shared hypothesis."""
    for ineq_id in (id_a, id_b):
        base = C.base_name(ineq_id)
        if base not in C.known_bases():
            raise UnknownInequality(f"no registry entry named {ineq_id!r}")
    try:
        ca = bound_constant(id_a, bounds, params)
        cb = bound_constant(id_b, bounds, params)
    except HypothesisNotMet as exc:
        raise IncompatibleEntries(
            f"cannot compare {id_a} and {id_b} on {bounds.kind} bounds: {exc}"
        ) from exc
    return ca / cb
