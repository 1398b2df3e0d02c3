"""Suite runner and tightness search.

run_suite turns a SuiteConfig into a Report deterministically: every case
is constructed from seeds derived by name from the master seed, so the
report depends only on the configuration (the worker count splits the
computation but never enters a seed or the config hash).

tightness_search drives the relative gap of one inequality toward zero
from above by random-restart coordinate moves over everything the
hypothesis leaves free: eigenvalue placements inside their intervals,
eigenvector frames (including aligning the two frames so the pair
commutes), the bounds themselves, the map, and the exponents.
"""

from __future__ import annotations

import csv
import hashlib
import io as _io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Optional

from .constants import CaseParams, SandwichBounds
from .errors import ConfigInvalid, HypothesisNotMet
from .io import dumps_canonical, instance_to_obj, map_to_obj
from .linalg import threshold_scale
from .maps import MAP_KINDS, random_map
from .sampler import Instance, SplitMix64, build_from_spectrum, derive_seed, sample_instance
from .verifier import (
    ALPHA_GRID,
    DEFAULT_TOL,
    NU_GRID,
    InequalityCase,
    RegistryEntry,
    check_case,
    get_entry,
    registry_ids,
    scalar_lemma_gap,
)

DEFAULT_DIMS = (2, 3, 5)
DEFAULT_TRIALS = 100


@dataclass(frozen=True)
class SuiteConfig:
    """Everything that determines a suite run (and hence its report).

    ids=None means the full registry.  trials counts cases per (id, n)
    pair.  nu_grid / p_grid / alpha_grid, when given, replace the built-in
    parameter grids; fixed_bounds replaces the per-case bounds draw.
    mutate maps registry ids to factors applied to the right-hand side —
    a deliberate fault injection used to prove the checker notices.
    workers parallelizes the run without affecting the output.
    """

    ids: Optional[tuple[str, ...]] = None
    dims: tuple[int, ...] = DEFAULT_DIMS
    trials: int = DEFAULT_TRIALS
    seed: int = 42
    tol: float = DEFAULT_TOL
    force_endpoints: bool = False
    fixed_bounds: Optional[SandwichBounds] = None
    nu_grid: Optional[tuple[float, ...]] = None
    p_grid: Optional[tuple[float, ...]] = None
    alpha_grid: Optional[tuple[float, ...]] = None
    mutate: dict = field(default_factory=dict)
    workers: int = 1

    def resolved_ids(self) -> tuple[str, ...]:
        if self.ids is None:
            return registry_ids()
        return tuple(self.ids)

    def validate(self) -> None:
        if self.trials < 0:
            raise ConfigInvalid(f"trials must be >= 0, got {self.trials}")
        if self.workers < 1:
            raise ConfigInvalid(f"workers must be >= 1, got {self.workers}")
        if self.tol < 0.0:
            raise ConfigInvalid(f"tol must be >= 0, got {self.tol}")
        if not self.dims:
            raise ConfigInvalid("dims must be nonempty")
        for n in self.dims:
            if not isinstance(n, int) or n < 1:
                raise ConfigInvalid(f"dimensions must be integers >= 1, got {n!r}")
        for grid_name in ("nu_grid", "p_grid", "alpha_grid"):
            grid = getattr(self, grid_name)
            if grid is not None and len(grid) == 0:
                raise ConfigInvalid(f"{grid_name} must be nonempty when given")
        ids = self.resolved_ids()
        for ineq_id in ids:
            get_entry(ineq_id)  # raises UnknownInequality
        for key in self.mutate:
            get_entry(key)
            if not self.mutate[key] > 0.0:
                raise ConfigInvalid(f"mutate factor for {key} must be > 0")
        if self.fixed_bounds is not None:
            for ineq_id in ids:
                entry = get_entry(ineq_id)
                if self.fixed_bounds.kind not in entry.kinds:
                    raise ConfigInvalid(
                        f"fixed bounds of kind {self.fixed_bounds.kind} do not "
                        f"satisfy the hypothesis of {ineq_id} "
                        f"(needs {'/'.join(entry.kinds)})"
                    )
                if entry.base == "thm3.4" and not self.fixed_bounds.M1 < self.fixed_bounds.m2:
                    raise ConfigInvalid("thm3.4 needs fixed bounds with M1 < m2")

    def hash_payload(self) -> dict:
        """Everything that determines the report; workers excluded."""
        return {
            "ids": list(self.resolved_ids()),
            "dims": list(self.dims),
            "trials": self.trials,
            "seed": self.seed,
            "tol": self.tol,
            "force_endpoints": self.force_endpoints,
            "fixed_bounds": None if self.fixed_bounds is None else self.fixed_bounds.to_dict(),
            "nu_grid": None if self.nu_grid is None else list(self.nu_grid),
            "p_grid": None if self.p_grid is None else list(self.p_grid),
            "alpha_grid": None if self.alpha_grid is None else list(self.alpha_grid),
            "mutate": {k: self.mutate[k] for k in sorted(self.mutate)},
        }

    def config_hash(self) -> str:
        return hashlib.sha256(dumps_canonical(self.hash_payload()).encode()).hexdigest()


def _draw_bounds(entry: RegistryEntry, kind: str, rng: SplitMix64) -> SandwichBounds:
    """Random hypothesis bounds of the requested kind.

    Outer condition number h is uniform in [1.5, 20]; the inner sandwich
    ratio h' sits strictly inside (1, h) with the inner interval placed
    log-uniformly between the outer endpoints.
    """
    if kind == "reverse_ando":
        m1 = rng.log_uniform(0.5, 1.5)
        M1 = m1 * rng.log_uniform(1.0, 2.5)
        if entry.base == "thm3.4":
            m2 = M1 * rng.log_uniform(1.05, 2.2)
        else:
            m2 = rng.log_uniform(0.5, 1.5)
        M2 = m2 * rng.log_uniform(1.0, 2.5)
        return SandwichBounds.reverse_ando(m1, M1, m2, M2)
    m = rng.log_uniform(0.3, 3.0)
    h = rng.uniform(1.5, 20.0)
    M = m * h
    if kind == "common":
        return SandwichBounds.common(m, M)
    hp = 1.0 + rng.uniform(0.02, 0.98) * (h - 1.0)
    mp = m * (h / hp) ** rng.next_float()
    Mp = mp * hp
    if kind == "sandwich_B_low":
        return SandwichBounds.sandwich_B_low(m, mp, Mp, M)
    return SandwichBounds.sandwich_A_low(m, mp, Mp, M)


def _case_params(cfg: SuiteConfig, entry: RegistryEntry, trial: int) -> CaseParams:
    nu_grid = cfg.nu_grid if cfg.nu_grid is not None else NU_GRID
    alpha_grid = cfg.alpha_grid if cfg.alpha_grid is not None else ALPHA_GRID
    nu = nu_grid[trial % len(nu_grid)] if entry.nu_mode == "grid" else 0.5
    alpha = alpha_grid[trial % len(alpha_grid)] if entry.needs_alpha else 1.0
    if cfg.p_grid is not None:
        p_grid = cfg.p_grid
        p = p_grid[trial % len(p_grid)]
    elif entry.p_grid == "2a":
        p = (2.0 * alpha, 2.0 * alpha + 1.5)[trial % 2]
    else:
        p = entry.p_grid[trial % len(entry.p_grid)]
    return CaseParams(nu=nu, p=p, alpha=alpha)


def _build_case(cfg: SuiteConfig, entry: RegistryEntry, n: int, trial: int) -> InequalityCase:
    case_seed = derive_seed(cfg.seed, entry.ineq_id, n, trial)
    if cfg.fixed_bounds is not None:
        bounds = cfg.fixed_bounds
    else:
        kind = entry.kinds[trial % len(entry.kinds)]
        bounds = _draw_bounds(entry, kind, SplitMix64(derive_seed(case_seed, "bounds")))
    instance = sample_instance(
        bounds, n, derive_seed(case_seed, "instance"), cfg.force_endpoints
    )
    phi = None
    if entry.uses_phi:
        map_kind = MAP_KINDS[trial % len(MAP_KINDS)]
        phi = random_map(n, map_kind, derive_seed(case_seed, "map"))
    return InequalityCase(
        ineq_id=entry.ineq_id,
        instance=instance,
        phi=phi,
        params=_case_params(cfg, entry, trial),
    )


def _run_block(cfg: SuiteConfig, ineq_id: str, n: int) -> list[dict]:
    entry = get_entry(ineq_id)
    scale = cfg.mutate.get(ineq_id, 1.0)
    out = []
    for trial in range(cfg.trials):
        case = _build_case(cfg, entry, n, trial)
        verdict = check_case(case, tol=cfg.tol, constant_scale=scale)
        row = {
            "id": ineq_id,
            "seed": case.instance.seed,
            "n": n,
            "trial": trial,
            "params": verdict.params,
            "gap": verdict.gap,
            "relative_gap": verdict.relative_gap,
            "holds": verdict.holds,
        }
        if not verdict.holds:
            row["replay"] = {
                "instance": instance_to_obj(case.instance),
                "map": None if case.phi is None else map_to_obj(case.phi),
            }
        out.append(row)
    return out


def _run_block_star(args) -> list[dict]:
    return _run_block(*args)


@dataclass(frozen=True)
class Report:
    config_hash: str
    cases: tuple
    summary: tuple
    asserted_failures: int

    def to_obj(self) -> dict:
        return {
            "config_hash": self.config_hash,
            "cases": list(self.cases),
            "summary": list(self.summary),
        }

    def to_json(self) -> str:
        return dumps_canonical(self.to_obj())

    def to_csv(self) -> str:
        buf = _io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["id", "seed", "n", "params", "gap", "relative_gap", "holds"])
        for row in self.cases:
            writer.writerow(
                [
                    row["id"],
                    row["seed"],
                    row["n"],
                    json.dumps(row["params"], sort_keys=True, separators=(",", ":")),
                    repr(row["gap"]),
                    repr(row["relative_gap"]),
                    int(row["holds"]),
                ]
            )
        return buf.getvalue()

    def total_failures(self) -> int:
        return sum(s["failures"] for s in self.summary)


def run_suite(cfg: SuiteConfig) -> Report:
    """Execute the configured suite and aggregate a deterministic report."""
    cfg.validate()
    ids = cfg.resolved_ids()
    blocks = [(cfg, ineq_id, n) for ineq_id in ids for n in cfg.dims]
    if cfg.workers > 1 and len(blocks) > 1:
        serial_cfg = replace(cfg, workers=1)
        tasks = [(serial_cfg, ineq_id, n) for _, ineq_id, n in blocks]
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(_run_block_star, tasks, chunksize=1))
    else:
        results = [_run_block_star(task) for task in blocks]
    cases = [row for block in results for row in block]
    cases.sort(key=lambda row: (row["id"], row["n"], row["trial"]))
    for row in cases:
        del row["trial"]
    summary = []
    asserted_failures = 0
    for ineq_id in sorted(ids):
        rows = [row for row in cases if row["id"] == ineq_id]
        failures = sum(1 for row in rows if not row["holds"])
        if failures and get_entry(ineq_id).asserted:
            asserted_failures += failures
        summary.append(
            {
                "id": ineq_id,
                "trials": len(rows),
                "failures": failures,
                "worst_relative_gap": min((row["relative_gap"] for row in rows), default=None),
            }
        )
    return Report(
        config_hash=cfg.config_hash(),
        cases=tuple(cases),
        summary=tuple(summary),
        asserted_failures=asserted_failures,
    )


# ---------------------------------------------------------------------------
# Tightness search
# ---------------------------------------------------------------------------

NU_SPECIALS = (0.0, 0.25, 0.5, 0.75, 1.0)


@dataclass(frozen=True)
class SearchRecord:
    """Outcome of a tightness search.

    best_relative_gap is the smallest value seen; params describes the case
    that attained it.  `confirmed` is set only when the best value is a
    candidate violation (below -tol): the case is then re-evaluated with
    the eigensolver's off-diagonal threshold tightened a hundredfold, and
    confirmed=True means the violation survived (not numerical noise).
    """

    ineq_id: str
    evaluations: int
    best_gap: float
    best_relative_gap: float
    holds: bool
    params: dict
    confirmed: Optional[bool] = None


def _search_scalar_lemma(budget: int, seed: int, nu: Optional[float]) -> SearchRecord:
    rng = SplitMix64(derive_seed(seed, "scalar-lemma"))
    best = math.inf
    best_params: dict = {}
    evals = 0
    for i in range(max(budget, 1)):
        if nu is not None:
            v = nu
        elif i % 3 == 0:
            v = NU_SPECIALS[rng.randint(0, len(NU_SPECIALS) - 1)]
        else:
            v = rng.next_float()
        x = 1.0 if i % 7 == 0 else rng.log_uniform(1e-2, 1e2)
        g = scalar_lemma_gap(x, v)
        evals += 1
        if g < best:
            best = g
            best_params = {"x": x, "nu": v}
    return SearchRecord(
        ineq_id="scalar-lemma",
        evaluations=evals,
        best_gap=best,
        best_relative_gap=best,
        holds=best >= -DEFAULT_TOL,
        params=best_params,
    )


def _place(rng: SplitMix64, lo: float, hi: float, n: int) -> tuple[float, ...]:
    """One eigenvalue placement inside [lo, hi]: a corner or a random cloud."""
    mode = rng.randint(0, 3)
    if mode == 0:
        return (lo,) * n
    if mode == 1:
        return (hi,) * n
    if mode == 2:
        half = n // 2
        return (lo,) * (n - half) + (hi,) * half
    return tuple(rng.uniform(lo, hi) for _ in range(n))


@dataclass
class _SearchState:
    bounds: SandwichBounds
    lamA: tuple
    lamB: tuple
    frameA: int
    frameB: int
    aligned: bool
    nu: float
    p: float
    alpha: float
    map_kind: str
    map_seed: int


def _min_p(entry: RegistryEntry, alpha: float) -> float:
    if entry.p_grid == "2a":
        return 2.0 * alpha
    return min(entry.p_grid)


def _fresh_state(entry: RegistryEntry, n: int, rng: SplitMix64) -> _SearchState:
    kind = entry.kinds[rng.randint(0, len(entry.kinds) - 1)]
    bounds = _draw_bounds(entry, kind, rng)
    alo, ahi = bounds.a_interval()
    blo, bhi = bounds.b_interval()
    alpha = rng.uniform(1.0, 2.0) if entry.needs_alpha else 1.0
    if entry.nu_mode == "grid":
        nu = NU_SPECIALS[rng.randint(0, 4)] if rng.next_u64() & 1 else rng.next_float()
    else:
        nu = 0.5
    return _SearchState(
        bounds=bounds,
        lamA=_place(rng, alo, ahi, n),
        lamB=_place(rng, blo, bhi, n),
        frameA=rng.next_u64(),
        frameB=rng.next_u64(),
        aligned=bool(rng.next_u64() & 1),
        nu=nu,
        p=_min_p(entry, alpha),
        alpha=alpha,
        map_kind=MAP_KINDS[rng.randint(0, len(MAP_KINDS) - 1)],
        map_seed=rng.next_u64(),
    )


_MOVES = ("bounds", "lamA", "lamB", "frameA", "frameB", "align", "nu", "p", "alpha", "map")


def _mutate_state(entry: RegistryEntry, st: _SearchState, n: int, rng: SplitMix64) -> _SearchState:
    move = _MOVES[rng.randint(0, len(_MOVES) - 1)]
    st = replace(st)
    if move == "bounds":
        kind = entry.kinds[rng.randint(0, len(entry.kinds) - 1)]
        st.bounds = _draw_bounds(entry, kind, rng)
        alo, ahi = st.bounds.a_interval()
        blo, bhi = st.bounds.b_interval()
        st.lamA = _place(rng, alo, ahi, n)
        st.lamB = _place(rng, blo, bhi, n)
    elif move == "lamA":
        alo, ahi = st.bounds.a_interval()
        st.lamA = _place(rng, alo, ahi, n)
    elif move == "lamB":
        blo, bhi = st.bounds.b_interval()
        st.lamB = _place(rng, blo, bhi, n)
    elif move == "frameA":
        st.frameA = rng.next_u64()
    elif move == "frameB":
        st.frameB = rng.next_u64()
        st.aligned = False
    elif move == "align":
        st.aligned = not st.aligned
    elif move == "nu" and entry.nu_mode == "grid":
        st.nu = NU_SPECIALS[rng.randint(0, 4)] if rng.next_u64() & 1 else rng.next_float()
    elif move == "p":
        lo = _min_p(entry, st.alpha)
        st.p = lo if rng.next_u64() & 1 else lo + 1.5 * rng.next_float()
    elif move == "alpha" and entry.needs_alpha:
        st.alpha = rng.uniform(1.0, 2.0)
        st.p = max(st.p, _min_p(entry, st.alpha))
    elif move == "map":
        st.map_kind = MAP_KINDS[rng.randint(0, len(MAP_KINDS) - 1)]
        st.map_seed = rng.next_u64()
    return st


def _eval_state(entry: RegistryEntry, st: _SearchState, n: int, tol: float):
    A = build_from_spectrum(st.lamA, st.frameA)
    B = build_from_spectrum(st.lamB, st.frameA if st.aligned else st.frameB)
    instance = Instance(A=A, B=B, bounds=st.bounds, seed=st.frameA, n=n)
    phi = random_map(n, st.map_kind, st.map_seed) if entry.uses_phi else None
    case = InequalityCase(
        ineq_id=entry.ineq_id,
        instance=instance,
        phi=phi,
        params=CaseParams(nu=st.nu, p=st.p, alpha=st.alpha),
    )
    return case, check_case(case, tol=tol)


def tightness_search(
    ineq_id: str,
    budget: int = 2000,
    seed: int = 0,
    n: int = 2,
    nu: Optional[float] = None,
    tol: float = DEFAULT_TOL,
) -> SearchRecord:
    """Hunt for the smallest relative gap an inequality attains.

    The special id "scalar-lemma" searches the scalar refinement slack over
    (x, nu) instead of operator instances; pass nu to pin the weight.
    """
    if budget < 1:
        raise ConfigInvalid(f"budget must be >= 1, got {budget}")
    if ineq_id == "scalar-lemma":
        return _search_scalar_lemma(budget, seed, nu)
    entry = get_entry(ineq_id)
    rng = SplitMix64(derive_seed(seed, "search", ineq_id, n))
    restart_every = max(50, budget // 8)
    best_val = math.inf
    best_case = None
    best_verdict = None
    state = None
    current_val = math.inf
    evals = 0
    while evals < budget:
        if state is None or evals % restart_every == 0:
            candidate = _fresh_state(entry, n, rng)
            current_val = math.inf
        else:
            candidate = _mutate_state(entry, state, n, rng)
        if nu is not None and entry.nu_mode == "grid":
            candidate.nu = nu
        try:
            case, verdict = _eval_state(entry, candidate, n, tol)
        except HypothesisNotMet:
            evals += 1
            continue
        evals += 1
        # hill-climb on the relative gap; rare uphill accepts escape plateaus
        if verdict.relative_gap <= current_val or rng.next_float() < 0.1:
            state = candidate
            current_val = verdict.relative_gap
        if verdict.relative_gap < best_val:
            best_val = verdict.relative_gap
            best_case = case
            best_verdict = verdict
    confirmed = None
    if best_verdict is not None and best_verdict.relative_gap < -tol:
        with threshold_scale(0.01):
            recheck = check_case(best_case, tol=tol)
        confirmed = bool(recheck.relative_gap < -tol)
    return SearchRecord(
        ineq_id=ineq_id,
        evaluations=evals,
        best_gap=best_verdict.gap if best_verdict is not None else math.inf,
        best_relative_gap=best_val,
        holds=bool(best_val >= -tol),
        params=best_verdict.params if best_verdict is not None else {},
        confirmed=confirmed,
    )
