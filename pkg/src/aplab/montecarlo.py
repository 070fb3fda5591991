"""Seeded binomial sampling, probability estimation and threshold location.

Randomness is counter-based: the decision to include integer x in trial t
of a run seeded with s is a pure function of (s, t, x), a splitmix-style
64-bit mix.  That makes every trial reproducible bit-for-bit regardless of
execution order or worker count, and lets different probe probabilities
share the same underlying uniforms (common random numbers), which couples
the sampled sets monotonically in p.

Inclusion thresholds are compared exactly against the rational p, so a
probability like 1/3 is honoured without floating-point bias.  Trials
whose decider ran out of node budget are a third outcome, reported
separately and bracketed by optimistic/pessimistic estimates; they are
never silently folded into a verdict.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import sqrt
from typing import Callable, ClassVar, Union

try:
    import numpy as _np
except ImportError:  # pragma: no cover - numpy is a declared dependency
    _np = None

from .cycles import has_girth_at_least
from .deciders import (
    DecisionResult,
    is_alpha_k_rb,
    is_alpha_k_sz,
    is_can_k_vdw,
    is_r_k_vdw,
)
from .progressions import GroundSet, build_ap_hypergraph

__all__ = [
    "CanVdW",
    "RkVdW",
    "AlphaRb",
    "AlphaSz",
    "GirthAtLeast",
    "SizeAtLeast",
    "Property",
    "TrialPlan",
    "TrialRecord",
    "TrialOutcome",
    "ProbeResult",
    "ThresholdResult",
    "ScalingRow",
    "ScalingResult",
    "AttemptRecord",
    "SearchOutcome",
    "ThresholdDiagnosticError",
    "sample_binomial_set",
    "wilson_interval",
    "run_plan",
    "estimate_probability",
    "threshold_bisect",
    "scaling_experiment",
    "search_sparse_canvdw",
]

_M64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_TRIAL_SALT = 0xD1B54A32D192ED03


def _mix64(z: int) -> int:
    z &= _M64
    z ^= z >> 30
    z = (z * _MIX1) & _M64
    z ^= z >> 27
    z = (z * _MIX2) & _M64
    return z ^ (z >> 31)


def _stream_base(seed: int, trial: int) -> int:
    base = _mix64((seed & _M64) ^ _GOLDEN)
    return _mix64(base ^ ((trial & _M64) * _TRIAL_SALT & _M64))


def _draw(base: int, x: int) -> int:
    return _mix64(base ^ ((x & _M64) * _GOLDEN & _M64))


def _vector_draws(base: int, n: int) -> "_np.ndarray":
    with _np.errstate(over="ignore"):
        z = _np.arange(1, n + 1, dtype=_np.uint64) * _np.uint64(_GOLDEN)
        z ^= _np.uint64(base)
        z ^= z >> _np.uint64(30)
        z *= _np.uint64(_MIX1)
        z ^= z >> _np.uint64(27)
        z *= _np.uint64(_MIX2)
        z ^= z >> _np.uint64(31)
    return z


def _as_probability(p: Fraction | float | int | str) -> Fraction:
    frac = Fraction(p)
    if not 0 <= frac <= 1:
        raise ValueError(f"probability must lie in [0, 1], got {frac}")
    return frac


def sample_binomial_set(
    n: int, p: Fraction | float | int | str, seed: int, trial_index: int
) -> GroundSet:
    """Keep each integer of [n] independently with probability p.

    The inclusion draw for x depends only on (seed, trial_index, x), so the
    same arguments reproduce the same set bit-for-bit, and raising p with
    everything else fixed can only grow the set.
    """
    if n < 0:
        raise ValueError(f"ambient bound must be >= 0, got {n}")
    frac = _as_probability(p)
    num, den = frac.numerator, frac.denominator
    if num == 0:
        return GroundSet((), n)
    if num == den:
        return GroundSet.interval(n)
    base = _stream_base(seed, trial_index)
    if _np is not None and den & (den - 1) == 0:
        # dyadic p: the inclusion threshold num * 2**64 / den is an exact
        # 64-bit integer, so a vectorised compare is bias-free
        threshold = num << (64 - (den.bit_length() - 1))
        draws = _vector_draws(base, n)
        kept = _np.nonzero(draws < _np.uint64(threshold))[0]
        return GroundSet(tuple(int(i) + 1 for i in kept), n)
    shifted = num << 64
    elements = tuple(x for x in range(1, n + 1) if _draw(base, x) * den < shifted)
    return GroundSet(elements, n)


# --- properties -------------------------------------------------------------


@dataclass(frozen=True)
class CanVdW:
    """Every colouring yields a monochromatic or rainbow k-AP."""

    k: int
    name: ClassVar[str] = "canvdw"
    monotone_increasing: ClassVar[bool] = True

    def decide(self, A: GroundSet, node_budget: int | None = None) -> DecisionResult:
        return is_can_k_vdw(A, self.k, node_budget=node_budget)

    def params(self) -> dict:
        return {"k": self.k}


@dataclass(frozen=True)
class RkVdW:
    """Every r-colouring yields a monochromatic k-AP."""

    r: int
    k: int
    name: ClassVar[str] = "rkvdw"
    monotone_increasing: ClassVar[bool] = True

    def decide(self, A: GroundSet, node_budget: int | None = None) -> DecisionResult:
        return is_r_k_vdw(A, self.r, self.k, node_budget=node_budget)

    def params(self) -> dict:
        return {"r": self.r, "k": self.k}


@dataclass(frozen=True)
class AlphaRb:
    """Every alpha-bounded colouring yields a rainbow k-AP."""

    alpha: Fraction
    k: int
    name: ClassVar[str] = "alpharb"
    monotone_increasing: ClassVar[bool] = False  # not established; spot-checked

    def __post_init__(self) -> None:
        object.__setattr__(self, "alpha", Fraction(self.alpha))

    def decide(self, A: GroundSet, node_budget: int | None = None) -> DecisionResult:
        return is_alpha_k_rb(A, self.alpha, self.k, node_budget=node_budget)

    def params(self) -> dict:
        return {"alpha": str(self.alpha), "k": self.k}


@dataclass(frozen=True)
class AlphaSz:
    """Every subset of relative size >= alpha contains a k-AP."""

    alpha: Fraction
    k: int
    name: ClassVar[str] = "alphasz"
    monotone_increasing: ClassVar[bool] = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "alpha", Fraction(self.alpha))

    def decide(self, A: GroundSet, node_budget: int | None = None) -> DecisionResult:
        return is_alpha_k_sz(A, self.alpha, self.k, node_budget=node_budget)

    def params(self) -> dict:
        return {"alpha": str(self.alpha), "k": self.k}


@dataclass(frozen=True)
class GirthAtLeast:
    """The k-AP hypergraph of the set has girth at least g (decreasing in A)."""

    g: int
    k: int
    name: ClassVar[str] = "girth"
    monotone_increasing: ClassVar[bool] = False

    def decide(self, A: GroundSet, node_budget: int | None = None) -> DecisionResult:
        t0 = time.perf_counter()
        verdict = has_girth_at_least(build_ap_hypergraph(A, self.k), self.g)
        return DecisionResult(verdict, None, 0, time.perf_counter() - t0)

    def params(self) -> dict:
        return {"g": self.g, "k": self.k}


@dataclass(frozen=True)
class SizeAtLeast:
    """Synthetic calibration property: the sampled set has at least m elements.

    Its success probability is an exact binomial tail, which makes it the
    reference point for estimator and threshold calibration tests.
    """

    m: int
    name: ClassVar[str] = "size"
    monotone_increasing: ClassVar[bool] = True

    def decide(self, A: GroundSet, node_budget: int | None = None) -> DecisionResult:
        return DecisionResult(len(A) >= self.m, None, 0, 0.0)

    def params(self) -> dict:
        return {"m": self.m}


Property = Union[CanVdW, RkVdW, AlphaRb, AlphaSz, GirthAtLeast, SizeAtLeast]


# --- trial plans and outcomes ----------------------------------------------


@dataclass(frozen=True)
class TrialPlan:
    n: int
    p: Fraction
    trials: int
    seed: int
    prop: Property
    node_budget: int | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "p", _as_probability(self.p))
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if self.n < 0:
            raise ValueError(f"n must be >= 0, got {self.n}")


@dataclass(frozen=True)
class TrialRecord:
    index: int
    size: int
    verdict: bool | None
    nodes: int
    elapsed: float


@dataclass(frozen=True)
class TrialOutcome:
    """Aggregated counts with a Wilson interval over the decided trials.

    Budget-exhausted trials are excluded from ``point_estimate``;
    ``optimistic_estimate`` counts them as successes and
    ``pessimistic_estimate`` as failures.
    """

    successes: int
    failures: int
    budget_exhausted: int
    point_estimate: Fraction | None
    confidence_interval: tuple[float, float]
    optimistic_estimate: Fraction
    pessimistic_estimate: Fraction

    @property
    def trials(self) -> int:
        return self.successes + self.failures + self.budget_exhausted


def wilson_interval(successes: int, count: int, z: float = 1.96) -> tuple[float, float]:
    """95% Wilson score interval; (0, 1) when there is nothing to estimate."""
    if count == 0:
        return (0.0, 1.0)
    phat = successes / count
    z2 = z * z
    denom = 1 + z2 / count
    centre = (phat + z2 / (2 * count)) / denom
    half = z * sqrt(phat * (1 - phat) / count + z2 / (4 * count * count)) / denom
    return (max(0.0, centre - half), min(1.0, centre + half))


def _aggregate(successes: int, failures: int, exhausted: int) -> TrialOutcome:
    decided = successes + failures
    total = successes + failures + exhausted
    return TrialOutcome(
        successes=successes,
        failures=failures,
        budget_exhausted=exhausted,
        point_estimate=Fraction(successes, decided) if decided else None,
        confidence_interval=wilson_interval(successes, decided),
        optimistic_estimate=Fraction(successes + exhausted, total),
        pessimistic_estimate=Fraction(successes, total),
    )


def run_plan(plan: TrialPlan) -> tuple[TrialOutcome, tuple[TrialRecord, ...]]:
    """Run every trial of the plan and return the aggregate plus per-trial log."""
    successes = failures = exhausted = 0
    records = []
    for i in range(plan.trials):
        A = sample_binomial_set(plan.n, plan.p, plan.seed, i)
        result = plan.prop.decide(A, node_budget=plan.node_budget)
        if result.verdict is True:
            successes += 1
        elif result.verdict is False:
            failures += 1
        else:
            exhausted += 1
        records.append(
            TrialRecord(i, len(A), result.verdict, result.nodes_explored, result.elapsed)
        )
    return _aggregate(successes, failures, exhausted), tuple(records)


def estimate_probability(plan: TrialPlan) -> TrialOutcome:
    return run_plan(plan)[0]


# --- threshold location ------------------------------------------------------


class ThresholdDiagnosticError(RuntimeError):
    """Raised when the empirical profile offers no usable crossing."""


@dataclass(frozen=True)
class ProbeResult:
    p: Fraction
    trials_run: int
    successes: int
    failures: int
    exhausted: int
    estimate: Fraction | None
    confidence_interval: tuple[float, float]
    optimistic: Fraction
    pessimistic: Fraction
    records: tuple[TrialRecord, ...] = field(repr=False, default=())


def _probe(
    n: int,
    p: Fraction,
    prop: Property,
    seed: int,
    max_trials: int,
    node_budget: int | None,
    target: Fraction,
    *,
    min_trials: int = 24,
    check_every: int = 8,
) -> ProbeResult:
    """Sequentially sample trials at p, stopping once the Wilson interval
    clears the target.  Deterministic endpoints (p in {0, 1}) need one trial."""
    if p == 0 or p == 1:
        max_trials = 1
    successes = failures = exhausted = 0
    records = []
    target_f = float(target)
    for i in range(max_trials):
        A = sample_binomial_set(n, p, seed, i)
        result = prop.decide(A, node_budget=node_budget)
        if result.verdict is True:
            successes += 1
        elif result.verdict is False:
            failures += 1
        else:
            exhausted += 1
        records.append(
            TrialRecord(i, len(A), result.verdict, result.nodes_explored, result.elapsed)
        )
        decided = successes + failures
        if decided >= min_trials and (i + 1) % check_every == 0:
            lo, hi = wilson_interval(successes, decided)
            if lo > target_f or hi < target_f:
                break
    decided = successes + failures
    total = successes + failures + exhausted
    return ProbeResult(
        p=p,
        trials_run=total,
        successes=successes,
        failures=failures,
        exhausted=exhausted,
        estimate=Fraction(successes, decided) if decided else None,
        confidence_interval=wilson_interval(successes, decided),
        optimistic=Fraction(successes + exhausted, total),
        pessimistic=Fraction(successes, total),
        records=tuple(records),
    )


@dataclass(frozen=True)
class ThresholdResult:
    n: int
    target: Fraction
    resolution: Fraction
    p_lo: Fraction
    p_hi: Fraction
    p_star: Fraction
    probes: tuple[ProbeResult, ...]
    optimistic_bracket: tuple[Fraction, Fraction]
    pessimistic_bracket: tuple[Fraction, Fraction]

    @property
    def exhausted_total(self) -> int:
        return sum(pr.exhausted for pr in self.probes)


def _band_bracket(
    probes: list[ProbeResult], value: Callable[[ProbeResult], Fraction], target: Fraction
) -> tuple[Fraction, Fraction]:
    lows = [pr.p for pr in probes if value(pr) < target]
    highs = [pr.p for pr in probes if value(pr) >= target]
    return (max(lows) if lows else Fraction(0), min(highs) if highs else Fraction(1))


def _check_profile_monotone(probes: list[ProbeResult]) -> None:
    """Flag estimate inversions beyond three combined standard errors."""
    ordered = sorted(probes, key=lambda pr: pr.p)
    for early, late in zip(ordered, ordered[1:]):
        if early.estimate is None or late.estimate is None:
            continue
        e_lo, e_hi = float(early.estimate), float(late.estimate)
        n1 = early.successes + early.failures
        n2 = late.successes + late.failures
        sigma = sqrt(e_lo * (1 - e_lo) / max(n1, 1) + e_hi * (1 - e_hi) / max(n2, 1))
        if e_lo > e_hi + 3 * sigma:
            raise ThresholdDiagnosticError(
                f"estimate falls from {e_lo:.3f} at p={early.p} to {e_hi:.3f} at "
                f"p={late.p}, beyond noise: property does not look monotone"
            )


def threshold_bisect(
    n: int,
    prop: Property,
    trials: int,
    *,
    target: Fraction | float | str = Fraction(1, 2),
    seed: int = 0,
    resolution: Fraction | float | str = Fraction(1, 64),
    node_budget: int | None = None,
) -> ThresholdResult:
    """Bisect on p until the bracket around the target crossing is narrow.

    Probes at every p reuse the same per-trial random draws, so for a
    monotone property the sampled sets are nested across probes and the
    empirical profile is monotone by construction.  Budget-exhausted trials
    produce optimistic/pessimistic brackets alongside the point bracket.
    """
    target = Fraction(target)
    resolution = Fraction(resolution)
    if not 0 < target < 1:
        raise ValueError(f"target must lie strictly between 0 and 1, got {target}")
    if resolution <= 0:
        raise ValueError(f"resolution must be positive, got {resolution}")
    probes: list[ProbeResult] = []

    def probe(p: Fraction) -> ProbeResult:
        pr = _probe(n, p, prop, seed, trials, node_budget, target)
        probes.append(pr)
        return pr

    low_pr = probe(Fraction(0))
    high_pr = probe(Fraction(1))
    if low_pr.estimate is None or high_pr.estimate is None:
        raise ThresholdDiagnosticError("endpoint probes were fully budget-exhausted")
    if low_pr.estimate >= target:
        raise ThresholdDiagnosticError(
            f"estimate at p=0 is {low_pr.estimate}, already at/above the target "
            f"{target}: no crossing inside [0, 1]"
        )
    if high_pr.estimate < target:
        raise ThresholdDiagnosticError(
            f"estimate at p=1 is {high_pr.estimate}, below the target {target}: "
            "no crossing inside [0, 1]"
        )
    lo, hi = Fraction(0), Fraction(1)
    while hi - lo > resolution:
        mid = (lo + hi) / 2
        pr = probe(mid)
        if pr.estimate is None:
            raise ThresholdDiagnosticError(
                f"every trial at p={mid} exhausted the node budget"
            )
        if pr.estimate >= target:
            hi = mid
        else:
            lo = mid
    _check_profile_monotone(probes)
    probes_sorted = tuple(sorted(probes, key=lambda pr: pr.p))
    return ThresholdResult(
        n=n,
        target=target,
        resolution=resolution,
        p_lo=lo,
        p_hi=hi,
        p_star=(lo + hi) / 2,
        probes=probes_sorted,
        optimistic_bracket=_band_bracket(probes, lambda pr: pr.optimistic, target),
        pessimistic_bracket=_band_bracket(probes, lambda pr: pr.pessimistic, target),
    )


# --- scaling experiment -------------------------------------------------------


@dataclass(frozen=True)
class ScalingRow:
    n: int
    p_star: Fraction
    normalized: float
    normalized_optimistic: float
    normalized_pessimistic: float
    threshold: ThresholdResult = field(repr=False)


@dataclass(frozen=True)
class ScalingResult:
    k: int
    rows: tuple[ScalingRow, ...]
    spread: float
    spread_optimistic: float
    spread_pessimistic: float


def scaling_experiment(
    k: int,
    n_list: tuple[int, ...] | list[int],
    trials: int,
    seed: int,
    *,
    target: Fraction | float | str = Fraction(1, 2),
    resolution: Fraction | float | str = Fraction(1, 64),
    node_budget: int | None = None,
) -> ScalingResult:
    """Locate the 50% point of the canonical property for each n and report
    p_star * n^(1/(k-1)), whose max/min ratio measures how well the
    thresholds track that scaling."""
    ns = list(n_list)
    if not ns:
        raise ValueError("n_list must not be empty")
    if any(b <= a for a, b in zip(ns, ns[1:])):
        raise ValueError("n_list must be strictly ascending")
    exponent = 1 / (k - 1)
    rows = []
    for n in ns:
        res = threshold_bisect(
            n,
            CanVdW(k),
            trials,
            target=target,
            seed=seed,
            resolution=resolution,
            node_budget=node_budget,
        )
        scale = n**exponent
        opt_mid = (res.optimistic_bracket[0] + res.optimistic_bracket[1]) / 2
        pess_mid = (res.pessimistic_bracket[0] + res.pessimistic_bracket[1]) / 2
        rows.append(
            ScalingRow(
                n=n,
                p_star=res.p_star,
                normalized=float(res.p_star) * scale,
                normalized_optimistic=float(opt_mid) * scale,
                normalized_pessimistic=float(pess_mid) * scale,
                threshold=res,
            )
        )

    def spread(values: list[float]) -> float:
        return max(values) / min(values)

    return ScalingResult(
        k=k,
        rows=tuple(rows),
        spread=spread([r.normalized for r in rows]),
        spread_optimistic=spread([r.normalized_optimistic for r in rows]),
        spread_pessimistic=spread([r.normalized_pessimistic for r in rows]),
    )


# --- randomized search for sparse witnesses -----------------------------------


@dataclass(frozen=True)
class AttemptRecord:
    index: int
    size: int
    girth_ok: bool
    verdict: bool | None
    nodes: int
    elapsed: float


@dataclass(frozen=True)
class SearchOutcome:
    witness: GroundSet | None
    attempts: tuple[AttemptRecord, ...]

    @property
    def found(self) -> bool:
        return self.witness is not None


def search_sparse_canvdw(
    k: int,
    g: int,
    n: int,
    p: Fraction | float | int | str,
    max_attempts: int,
    seed: int,
    *,
    node_budget: int | None = None,
) -> SearchOutcome:
    """Sample binomial sets hunting for one that both has AP-hypergraph girth
    at least g and the canonical property.

    The cheap girth filter runs first; the expensive colouring decision only
    on survivors.  Every attempt is logged; an unsuccessful search is a
    legitimate outcome at desk scale.
    """
    if g < 2:
        raise ValueError(f"girth threshold must be >= 2, got {g}")
    attempts = []
    for i in range(max_attempts):
        A = sample_binomial_set(n, p, seed, i)
        t0 = time.perf_counter()
        girth_ok = has_girth_at_least(build_ap_hypergraph(A, k), g)
        verdict: bool | None = False
        nodes = 0
        if girth_ok:
            res = is_can_k_vdw(A, k, node_budget=node_budget)
            verdict = res.verdict
            nodes = res.nodes_explored
        attempts.append(
            AttemptRecord(i, len(A), girth_ok, verdict, nodes, time.perf_counter() - t0)
        )
        if girth_ok and verdict is True:
            return SearchOutcome(A, tuple(attempts))
    return SearchOutcome(None, tuple(attempts))
