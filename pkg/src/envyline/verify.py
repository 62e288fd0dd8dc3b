"""Brute-force adversarial search that confronts the closed forms with worst cases.

The search evaluates mechanisms on numpy grids of two-agent profiles (plus
the prediction where it matters), zooms in around the best coarse points, and
finally re-scores every witness through the scalar path in :mod:`envyline.core`
so reported values are reproducible from the witness alone.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Union

import numpy as np

from . import analysis
from .analysis import GuaranteePair
from .core import (
    INF,
    LocationProfile,
    PlacementDistribution,
    approximation_ratio,
    optimal_location,
    reduce_to_two_agents,
)
from .mechanisms import LRM_ALPHA, LRM_P, Kind, MechanismSpec, midpoint, run

SP_TOL = 1e-12
RNG_ALGORITHM = "numpy.random.Philox/SeedSequence"


@dataclass(frozen=True)
class SearchConfig:
    coarse_step: float = 1e-2
    refine_step: float = 1e-5
    refine_radius: Optional[float] = None
    tolerance: float = 5e-3
    candidates: int = 8

    def __post_init__(self):
        if self.refine_radius is None:
            object.__setattr__(self, "refine_radius", 2.0 * self.coarse_step)
        if not (0.0 < self.refine_step < self.coarse_step <= 0.1):
            raise ValueError("need 0 < refine_step < coarse_step <= 0.1")
        if self.tolerance < 0.0:
            raise ValueError("tolerance must be non-negative")
        if self.candidates < 1:
            raise ValueError("candidates must be positive")


@dataclass(frozen=True)
class PredictionMode:
    """How the prediction is chosen during a worst-case search.

    ``accurate`` ties the prediction to the profile midpoint (restricted to
    ``[lo, hi]``); ``adversarial`` lets it range over ``[lo, hi]``; ``fixed``
    pins it; ``error_bounded`` keeps it within ``eta`` of the midpoint.
    """

    kind: str
    lo: float = 0.0
    hi: float = 1.0
    eta: float = 0.0

    @classmethod
    def accurate(cls, lo: float = 0.0, hi: float = 1.0) -> "PredictionMode":
        return cls("accurate", lo, hi)

    @classmethod
    def adversarial(cls, lo: float = 0.0, hi: float = 1.0) -> "PredictionMode":
        return cls("adversarial", lo, hi)

    @classmethod
    def fixed(cls, y_hat: float) -> "PredictionMode":
        return cls("fixed", y_hat, y_hat)

    @classmethod
    def error_bounded(cls, eta: float) -> "PredictionMode":
        if eta < 0:
            raise ValueError("eta must be non-negative")
        return cls("error_bounded", eta=eta)


@dataclass(frozen=True)
class Witness:
    profile: LocationProfile
    prediction: Optional[float]
    value: float


@dataclass(frozen=True)
class SearchResult:
    value: float
    coarse_value: float
    witnesses: tuple[Witness, ...]

    @property
    def witness(self) -> Witness:
        return self.witnesses[0]


# --- vectorised evaluation ----------------------------------------------------


def _envy_two(y, x1, x2):
    u1 = 1.0 - np.abs(y - x1)
    u2 = 1.0 - np.abs(y - x2)
    hi = np.maximum(u1, u2)
    lo = np.minimum(u1, u2)
    safe = np.where(lo > 0.0, lo, 1.0)
    out = np.where(lo > 0.0, hi / safe, INF)
    return np.where(x1 == x2, 1.0, out)


def _lrm_atoms(weight):
    return [
        (0.5 - LRM_ALPHA, LRM_P * weight),
        (0.5, (1.0 - 2.0 * LRM_P) * weight),
        (0.5 + LRM_ALPHA, LRM_P * weight),
    ]


def _batch_atoms(spec: MechanismSpec, x1, x2, y_hat):
    one = np.ones_like(x1)
    kind = spec.kind
    if kind is Kind.MIDPOINT:
        return [((x1 + x2) / 2.0, one)]
    if kind is Kind.CONSTANT_HALF:
        return [(0.5 * one, one)]
    if kind is Kind.LRM_CONSTANT:
        a, p = spec.alpha, spec.p
        return [(0.5 - a, p * one), (0.5, (1.0 - 2.0 * p) * one), (0.5 + a, p * one)]
    if kind is Kind.ALPHA_BIM:
        lo, hi = 1.0 - 1.0 / spec.alpha, 1.0 / spec.alpha
        return [(np.clip(y_hat, lo, hi), one)]
    p = 0.5 - np.abs(y_hat - 0.5)
    if kind is Kind.BAM:
        return [(y_hat, p), (0.5, 1.0 - p)]
    if kind is Kind.BIAS_AWARE_LRM:
        return [(y_hat, p)] + _lrm_atoms(1.0 - p)
    lo, hi = 1.0 - 1.0 / spec.alpha, 1.0 / spec.alpha
    inside = ((y_hat >= lo) & (y_hat <= hi)).astype(float)
    return [(y_hat, inside)] + _lrm_atoms(1.0 - inside)


def batch_ratio(spec: MechanismSpec, x1, x2, y_hat=None) -> np.ndarray:
    """Approximation ratio on many two-agent profiles at once.

    The midpoint optimum of a two-agent profile has envy ratio 1, so the
    ratio is just the expected envy ratio of the mechanism's lottery.
    """
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    y_hat = x1 * 0.0 if y_hat is None else np.asarray(y_hat, dtype=float)
    total = np.zeros(np.broadcast(x1, x2, y_hat).shape)
    with np.errstate(invalid="ignore"):
        for loc, prob in _batch_atoms(spec, x1, x2, y_hat):
            er = _envy_two(loc, x1, x2)
            total = total + np.where(prob > 0.0, prob * er, 0.0)
    return total


# --- search spaces ------------------------------------------------------------


@dataclass(frozen=True)
class _Space:
    bounds: tuple[tuple[float, float], ...]
    decode: Callable[[np.ndarray], tuple[np.ndarray, np.ndarray, Optional[np.ndarray]]]
    feasible: Callable[[np.ndarray], np.ndarray]


def _ordered(P):
    return P[:, 0] <= P[:, 1]


def _space(spec: MechanismSpec, mode: PredictionMode) -> _Space:
    if not spec.uses_prediction:
        return _Space(((0.0, 1.0), (0.0, 1.0)), lambda P: (P[:, 0], P[:, 1], None), _ordered)
    if mode.kind == "accurate":

        def decode(P):
            x1 = np.clip(P[:, 0] - P[:, 1], 0.0, 1.0)
            x2 = np.clip(P[:, 0] + P[:, 1], 0.0, 1.0)
            return x1, x2, (x1 + x2) / 2.0

        def feasible(P):
            return P[:, 1] <= np.minimum(P[:, 0], 1.0 - P[:, 0]) + 1e-15

        return _Space(((mode.lo, mode.hi), (0.0, 0.5)), decode, feasible)
    if mode.kind in ("adversarial", "fixed"):
        return _Space(
            ((0.0, 1.0), (0.0, 1.0), (mode.lo, mode.hi)),
            lambda P: (P[:, 0], P[:, 1], P[:, 2]),
            _ordered,
        )
    if mode.kind == "error_bounded":
        reach = min(mode.eta, 1.0)

        def decode(P):
            return P[:, 0], P[:, 1], np.clip((P[:, 0] + P[:, 1]) / 2.0 + P[:, 2], 0.0, 1.0)

        return _Space(((0.0, 1.0), (0.0, 1.0), (-reach, reach)), decode, _ordered)
    raise ValueError(f"unknown prediction mode {mode.kind!r}")


def _coarse_axis(lo: float, hi: float, step: float) -> np.ndarray:
    if hi <= lo:
        return np.array([lo])
    n = max(1, int(round((hi - lo) / step)))
    return np.linspace(lo, hi, n + 1)


def _local_axis(center: float, radius: float, step: float, lo: float, hi: float) -> np.ndarray:
    if hi <= lo:
        return np.array([lo])
    k = int(round(radius / step))
    pts = center + step * np.arange(-k, k + 1)
    pts = pts[(pts >= lo) & (pts <= hi)]
    extra = [v for v in (lo, hi, center) if abs(v - center) <= radius]
    return np.unique(np.concatenate([pts, extra]))


def _grid(axes: Sequence[np.ndarray]) -> np.ndarray:
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


def _evaluate(spec, space, P):
    P = P[space.feasible(P)]
    x1, x2, y_hat = space.decode(P)
    return P, batch_ratio(spec, x1, x2, y_hat)


def _pick_candidates(P, values, k, radius):
    order = np.lexsort(tuple(P[:, j] for j in reversed(range(P.shape[1]))) + (-values,))
    chosen: list[int] = []
    for idx in order:
        if len(chosen) >= k:
            break
        if all(np.max(np.abs(P[idx] - P[c])) > radius for c in chosen):
            chosen.append(idx)
    return chosen


def _zoom(spec, space, start, cfg: SearchConfig):
    center = np.array(start, dtype=float)
    best = -INF
    radius = cfg.refine_radius
    step = cfg.coarse_step / 10.0
    while True:
        step = max(step, cfg.refine_step)
        axes = [
            _local_axis(c, radius, step, lo, hi) for c, (lo, hi) in zip(center, space.bounds)
        ]
        P, vals = _evaluate(spec, space, _grid(axes))
        i = int(np.argmax(vals))
        if vals[i] > best:
            best, center = float(vals[i]), P[i]
        if step <= cfg.refine_step or math.isinf(best):
            return center, best
        radius, step = 2.0 * step, step / 10.0


def _scalar_value(spec: MechanismSpec, profile: LocationProfile, y_hat: Optional[float]) -> float:
    return approximation_ratio(run(spec, profile, y_hat), profile)


def _witness(spec, space, params) -> Witness:
    x1, x2, y_hat = space.decode(np.asarray(params, dtype=float)[None, :])
    profile = LocationProfile((float(x1[0]), float(x2[0])))
    pred = None
    if spec.uses_prediction:
        pred = optimal_location(profile) if y_hat is None else float(y_hat[0])
        if y_hat is not None and space.bounds[-1] == (0.0, 0.5) and len(space.bounds) == 2:
            pred = optimal_location(profile)
    return Witness(profile, pred, _scalar_value(spec, profile, pred))


def worst_case_ratio(
    spec: MechanismSpec, mode: PredictionMode, cfg: SearchConfig = SearchConfig()
) -> SearchResult:
    """Supremum of the approximation ratio over two-agent profiles.

    Two-agent profiles suffice: collapsing a profile onto its extreme agents
    never lowers the ratio of a fixed lottery.
    """
    space = _space(spec, mode)
    axes = [_coarse_axis(lo, hi, cfg.coarse_step) for lo, hi in space.bounds]
    P, vals = _evaluate(spec, space, _grid(axes))
    coarse_best = float(np.max(vals))
    if math.isinf(coarse_best):
        i = int(np.argmax(vals))
        w = _witness(spec, space, P[i])
        return SearchResult(w.value, coarse_best, (w,))
    found = []
    for idx in _pick_candidates(P, vals, cfg.candidates, cfg.refine_radius):
        params, _ = _zoom(spec, space, P[idx], cfg)
        found.append((params, _witness(spec, space, params)))
    best = max(w.value for _, w in found)
    keep = [(p, w) for p, w in found if w.value >= best - cfg.tolerance]
    keep.sort(key=lambda pw: (-pw[1].value, tuple(pw[0])))
    witnesses = tuple(w for _, w in keep)
    return SearchResult(witnesses[0].value, coarse_best, witnesses)


def empirical_guarantees(
    spec: MechanismSpec, cfg: SearchConfig = SearchConfig()
) -> tuple[GuaranteePair, tuple[Witness, ...]]:
    """(consistency, robustness) by search, with the witness of each."""
    if not spec.uses_prediction:
        res = worst_case_ratio(spec, PredictionMode.adversarial(), cfg)
        return GuaranteePair(res.value, res.value), (res.witness, res.witness)
    cons = worst_case_ratio(spec, PredictionMode.accurate(), cfg)
    rob = worst_case_ratio(spec, PredictionMode.adversarial(), cfg)
    return GuaranteePair(cons.value, rob.value), (cons.witness, rob.witness)


def prediction_range_guarantees(
    spec: MechanismSpec, lo: float, hi: float, cfg: SearchConfig = SearchConfig()
) -> tuple[GuaranteePair, tuple[Witness, ...]]:
    """Worst cases over predictions restricted to ``[lo, hi]``."""
    cons = worst_case_ratio(spec, PredictionMode.accurate(lo, hi), cfg)
    rob = worst_case_ratio(spec, PredictionMode.adversarial(lo, hi), cfg)
    return GuaranteePair(cons.value, rob.value), (cons.witness, rob.witness)


def bias_guarantees(
    spec: MechanismSpec, c: float, cfg: SearchConfig = SearchConfig()
) -> tuple[GuaranteePair, tuple[Witness, ...]]:
    """Worst cases for the single prediction ``1/2 - c``."""
    y_hat = 0.5 - c
    return prediction_range_guarantees(spec, y_hat, y_hat, cfg)


def bam_regime(c: float, cfg: SearchConfig = SearchConfig()) -> tuple[float, float]:
    """Bias interval over which BAM's stated guarantee at ``c`` is a supremum.

    Below 1/4 the guarantee caps the whole low-bias regime; from 1/4 on it is
    the limit of nearby biases (needed at c = 1/2, where the prediction atom
    vanishes and only the limit reaches 5/2).
    """
    if c < 0.25:
        return 0.0, 0.25
    w = 10.0 * cfg.refine_step
    return max(0.25, c - w), min(0.5, c + w)


def bam_bias_guarantees(
    c: float, cfg: SearchConfig = SearchConfig()
) -> tuple[GuaranteePair, tuple[Witness, ...]]:
    c_lo, c_hi = bam_regime(c, cfg)
    return prediction_range_guarantees(MechanismSpec(Kind.BAM), 0.5 - c_hi, 0.5 - c_lo, cfg)


def empirical_error_curve(
    alpha: float, etas: Sequence[float], cfg: SearchConfig = SearchConfig()
) -> list[tuple[float, float]]:
    spec = MechanismSpec(Kind.ALPHA_BIM, alpha=alpha)
    return [
        (float(eta), worst_case_ratio(spec, PredictionMode.error_bounded(eta), cfg).value)
        for eta in etas
    ]


def n_agent_spot_check(
    spec: MechanismSpec, n: int = 3, step: float = 0.1, cfg: SearchConfig = SearchConfig()
) -> tuple[float, float]:
    """Largest ratio over n-agent grid profiles next to the two-agent worst case."""
    import itertools

    grid = np.round(np.arange(0.0, 1.0 + step / 2, step), 12)
    preds = list(grid) if spec.uses_prediction else [None]
    worst = 0.0
    for pts in itertools.combinations_with_replacement(grid, n):
        profile = LocationProfile(pts)
        for y_hat in preds:
            worst = max(worst, _scalar_value(spec, profile, y_hat))
    two = worst_case_ratio(spec, PredictionMode.adversarial(), cfg).value
    return worst, two


# --- parameter optimisation for the LRM family --------------------------------


@dataclass(frozen=True)
class LRMOptimum:
    alpha: float
    p: float
    ratio: float
    trace: tuple[tuple[int, float, float, float], ...]
    min_sampled: float

    @property
    def beats_constant_half(self) -> bool:
        return self.ratio < 2.0


def optimize_lrm(
    cfg: SearchConfig = SearchConfig(),
    alpha_bounds: tuple[float, float] = (0.0, 0.25),
    p_bounds: tuple[float, float] = (0.0, 0.5),
) -> LRMOptimum:
    """Minimise the LRM worst-case ratio over (alpha, p) by coarse grid and zoom."""
    a_lo, a_hi = alpha_bounds
    p_lo, p_hi = p_bounds
    if not (0.0 <= a_lo <= a_hi <= 0.5 and 0.0 <= p_lo <= p_hi <= 0.5):
        raise ValueError("bounds must lie within [0, 1/2]^2")
    objective = np.vectorize(analysis.lrm_objective, otypes=[float])

    def score(axes):
        P = _grid(axes)
        return P, objective(P[:, 0], P[:, 1])

    bounds = ((a_lo, a_hi), (p_lo, p_hi))
    P, vals = score([_coarse_axis(lo, hi, cfg.coarse_step) for lo, hi in bounds])
    lowest = float(np.min(vals))
    i = int(np.argmin(vals))
    center, best = P[i], float(vals[i])
    trace = [(0, float(center[0]), float(center[1]), best)]
    radius, step, level = cfg.refine_radius, cfg.coarse_step / 10.0, 1
    while True:
        step = max(step, cfg.refine_step)
        axes = [_local_axis(c, radius, step, lo, hi) for c, (lo, hi) in zip(center, bounds)]
        P, vals = score(axes)
        lowest = min(lowest, float(np.min(vals)))
        i = int(np.argmin(vals))
        if vals[i] <= best:
            center, best = P[i], float(vals[i])
        trace.append((level, float(center[0]), float(center[1]), best))
        if step <= cfg.refine_step:
            break
        radius, step, level = 2.0 * step, step / 10.0, level + 1
    return LRMOptimum(float(center[0]), float(center[1]), best, tuple(trace), lowest)


# --- property suites ----------------------------------------------------------

Mechanism = Union[MechanismSpec, Callable[[LocationProfile, Optional[float]], PlacementDistribution]]


def _call(mechanism: Mechanism, profile, y_hat):
    if isinstance(mechanism, MechanismSpec):
        return run(mechanism, profile, y_hat if mechanism.uses_prediction else None)
    return mechanism(profile, y_hat)


def _rng(seed: int, *key: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=key)))


@dataclass(frozen=True)
class SPViolation:
    profile: LocationProfile
    agent: int
    misreport: float
    prediction: Optional[float]
    gain: float


@dataclass(frozen=True)
class PropertyResult:
    passed: bool
    trials: int
    counterexample: Optional[object] = None
    detail: dict = field(default_factory=dict)


def _sp_gain(mechanism, profile, agent, misreport, y_hat) -> float:
    x_i = profile.positions[agent]
    truthful = _call(mechanism, profile, y_hat).expected_utility(x_i)
    deviated = _call(mechanism, profile.replace(agent, misreport), y_hat).expected_utility(x_i)
    return deviated - truthful


def strategyproofness_test(mechanism: Mechanism, trials: int, seed: int) -> PropertyResult:
    """Random (profile, agent, misreport) triples; fails on any profitable lie."""
    if trials < 1:
        raise ValueError("trials must be positive")
    rng = _rng(seed, 0)
    for t in range(trials):
        n = int(rng.integers(1, 9))
        profile = LocationProfile(rng.random(n))
        agent = int(rng.integers(0, n))
        misreport = float(rng.random())
        y_hat = float(rng.random())
        gain = _sp_gain(mechanism, profile, agent, misreport, y_hat)
        if gain > SP_TOL:
            return PropertyResult(
                False, t + 1, SPViolation(profile, agent, misreport, y_hat, gain)
            )
    return PropertyResult(True, trials)


def grid_sp_violation(
    mechanism: Mechanism,
    profile: LocationProfile,
    y_hat: Optional[float] = None,
    step: float = 0.01,
) -> Optional[SPViolation]:
    """First profitable misreport on a ``step`` grid, scanning agents in order."""
    grid = np.round(np.arange(0.0, 1.0 + step / 2, step), 12)
    for agent in range(profile.n):
        for misreport in grid:
            gain = _sp_gain(mechanism, profile, agent, float(misreport), y_hat)
            if gain > SP_TOL:
                return SPViolation(profile, agent, float(misreport), y_hat, gain)
    return None


def leftmost_agent_mechanism(profile: LocationProfile, y_hat=None) -> PlacementDistribution:
    """Strategyproof despite looking exploitable: nobody can pull the leftmost spot closer."""
    return PlacementDistribution.point(profile.lm)


def average_mechanism(profile: LocationProfile, y_hat=None) -> PlacementDistribution:
    """Not strategyproof: an agent exaggerates its position to drag the mean."""
    return PlacementDistribution.point(min(1.0, max(0.0, math.fsum(profile) / profile.n)))


def midpoint_mechanism(profile: LocationProfile, y_hat=None) -> PlacementDistribution:
    return midpoint(profile)


NEGATIVE_CONTROLS: dict[str, Mechanism] = {
    "average": average_mechanism,
    "midpoint": midpoint_mechanism,
}


def random_distribution(rng: np.random.Generator, max_atoms: int = 5) -> PlacementDistribution:
    k = int(rng.integers(1, max_atoms + 1))
    probs = rng.dirichlet(np.ones(k))
    probs[-1] = 1.0 - math.fsum(probs[:-1])
    return PlacementDistribution(zip(rng.random(k), np.clip(probs, 0.0, 1.0)))


def reduction_property_test(trials: int, seed: int) -> PropertyResult:
    """Collapsing a profile to its extremes never lowers a lottery's ratio."""
    if trials < 1:
        raise ValueError("trials must be positive")
    rng = _rng(seed, 1)
    worst_gap = -INF
    for t in range(trials):
        profile = LocationProfile(rng.random(int(rng.integers(1, 9))))
        dist = random_distribution(rng)
        full = approximation_ratio(dist, profile)
        two = approximation_ratio(dist, reduce_to_two_agents(profile))
        if math.isinf(full) and math.isinf(two):
            continue
        gap = full - two
        worst_gap = max(worst_gap, gap)
        if gap > 1e-12:
            return PropertyResult(False, t + 1, (profile, dist), {"gap": gap})
    return PropertyResult(True, trials, None, {"worst_gap": worst_gap})


def dominance_check(c_grid: Sequence[float]) -> PropertyResult:
    """BAM's robustness beats alpha-BIM's at equal consistency on ``[1/4, 1/2)``."""
    failures = []
    for c in c_grid:
        if not 0.25 <= c < 0.5:
            raise ValueError(f"c={c!r} outside [1/4, 1/2)")
        bam_rob = c + 2.0
        bim_rob = (2.0 - 4.0 * c * c) / (1.0 - 4.0 * c * c)
        if not bam_rob < bim_rob:
            failures.append((float(c), bam_rob, bim_rob))
    return PropertyResult(not failures, len(c_grid), failures[0] if failures else None)


def bam_frontier_robustness(gamma: float) -> float:
    """Lowest BAM robustness among its guarantees with consistency at most ``gamma``."""
    if gamma >= 1.75:
        return 2.25
    return analysis.bam_robustness_at_consistency(max(gamma, 1.0))


def balrm_dominance_check(c_grid: Sequence[float]) -> PropertyResult:
    """Every bias-aware LRM guarantee is weakly Pareto-dominated by a BAM guarantee."""
    failures = []
    for c in c_grid:
        g = analysis.balrm_guarantees(c)
        floor = bam_frontier_robustness(g.consistency)
        if g.robustness < floor - 1e-12:
            failures.append((float(c), g.consistency, g.robustness, floor))
    return PropertyResult(not failures, len(c_grid), failures[0] if failures else None)


# --- full verification ----------------------------------------------------------


@dataclass(frozen=True)
class VerificationReport:
    """Empirical versus closed-form guarantees for one mechanism and scope.

    ``bound`` is ``"tight"`` when the closed form is attained (two-sided
    check) and ``"upper"`` when it is only an upper bound (one-sided).
    """

    mechanism: MechanismSpec
    label: str
    empirical: GuaranteePair
    closed_form: GuaranteePair
    witnesses: tuple[Witness, ...]
    bound: str
    tolerance: float

    @property
    def passed(self) -> bool:
        return all(
            _within(e, c, self.tolerance, self.bound)
            for e, c in zip(self.empirical, self.closed_form)
        )


def _within(emp: float, closed: float, tol: float, bound: str) -> bool:
    if math.isinf(closed) or math.isinf(emp):
        return math.isinf(closed) and (math.isinf(emp) or bound == "upper")
    if bound == "upper":
        return emp <= closed + tol
    return abs(emp - closed) <= tol


@dataclass(frozen=True)
class Case:
    spec: MechanismSpec
    label: str
    closed_form: GuaranteePair
    bound: str = "tight"
    bias: Optional[float] = None
    regime: bool = False


def standard_cases() -> list[Case]:
    bim = [MechanismSpec(Kind.ALPHA_BIM, alpha=a) for a in (1.2, 1.5, 2.0)]
    birm = [MechanismSpec(Kind.ALPHA_BI_RANDOMIZED, alpha=a) for a in (1.2, 1.5, 2.0)]
    lrm_star = MechanismSpec.lrm_optimal()
    lrm_alt = MechanismSpec(Kind.LRM_CONSTANT, alpha=1.0 / 6.0, p=4.0 / 11.0)
    bam = MechanismSpec(Kind.BAM)
    balrm = MechanismSpec(Kind.BIAS_AWARE_LRM)
    r_star = analysis.LRM_OPTIMAL_RATIO
    cases = [
        Case(MechanismSpec(Kind.MIDPOINT), "midpoint", GuaranteePair(1.0, 1.0)),
        Case(MechanismSpec(Kind.CONSTANT_HALF), "half", GuaranteePair(2.0, 2.0)),
    ]
    cases += [Case(s, str(s), analysis.bim_guarantees(s.alpha)) for s in bim]
    cases += [
        Case(lrm_star, str(lrm_star), GuaranteePair(r_star, r_star)),
        Case(lrm_alt, str(lrm_alt), GuaranteePair(21.0 / 11.0, 21.0 / 11.0)),
        Case(bam, "bam", GuaranteePair(1.75, 2.5)),
    ]
    cases += [
        Case(bam, f"bam@c={c:g}", analysis.bam_guarantees(c), bias=c, regime=True)
        for c in (0.0, 0.1, 0.25, 0.3, 0.4, 0.5)
    ]
    cases += [Case(s, str(s), analysis.birm_guarantees(s.alpha), "upper") for s in birm]
    cases += [
        Case(balrm, f"balrm@c={c:g}", analysis.balrm_guarantees(c), "upper", bias=c)
        for c in (0.1, 0.3, 0.45)
    ]
    return cases


def run_case(case: Case, cfg: SearchConfig = SearchConfig()) -> VerificationReport:
    if case.bias is None:
        emp, wit = empirical_guarantees(case.spec, cfg)
    elif case.regime:
        emp, wit = bam_bias_guarantees(case.bias, cfg)
    else:
        emp, wit = bias_guarantees(case.spec, case.bias, cfg)
    return VerificationReport(
        case.spec, case.label, emp, case.closed_form, wit, case.bound, cfg.tolerance
    )


def thread_count() -> int:
    raw = os.environ.get("ENVYLINE_THREADS")
    if raw is None:
        return min(8, os.cpu_count() or 1)
    value = int(raw)
    if value < 1:
        raise ValueError("ENVYLINE_THREADS must be a positive integer")
    return value


def verify_all(
    cfg: SearchConfig = SearchConfig(), cases: Optional[Sequence[Case]] = None
) -> list[VerificationReport]:
    """Run every standard case; results keep the order of ``cases``."""
    cases = standard_cases() if cases is None else list(cases)
    if not cases:
        return []
    with ThreadPoolExecutor(max_workers=thread_count()) as pool:
        return list(pool.map(lambda c: run_case(c, cfg), cases))
