"""Closed-form consistency/robustness guarantees for every mechanism.

Formulas take plain floats and return floats (``math.inf`` for unbounded
values).  Where a formula is only an upper bound rather than a tight value,
the docstring says so.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.optimize import brentq

from .core import INF

SQRT5 = math.sqrt(5.0)
GOLDEN = (1.0 + SQRT5) / 2.0
LRM_OPTIMAL_RATIO = 1.0 + 2.0 / SQRT5


class RangeError(ValueError):
    """A formula parameter is outside the range the formula covers."""


def _require(value: float, lo: float, hi: float, name: str, open_low: bool = False) -> float:
    value = float(value)
    low_ok = lo < value if open_low else lo <= value
    if not (low_ok and value <= hi):
        bracket = "(" if open_low else "["
        raise RangeError(f"{name} must lie in {bracket}{lo:g}, {hi:g}], got {value!r}")
    return value


@dataclass(frozen=True)
class GuaranteePair:
    consistency: float
    robustness: float

    def __iter__(self):
        yield self.consistency
        yield self.robustness


def _safe_div(num: float, den: float) -> float:
    if den == 0.0:
        return INF if num > 0 else math.nan
    return num / den


# --- deterministic: alpha-BIM -------------------------------------------------


def bim_guarantees(alpha: float) -> GuaranteePair:
    alpha = _require(alpha, 1.0, 2.0, "alpha")
    return GuaranteePair(alpha, _safe_div(alpha, alpha - 1.0))


def bim_frontier_identity(alpha: float) -> float:
    """``1/consistency + 1/robustness``; equals 1 along the deterministic frontier."""
    alpha = _require(alpha, 1.0, 2.0, "alpha", open_low=True)
    g = bim_guarantees(alpha)
    return 1.0 / g.consistency + 1.0 / g.robustness


def bim_robustness_at_consistency(gamma: float) -> float:
    """Best deterministic robustness at consistency ``gamma`` (the frontier curve)."""
    return _safe_div(gamma, gamma - 1.0)


@dataclass(frozen=True)
class CurvePiece:
    """One piece of the error curve, valid on ``(lo, hi]`` (``[0, hi]`` for the first)."""

    kind: str  # "constant" | "unclamped" | "clamped"
    lo: float
    hi: float


@dataclass(frozen=True)
class ErrorCurve:
    """Worst-case ratio of alpha-BIM as a function of the prediction error bound."""

    alpha: float
    pieces: tuple[CurvePiece, ...]
    terminal: float

    @property
    def breakpoints(self) -> tuple[float, ...]:
        return tuple(piece.hi for piece in self.pieces)

    def piece_value(self, piece: CurvePiece, eta: float) -> float:
        a = self.alpha
        if piece.kind == "constant":
            return a
        if piece.kind == "unclamped":
            return 1.0 + _safe_div(4.0 * eta, 1.0 - 2.0 * eta)
        if piece.kind == "clamped":
            return 1.0 + 2.0 * a * eta / (a - 1.0)
        raise ValueError(piece.kind)

    def __call__(self, eta: float) -> float:
        return evaluate(self, eta)


def bim_error_curve(alpha: float) -> ErrorCurve:
    """Piecewise worst-case ratio of alpha-BIM under prediction error at most eta.

    Below the golden ratio the curve passes through an "unclamped" piece where
    the facility still follows the prediction; above it the clamped piece
    takes over directly from the constant one.  For ``alpha = 1`` the clamped
    piece is singular and the curve diverges at ``eta = 1/2``.
    """
    a = _require(alpha, 1.0, 2.0, "alpha")
    if a == 1.0:
        pieces = [CurvePiece("constant", 0.0, 0.0), CurvePiece("unclamped", 0.0, 0.5)]
        return ErrorCurve(a, tuple(pieces), INF)
    if a <= GOLDEN:
        bounds = [
            ("constant", (a - 1.0) / (2.0 * (a + 1.0))),
            ("unclamped", 1.0 / a - 0.5),
            ("clamped", 1.0 / (2.0 * a)),
        ]
    else:
        bounds = [
            ("constant", (a - 1.0) ** 2 / (2.0 * a)),
            ("clamped", 1.0 / (2.0 * a)),
        ]
    pieces: list[CurvePiece] = []
    lo = 0.0
    for kind, hi in bounds:
        # pieces collapse to a point at alpha = golden ratio and alpha = 2
        if pieces and hi <= lo + 1e-15:
            continue
        pieces.append(CurvePiece(kind, lo, hi))
        lo = hi
    return ErrorCurve(a, tuple(pieces), a / (a - 1.0))


def evaluate(curve: ErrorCurve, eta: float) -> float:
    eta = float(eta)
    if eta < 0.0:
        raise RangeError(f"eta must be non-negative, got {eta!r}")
    for piece in curve.pieces:
        if eta <= piece.hi:
            return curve.piece_value(piece, eta)
    return curve.terminal


# --- randomized without predictions: (alpha, p)-LRM ---------------------------


def lrm_ratio_half_profile(alpha: float, p: float) -> float:
    """Ratio of the (alpha, p)-LRM lottery on the profile (0, 1/2); valid for alpha < 1/2."""
    alpha = _require(alpha, 0.0, 0.5, "alpha")
    p = _require(p, 0.0, 0.5, "p")
    side = p * _safe_div(4.0 - 4.0 * alpha, 1.0 - 4.0 * alpha**2) if p > 0 else 0.0
    return 2.0 * (1.0 - 2.0 * p) + side


def lrm_instance_ratios(alpha: float, p: float) -> tuple[float, float]:
    """Ratios on the two worst profiles ``(0, 1/2)`` and ``(0, 1/2 + alpha)``."""
    alpha = _require(alpha, 0.0, 0.25, "alpha")
    p = _require(p, 0.0, 0.5, "p")
    rho_half = lrm_ratio_half_profile(alpha, p)
    if alpha <= 1.0 / 6.0:
        left = p * (2.0 - 4.0 * alpha) / (1.0 + 2.0 * alpha)
    else:
        # the left atom now favours agent 1
        left = p * (1.0 + 2.0 * alpha) / (2.0 - 4.0 * alpha)
    rho_shift = left + (1.0 - 2.0 * p) * (2.0 - 2.0 * alpha) + 2.0 * p / (1.0 - 2.0 * alpha)
    return rho_half, rho_shift


def lrm_objective(alpha: float, p: float) -> float:
    """Worst-case ratio of the (alpha, p)-LRM lottery as a function of its parameters.

    Exact for ``alpha <= 1/4``.  Beyond that only the (0, 1/2) profile is
    evaluated, which is a lower bound of at least 2.
    """
    if alpha <= 0.25:
        return max(lrm_instance_ratios(alpha, p))
    return lrm_ratio_half_profile(alpha, p)


def lrm_high_alpha_bound(alpha: float, p: float = 0.5) -> float:
    """Ratio on the (0, 1/2) profile for ``alpha`` in (1/4, 1/2]; at least 2 for every p."""
    alpha = _require(alpha, 0.25, 0.5, "alpha", open_low=True)
    return lrm_ratio_half_profile(alpha, p)


def lrm_high_alpha_min_over_p(alpha: float) -> float:
    """Minimum over p of the (0, 1/2) ratio; linear in p, so an endpoint wins."""
    alpha = _require(alpha, 0.25, 0.5, "alpha", open_low=True)
    return min(lrm_ratio_half_profile(alpha, 0.0), lrm_ratio_half_profile(alpha, 0.5))


# --- randomized with predictions ----------------------------------------------


def bam_guarantees(c: float) -> GuaranteePair:
    """Guarantee of BAM for predictions of bias ``c = |y_hat - 1/2|``.

    For ``c < 1/4`` the pair (7/4, 9/4) bounds the whole low-bias regime; at
    ``c = 1/2`` the robustness 5/2 is approached as c tends to 1/2 but not
    attained (the prediction atom has zero mass there).
    """
    c = _require(c, 0.0, 0.5, "c")
    if c < 0.25:
        return GuaranteePair(7.0 / 4.0, 9.0 / 4.0)
    return GuaranteePair(-4.0 * c * c + 2.0, c + 2.0)


def bam_prediction_ratios(c: float) -> GuaranteePair:
    """Exact worst-case ratios of BAM for a single prediction of bias ``c``."""
    c = _require(c, 0.0, 0.5, "c")
    consistency = 1.0 + 2.0 * c + 4.0 * c * c if c < 0.25 else 2.0 - 4.0 * c * c
    robustness = 2.0 if c == 0.5 else 2.0 + c
    return GuaranteePair(consistency, robustness)


def bam_robustness_at_consistency(gamma: float) -> float:
    """Robustness along BAM's curve at consistency ``gamma`` in [1, 7/4]."""
    gamma = _require(gamma, 1.0, 1.75, "gamma")
    return 2.0 + math.sqrt((2.0 - gamma) / 4.0)


def birm_guarantees(alpha: float) -> GuaranteePair:
    """Upper bounds for the alpha-bounding-interval randomized mechanism."""
    alpha = _require(alpha, 1.0, 2.0, "alpha", open_low=True)
    t = 1.0 - 1.0 / alpha
    consistency = min(
        1.0 + (12.0 + 4.0 * SQRT5) / 5.0 * t,
        (3.0 + 2.0 * SQRT5) / 5.0 + 8.0 / 5.0 * t,
        LRM_OPTIMAL_RATIO,
    )
    return GuaranteePair(consistency, alpha / (alpha - 1.0))


BALRM_BREAK = (SQRT5 - 1.0) / 4.0


def balrm_guarantees(c: float) -> GuaranteePair:
    """Upper bounds for the bias-aware LRM mechanism at prediction bias ``c``.

    The c <= 1/4 pair is a regime-wide cap, so the consistency drops at
    c = 1/4 rather than continuing smoothly.
    """
    c = _require(c, 0.0, 0.5, "c")
    if c <= 0.25:
        return GuaranteePair((23.0 + 9.0 * SQRT5) / 20.0, 0.5 + 4.0 / SQRT5)
    robustness = (4.0 * SQRT5 * c + 7.0 * SQRT5 + 5.0) / 10.0
    if c <= BALRM_BREAK:
        consistency = (-8.0 * c * c + 2.0 * (SQRT5 - 1.0) * c + SQRT5 + 6.0) / 5.0
    else:
        consistency = -(4.0 * (3.0 + SQRT5) / 5.0) * c * c + (SQRT5 + 8.0) / 5.0
    return GuaranteePair(consistency, robustness)


# --- lower bound for every randomized strategyproof mechanism -----------------

_LB_LEFT, _LB_RIGHT = 0.29, 0.71


def _p2_coefficient(delta: float) -> float:
    return (2.0 * delta - 0.13) / (_LB_RIGHT - delta) - (15.0 / 14.0) * (0.29 - delta) / (
        _LB_RIGHT - delta
    )


def lower_bound_certificate() -> tuple[float, float]:
    """Interval half-width that zeroes the p2 term, and the resulting lower bound.

    Root of ``14(2d - 0.13) = 15(0.29 - d)`` on the profile (0, 0.71) derived
    from (0.29, 0.71); the bound is ``1 + (15/14)(0.21 - d)/(0.71 - d)``.
    """
    delta = brentq(lambda d: 14.0 * (2.0 * d - 0.13) - 15.0 * (0.29 - d), 0.0, 0.29, xtol=1e-15)
    bound = 1.0 + (15.0 / 14.0) * (0.21 - delta) / (_LB_RIGHT - delta)
    return delta, bound


def lower_bound_p2_coefficient(delta: float) -> float:
    return _p2_coefficient(delta)
