"""The seven facility-location mechanisms, each returning a PlacementDistribution.

All mechanisms except the midpoint baseline ignore the reported profile; the
argument is kept so every mechanism shares one calling convention.
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass
from typing import Optional

from .core import (
    LocationProfile,
    PlacementDistribution,
    check_prediction,
    optimal_location,
)

LRM_ALPHA = math.sqrt(5.0) / 2.0 - 1.0
LRM_P = 2.0 / 5.0


class ParameterError(ValueError):
    """A mechanism parameter is outside its admissible range."""


class UsageError(ValueError):
    """Prediction supplied to a kind that takes none (or missing), or a malformed spec string."""


class Kind(str, enum.Enum):
    MIDPOINT = "midpoint"
    CONSTANT_HALF = "half"
    ALPHA_BIM = "bim"
    LRM_CONSTANT = "lrm"
    BAM = "bam"
    ALPHA_BI_RANDOMIZED = "birm"
    BIAS_AWARE_LRM = "balrm"


_PREDICTION_KINDS = {Kind.ALPHA_BIM, Kind.BAM, Kind.ALPHA_BI_RANDOMIZED, Kind.BIAS_AWARE_LRM}


def _fmt(v: float) -> str:
    return f"{v:.9g}"


@dataclass(frozen=True)
class MechanismSpec:
    """Mechanism identity plus its parameters, validated on construction.

    The canonical text form (``str(spec)``) is what the CLI accepts and what
    reports print, e.g. ``bim:alpha=1.5`` or ``lrm:alpha=0.118033989,p=0.4``.
    """

    kind: Kind
    alpha: Optional[float] = None
    p: Optional[float] = None

    def __post_init__(self):
        kind = Kind(self.kind)
        object.__setattr__(self, "kind", kind)
        if kind is Kind.ALPHA_BIM:
            self._need_alpha(1.0, 2.0, closed_low=True)
        elif kind is Kind.ALPHA_BI_RANDOMIZED:
            self._need_alpha(1.0, 2.0, closed_low=False)
        elif kind is Kind.LRM_CONSTANT:
            self._need_alpha(0.0, 0.5, closed_low=True)
            if self.p is None or not (0.0 <= self.p <= 0.5):
                raise ParameterError(f"lrm needs p in [0, 1/2], got {self.p!r}")
            object.__setattr__(self, "p", float(self.p))
        else:
            if self.alpha is not None or self.p is not None:
                raise ParameterError(f"{kind.value} takes no parameters")
        if kind is not Kind.LRM_CONSTANT and self.p is not None:
            raise ParameterError(f"{kind.value} takes no p parameter")

    def _need_alpha(self, lo: float, hi: float, closed_low: bool) -> None:
        a = self.alpha
        ok = a is not None and (lo <= a if closed_low else lo < a) and a <= hi
        if not ok:
            bracket = "[" if closed_low else "("
            raise ParameterError(
                f"{self.kind.value} needs alpha in {bracket}{lo:g}, {hi:g}], got {a!r}"
            )
        object.__setattr__(self, "alpha", float(a))

    @property
    def uses_prediction(self) -> bool:
        return self.kind in _PREDICTION_KINDS

    def __str__(self) -> str:
        if self.kind is Kind.LRM_CONSTANT:
            return f"lrm:alpha={_fmt(self.alpha)},p={_fmt(self.p)}"
        if self.alpha is not None:
            return f"{self.kind.value}:alpha={_fmt(self.alpha)}"
        return self.kind.value

    @classmethod
    def parse(cls, text: str) -> "MechanismSpec":
        """Inverse of ``str``; raises UsageError on malformed input."""
        m = re.fullmatch(r"\s*([a-z]+)\s*(?::(.*))?", text)
        if not m:
            raise UsageError(f"cannot parse mechanism spec {text!r}")
        name, rest = m.group(1), m.group(2)
        try:
            kind = Kind(name)
        except ValueError:
            raise UsageError(f"unknown mechanism {name!r}") from None
        params: dict[str, float] = {}
        if rest:
            for item in rest.split(","):
                key, sep, value = item.partition("=")
                key = key.strip()
                if not sep or key not in ("alpha", "p") or key in params:
                    raise UsageError(f"bad parameter {item!r} in {text!r}")
                try:
                    params[key] = float(value)
                except ValueError:
                    raise UsageError(f"bad number {value!r} in {text!r}") from None
        try:
            return cls(kind, **params)
        except ParameterError as exc:
            raise UsageError(str(exc)) from None

    @classmethod
    def lrm_optimal(cls) -> "MechanismSpec":
        return cls(Kind.LRM_CONSTANT, alpha=LRM_ALPHA, p=LRM_P)


def midpoint(profile: LocationProfile) -> PlacementDistribution:
    return PlacementDistribution.point(optimal_location(profile))


def constant_half(profile: LocationProfile) -> PlacementDistribution:
    return PlacementDistribution.point(0.5)


def _check_alpha(alpha: float, lo: float, hi: float, closed_low: bool = True) -> float:
    alpha = float(alpha)
    if not ((lo <= alpha if closed_low else lo < alpha) and alpha <= hi):
        raise ParameterError(f"alpha={alpha!r} out of range")
    return alpha


def _bounding_interval(alpha: float) -> tuple[float, float]:
    return 1.0 - 1.0 / alpha, 1.0 / alpha


def alpha_bim(profile: LocationProfile, prediction: float, alpha: float) -> PlacementDistribution:
    """Follow the prediction, clamped into ``[1 - 1/alpha, 1/alpha]``."""
    alpha = _check_alpha(alpha, 1.0, 2.0)
    y_hat = check_prediction(prediction)
    lo, hi = _bounding_interval(alpha)
    if lo <= y_hat <= hi:
        return PlacementDistribution.point(y_hat)
    if y_hat > hi:
        return PlacementDistribution.point(hi)
    return PlacementDistribution.point(lo)


def lrm_constant(profile: LocationProfile, alpha: float, p: float) -> PlacementDistribution:
    """Left/Middle/Right lottery over ``1/2 - alpha``, ``1/2``, ``1/2 + alpha``."""
    alpha = _check_alpha(alpha, 0.0, 0.5)
    p = float(p)
    if not 0.0 <= p <= 0.5:
        raise ParameterError(f"p={p!r} out of [0, 1/2]")
    return PlacementDistribution([(0.5 - alpha, p), (0.5, 1.0 - 2.0 * p), (0.5 + alpha, p)])


def _optimal_lrm(profile: LocationProfile) -> PlacementDistribution:
    return lrm_constant(profile, LRM_ALPHA, LRM_P)


def bam(profile: LocationProfile, prediction: float) -> PlacementDistribution:
    """Put the facility on the prediction with probability ``1/2 - |y_hat - 1/2|``, else at 1/2."""
    y_hat = check_prediction(prediction)
    p = 0.5 - abs(y_hat - 0.5)
    return PlacementDistribution([(y_hat, p), (0.5, 1.0 - p)])


def alpha_bi_randomized(
    profile: LocationProfile, prediction: float, alpha: float
) -> PlacementDistribution:
    alpha = _check_alpha(alpha, 1.0, 2.0, closed_low=False)
    y_hat = check_prediction(prediction)
    lo, hi = _bounding_interval(alpha)
    if lo <= y_hat <= hi:
        return PlacementDistribution.point(y_hat)
    return _optimal_lrm(profile)


def bias_aware_lrm(profile: LocationProfile, prediction: float) -> PlacementDistribution:
    y_hat = check_prediction(prediction)
    p = 0.5 - abs(y_hat - 0.5)
    return PlacementDistribution([(y_hat, p)] + _optimal_lrm(profile).scaled(1.0 - p))


def run(
    spec: MechanismSpec, profile: LocationProfile, prediction: Optional[float] = None
) -> PlacementDistribution:
    """Dispatch on ``spec``; a prediction must be given exactly when the kind uses one."""
    if spec.uses_prediction and prediction is None:
        raise UsageError(f"{spec} needs a prediction")
    if not spec.uses_prediction and prediction is not None:
        raise UsageError(f"{spec} takes no prediction")
    kind = spec.kind
    if kind is Kind.MIDPOINT:
        return midpoint(profile)
    if kind is Kind.CONSTANT_HALF:
        return constant_half(profile)
    if kind is Kind.ALPHA_BIM:
        return alpha_bim(profile, prediction, spec.alpha)
    if kind is Kind.LRM_CONSTANT:
        return lrm_constant(profile, spec.alpha, spec.p)
    if kind is Kind.BAM:
        return bam(profile, prediction)
    if kind is Kind.ALPHA_BI_RANDOMIZED:
        return alpha_bi_randomized(profile, prediction, spec.alpha)
    return bias_aware_lrm(profile, prediction)
