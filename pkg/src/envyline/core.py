"""Utilities, envy ratios and the optimal (midpoint) placement on the unit line.

Every ratio returned here is a plain ``float``; an unbounded ratio is
``math.inf`` and never raises.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

INF = math.inf

MASS_TOL = 1e-12


class DomainError(ValueError):
    """A location, prediction or probability fell outside its allowed range."""


def _check_unit(value: float, what: str) -> float:
    value = float(value)
    if not (0.0 <= value <= 1.0):
        raise DomainError(f"{what} must lie in [0, 1], got {value!r}")
    return value


def check_prediction(prediction: float) -> float:
    """Validate a predicted facility location and return it as a float."""
    return _check_unit(prediction, "prediction")


@dataclass(frozen=True)
class LocationProfile:
    """Reported agent locations, kept sorted ascending."""

    positions: tuple[float, ...]

    def __init__(self, positions: Iterable[float]):
        pts = tuple(sorted(_check_unit(p, "agent location") for p in positions))
        if not pts:
            raise DomainError("a location profile needs at least one agent")
        object.__setattr__(self, "positions", pts)

    @property
    def n(self) -> int:
        return len(self.positions)

    @property
    def lm(self) -> float:
        return self.positions[0]

    @property
    def rtm(self) -> float:
        return self.positions[-1]

    def reflect(self) -> "LocationProfile":
        return LocationProfile(1.0 - p for p in self.positions)

    def replace(self, index: int, location: float) -> "LocationProfile":
        """Profile with agent ``index`` (in sorted order) moved to ``location``."""
        pts = list(self.positions)
        pts[index] = location
        return LocationProfile(pts)

    def __iter__(self):
        return iter(self.positions)

    def __len__(self) -> int:
        return len(self.positions)


def _round_location(y: float) -> float:
    # merge key: 15 significant digits
    return float(f"{y:.15g}")


@dataclass(frozen=True)
class PlacementDistribution:
    """Finite-support distribution over facility locations.

    Atoms at equal locations are merged and zero-mass atoms are dropped, so
    two distributions that are equal as measures compare equal.
    """

    atoms: tuple[tuple[float, float], ...]

    def __init__(self, atoms: Iterable[tuple[float, float]]):
        merged: dict[float, float] = {}
        for loc, prob in atoms:
            loc = _round_location(_check_unit(loc, "facility location"))
            prob = float(prob)
            if prob < 0.0 or prob > 1.0 + MASS_TOL:
                raise DomainError(f"atom probability must lie in [0, 1], got {prob!r}")
            merged[loc] = merged.get(loc, 0.0) + prob
        total = math.fsum(merged.values())
        if abs(total - 1.0) > MASS_TOL:
            raise DomainError(f"probabilities sum to {total!r}, not 1")
        object.__setattr__(
            self, "atoms", tuple(sorted((loc, p) for loc, p in merged.items() if p > 0.0))
        )

    @classmethod
    def point(cls, y: float) -> "PlacementDistribution":
        return cls([(y, 1.0)])

    @property
    def locations(self) -> tuple[float, ...]:
        return tuple(loc for loc, _ in self.atoms)

    @property
    def probabilities(self) -> tuple[float, ...]:
        return tuple(p for _, p in self.atoms)

    @property
    def is_deterministic(self) -> bool:
        return len(self.atoms) == 1

    def reflect(self) -> "PlacementDistribution":
        return PlacementDistribution((1.0 - loc, p) for loc, p in self.atoms)

    def scaled(self, weight: float) -> list[tuple[float, float]]:
        """Atoms with every probability multiplied by ``weight`` (unnormalised)."""
        return [(loc, weight * p) for loc, p in self.atoms]

    def expected_utility(self, x: float) -> float:
        """Expected utility ``1 - E|y - x|`` of an agent located at ``x``."""
        x = _check_unit(x, "agent location")
        return 1.0 - math.fsum(p * abs(loc - x) for loc, p in self.atoms)

    def isclose(self, other: "PlacementDistribution", tol: float = 1e-9) -> bool:
        if len(self.atoms) != len(other.atoms):
            return False
        return all(
            abs(a - b) <= tol and abs(p - q) <= tol
            for (a, p), (b, q) in zip(self.atoms, other.atoms)
        )


@dataclass(frozen=True)
class Interval:
    """Compact source domain ``[lo, hi]`` that maps affinely onto ``[0, 1]``."""

    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo < self.hi:
            raise DomainError(f"interval needs lo < hi, got [{self.lo}, {self.hi}]")


def rescale(raw: Sequence[float], interval: Interval) -> LocationProfile:
    """Map raw positions in ``interval`` onto the unit line."""
    width = interval.hi - interval.lo
    out = []
    for r in raw:
        if not (interval.lo <= r <= interval.hi):
            raise DomainError(f"position {r!r} outside [{interval.lo}, {interval.hi}]")
        out.append(min(1.0, max(0.0, (r - interval.lo) / width)))
    return LocationProfile(out)


def utility(y: float, x: float) -> float:
    return 1.0 - abs(_check_unit(y, "facility location") - _check_unit(x, "agent location"))


def envy_ratio(y: float, profile: LocationProfile) -> float:
    """Best-off over worst-off utility when the facility sits at ``y``."""
    y = _check_unit(y, "facility location")
    if profile.lm == profile.rtm:
        return 1.0
    # extreme agents hold the min and max utilities
    u_hi = max(1.0 - abs(y - x) for x in profile.positions)
    u_lo = min(1.0 - abs(y - profile.lm), 1.0 - abs(y - profile.rtm))
    if u_lo <= 0.0:
        return INF
    return u_hi / u_lo


def expected_envy_ratio(dist: PlacementDistribution, profile: LocationProfile) -> float:
    terms = [p * envy_ratio(loc, profile) for loc, p in dist.atoms]
    if any(math.isinf(t) for t in terms):
        return INF
    return math.fsum(terms)


def optimal_location(profile: LocationProfile) -> float:
    return (profile.lm + profile.rtm) / 2.0


def optimal_envy_ratio(profile: LocationProfile) -> float:
    return envy_ratio(optimal_location(profile), profile)


def approximation_ratio(dist: PlacementDistribution, profile: LocationProfile) -> float:
    """Expected envy ratio relative to the midpoint optimum on ``profile``."""
    return expected_envy_ratio(dist, profile) / optimal_envy_ratio(profile)


def reduce_to_two_agents(profile: LocationProfile) -> LocationProfile:
    return LocationProfile((profile.lm, profile.rtm))


def sample(dist: PlacementDistribution, seed: int, size: int = 1) -> np.ndarray:
    """Draw facility locations from ``dist`` with a Philox stream seeded by ``seed``."""
    rng = np.random.Generator(np.random.Philox(seed))
    return rng.choice(np.asarray(dist.locations), size=size, p=np.asarray(dist.probabilities))
