"""Envy-ratio facility location on the unit line, with and without predictions."""

from .analysis import GuaranteePair, RangeError
from .core import (
    INF,
    DomainError,
    Interval,
    LocationProfile,
    PlacementDistribution,
    approximation_ratio,
    envy_ratio,
    expected_envy_ratio,
    optimal_envy_ratio,
    optimal_location,
    reduce_to_two_agents,
    rescale,
    utility,
)
from .mechanisms import Kind, MechanismSpec, ParameterError, UsageError, run

__version__ = "0.1.0"

__all__ = [
    "INF",
    "DomainError",
    "GuaranteePair",
    "Interval",
    "Kind",
    "LocationProfile",
    "MechanismSpec",
    "ParameterError",
    "PlacementDistribution",
    "RangeError",
    "UsageError",
    "approximation_ratio",
    "envy_ratio",
    "expected_envy_ratio",
    "optimal_envy_ratio",
    "optimal_location",
    "reduce_to_two_agents",
    "rescale",
    "run",
    "utility",
]
