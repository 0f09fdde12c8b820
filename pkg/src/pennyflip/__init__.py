"""Quantum penny-flip games: strategy synthesis and verification for player Q."""

from .errors import (
    DegenerateCompositionError,
    DomainError,
    ParameterInconsistencyError,
    SingularProblemError,
)
from .gamesim import GameSpec, StrategyPair, VerificationReport, verify_strategy

__version__ = "0.1.0"

__all__ = [
    "DegenerateCompositionError",
    "DomainError",
    "GameSpec",
    "ParameterInconsistencyError",
    "SingularProblemError",
    "StrategyPair",
    "VerificationReport",
    "verify_strategy",
]
