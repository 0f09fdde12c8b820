"""The classical penny-flip game: payoff table, expected payoff and Nash checks.

P moves once (N or F); Q moves twice (NN, NF, FN, FF). The coin starts heads and
Q wins iff it ends heads, i.e. iff the total number of flips is even.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .qalg import EPS_UNIT

ACTIONS_P = ("N", "F")
ACTIONS_Q = ("NN", "NF", "FN", "FF")
DEFAULT_DEVIATIONS = 101


def _check_probs(values, name: str) -> None:
    if any(not math.isfinite(v) or v < -EPS_UNIT for v in values):
        raise DomainError(f"{name}: probabilities must be finite and non-negative")
    if abs(sum(values) - 1.0) > EPS_UNIT:
        raise DomainError(f"{name}: probabilities must sum to 1, got {sum(values)!r}")


@dataclass(frozen=True)
class MixedStrategyP:
    p_N: float
    p_F: float

    def __post_init__(self):
        _check_probs((self.p_N, self.p_F), "MixedStrategyP")

    @classmethod
    def from_pn(cls, p_n: float) -> MixedStrategyP:
        return cls(p_n, 1.0 - p_n)

    def as_array(self) -> np.ndarray:
        return np.array([self.p_N, self.p_F])


@dataclass(frozen=True)
class MixedStrategyQ:
    q_NN: float
    q_NF: float
    q_FN: float
    q_FF: float

    def __post_init__(self):
        _check_probs((self.q_NN, self.q_NF, self.q_FN, self.q_FF), "MixedStrategyQ")

    def as_array(self) -> np.ndarray:
        return np.array([self.q_NN, self.q_NF, self.q_FN, self.q_FF])


@dataclass(frozen=True, eq=False)
class PayoffMatrix:
    """``entries[i, j] = (payoff_P, payoff_Q)`` for P action i and Q action j."""

    entries: np.ndarray

    def __post_init__(self):
        entries = np.asarray(self.entries)
        if entries.shape != (2, 4, 2):
            raise DomainError(f"payoff entries must have shape (2, 4, 2), got {entries.shape}")
        object.__setattr__(self, "entries", entries)

    def cell(self, p_action: str, q_action: str) -> tuple[int, int]:
        i, j = ACTIONS_P.index(p_action), ACTIONS_Q.index(q_action)
        return int(self.entries[i, j, 0]), int(self.entries[i, j, 1])

    @property
    def payoff_p(self) -> np.ndarray:
        return self.entries[:, :, 0]

    @property
    def payoff_q(self) -> np.ndarray:
        return self.entries[:, :, 1]

    def is_zero_sum(self) -> bool:
        return bool(np.all(self.payoff_p + self.payoff_q == 0))


def canonical_payoff_matrix() -> PayoffMatrix:
    entries = np.zeros((2, 4, 2), dtype=int)
    for i, a in enumerate(ACTIONS_P):
        for j, b in enumerate(ACTIONS_Q):
            flips = (a + b).count("F")
            q_wins = flips % 2 == 0
            entries[i, j] = (-1, 1) if q_wins else (1, -1)
    return PayoffMatrix(entries)


def expected_payoff(p: MixedStrategyP, q: MixedStrategyQ) -> float:
    """u_P = (1 - 2 p_N) [1 - 2 (q_NF + q_FN)]; u_Q = -u_P."""
    return (1.0 - 2.0 * p.p_N) * (1.0 - 2.0 * (q.q_NF + q.q_FN))


def matrix_expectation(p: MixedStrategyP, q: MixedStrategyQ, matrix: PayoffMatrix | None = None) -> tuple[float, float]:
    """(u_P, u_Q) as the weighted sum over all eight cells of the table."""
    matrix = matrix or canonical_payoff_matrix()
    weights = np.outer(p.as_array(), q.as_array())
    return float(np.sum(weights * matrix.payoff_p)), float(np.sum(weights * matrix.payoff_q))


def _q_deviations(n: int) -> list[MixedStrategyQ]:
    # simplex lattice with at most n points; vertices are always included
    k = 1
    while math.comb(k + 4, 3) <= n:
        k += 1
    out = []
    for bars in itertools.combinations(range(k + 3), 3):
        prev, parts = -1, []
        for b in bars:
            parts.append(b - prev - 1)
            prev = b
        parts.append(k + 2 - prev)
        out.append(MixedStrategyQ(*(x / k for x in parts)))
    return out


def is_nash_equilibrium(
    p: MixedStrategyP,
    q: MixedStrategyQ,
    n_deviations: int = DEFAULT_DEVIATIONS,
    matrix: PayoffMatrix | None = None,
) -> bool:
    """True iff no sampled unilateral deviation gains more than EPS_UNIT.

    Each player's deviation set contains all of that player's pure strategies.
    """
    matrix = matrix or canonical_payoff_matrix()
    u_p, u_q = matrix_expectation(p, q, matrix)
    for p_n in np.linspace(0.0, 1.0, max(n_deviations, 2)):
        if matrix_expectation(MixedStrategyP.from_pn(p_n), q, matrix)[0] > u_p + EPS_UNIT:
            return False
    for q_dev in _q_deviations(n_deviations):
        if matrix_expectation(p, q_dev, matrix)[1] > u_q + EPS_UNIT:
            return False
    return True


def pure_equilibria(matrix: PayoffMatrix | None = None) -> list[tuple[str, str]]:
    """All pure profiles from which neither player gains by a pure deviation."""
    matrix = matrix or canonical_payoff_matrix()
    up, uq = matrix.payoff_p, matrix.payoff_q
    found = []
    for i, j in itertools.product(range(2), range(4)):
        if up[i, j] >= up[:, j].max() and uq[i, j] >= uq[i, :].max():
            found.append((ACTIONS_P[i], ACTIONS_Q[j]))
    return found
