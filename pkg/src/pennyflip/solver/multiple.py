"""Games where P picks one of several operations.

Q wins iff some state v satisfies A_j v ~ A_k v (equal up to phase) for all of
P's operations; equivalently the operators A_1^dagger A_k share an eigenvector.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..errors import DomainError
from ..gamesim import StrategyPair
from ..qalg import EPS_UNIT, commutes, dagger, simultaneous_eigenvectors
from .families import flip_op, nonflip_op

ALL_COMMUTING = "all-commuting"
TRIVIAL_N = "flip-commuting-trivial-N"
NONTRIVIAL_N = "flip-commuting-nontrivial-N"
GENERAL = "general"

YES = "yes"
NO_IN_GENERAL = "no-in-general"
UNKNOWN = "unknown"

FLIP = "flip"
NONFLIP = "nonflip"

_ANGLE_TOL = 1e-9


@dataclass(frozen=True)
class MultiStrategyClass:
    kind: str
    s: int
    ell: int
    strategy_exists: str


def typed_matrix(kind: str, angle: float) -> np.ndarray:
    if kind == FLIP:
        return flip_op(angle)
    if kind == NONFLIP:
        return nonflip_op(angle)
    raise DomainError(f"operation type must be 'flip' or 'nonflip', got {kind!r}")


def _congruent(x: float, y: float, period: float) -> bool:
    r = math.remainder(x - y, period)
    return abs(r) < _ANGLE_TOL


def _all_congruent(angles: Sequence[float], period: float) -> bool:
    return all(_congruent(a, angles[0], period) for a in angles[1:])


def classify_multiple(ops: Sequence[tuple[str, float]]) -> MultiStrategyClass:
    """Classify P's typed operation set ``[("flip", alpha), ("nonflip", beta), ...]``.

    * every pair commutes -> a simultaneous eigenvector exists (yes);
    * the flips commute (alphas agree mod 2pi): the kind is trivial-N when every
      beta is in pi*Z, nontrivial-N otherwise. The verdict is yes when the
      non-flips coincide up to sign (betas agree mod 2pi; always so for s = l-1),
      because the game then reduces to a flip/non-flip pair; otherwise
      no-in-general;
    * otherwise unknown.
    """
    ops = list(ops)
    if not ops:
        raise DomainError("operation list is empty")
    mats = [typed_matrix(kind, angle) for kind, angle in ops]
    alphas = [a for kind, a in ops if kind == FLIP]
    betas = [b for kind, b in ops if kind == NONFLIP]
    s, ell = len(alphas), len(ops)

    if all(commutes(a, b) for i, a in enumerate(mats) for b in mats[i + 1 :]):
        return MultiStrategyClass(ALL_COMMUTING, s, ell, YES)
    if alphas and betas and _all_congruent(alphas, 2 * math.pi):
        trivial = all(_congruent(b, 0.0, math.pi) for b in betas)
        kind = TRIVIAL_N if trivial else NONTRIVIAL_N
        verdict = YES if _all_congruent(betas, 2 * math.pi) else NO_IN_GENERAL
        return MultiStrategyClass(kind, s, ell, verdict)
    return MultiStrategyClass(GENERAL, s, ell, UNKNOWN)


def relative_ops(ops: Sequence[np.ndarray]) -> list[np.ndarray]:
    """A_1^dagger A_k for k >= 2."""
    first = dagger(np.asarray(ops[0]))
    return [first @ np.asarray(op) for op in ops[1:]]


def restoring_state_exists(ops: Sequence[np.ndarray]) -> bool:
    """Exact existence test: the relative operators pairwise commute."""
    rel = relative_ops(ops)
    return all(commutes(a, b) for i, a in enumerate(rel) for b in rel[i + 1 :])


def restoring_strategy(ops: Sequence[np.ndarray], initial: np.ndarray | None = None) -> StrategyPair:
    """Move the initial state to a restoring state v, then undo.

    U1 maps the initial pure state to v. When all operations commute v is their
    common eigenvector and U2 = U1^dagger; otherwise U2 = U1^dagger A_1^dagger.
    """
    ops = [np.asarray(op, dtype=complex) for op in ops]
    if not ops:
        raise DomainError("operation list is empty")
    if initial is None:
        initial = np.array([1, 0], dtype=complex)
    initial = np.asarray(initial, dtype=complex)
    if abs(np.linalg.norm(initial) - 1.0) > EPS_UNIT:
        raise DomainError("initial state must be a unit vector")
    basis = np.column_stack([initial, [-np.conj(initial[1]), np.conj(initial[0])]])

    commuting = all(commutes(a, b) for i, a in enumerate(ops) for b in ops[i + 1 :])
    if commuting:
        v, w = simultaneous_eigenvectors(ops)
    else:
        v, w = simultaneous_eigenvectors(relative_ops(ops))
    target = np.column_stack([v, w])
    u1 = target @ dagger(basis)
    u2 = dagger(u1) if commuting else dagger(u1) @ dagger(ops[0])
    return StrategyPair(u1, u2)
