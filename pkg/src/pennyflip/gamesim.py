"""Three-move game evolution on density matrices, payoffs and strategy verification.

The flow is ``rho0 --Q: u1--> rho1 --P: A_k--> rho2 --Q: u2--> rho3`` where the
adversary applies ``A_k`` with probability ``w_k``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DomainError
from .qalg import EPS_UNIT, SIGMA1, SIGMA2, SIGMA3, as_unitary, dagger

EPS_WIN = 1e-9
DEFAULT_GRID = 11

KET0 = np.array([1, 0], dtype=complex)
KET1 = np.array([0, 1], dtype=complex)


def pure_density(psi: Sequence[complex]) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex).reshape(2)
    norm = np.linalg.norm(psi)
    if abs(norm - 1.0) > EPS_UNIT:
        raise DomainError(f"state vector must have unit norm, got {norm!r}")
    return np.outer(psi, np.conj(psi))


HEADS = pure_density(KET0)
TAILS = pure_density(KET1)


def check_density(rho, tol: float = EPS_UNIT) -> np.ndarray:
    """Validate Hermiticity, unit trace and positivity; return a complex copy."""
    rho = np.array(rho, dtype=complex)
    if rho.shape != (2, 2) or not np.all(np.isfinite(rho)):
        raise DomainError("density matrix must be a finite 2x2 array")
    if np.max(np.abs(rho - dagger(rho))) > tol:
        raise DomainError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1.0) > tol:
        raise DomainError(f"density matrix trace is {np.trace(rho).real!r}, not 1")
    if np.min(np.linalg.eigvalsh(0.5 * (rho + dagger(rho)))) < -tol:
        raise DomainError("density matrix is not positive semidefinite")
    return rho


def purity(rho: np.ndarray) -> float:
    return float(np.trace(rho @ rho).real)


def is_pure(rho: np.ndarray, tol: float = EPS_UNIT) -> bool:
    return abs(purity(rho) - 1.0) < tol


@dataclass(frozen=True, eq=False)
class StrategyPair:
    """Q's first and second operations."""

    u1: np.ndarray
    u2: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "u1", as_unitary(self.u1))
        object.__setattr__(self, "u2", as_unitary(self.u2))


@dataclass(frozen=True, eq=False)
class GameSpec:
    """One game instance: initial coin state and P's operations with their weights."""

    initial: np.ndarray
    ops: tuple
    weights: tuple
    label: str = ""
    op_names: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "initial", check_density(self.initial))
        ops = tuple(as_unitary(op) for op in self.ops)
        if not ops:
            raise DomainError("the adversary needs at least one operation")
        weights = tuple(float(w) for w in self.weights)
        _check_weights(weights, len(ops))
        object.__setattr__(self, "ops", ops)
        object.__setattr__(self, "weights", weights)
        names = tuple(self.op_names) or tuple(f"op{k}" for k in range(len(ops)))
        if len(names) != len(ops):
            raise DomainError("op_names must match the number of operations")
        object.__setattr__(self, "op_names", names)

    @classmethod
    def uniform(cls, ops, initial=HEADS, label: str = "", op_names=()) -> GameSpec:
        ops = tuple(ops)
        return cls(initial, ops, (1.0 / len(ops),) * len(ops), label, tuple(op_names))

    @property
    def n_ops(self) -> int:
        return len(self.ops)


def _check_weights(weights: Sequence[float], n: int) -> None:
    if len(weights) != n:
        raise DomainError(f"expected {n} weights, got {len(weights)}")
    if any(not math.isfinite(w) or w < 0 for w in weights):
        raise DomainError("weights must be finite and non-negative")
    if abs(sum(weights) - 1.0) > EPS_UNIT:
        raise DomainError(f"weights must sum to 1, got {sum(weights)!r}")


def _conj(u: np.ndarray, rho: np.ndarray) -> np.ndarray:
    return u @ rho @ dagger(u)


def evolve_branch(spec: GameSpec, s: StrategyPair, branch: int) -> np.ndarray:
    if not 0 <= branch < spec.n_ops:
        raise IndexError(f"branch {branch} out of range for {spec.n_ops} operations")
    total = s.u2 @ spec.ops[branch] @ s.u1
    return _conj(total, spec.initial)


def evolve_mixed(spec: GameSpec, s: StrategyPair, weights: Sequence[float] | None = None) -> np.ndarray:
    weights = spec.weights if weights is None else tuple(float(w) for w in weights)
    _check_weights(weights, spec.n_ops)
    rho = np.zeros((2, 2), dtype=complex)
    for k, w in enumerate(weights):
        rho += w * evolve_branch(spec, s, k)
    return rho


def fidelity(a: np.ndarray, b: np.ndarray) -> float:
    """tr(a b) for a pure reference state ``b``."""
    if not is_pure(b):
        raise DomainError("reference state must be pure (rank 1)")
    return float(np.trace(a @ b).real)


def quantum_payoff(final: np.ndarray, initial: np.ndarray) -> tuple[float, float]:
    """Return (payoff_P, payoff_Q) with payoff_P = 1 - 2 * fidelity."""
    payoff_p = 1.0 - 2.0 * fidelity(final, initial)
    return payoff_p, -payoff_p


def bloch_vector(rho: np.ndarray) -> np.ndarray:
    return np.array([np.trace(rho @ s).real for s in (SIGMA1, SIGMA2, SIGMA3)])


def bloch_trace(spec: GameSpec, s: StrategyPair) -> list[list[np.ndarray]]:
    """Bloch vectors after each of the three moves, one list per branch."""
    rho1 = _conj(s.u1, spec.initial)
    trace = []
    for op in spec.ops:
        rho2 = _conj(op, rho1)
        rho3 = _conj(s.u2, rho2)
        trace.append([bloch_vector(rho1), bloch_vector(rho2), bloch_vector(rho3)])
    return trace


def simplex_grid(n: int, points: int) -> list[tuple[float, ...]]:
    """Lattice of weight vectors on the (n-1)-simplex with ``points`` values per axis.

    For n = 2 this is ``(p, 1 - p)`` with p in {0, 1/(points-1), ..., 1}.
    """
    if n == 1:
        return [(1.0,)]
    steps = points - 1
    grid = []
    for bars in itertools.combinations(range(steps + n - 1), n - 1):
        prev, parts = -1, []
        for b in bars:
            parts.append(b - prev - 1)
            prev = b
        parts.append(steps + n - 2 - prev)
        grid.append(tuple(k / steps for k in parts))
    return grid


@dataclass
class VerificationReport:
    worst_fidelity: float
    branch_fidelities: list[float]
    grid: list[tuple[float, ...]]
    grid_fidelities: list[float]
    verdict: str
    bloch_trace: list[list[np.ndarray]] = field(repr=False)
    eps_win: float = EPS_WIN

    @property
    def won(self) -> bool:
        return self.verdict == "win"


def verify_strategy(
    spec: GameSpec,
    s: StrategyPair,
    grid_size: int = DEFAULT_GRID,
    eps_win: float = EPS_WIN,
) -> VerificationReport:
    """Check that every branch restores the initial state, plus a mixture grid.

    The verdict uses the per-branch fidelities only; the grid is a redundant check
    (mixtures are convex combinations of the branches).
    """
    if grid_size < 2:
        raise DomainError("grid_size must be at least 2")
    finals = [evolve_branch(spec, s, k) for k in range(spec.n_ops)]
    branch_fid = [fidelity(rho, spec.initial) for rho in finals]
    grid = simplex_grid(spec.n_ops, grid_size)
    grid_fid = []
    for weights in grid:
        rho = sum(w * f for w, f in zip(weights, finals))
        grid_fid.append(fidelity(rho, spec.initial))
    worst = min(branch_fid + grid_fid)
    verdict = "win" if min(branch_fid) >= 1.0 - eps_win else "lose"
    return VerificationReport(worst, branch_fid, grid, grid_fid, verdict, bloch_trace(spec, s), eps_win)
