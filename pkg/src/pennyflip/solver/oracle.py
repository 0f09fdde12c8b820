"""Brute-force search for Q's best guaranteed fidelity, independent of the closed forms.

Each of Q's moves is an SU(2) element exp(i t n . sigma / 2) with the axis in
spherical coordinates (polar, azimuth); global phases cannot change fidelities
and are fixed to zero. The search is a coarse grid over both moves followed by a
seeded pattern search on min-over-branches fidelity.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from ..errors import DomainError
from ..gamesim import GameSpec, StrategyPair
from ..qalg import IDENTITY, dagger

DEFAULT_GRID = 8
DEFAULT_STEPS = 200
STEP_DECAY = 0.7
N_STARTS = 4
N_RANDOM_DIRECTIONS = 24


@dataclass(frozen=True, eq=False)
class OracleResult:
    best_worst_fidelity: float
    argmax: StrategyPair
    params: np.ndarray
    evaluations: int


def _su2(params: np.ndarray) -> np.ndarray:
    """Batch of exp(i t n . sigma / 2) from (..., 3) arrays of (t, polar, azimuth)."""
    t, pol, az = params[..., 0], params[..., 1], params[..., 2]
    c, s = np.cos(0.5 * t), np.sin(0.5 * t)
    nx = np.sin(pol) * np.cos(az)
    ny = np.sin(pol) * np.sin(az)
    nz = np.cos(pol)
    out = np.empty(params.shape[:-1] + (2, 2), dtype=complex)
    out[..., 0, 0] = c + 1j * s * nz
    out[..., 0, 1] = 1j * s * (nx - 1j * ny)
    out[..., 1, 0] = 1j * s * (nx + 1j * ny)
    out[..., 1, 1] = c - 1j * s * nz
    return out


def _initial_ket(spec: GameSpec) -> np.ndarray:
    vals, vecs = np.linalg.eigh(spec.initial)
    if abs(vals[-1] - 1.0) > 1e-9:
        raise DomainError("the oracle needs a pure initial state")
    return vecs[:, -1]


class _Objective:
    def __init__(self, spec: GameSpec):
        self.ket = _initial_ket(spec)
        self.ops = np.stack(spec.ops)
        self.calls = 0

    def grid(self, u1: np.ndarray, u2: np.ndarray) -> np.ndarray:
        """(len(u2), len(u1)) table of worst fidelities."""
        phi1 = u1 @ self.ket
        moved = np.einsum("jab,kb->kja", self.ops, phi1)
        row = np.conj(self.ket) @ u2
        amp = np.einsum("la,kja->lkj", row, moved)
        self.calls += amp.shape[0] * amp.shape[1]
        return np.min(np.abs(amp) ** 2, axis=-1)

    def paired(self, x: np.ndarray) -> np.ndarray:
        """Worst fidelity for each row (t1, p1, a1, t2, p2, a2) of x."""
        u1, u2 = _su2(x[:, :3]), _su2(x[:, 3:])
        final = np.einsum("mab,jbc,mcd,d->mja", u2, self.ops, u1, self.ket)
        self.calls += x.shape[0]
        return np.min(np.abs(final @ np.conj(self.ket)) ** 2, axis=-1)


def _grid_points(grid: int) -> np.ndarray:
    angles = np.arange(grid) * (2 * math.pi / grid)
    polars = (np.arange(grid) + 0.5) * (math.pi / grid)
    return np.array(list(itertools.product(angles, polars, angles)))


def _climb(obj: _Objective, x: np.ndarray, value: float, rng: np.random.Generator,
           steps: int, step: float) -> tuple[np.ndarray, float]:
    basis = np.vstack([np.eye(6), -np.eye(6)])
    for _ in range(steps):
        dirs = rng.normal(size=(N_RANDOM_DIRECTIONS, 6))
        dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
        cand = x + step * np.vstack([basis, dirs])
        vals = obj.paired(cand)
        k = int(np.argmax(vals))
        if vals[k] > value:
            x, value = cand[k], float(vals[k])
        else:
            step *= STEP_DECAY
    return x, value


def brute_force_oracle(spec: GameSpec, grid: int = DEFAULT_GRID, seed: int = 0,
                       steps: int = DEFAULT_STEPS) -> OracleResult:
    """Best min-over-branches fidelity Q can guarantee, found by search.

    Deterministic for a given seed. With a single adversary operation A the exact
    answer (U1 = 1, U2 = A^dagger) is returned directly.
    """
    if grid < 8:
        raise DomainError("grid must have at least 8 points per angular dimension")
    if spec.n_ops == 1:
        pair = StrategyPair(IDENTITY, dagger(spec.ops[0]))
        ket = _initial_ket(spec)
        f = float(abs(np.vdot(ket, pair.u2 @ spec.ops[0] @ pair.u1 @ ket)) ** 2)
        return OracleResult(f, pair, np.zeros(6), 1)

    rng = np.random.default_rng(seed)
    obj = _Objective(spec)
    pts = _grid_points(grid)
    us = _su2(pts)
    table = obj.grid(us, us)
    flat = np.argsort(table, axis=None, kind="stable")[::-1][:N_STARTS]

    best_x, best_val = None, -1.0
    for idx in flat:
        i2, i1 = np.unravel_index(idx, table.shape)
        x0 = np.concatenate([pts[i1], pts[i2]])
        x, val = _climb(obj, x0, float(table[i2, i1]), rng, steps, step=math.pi / grid)
        if val > best_val:
            best_x, best_val = x, val

    pair = StrategyPair(_su2(best_x[:3]), _su2(best_x[3:]))
    return OracleResult(best_val, pair, best_x, obj.calls)
