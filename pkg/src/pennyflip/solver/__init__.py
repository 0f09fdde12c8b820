"""Strategy synthesis for Q."""

from __future__ import annotations

from dataclasses import replace

import numpy as np

from ..errors import SingularProblemError
from ..gamesim import GameSpec, StrategyPair
from ..qalg import dagger
from .families import (
    ChappellParams,
    PhaseVariableParams,
    chappell_family,
    flip_op,
    meyer_hadamard,
    meyer_spec,
    nonflip_op,
    phase_variable_family,
    phase_variable_spec,
    sigma13_family,
    sigma13_spec,
    z_rotation,
)
from .multiple import (
    MultiStrategyClass,
    classify_multiple,
    restoring_state_exists,
    restoring_strategy,
)
from .oracle import OracleResult, brute_force_oracle
from .two_unitary import (
    AdversaryComposition,
    TwoUnitaryProblem,
    compose_adversary,
    consistent_gamma,
    det_V,
    prepare_problem,
    reduced_det_V,
    solve_theta1,
    two_unitary_strategy,
    v_matrix,
)

__all__ = [
    "AdversaryComposition",
    "ChappellParams",
    "MultiStrategyClass",
    "OracleResult",
    "PhaseVariableParams",
    "TwoUnitaryProblem",
    "brute_force_oracle",
    "chappell_family",
    "classify_multiple",
    "compose_adversary",
    "consistent_gamma",
    "det_V",
    "flip_op",
    "meyer_hadamard",
    "meyer_spec",
    "nonflip_op",
    "phase_variable_family",
    "phase_variable_spec",
    "prepare_problem",
    "reduced_det_V",
    "restoring_state_exists",
    "restoring_strategy",
    "sigma13_family",
    "sigma13_spec",
    "solve_theta1",
    "synthesize",
    "two_unitary_strategy",
    "v_matrix",
    "z_rotation",
]


def _initial_basis(spec: GameSpec) -> np.ndarray:
    vals, vecs = np.linalg.eigh(spec.initial)
    ket = vecs[:, -1]
    return np.column_stack([ket, [-np.conj(ket[1]), np.conj(ket[0])]])


def synthesize(spec: GameSpec, c_sign: int = 1, theta2: float = 0.0, delta1: float = 0.0,
               delta2: float = 0.0, gamma: float | None = None,
               theta1: float | None = None) -> tuple[str, StrategyPair, TwoUnitaryProblem | None]:
    """Pick a construction for ``spec`` and return (method, pair, problem).

    Commuting or single-operation adversaries use the eigenvector construction;
    two operations use the linear-system solver; more operations use the common
    restoring state when one exists. Raises SingularProblemError when no
    construction applies. A caller-fixed ``gamma`` or ``theta1`` for the
    two-operation solver is checked, not corrected.
    """
    ops = list(spec.ops)
    basis = _initial_basis(spec)
    if len(ops) == 1 or all(np.allclose(a @ b, b @ a, atol=1e-9) for i, a in enumerate(ops) for b in ops[i + 1:]):
        return "simultaneous-eigenvector", restoring_strategy(ops, basis[:, 0]), None
    if len(ops) == 2:
        # rotate the game so that the initial state is |0>
        up1, up2 = (dagger(basis) @ op @ basis for op in ops)
        comp = compose_adversary(up1, up2)
        if comp.degenerate:
            return "simultaneous-eigenvector", restoring_strategy(ops, basis[:, 0]), None
        try:
            problem = prepare_problem(up1, up2, c_sign, theta2, delta1, delta2, gamma=gamma)
            if theta1 is not None:
                problem = replace(problem, theta1=theta1)
            pair = two_unitary_strategy(problem)
        except SingularProblemError:
            return "restoring-state", restoring_strategy(ops, basis[:, 0]), None
        back = dagger(basis)
        return "two-unitary", StrategyPair(basis @ pair.u1 @ back, basis @ pair.u2 @ back), problem
    if restoring_state_exists(ops):
        return "restoring-state", restoring_strategy(ops, basis[:, 0]), None
    raise SingularProblemError("no operator construction restores the initial state")
