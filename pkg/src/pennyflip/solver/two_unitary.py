"""Winning strategies against an adversary holding two arbitrary U(2) operations.

Write W = U_P2^dagger U_P1 = e^{i omega} (cos(phi/2) 1 + i sin(phi/2) M . sigma).
Q's first move U1 = e^{i d1} e^{i theta1 n . sigma / 2} must satisfy

    U1^dagger W = c e^{i omega} e^{i gamma sigma_3 / 2} U1^dagger,   c = +-1,

and the second move is U2 = e^{i d2} e^{i theta2 sigma_3 / 2} U1^dagger U_P2^dagger.
Comparing vector parts gives the 3x3 system ``V n = r``; its closed-form
solution is :func:`bloch_axis`.

Taking traces of the relation above forces cos(gamma/2) = c cos(phi/2). On that
locus the factor (cos(phi/2) - c cos(gamma/2)) of det V vanishes, so V itself is
singular at every genuine solution. The closed form has that factor cancelled
and stays exact there; solvability is therefore judged by :func:`reduced_det_V`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import bisect

from ..errors import (
    DegenerateCompositionError,
    DomainError,
    ParameterInconsistencyError,
    SingularProblemError,
)
from ..gamesim import StrategyPair
from ..qalg import (
    EPS_SING,
    AxisAngle,
    as_unitary,
    dagger,
    dot_sigma,
    from_axis_angle,
    to_axis_angle,
)
from .families import z_rotation
from .multiple import restoring_strategy

EPS_DET = 1e-8
EPS_NORM = 1e-9
EPS_GAMMA = 1e-9
THETA1_XTOL = 1e-12


@dataclass(frozen=True)
class AdversaryComposition:
    """Angle/axis of U_P2^dagger U_P1; ``axis`` is None when degenerate."""

    varphi: float
    axis: np.ndarray | None
    phase: float
    cos_half: float
    sin_half: float
    degenerate: bool

    def matrix(self) -> np.ndarray:
        """Reassemble e^{i phase} (cos(phi/2) 1 + i sin(phi/2) M . sigma)."""
        axis = np.zeros(3) if self.axis is None else self.axis
        su2 = self.cos_half * np.eye(2) + 1j * self.sin_half * dot_sigma(axis)
        return np.exp(1j * self.phase) * su2


def compose_adversary(up1: np.ndarray, up2: np.ndarray) -> AdversaryComposition:
    """Relative rotation of the adversary's two operations by spherical trigonometry.

    cos(phi/2)   = c1 c2 + (m1 . m2) s1 s2
    sin(phi/2) M = m1 s1 c2 - m2 c1 s2 - (m1 x m2) s1 s2
    """
    p1 = to_axis_angle(as_unitary(up1))
    p2 = to_axis_angle(as_unitary(up2))
    c1, s1 = math.cos(0.5 * p1.theta), math.sin(0.5 * p1.theta)
    c2, s2 = math.cos(0.5 * p2.theta), math.sin(0.5 * p2.theta)
    cos_half = c1 * c2 + float(np.dot(p1.n, p2.n)) * s1 * s2
    sm = p1.n * s1 * c2 - p2.n * c1 * s2 - np.cross(p1.n, p2.n) * s1 * s2
    sin_half = float(np.linalg.norm(sm))
    phase = p1.delta - p2.delta
    varphi = 2.0 * math.atan2(sin_half, cos_half)
    if sin_half < EPS_SING:
        return AdversaryComposition(varphi, None, phase, cos_half, sin_half, True)
    return AdversaryComposition(varphi, sm / sin_half, phase, cos_half, sin_half, False)


@dataclass(frozen=True, eq=False)
class TwoUnitaryProblem:
    """Adversary pair plus Q's free parameters.

    ``theta1`` and ``gamma`` may be left as None and filled by
    :func:`solve_theta1` and :func:`consistent_gamma`.
    """

    up1: np.ndarray
    up2: np.ndarray
    theta1: float | None = None
    theta2: float = 0.0
    gamma: float | None = None
    delta1: float = 0.0
    delta2: float = 0.0
    c_sign: int = 1

    def __post_init__(self):
        object.__setattr__(self, "up1", as_unitary(self.up1))
        object.__setattr__(self, "up2", as_unitary(self.up2))
        if self.c_sign not in (1, -1):
            raise DomainError(f"c_sign must be +1 or -1, got {self.c_sign!r}")

    def composition(self) -> AdversaryComposition:
        return compose_adversary(self.up1, self.up2)


def _nondegenerate(problem: TwoUnitaryProblem) -> AdversaryComposition:
    comp = problem.composition()
    if comp.degenerate:
        raise DegenerateCompositionError(
            "U_P2^dagger U_P1 is a pure phase; use the simultaneous-eigenvector path"
        )
    return comp


def _require(problem: TwoUnitaryProblem, *names: str) -> None:
    missing = [n for n in names if getattr(problem, n) is None]
    if missing:
        raise DomainError(f"problem is missing {', '.join(missing)}")


def consistent_gamma(comp: AdversaryComposition, c_sign: int = 1, branch: int = 1) -> float:
    """The gamma with cos(gamma/2) = c cos(phi/2) and sin(gamma/2) = branch * sin(phi/2)."""
    if branch not in (1, -1):
        raise DomainError(f"branch must be +1 or -1, got {branch!r}")
    return 2.0 * math.atan2(branch * comp.sin_half, c_sign * comp.cos_half)


def _denominator(comp: AdversaryComposition, gamma: float, c: int) -> float:
    cg, sg = math.cos(0.5 * gamma), math.sin(0.5 * gamma)
    return comp.axis[2] * comp.sin_half * sg - comp.cos_half * cg + c


def v_matrix(problem: TwoUnitaryProblem) -> np.ndarray:
    """The 3x3 matrix V of the linear system V n = r, built entry by entry."""
    _require(problem, "theta1", "gamma")
    comp = _nondegenerate(problem)
    m1, m2, m3 = comp.axis
    s, c = comp.sin_half, problem.c_sign
    cg, sg = math.cos(0.5 * problem.gamma), math.sin(0.5 * problem.gamma)
    diag = comp.cos_half - c * cg
    k3 = m3 * s + c * sg
    v = np.array(
        [
            [diag, -k3, m2 * s],
            [k3, diag, -m1 * s],
            [-m2 * s, m1 * s, diag],
        ]
    )
    return math.sin(0.5 * problem.theta1) * v


def rhs_vector(problem: TwoUnitaryProblem) -> np.ndarray:
    _require(problem, "theta1", "gamma")
    comp = _nondegenerate(problem)
    s = comp.sin_half
    sg = math.sin(0.5 * problem.gamma)
    r = np.array([comp.axis[0] * s, comp.axis[1] * s, comp.axis[2] * s - problem.c_sign * sg])
    return math.cos(0.5 * problem.theta1) * r


def det_V(problem: TwoUnitaryProblem) -> float:
    """2c sin^3(t1/2) (cos(phi/2) - c cos(g/2)) (M3 sin(phi/2) sin(g/2) - cos(phi/2) cos(g/2) + c)."""
    _require(problem, "theta1", "gamma")
    comp = _nondegenerate(problem)
    c = problem.c_sign
    s1 = math.sin(0.5 * problem.theta1)
    cg = math.cos(0.5 * problem.gamma)
    return 2.0 * c * s1**3 * (comp.cos_half - c * cg) * _denominator(comp, problem.gamma, c)


def reduced_det_V(problem: TwoUnitaryProblem) -> float:
    """det V with the (cos(phi/2) - c cos(gamma/2)) factor removed."""
    _require(problem, "theta1", "gamma")
    comp = _nondegenerate(problem)
    s1 = math.sin(0.5 * problem.theta1)
    return 2.0 * problem.c_sign * s1**3 * _denominator(comp, problem.gamma, problem.c_sign)


def _direction(comp: AdversaryComposition, gamma: float) -> np.ndarray:
    m1, m2, m3 = comp.axis
    s, c_half = comp.sin_half, comp.cos_half
    cg, sg = math.cos(0.5 * gamma), math.sin(0.5 * gamma)
    return np.array(
        [
            (m1 * cg - m2 * sg) * s,
            (m1 * sg + m2 * cg) * s,
            m3 * s * cg + c_half * sg,
        ]
    )


def bloch_axis(problem: TwoUnitaryProblem) -> np.ndarray:
    """Closed-form n = -cot(theta1/2) / D * P(gamma). Not normalized."""
    _require(problem, "theta1", "gamma")
    comp = _nondegenerate(problem)
    s1 = math.sin(0.5 * problem.theta1)
    if abs(s1) < EPS_SING:
        raise SingularProblemError("sin(theta1/2) vanishes")
    denom = _denominator(comp, problem.gamma, problem.c_sign)
    if abs(denom) < EPS_DET:
        raise SingularProblemError(f"reduced determinant vanishes (D = {denom:.3e})")
    cot = math.cos(0.5 * problem.theta1) / s1
    return -cot / denom * _direction(comp, problem.gamma)


def solve_theta1(problem: TwoUnitaryProblem) -> float:
    """theta1 in (0, pi] giving a unit Bloch axis, by bisection on cot(theta1/2).

    The bracket starts at [0, 1] (|theta1| >= pi/2) and is widened when the root
    lies beyond it.
    """
    _require(problem, "gamma")
    comp = _nondegenerate(problem)
    denom = _denominator(comp, problem.gamma, problem.c_sign)
    scale = float(np.linalg.norm(_direction(comp, problem.gamma)))
    if abs(denom) < EPS_DET or scale < EPS_DET:
        raise SingularProblemError("no theta1 yields a unit axis for this gamma")
    ratio = scale / abs(denom)

    def excess(cot: float) -> float:
        return cot * ratio - 1.0

    hi = 1.0
    while excess(hi) < 0.0:
        hi *= 2.0
        if hi > 1e12:
            raise SingularProblemError("unit-norm root for cot(theta1/2) is out of range")
    cot = bisect(excess, 0.0, hi, xtol=THETA1_XTOL / max(1.0, ratio), rtol=4 * np.finfo(float).eps, maxiter=200)
    return 2.0 * math.atan2(1.0, cot)


def _default_branch(comp: AdversaryComposition, c_sign: int) -> int:
    # c*branch*M3 <= 0 keeps |cot(theta1/2)| <= 1
    branch = -c_sign if comp.axis[2] >= 0 else c_sign
    gamma = consistent_gamma(comp, c_sign, branch)
    if abs(_denominator(comp, gamma, c_sign)) < EPS_DET:
        branch = -branch
    return branch


def prepare_problem(
    up1: np.ndarray,
    up2: np.ndarray,
    c_sign: int = 1,
    theta2: float = 0.0,
    delta1: float = 0.0,
    delta2: float = 0.0,
    branch: int | None = None,
    gamma: float | None = None,
) -> TwoUnitaryProblem:
    """Fill gamma (consistent branch) and theta1 (unit-norm root) for an adversary pair."""
    problem = TwoUnitaryProblem(up1, up2, None, theta2, gamma, delta1, delta2, c_sign)
    comp = _nondegenerate(problem)
    if problem.gamma is None:
        branch = _default_branch(comp, c_sign) if branch is None else branch
        problem = replace(problem, gamma=consistent_gamma(comp, c_sign, branch))
    return replace(problem, theta1=solve_theta1(problem))


def two_unitary_strategy(problem: TwoUnitaryProblem) -> StrategyPair:
    """Q's winning pair for a fully specified problem.

    A pure-phase relative rotation is handed to the simultaneous-eigenvector
    construction. Otherwise gamma must satisfy cos(gamma/2) = c cos(phi/2) and
    the closed-form axis must have unit norm.
    """
    comp = problem.composition()
    if comp.degenerate:
        return restoring_strategy([problem.up1, problem.up2])
    _require(problem, "theta1", "gamma")
    mismatch = comp.cos_half - problem.c_sign * math.cos(0.5 * problem.gamma)
    if abs(mismatch) > EPS_GAMMA:
        raise ParameterInconsistencyError(
            f"gamma is inconsistent with the adversary: cos(phi/2) - c cos(gamma/2) = {mismatch:.3e}"
        )
    if abs(reduced_det_V(problem)) < EPS_DET:
        raise SingularProblemError("reduced determinant of V vanishes")
    n = bloch_axis(problem)
    norm = float(np.linalg.norm(n))
    if abs(norm - 1.0) > EPS_NORM:
        raise ParameterInconsistencyError(f"|n| = {norm!r}; re-tune theta1", norm=norm)
    u1 = from_axis_angle(AxisAngle(problem.delta1, problem.theta1, n / norm))
    u2 = np.exp(1j * problem.delta2) * z_rotation(problem.theta2) @ dagger(u1) @ dagger(problem.up2)
    return StrategyPair(u1, u2)
