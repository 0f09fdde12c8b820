"""Closed-form winning strategies for Q against flip/non-flip style adversaries."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import DomainError
from ..gamesim import GameSpec, StrategyPair
from ..qalg import (
    HADAMARD,
    IDENTITY,
    SIGMA1,
    SIGMA3,
    AxisAngle,
    dagger,
    from_axis_angle,
)

# slack on the |theta| in [pi/2, 3pi/2] window so grid end points are admitted
_RANGE_SLACK = 1e-12


def _check_sign(name: str, value: int) -> int:
    if value not in (1, -1):
        raise DomainError(f"{name} must be +1 or -1, got {value!r}")
    return value


def _check_theta(theta: float) -> float:
    t = abs(theta)
    if not (0.5 * math.pi - _RANGE_SLACK <= t <= 1.5 * math.pi + _RANGE_SLACK):
        raise DomainError(f"|theta| must lie in [pi/2, 3pi/2], got theta = {theta!r}")
    return theta


def _a_coefficient(theta: float, a_sign: int) -> tuple[float, float]:
    """Return (a, cot(theta/2)) with a = a_sign * sqrt((1 - cot^2(theta/2)) / 2)."""
    cot = math.cos(0.5 * theta) / math.sin(0.5 * theta)
    return a_sign * math.sqrt(max(0.0, 0.5 * (1.0 - cot * cot))), cot


def z_rotation(angle: float) -> np.ndarray:
    """exp(i angle sigma_3 / 2)."""
    return np.diag([np.exp(0.5j * angle), np.exp(-0.5j * angle)])


@dataclass(frozen=True)
class ChappellParams:
    theta: float
    phi: float = 0.0
    delta1: float = 0.0
    delta2: float = 0.0
    a_sign: int = 1
    b_sign: int = 1

    def __post_init__(self):
        _check_theta(self.theta)
        _check_sign("a_sign", self.a_sign)
        _check_sign("b_sign", self.b_sign)


@dataclass(frozen=True)
class PhaseVariableParams:
    theta: float
    phi: float = 0.0
    alpha: float = 0.0
    beta: float = 0.0
    delta1: float = 0.0
    delta2: float = 0.0
    a_sign: int = 1
    b_sign: int = 1

    def __post_init__(self):
        _check_theta(self.theta)
        _check_sign("a_sign", self.a_sign)
        _check_sign("b_sign", self.b_sign)

    @property
    def delta(self) -> float:
        return self.alpha - self.beta


def flip_op(alpha: float) -> np.ndarray:
    """F(alpha) = exp(i alpha sigma_3 / 2) sigma_1."""
    return np.array([[0, np.exp(0.5j * alpha)], [np.exp(-0.5j * alpha), 0]])


def nonflip_op(beta: float) -> np.ndarray:
    """N(beta) = exp(i beta sigma_3 / 2)."""
    return z_rotation(beta)


def meyer_spec() -> GameSpec:
    return GameSpec.uniform([IDENTITY, SIGMA1], label="meyer", op_names=("identity", "sigma1"))


def sigma13_spec() -> GameSpec:
    return GameSpec.uniform([SIGMA1, SIGMA3], label="sigma13", op_names=("sigma1", "sigma3"))


def phase_variable_spec(alpha: float, beta: float) -> GameSpec:
    return GameSpec.uniform(
        [flip_op(alpha), nonflip_op(beta)],
        label="phase-variable",
        op_names=(f"flip({alpha!r})", f"nonflip({beta!r})"),
    )


def meyer_hadamard() -> StrategyPair:
    return StrategyPair(HADAMARD, HADAMARD)


def chappell_axis(theta: float, a_sign: int = 1, b_sign: int = 1) -> np.ndarray:
    """(a, -b cot(theta/2), ab).

    The minus sign belongs to the exp(+i theta n.sigma/2) convention: it makes
    U1|0> an eigenvector of sigma_1 for every theta in range, not only theta = pi.
    """
    a, cot = _a_coefficient(theta, a_sign)
    return np.array([a, -b_sign * cot, a * b_sign])


def chappell_family(p: ChappellParams) -> StrategyPair:
    """Winning pairs against {1, sigma_1}: U2 = e^{i d2} e^{i phi s3/2} U1^dagger."""
    u1 = from_axis_angle(AxisAngle(p.delta1, p.theta, chappell_axis(p.theta, p.a_sign, p.b_sign)))
    u2 = np.exp(1j * p.delta2) * z_rotation(p.phi) @ dagger(u1)
    return StrategyPair(u1, u2)


def sigma13_axis(theta: float, a_sign: int = 1, b_sign: int = 1) -> np.ndarray:
    a, cot = _a_coefficient(theta, a_sign)
    return np.array([b_sign * cot, a * b_sign, a])


def sigma13_family(p: ChappellParams) -> StrategyPair:
    """Winning pairs against {sigma_1, sigma_3}: U2 = e^{i d2} e^{i phi s3/2} U1^dagger sigma_3."""
    u1 = from_axis_angle(AxisAngle(p.delta1, p.theta, sigma13_axis(p.theta, p.a_sign, p.b_sign)))
    u2 = np.exp(1j * p.delta2) * z_rotation(p.phi) @ dagger(u1) @ SIGMA3
    return StrategyPair(u1, u2)


def phase_variable_axis(theta: float, delta: float, a_sign: int = 1, b_sign: int = 1) -> np.ndarray:
    """Chappell axis rotated by -delta/2 about z; equals :func:`chappell_axis` at delta = 0."""
    a, cot = _a_coefficient(theta, a_sign)
    k = -b_sign * cot
    c, s = math.cos(0.5 * delta), math.sin(0.5 * delta)
    return np.array([a * c + k * s, k * c - a * s, a * b_sign])


def phase_variable_family(p: PhaseVariableParams) -> StrategyPair:
    """Winning pairs against {F(alpha), N(beta)} for every mixing probability."""
    axis = phase_variable_axis(p.theta, p.delta, p.a_sign, p.b_sign)
    u1 = from_axis_angle(AxisAngle(p.delta1, p.theta, axis))
    u2 = np.exp(1j * p.delta2) * z_rotation(p.phi) @ dagger(u1) @ z_rotation(-p.beta)
    return StrategyPair(u1, u2)
