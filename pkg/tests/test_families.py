import math

import numpy as np
import pytest

from pennyflip.errors import DomainError
from pennyflip.gamesim import GameSpec, pure_density, verify_strategy
from pennyflip.qalg import HADAMARD, IDENTITY, SIGMA1, SIGMA3, from_axis_angle, to_axis_angle
from pennyflip.solver.families import (
    ChappellParams,
    PhaseVariableParams,
    chappell_axis,
    chappell_family,
    flip_op,
    meyer_hadamard,
    meyer_spec,
    nonflip_op,
    phase_variable_axis,
    phase_variable_family,
    phase_variable_spec,
    sigma13_axis,
    sigma13_family,
    sigma13_spec,
)

EQ3_U1 = np.array([[1, 1j], [1j, 1]]) / math.sqrt(2)
EQ3_U2 = np.array([[1j, -1], [1, -1j]]) / math.sqrt(2)


def sample_theta(rng):
    return rng.choice([-1, 1]) * rng.uniform(0.5 * math.pi, 1.5 * math.pi)


def sample_chappell(rng):
    return ChappellParams(
        sample_theta(rng), rng.uniform(0, 2 * math.pi), rng.uniform(0, 2 * math.pi),
        rng.uniform(0, 2 * math.pi), int(rng.choice([-1, 1])), int(rng.choice([-1, 1])),
    )


def test_meyer_hadamard():
    pair = meyer_hadamard()
    assert np.allclose(pair.u1, np.array([[1, 1], [1, -1]]) / math.sqrt(2))
    assert np.allclose(pair.u2 @ pair.u2, IDENTITY)
    assert verify_strategy(meyer_spec(), pair).won


def test_chappell_meyer_point_first_move_is_hadamard():
    pair = chappell_family(ChappellParams(math.pi, 0.0, -math.pi / 2, -math.pi / 2))
    assert np.max(np.abs(pair.u1 - HADAMARD)) < 1e-12
    # the second move carries an extra global phase: e^{-i pi/2} H
    assert np.max(np.abs(pair.u2 + 1j * HADAMARD)) < 1e-12


def test_chappell_meyer_point_with_zero_second_phase():
    pair = chappell_family(ChappellParams(math.pi, 0.0, -math.pi / 2, 0.0))
    assert np.max(np.abs(pair.u1 - HADAMARD)) < 1e-12
    assert np.max(np.abs(pair.u2 - HADAMARD)) < 1e-12


def test_chappell_quarter_turn_wins():
    assert verify_strategy(meyer_spec(), chappell_family(ChappellParams(math.pi / 2))).won


def test_chappell_rejects_small_theta():
    with pytest.raises(DomainError):
        ChappellParams(math.pi / 4)
    with pytest.raises(DomainError):
        ChappellParams(math.pi, a_sign=0)


def test_chappell_sweep():
    rng = np.random.default_rng(100)
    for _ in range(200):
        p = sample_chappell(rng)
        assert abs(np.linalg.norm(chappell_axis(p.theta, p.a_sign, p.b_sign)) - 1) < 1e-9
        rep = verify_strategy(meyer_spec(), chappell_family(p))
        assert rep.won and rep.worst_fidelity >= 1 - 1e-9, p


def test_chappell_first_move_lands_on_x_axis():
    rng = np.random.default_rng(101)
    for _ in range(100):
        p = sample_chappell(rng)
        psi = chappell_family(p).u1 @ [1, 0]
        x = np.vdot(psi, SIGMA1 @ psi).real
        assert abs(abs(x) - 1) < 1e-12


def test_sigma13_eq3_reduction():
    pair = sigma13_family(ChappellParams(math.pi / 2, 0.0, 0.0, math.pi / 2))
    assert np.allclose(pair.u1, EQ3_U1, atol=1e-12)
    assert np.allclose(pair.u2, EQ3_U2, atol=1e-12)
    psi = pair.u1 @ [1, 0]
    assert np.allclose(psi, np.array([1, 1j]) / math.sqrt(2))


def test_sigma13_sweep():
    rng = np.random.default_rng(102)
    for _ in range(200):
        p = sample_chappell(rng)
        assert abs(np.linalg.norm(sigma13_axis(p.theta, p.a_sign, p.b_sign)) - 1) < 1e-9
        rep = verify_strategy(sigma13_spec(), sigma13_family(p))
        assert rep.won and rep.worst_fidelity >= 1 - 1e-9, p


def test_flip_nonflip_values():
    assert np.allclose(flip_op(0), SIGMA1)
    assert np.allclose(nonflip_op(0), IDENTITY)
    assert np.allclose(nonflip_op(math.pi), 1j * SIGMA3)
    assert np.allclose(flip_op(2 * math.pi), -SIGMA1)


def test_phase_variable_example():
    p = PhaseVariableParams(math.pi / 2, 0.0, 1.3, 0.4)
    assert verify_strategy(phase_variable_spec(1.3, 0.4), phase_variable_family(p)).won


def test_phase_variable_axis_reduces_to_chappell():
    for theta in np.linspace(0.5 * math.pi, 1.5 * math.pi, 17):
        for a, b in [(1, 1), (1, -1), (-1, 1), (-1, -1)]:
            assert np.allclose(phase_variable_axis(theta, 0.0, a, b), chappell_axis(theta, a, b), atol=1e-9)


def test_phase_variable_sweep():
    rng = np.random.default_rng(103)
    for _ in range(400):
        alpha, beta = rng.uniform(0, 4 * math.pi, 2)
        p = PhaseVariableParams(sample_theta(rng), rng.uniform(0, 2 * math.pi), alpha, beta,
                                rng.uniform(0, 2 * math.pi), rng.uniform(0, 2 * math.pi),
                                int(rng.choice([-1, 1])), int(rng.choice([-1, 1])))
        assert abs(np.linalg.norm(phase_variable_axis(p.theta, p.delta, p.a_sign, p.b_sign)) - 1) < 1e-9
        rep = verify_strategy(phase_variable_spec(alpha, beta), phase_variable_family(p))
        assert rep.won and rep.worst_fidelity >= 1 - 1e-9


def test_phase_variable_reductions():
    rng = np.random.default_rng(104)
    for _ in range(50):
        theta = sample_theta(rng)
        k, m = rng.integers(-2, 3, 2)
        alpha, beta = 4 * math.pi * k, 4 * math.pi * m
        pair = phase_variable_family(PhaseVariableParams(theta, alpha=alpha, beta=beta))
        assert verify_strategy(GameSpec.uniform([SIGMA1, IDENTITY]), pair).won
        pair = phase_variable_family(PhaseVariableParams(theta, alpha=0.0, beta=math.pi))
        assert verify_strategy(GameSpec.uniform([SIGMA1, 1j * SIGMA3]), pair).won
        assert verify_strategy(sigma13_spec(), pair).won


def test_families_from_tails():
    # the families are built for heads; from tails the sigma_1 branch of Meyer still restores the state
    spec = GameSpec.uniform([IDENTITY, SIGMA1], initial=pure_density([0, 1]))
    assert verify_strategy(spec, meyer_hadamard()).won


def test_hadamard_axis_angle_matches_chappell_parameters():
    p = to_axis_angle(HADAMARD)
    assert np.allclose(p.n, chappell_axis(math.pi), atol=1e-12)
    assert np.allclose(from_axis_angle(p), HADAMARD)
