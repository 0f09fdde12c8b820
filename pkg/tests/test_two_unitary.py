import math
from dataclasses import replace

import numpy as np
import pytest

from pennyflip.errors import DegenerateCompositionError, ParameterInconsistencyError, SingularProblemError
from pennyflip.gamesim import GameSpec, pure_density, verify_strategy
from pennyflip.qalg import (
    IDENTITY,
    SIGMA1,
    SIGMA3,
    dagger,
    equal_up_to_phase,
    random_unitary,
    to_axis_angle,
)
from pennyflip.solver import synthesize
from pennyflip.solver.families import meyer_spec, sigma13_spec
from pennyflip.solver.two_unitary import (
    TwoUnitaryProblem,
    bloch_axis,
    compose_adversary,
    consistent_gamma,
    det_V,
    prepare_problem,
    reduced_det_V,
    rhs_vector,
    solve_theta1,
    two_unitary_strategy,
    v_matrix,
)


def random_pairs(seed, count):
    rng = np.random.default_rng(seed)
    return [(random_unitary(rng), random_unitary(rng)) for _ in range(count)]


def test_compose_identical_is_degenerate():
    u = random_unitary(np.random.default_rng(0))
    comp = compose_adversary(u, u)
    assert comp.degenerate and comp.axis is None


def test_compose_sigma1_sigma3_matches_product():
    comp = compose_adversary(SIGMA1, SIGMA3)
    direct = to_axis_angle(dagger(SIGMA3) @ SIGMA1)
    assert math.isclose(comp.varphi, direct.theta, abs_tol=1e-12)
    assert np.allclose(comp.axis, direct.n, atol=1e-12) or np.allclose(comp.axis, -direct.n, atol=1e-12)


def test_compose_sigma1_identity():
    comp = compose_adversary(SIGMA1, IDENTITY)
    assert math.isclose(comp.varphi, math.pi, abs_tol=1e-12)
    assert np.allclose(np.abs(comp.axis), [1, 0, 0], atol=1e-12)


def test_compose_reassembles_relative_operator():
    for up1, up2 in random_pairs(1, 500):
        comp = compose_adversary(up1, up2)
        assert np.allclose(comp.matrix(), dagger(up2) @ up1, atol=1e-10)


def test_det_v_closed_form_matches_numeric():
    rng = np.random.default_rng(2)
    for up1, up2 in random_pairs(3, 300):
        for c in (1, -1):
            p = TwoUnitaryProblem(up1, up2, theta1=rng.uniform(-6, 6), gamma=rng.uniform(-6, 6), c_sign=c)
            assert abs(det_V(p) - np.linalg.det(v_matrix(p))) < 1e-9


def test_det_v_vanishing_cases():
    up1, up2 = random_pairs(4, 1)[0]
    comp = compose_adversary(up1, up2)
    p = TwoUnitaryProblem(up1, up2, theta1=2 * math.pi, gamma=0.4)
    assert abs(det_V(p)) < 1e-12
    for c in (1, -1):
        for branch in (1, -1):
            g = consistent_gamma(comp, c, branch)
            assert math.isclose(comp.cos_half, c * math.cos(g / 2), abs_tol=1e-12)
            p = TwoUnitaryProblem(up1, up2, theta1=2.0, gamma=g, c_sign=c)
            assert abs(det_V(p)) < 1e-12
            assert abs(np.linalg.det(v_matrix(p))) < 1e-12


def test_closed_form_solves_linear_system():
    for up1, up2 in random_pairs(5, 200):
        p = prepare_problem(up1, up2)
        n = bloch_axis(p)
        assert np.allclose(v_matrix(p) @ n, rhs_vector(p), atol=1e-10)


def test_random_pairs_win():
    for up1, up2 in random_pairs(6, 100):
        for c in (1, -1):
            p = prepare_problem(up1, up2, c_sign=c)
            assert abs(np.linalg.norm(bloch_axis(p)) - 1) < 1e-9
            assert abs(reduced_det_V(p)) > 1e-8
            rep = verify_strategy(GameSpec.uniform([up1, up2]), two_unitary_strategy(p))
            assert rep.won and rep.worst_fidelity >= 1 - 1e-9


def test_both_gamma_branches_win_when_regular():
    rng = np.random.default_rng(7)
    for up1, up2 in random_pairs(8, 100):
        comp = compose_adversary(up1, up2)
        for branch in (1, -1):
            try:
                p = prepare_problem(up1, up2, branch=branch, theta2=rng.uniform(0, 6),
                                    delta1=rng.uniform(0, 6), delta2=rng.uniform(0, 6))
            except SingularProblemError:
                continue
            assert p.gamma == consistent_gamma(comp, 1, branch)
            assert verify_strategy(GameSpec.uniform([up1, up2]), two_unitary_strategy(p)).won


def test_first_move_angle_in_range():
    # the default branch keeps |cot(theta1/2)| <= 1
    for up1, up2 in random_pairs(9, 200):
        p = prepare_problem(up1, up2)
        assert 0.5 * math.pi - 1e-9 <= p.theta1 <= math.pi + 1e-9


def test_meyer_game_gives_chappell_pattern():
    p = prepare_problem(SIGMA1, IDENTITY)
    pair = two_unitary_strategy(p)
    assert verify_strategy(meyer_spec(), pair).won
    n = to_axis_angle(pair.u1).n
    cot = math.cos(p.theta1 / 2) / math.sin(p.theta1 / 2)
    assert math.isclose(abs(n[0]), abs(n[2]), abs_tol=1e-9)
    assert math.isclose(abs(n[1]), abs(cot), abs_tol=1e-9)


def test_sigma13_game_wins():
    pair = two_unitary_strategy(prepare_problem(SIGMA1, SIGMA3))
    assert verify_strategy(sigma13_spec(), pair).won


def test_inconsistent_gamma_rejected():
    up1, up2 = random_pairs(10, 1)[0]
    p = prepare_problem(up1, up2, gamma=0.123)
    with pytest.raises(ParameterInconsistencyError):
        two_unitary_strategy(p)


def test_wrong_theta1_reports_norm():
    up1, up2 = random_pairs(11, 1)[0]
    p = replace(prepare_problem(up1, up2), theta1=0.5 * math.pi + 0.01)
    with pytest.raises(ParameterInconsistencyError) as info:
        two_unitary_strategy(p)
    assert info.value.norm is not None and abs(info.value.norm - 1) > 1e-9


def test_theta1_root_is_accurate():
    for up1, up2 in random_pairs(12, 100):
        p = prepare_problem(up1, up2)
        assert solve_theta1(p) == p.theta1
        assert abs(np.linalg.norm(bloch_axis(p)) - 1) < 1e-12


def test_degenerate_pair_uses_eigenvector_path():
    rng = np.random.default_rng(13)
    for _ in range(20):
        u = random_unitary(rng)
        up2 = np.exp(1j * rng.uniform(0, 6)) * u
        p = TwoUnitaryProblem(u, up2)
        assert p.composition().degenerate
        pair = two_unitary_strategy(p)
        assert verify_strategy(GameSpec.uniform([u, up2]), pair).won
        with pytest.raises(DegenerateCompositionError):
            prepare_problem(u, up2)


def test_synthesize_commuting_and_rotated_initial():
    rng = np.random.default_rng(14)
    for up1, up2 in random_pairs(15, 50):
        psi = rng.normal(size=2) + 1j * rng.normal(size=2)
        spec = GameSpec.uniform([up1, up2], initial=pure_density(psi / np.linalg.norm(psi)))
        method, pair, _ = synthesize(spec)
        assert method == "two-unitary"
        assert verify_strategy(spec, pair).won
    method, pair, _ = synthesize(meyer_spec())
    assert method == "simultaneous-eigenvector"
    assert verify_strategy(meyer_spec(), pair).won


def test_second_move_structure():
    up1, up2 = random_pairs(16, 1)[0]
    p = prepare_problem(up1, up2, theta2=0.7, delta2=0.2)
    pair = two_unitary_strategy(p)
    base = two_unitary_strategy(replace(p, theta2=0.0, delta2=0.0))
    assert equal_up_to_phase(pair.u1, base.u1)
    # U1 W U1^dagger-type relation: U2 U_P2 U1 is diagonal
    m = pair.u2 @ up2 @ pair.u1
    assert abs(m[0, 1]) < 1e-12 and abs(m[1, 0]) < 1e-12
