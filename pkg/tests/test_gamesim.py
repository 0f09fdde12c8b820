import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pennyflip.errors import DomainError
from pennyflip.gamesim import (
    HEADS,
    TAILS,
    GameSpec,
    StrategyPair,
    bloch_trace,
    bloch_vector,
    check_density,
    evolve_branch,
    evolve_mixed,
    fidelity,
    is_pure,
    pure_density,
    purity,
    quantum_payoff,
    simplex_grid,
    verify_strategy,
)
from pennyflip.qalg import HADAMARD, IDENTITY, SIGMA1, SIGMA3, random_unitary
from pennyflip.solver.families import meyer_spec, sigma13_spec

PLUS_X = pure_density(np.array([1, 1]) / math.sqrt(2))
PLUS_Y = pure_density(np.array([1, 1j]) / math.sqrt(2))
EQ3_U1 = np.array([[1, 1j], [1j, 1]]) / math.sqrt(2)
EQ3_U2 = np.array([[1j, -1], [1, -1j]]) / math.sqrt(2)


def random_spec(rng, n=2):
    psi = rng.normal(size=2) + 1j * rng.normal(size=2)
    w = rng.dirichlet(np.ones(n))
    return GameSpec(pure_density(psi / np.linalg.norm(psi)), [random_unitary(rng) for _ in range(n)], w)


def test_meyer_branch_sigma1():
    spec = meyer_spec()
    rho = evolve_branch(spec, StrategyPair(HADAMARD, HADAMARD), 1)
    assert np.allclose(rho, HEADS, atol=1e-15)


def test_identity_strategy_applies_op():
    rng = np.random.default_rng(2)
    spec = random_spec(rng)
    a = spec.ops[0]
    rho = evolve_branch(spec, StrategyPair(IDENTITY, IDENTITY), 0)
    assert np.allclose(rho, a @ spec.initial @ a.conj().T)


def test_sigma13_flow():
    spec = sigma13_spec()
    pair = StrategyPair(EQ3_U1, EQ3_U2)
    final3 = pair.u2 @ SIGMA3 @ pair.u1 @ [1, 0]
    assert np.allclose(final3, [1j, 0])
    final1 = pair.u2 @ SIGMA1 @ pair.u1 @ [1, 0]
    assert np.allclose(final1, [-1, 0])
    for k in range(2):
        assert np.allclose(evolve_branch(spec, pair, k), HEADS)


def test_evolve_branch_bad_index():
    with pytest.raises(IndexError):
        evolve_branch(meyer_spec(), StrategyPair(IDENTITY, IDENTITY), 2)


def test_evolve_mixed_identical_branches():
    spec = GameSpec(HEADS, [SIGMA1, SIGMA1], [0.2, 0.8])
    pair = StrategyPair(HADAMARD, IDENTITY)
    assert np.allclose(evolve_mixed(spec, pair), evolve_branch(spec, pair, 0))


@pytest.mark.parametrize("p", np.linspace(0, 1, 11))
def test_meyer_any_p(p):
    rho = evolve_mixed(meyer_spec(), StrategyPair(HADAMARD, HADAMARD), [p, 1 - p])
    assert np.allclose(rho, HEADS, atol=1e-15)


def test_evolve_mixed_hand_computed():
    rng = np.random.default_rng(8)
    spec = random_spec(rng)
    u1, u2 = random_unitary(rng), random_unitary(rng)
    rho0 = spec.initial
    expected = 0
    for w, a in zip([0.3, 0.7], spec.ops):
        m = u2 @ a @ u1
        expected = expected + w * (m @ rho0 @ m.conj().T)
    assert np.allclose(evolve_mixed(spec, StrategyPair(u1, u2), [0.3, 0.7]), expected)


def test_evolution_invariants():
    rng = np.random.default_rng(21)
    for _ in range(300):
        spec = random_spec(rng, n=int(rng.integers(1, 5)))
        pair = StrategyPair(random_unitary(rng), random_unitary(rng))
        branches = [evolve_branch(spec, pair, k) for k in range(spec.n_ops)]
        for rho in branches:
            check_density(rho)
            assert is_pure(rho)
        mixed = evolve_mixed(spec, pair)
        check_density(mixed)
        assert purity(mixed) <= 1 + 1e-12
        assert np.allclose(mixed, sum(w * r for w, r in zip(spec.weights, branches)), atol=1e-9)
        assert np.linalg.norm(bloch_vector(mixed)) <= 1 + 1e-9
        for rho in branches:
            assert abs(np.linalg.norm(bloch_vector(rho)) - 1) < 1e-9


def test_fidelity_examples():
    assert math.isclose(fidelity(HEADS, HEADS), 1.0)
    assert math.isclose(fidelity(TAILS, HEADS), 0.0, abs_tol=1e-15)
    assert math.isclose(fidelity(PLUS_X, HEADS), 0.5)


def test_fidelity_requires_pure_reference():
    with pytest.raises(DomainError):
        fidelity(HEADS, 0.5 * IDENTITY)


def test_quantum_payoff_examples():
    assert quantum_payoff(HEADS, HEADS) == (-1.0, 1.0)
    assert quantum_payoff(TAILS, HEADS) == (1.0, -1.0)
    up, uq = quantum_payoff(PLUS_X, HEADS)
    assert abs(up) < 1e-15 and abs(uq) < 1e-15


@settings(max_examples=100, deadline=None)
@given(st.floats(0, 1))
def test_payoff_antisymmetry(t):
    rho = t * HEADS + (1 - t) * PLUS_Y
    up, uq = quantum_payoff(rho, HEADS)
    assert up + uq == 0


def test_bloch_vectors():
    assert np.allclose(bloch_vector(HEADS), [0, 0, 1])
    assert np.allclose(bloch_vector(PLUS_X), [1, 0, 0])
    assert np.allclose(bloch_vector(PLUS_Y), [0, 1, 0])


def test_bloch_trace_sigma13():
    trace = bloch_trace(sigma13_spec(), StrategyPair(EQ3_U1, EQ3_U2))
    for rho1, rho2, rho3 in trace:
        assert np.allclose(rho1, [0, -1, 0]) or np.allclose(rho1, [0, 1, 0])
        assert np.allclose(rho3, [0, 0, 1])
    # P always maps +y to -y
    assert np.allclose(trace[0][0], [0, 1, 0])
    assert np.allclose(trace[0][1], [0, -1, 0])
    assert np.allclose(trace[1][1], [0, -1, 0])


def test_simplex_grid():
    g = simplex_grid(2, 11)
    assert len(g) == 11
    assert g[0] == (0.0, 1.0) and g[-1] == (1.0, 0.0)
    g3 = simplex_grid(3, 5)
    assert len(g3) == math.comb(4 + 2, 2)
    assert all(abs(sum(w) - 1) < 1e-12 for w in g3)


def test_verify_meyer():
    rep = verify_strategy(meyer_spec(), StrategyPair(HADAMARD, HADAMARD))
    assert rep.won and rep.worst_fidelity >= 1 - 1e-12
    assert len(rep.grid_fidelities) == 11


def test_verify_meyer_identity_loses():
    rep = verify_strategy(meyer_spec(), StrategyPair(IDENTITY, IDENTITY))
    assert rep.verdict == "lose"
    assert rep.branch_fidelities[1] == 0.0


def test_verify_sigma13_eq3():
    assert verify_strategy(sigma13_spec(), StrategyPair(EQ3_U1, EQ3_U2)).won


def test_verify_rejects_tiny_grid():
    with pytest.raises(DomainError):
        verify_strategy(meyer_spec(), StrategyPair(IDENTITY, IDENTITY), grid_size=1)


def test_spec_validation():
    with pytest.raises(DomainError):
        GameSpec(HEADS, [SIGMA1], [0.5])
    with pytest.raises(DomainError):
        GameSpec(HEADS, [], [])
    with pytest.raises(DomainError):
        GameSpec(HEADS, [SIGMA1, 2 * SIGMA1], [0.5, 0.5])
    with pytest.raises(DomainError):
        GameSpec(np.diag([1.0, 1.0]), [SIGMA1], [1.0])
    with pytest.raises(DomainError):
        StrategyPair(IDENTITY, np.zeros((2, 2)))
