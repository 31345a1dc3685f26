import itertools
import math
from functools import reduce

import numpy as np
import pytest

from nlgames.catalog import cell_index, chsh_game, cyclic_latin, ms_game, ms_game_with_assignment
from nlgames.game import BudgetError, GameError, check_no_signaling, check_normalized, table_game
from nlgames.linalg import random_observable, random_state
from nlgames.quantum import (
    GlobalStrategy,
    QuantumError,
    TensorStrategy,
    commutation_defect,
    expectation_product,
    extract_classical,
    global_strategy_value,
    magic_angle,
    magic_square_strategy,
    phi_state,
    strategy_value,
    symmetrize,
    symmetry_defect,
    tensor_expectation,
    z_theta,
)


def dense_expectation(state, ops):
    """Oracle: build the full Kronecker product."""
    return complex(np.vdot(state, reduce(np.kron, ops) @ state))


def brute_value(g, s):
    """Oracle: sum accepted answer probabilities with dense Kronecker products."""
    total = 0.0
    for q, p in g.distribution.items():
        for a in g.answer_tuples():
            if g.accepts(q, a):
                ops = [s.pvm[(i, x)] if b == 0 else np.eye(s.dims[i]) - s.pvm[(i, x)]
                       for i, (x, b) in enumerate(zip(q, a))]
                total += float(p) * dense_expectation(s.state, ops).real
    return total


class TestPhi:
    @pytest.mark.parametrize("n", range(1, 8))
    def test_normalized(self, n):
        assert np.linalg.norm(phi_state(n)) == pytest.approx(1, abs=1e-14)

    def test_phi2(self):
        np.testing.assert_allclose(phi_state(2), np.array([1, 0, 0, -1]) / math.sqrt(2))

    def test_phi3_signs(self):
        v = phi_state(3).real * 2
        assert v[0] == pytest.approx(1)
        assert all(v[x] == pytest.approx(-1) for x in (3, 5, 6))
        assert all(v[x] == 0 for x in (1, 2, 4, 7))

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_product_expectation_vs_dense(self, n):
        rng = np.random.default_rng(n)
        th = rng.uniform(-3, 3, size=n)
        got = expectation_product(phi_state(n), th)
        want = dense_expectation(phi_state(n), [z_theta(t) for t in th]).real
        assert got == pytest.approx(want, abs=1e-12)
        assert got == pytest.approx(math.cos(th.sum()), abs=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(QuantumError):
            expectation_product(phi_state(2), [0.1, 0.2, 0.3])


def test_z_theta():
    for t in (0.0, 0.3, -1.2, math.pi / 2):
        z = z_theta(t)
        np.testing.assert_allclose(z @ z, np.eye(2), atol=1e-15)
        np.testing.assert_allclose(z, z.conj().T)
    np.testing.assert_allclose(z_theta(0), np.diag([1, -1]))


def test_magic_angles():
    n = 4
    assert magic_angle(n, 1, 1) == 0
    assert magic_angle(n, 2, 4) == pytest.approx(math.pi / 8)
    assert magic_angle(n, 4, 3) == pytest.approx(-math.pi / 8)
    assert magic_angle(n, 4, 4) == pytest.approx(math.pi / 2)


@pytest.mark.parametrize("n", [2, 3])
def test_magic_square_value(n):
    want = (1 + math.cos(math.pi / (2 * n))) / 2
    s = magic_square_strategy(n)
    for g in (ms_game(n), ms_game_with_assignment(cyclic_latin(n))):
        assert strategy_value(g, s) == pytest.approx(want, abs=1e-12)
    assert brute_value(ms_game_with_assignment(cyclic_latin(n)), s) == pytest.approx(want, abs=1e-12)


@pytest.mark.parametrize("seed", range(4))
def test_table_path_matches_dense(seed):
    rng = np.random.default_rng(seed)
    g = ms_game_with_assignment(cyclic_latin(3))
    obs = {(i, q): random_observable(2, rng) for i in range(3) for q in g.player_support(i)}
    s = TensorStrategy.from_observables((2, 2, 2), random_state(8, rng), obs)
    # same game as an explicit table exercises the projector path
    t = table_game(3, g.questions, g.answers, dict(g.distribution),
                   [(q, a) for q in g.support() for a in g.accepted_answers(q)])
    v = strategy_value(g, s)
    assert strategy_value(t, s) == pytest.approx(v, abs=1e-12)
    assert brute_value(g, s) == pytest.approx(v, abs=1e-12)


def test_tensor_expectation_mixed_dims():
    rng = np.random.default_rng(9)
    dims = (2, 3, 1, 2)
    state = random_state(12, rng)
    ops = [random_observable(d, rng) for d in dims]
    want = dense_expectation(state, ops)
    assert tensor_expectation(state, dims, ops) == pytest.approx(want, abs=1e-12)
    ops[1] = None
    want = dense_expectation(state, [o if o is not None else np.eye(3) for o in ops])
    assert tensor_expectation(state, dims, ops) == pytest.approx(want, abs=1e-12)


def test_missing_measurement(chsh):
    s = TensorStrategy.from_observables((2, 2), phi_state(2), {(0, 0): np.eye(2)})
    with pytest.raises(GameError):
        strategy_value(chsh, s)


def test_invalid_pvm_and_state():
    with pytest.raises(QuantumError):
        TensorStrategy((2,), np.array([1, 0]), {(0, 0): np.array([[1, 1], [0, 0]])})
    with pytest.raises(QuantumError):
        TensorStrategy((2,), np.array([1, 1]), {})


class TestGlobal:
    def test_matches_tensor(self):
        s = magic_square_strategy(3)
        g = ms_game_with_assignment(cyclic_latin(3))
        v, disc = global_strategy_value(g, s.to_global(), diagnostic=True)
        assert v == pytest.approx(strategy_value(g, s), abs=1e-12)
        assert disc < 1e-12

    def test_rejects_noncommuting(self):
        x = np.array([[0, 1], [1, 0]])
        z = np.diag([1, -1])
        p = lambda o: (np.eye(2) + o) / 2
        s = GlobalStrategy(2, np.array([1, 0]), {(0, 0): p(x), (1, 0): p(z)})
        assert commutation_defect(s)[0] > 0.4
        g = table_game(2, ["a"], ["0", "1"], {(0, 0): 1}, [((0, 0), (0, 0))])
        with pytest.raises(QuantumError):
            global_strategy_value(g, s)


class TestSymmetrize:
    def setup_method(self):
        self.n = 3
        self.g = ms_game(3)
        self.base = magic_square_strategy(3).to_global()

    def test_value_preserved(self):
        sym = symmetrize(self.base)
        assert sym.dim == 8 * 6
        want = (1 + math.cos(math.pi / 6)) / 2
        assert global_strategy_value(self.g, sym) == pytest.approx(want, abs=1e-12)

    def test_commutation_and_symmetry(self):
        sym = symmetrize(self.base)
        assert commutation_defect(sym)[0] < 1e-9
        sd, od = symmetry_defect(sym, 8)
        assert sd < 1e-12 and od < 1e-12

    def test_random_asymmetric_strategy(self):
        rng = np.random.default_rng(5)
        g = chsh_game()
        obs = {(i, q): random_observable(2, rng) for i in range(2) for q in range(4)}
        base = TensorStrategy.from_observables((2, 2), random_state(4, rng), obs).to_global()
        sym = symmetrize(base)
        sd, od = symmetry_defect(sym, 4)
        assert sd < 1e-12 and od < 1e-12
        # averaging the player-swapped strategies
        swapped = {(1 - i, q): p for (i, q), p in base.pvm.items()}
        # swap tensor factors of the state too
        st = base.state.reshape(2, 2).T.ravel()
        flip = np.kron(np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]]), np.eye(1))
        swapped = {k: flip @ p @ flip for k, p in swapped.items()}
        other = GlobalStrategy(2, st, swapped)
        want = (global_strategy_value(g, base) + global_strategy_value(g, other)) / 2
        assert global_strategy_value(g, sym) == pytest.approx(want, abs=1e-12)

    def test_budget(self):
        with pytest.raises(BudgetError):
            symmetrize(self.base, max_dim=10)


class TestExtractClassical:
    def test_diagonal_projectors(self):
        # two players on a 2-qubit computational-basis state mixture
        rng = np.random.default_rng(0)
        amps = rng.random(4)
        state = np.sqrt(amps / amps.sum())
        z0 = np.kron(np.diag([1, 0]), np.eye(2))
        z1 = np.kron(np.eye(2), np.diag([1, 0]))
        s = GlobalStrategy(2, state, {(0, 0): z0, (0, 1): np.eye(4), (1, 0): z1, (1, 1): z0})
        ex = extract_classical(s)
        assert check_normalized(ex.behavior).ok
        assert check_no_signaling(ex.behavior).max_violation == 0
        p = amps / amps.sum()
        # P(a0 = 0, a1 = 0 | q = (0, 0)) = |00> weight
        assert float(ex.behavior.prob((0, 0), (0, 0))) == pytest.approx(p[0], abs=1e-11)
        assert float(ex.behavior.prob((1, 1), (0, 1))) == pytest.approx(p[2] + p[3], abs=1e-11)
        assert sum(ex.distribution.values()) == pytest.approx(1, abs=1e-12)

    def test_rejects_noncommuting_same_player(self):
        x = np.array([[0, 1], [1, 0]])
        p = lambda o: (np.eye(2) + o) / 2
        s = GlobalStrategy(1, np.array([1, 0]), {(0, 0): p(x), (0, 1): p(np.diag([1, -1]))})
        with pytest.raises(QuantumError):
            extract_classical(s)

    def test_budget(self):
        s = GlobalStrategy(1, np.array([1.0]), {(0, q): np.eye(1) for q in range(5)})
        with pytest.raises(BudgetError):
            extract_classical(s, max_tables=16)
