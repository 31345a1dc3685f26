import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nlgames.catalog import chsh_game, cyclic_latin, ms_game, ms_game_with_assignment
from nlgames.classical import classical_value
from nlgames.game import (
    Behavior,
    GameError,
    behavior_value,
    check_no_signaling,
    check_normalized,
    deterministic_behavior,
    extract_xor_rule,
    is_symmetric_game,
    mix_behaviors,
    table_game,
    validate_game,
    xor_game,
)
from oracles import chsh_direct_value, random_game


def always_accept(players=2, nq=2):
    qs = list(itertools.product(range(nq), repeat=players))
    dist = {q: Fraction(1, len(qs)) for q in qs}
    accept = [(q, a) for q in qs for a in itertools.product(range(2), repeat=players)]
    return table_game(players, [str(i) for i in range(nq)], ["0", "1"], dist, accept)


def uniform_behavior(g):
    qs = itertools.product(range(g.n_questions), repeat=g.players)
    na = g.n_answers**g.players
    return Behavior.from_entries(
        g.shape,
        ((q, a, Fraction(1, na)) for q in qs for a in itertools.product(range(g.n_answers), repeat=g.players)),
    )


class TestValidate:
    def test_chsh_ok(self, chsh):
        assert validate_game(chsh).ok

    def test_distribution_sum(self):
        g = xor_game(2, ["a", "b"], {(0, 0): Fraction(1, 2), (1, 1): Fraction(1, 4)}, {(0, 0): 0, (1, 1): 1})
        rep = validate_game(g)
        assert not rep.ok
        assert "distribution sums to 3/4 ≠ 1" in rep.violations

    def test_xor_needs_binary(self):
        g = xor_game(2, ["a"], {(0, 0): 1}, {(0, 0): 0}, answers=("0", "1", "2"))
        assert "XOR rule requires binary answers" in validate_game(g).violations

    def test_bad_arity_and_range(self):
        g = xor_game(2, ["a"], {(0,): Fraction(1, 2), (0, 3): Fraction(1, 2)}, {(0, 3): 0})
        v = validate_game(g).violations
        assert any("arity" in x for x in v)
        assert any("out of range" in x for x in v)

    def test_missing_target(self):
        g = xor_game(2, ["a", "b"], {(0, 0): Fraction(1, 2), (0, 1): Fraction(1, 2)}, {(0, 0): 0})
        assert any("undefined" in x for x in validate_game(g).violations)

    def test_needs_one_predicate(self):
        from nlgames.game import Game

        with pytest.raises(GameError):
            Game(1, ("a",), ("0", "1"), {(0,): Fraction(1)})


class TestBehaviorValue:
    def test_always_accept_uniform(self):
        g = always_accept()
        assert behavior_value(g, uniform_behavior(g)) == 1

    def test_chsh_all_zeros(self, chsh):
        zeros = [{q: 0 for q in range(4)}, {q: 0 for q in range(4)}]
        expected = chsh_direct_value((0, 0), (0, 0))
        assert expected == Fraction(3, 4)
        assert behavior_value(chsh, deterministic_behavior(chsh, zeros)) == expected

    def test_ms2_cyclic_best_deterministic(self, ms2_cyclic):
        _, profile = classical_value(ms2_cyclic)
        s = deterministic_behavior(ms2_cyclic, profile.assignments)
        assert behavior_value(ms2_cyclic, s) == Fraction(3, 4)

    def test_shape_mismatch(self, chsh):
        s = Behavior.from_entries((3, 4, 2), [((0, 0, 0), (0, 0, 0), 1)])
        with pytest.raises(GameError, match="behavior shape incompatible with game"):
            behavior_value(chsh, s)

    def test_missing_support_tuple(self, chsh):
        s = Behavior.from_entries(chsh.shape, [((0, 1), (0, 0), 1)])
        with pytest.raises(GameError, match="incompatible"):
            behavior_value(chsh, s)

    def test_chsh_all_deterministic_match_direct(self, chsh):
        # CHSH cells: player 0 asked (1,1)->x=0 or (2,2)->x=1, player 1 asked (1,2)->y=0, (2,1)->y=1
        # (2,2) and (2,1) lie on column 1 / row 2; column 2 = {(1,2),(2,2)} is the odd line
        for fa in itertools.product((0, 1), repeat=2):
            for fb in itertools.product((0, 1), repeat=2):
                prof = [{0: fa[0], 3: fa[1]}, {1: fb[0], 2: fb[1]}]
                v = behavior_value(chsh, deterministic_behavior(chsh, prof))
                assert v in (Fraction(1, 4), Fraction(3, 4))


class TestNoSignaling:
    def test_deterministic_ok(self, chsh):
        s = deterministic_behavior(chsh, [{0: 1, 3: 0}, {1: 1, 2: 1}])
        assert check_no_signaling(s).ok
        assert check_normalized(s).ok

    def test_ms3_cyclic_any_assignment(self, ms3_cyclic):
        rng = random.Random(3)
        for _ in range(10):
            prof = [{q: rng.randint(0, 1) for q in ms3_cyclic.player_support(i)} for i in range(3)]
            assert check_no_signaling(deterministic_behavior(ms3_cyclic, prof)).ok

    def test_signaling_counterexample(self):
        # player 0 answers player 1's question
        entries = [((x, y), (y, 0), 1) for x in (0, 1) for y in (0, 1)]
        s = Behavior.from_entries((2, 2, 2), entries)
        rep = check_no_signaling(s)
        assert not rep.ok
        assert rep.violations[0].startswith("player 1")
        assert rep.max_violation == 1

    def test_deterministic_one_unit_per_tuple(self, chsh):
        s = deterministic_behavior(chsh, [{q: 0 for q in range(4)}] * 2)
        for q in s.domain:
            assert list(s.conditional(q).values()) == [1]

    def test_incomplete_assignment(self, chsh):
        with pytest.raises(GameError):
            deterministic_behavior(chsh, [{0: 0}, {1: 0, 2: 0}])


class TestSymmetry:
    def test_ms3_random_routing(self, ms3):
        assert is_symmetric_game(ms3)

    def test_ms3_cyclic(self, ms3_cyclic):
        assert not is_symmetric_game(ms3_cyclic)

    def test_single_player(self):
        g = xor_game(1, ["a", "b"], {(0,): Fraction(1, 2), (1,): Fraction(1, 2)}, {(0,): 0, (1,): 1})
        assert is_symmetric_game(g)

    def test_asymmetric_predicate(self):
        g = table_game(2, ["a"], ["0", "1"], {(0, 0): 1}, [((0, 0), (0, 1))])
        assert not is_symmetric_game(g)


class TestXorRule:
    @pytest.mark.parametrize("n", [2, 3])
    def test_ms_targets(self, n):
        from nlgames.catalog import cell_index

        last_col = {cell_index(n, j, n) for j in range(1, n + 1)}
        for g in (ms_game(n), ms_game_with_assignment(cyclic_latin(n))):
            check = extract_xor_rule(g)
            assert check.ok
            for q, b in check.targets.items():
                assert b == (1 if set(q) == last_col else 0)

    def test_chsh(self, chsh):
        assert extract_xor_rule(chsh).ok

    def test_not_xor(self):
        g = table_game(2, ["a"], ["0", "1"], {(0, 0): 1}, [((0, 0), (0, 0))])
        check = extract_xor_rule(g)
        assert not check.ok
        q, a, a2 = check.witness
        assert q == (0, 0) and sum(a) % 2 == sum(a2) % 2 and {a, a2} == {(0, 0), (1, 1)}

    def test_non_binary(self):
        g = table_game(2, ["a"], ["0", "1", "2"], {(0, 0): 1}, [])
        with pytest.raises(GameError):
            extract_xor_rule(g)

    def test_round_trip(self, ms3):
        check = extract_xor_rule(ms3)
        rebuilt = xor_game(3, ms3.questions, dict(ms3.distribution), check.targets)
        for q in ms3.support()[:50]:
            for a in ms3.answer_tuples():
                assert rebuilt.accepts(q, a) == ms3.accepts(q, a)


@st.composite
def game_and_behaviors(draw):
    seed = draw(st.integers(0, 10**6))
    rng = random.Random(seed)
    g = random_game(rng, players=2, nq=2)
    qs = list(itertools.product(range(2), repeat=2))

    def behavior():
        entries = []
        for q in qs:
            raw = [rng.randint(0, 5) for _ in range(4)]
            if not any(raw):
                raw[0] = 1
            t = sum(raw)
            for a, w in zip(itertools.product(range(2), repeat=2), raw):
                entries.append((q, a, Fraction(w, t)))
        return Behavior.from_entries(g.shape, entries)

    lam = Fraction(draw(st.integers(0, 12)), 12)
    return g, behavior(), behavior(), lam


@settings(max_examples=60, deadline=None)
@given(game_and_behaviors())
def test_behavior_value_linear_and_bounded(data):
    g, s1, s2, lam = data
    v1, v2 = behavior_value(g, s1), behavior_value(g, s2)
    assert 0 <= v1 <= 1
    assert behavior_value(g, mix_behaviors(s1, s2, lam)) == lam * v1 + (1 - lam) * v2
