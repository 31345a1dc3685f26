from fractions import Fraction

import pytest

from nlgames.catalog import (
    LatinSquare,
    cell_index,
    chsh_game,
    cyclic_latin,
    ghz_verifier_table,
    ms_game,
    ms_game_with_assignment,
    order4_noncyclic_latin,
)
from nlgames.classical import classical_value
from nlgames.game import GameError, extract_xor_rule, is_symmetric_game, validate_game


def test_cyclic_2():
    assert cyclic_latin(2).cells == ((1, 2), (2, 1))


def test_cyclic_4_rows_shift():
    sq = cyclic_latin(4)
    assert sq.cells[0] == (1, 2, 3, 4)
    assert sq.cells[1] == (4, 1, 2, 3)
    assert sq.cells == ((1, 2, 3, 4), (4, 1, 2, 3), (3, 4, 1, 2), (2, 3, 4, 1))


@pytest.mark.parametrize("n", [2, 3, 5, 7])
def test_cyclic_is_latin(n):
    sq = cyclic_latin(n)
    for row in sq.cells:
        assert sorted(row) == list(range(1, n + 1))
    for k in range(n):
        assert sorted(r[k] for r in sq.cells) == list(range(1, n + 1))


def test_order_too_small():
    with pytest.raises(GameError):
        cyclic_latin(1)
    with pytest.raises(GameError):
        ms_game(1)


def test_noncyclic():
    sq = order4_noncyclic_latin()
    assert sq.cells[1] == (2, 1, 4, 3)
    assert sq != cyclic_latin(4)


def test_latin_invariant_enforced():
    with pytest.raises(GameError):
        LatinSquare(((1, 2), (1, 2)))


def test_latin_json_round_trip():
    sq = order4_noncyclic_latin()
    assert LatinSquare.from_json(sq.to_json()) == sq


def test_ms2_support():
    g = ms_game(2)
    assert len(g.support()) == 8
    assert set(g.distribution.values()) == {Fraction(1, 8)}
    col2 = {cell_index(2, 1, 2), cell_index(2, 2, 2)}
    targets = extract_xor_rule(g).targets
    assert {q for q, b in targets.items() if b == 1} == {q for q in g.support() if set(q) == col2}


def test_ms3_symmetric():
    assert is_symmetric_game(ms_game(3))


def test_ms_with_assignment_supports():
    g = ms_game_with_assignment(cyclic_latin(3))
    sq = cyclic_latin(3)
    for i in range(3):
        cells = {cell_index(3, j, k) for j in range(1, 4) for k in range(1, 4) if sq.player(j, k) == i + 1}
        assert set(g.player_support(i)) == cells


@pytest.mark.parametrize("sq", [cyclic_latin(2), cyclic_latin(3), cyclic_latin(4), order4_noncyclic_latin()])
def test_assignment_support_sizes(sq):
    g = ms_game_with_assignment(sq)
    n = sq.order
    assert len(g.support()) == 2 * n
    assert all(p == Fraction(1, 2 * n) for p in g.distribution.values())
    for i in range(n):
        assert len(g.player_support(i)) == n


@pytest.mark.parametrize("n", [2, 3, 4])
def test_same_lines_and_targets(n):
    a, b = ms_game(n), ms_game_with_assignment(cyclic_latin(n))
    assert a.questions == b.questions and a.answers == b.answers
    ta, tb = extract_xor_rule(a).targets, extract_xor_rule(b).targets
    assert {(frozenset(q), t) for q, t in ta.items()} == {(frozenset(q), t) for q, t in tb.items()}


def test_catalog_games_valid():
    games = [chsh_game(), ms_game(2), ms_game(3), ms_game(4)]
    games += [ms_game_with_assignment(cyclic_latin(n)) for n in (2, 3, 4, 5)]
    games.append(ms_game_with_assignment(order4_noncyclic_latin()))
    for g in games:
        assert validate_game(g).ok


def test_chsh_shape_and_value():
    g = chsh_game()
    assert g.players == 2 and g.n_questions == 4 and g.n_answers == 2
    assert classical_value(g)[0] == Fraction(3, 4)
    assert extract_xor_rule(g).ok


def test_ghz_table():
    t = ghz_verifier_table()
    assert len(t.checks) == 4
    assert sum(c.weight for c in t.checks) == 1
    assert [c.positions for c in t.checks] == [(1, 3, 5), (1, 4, 6), (2, 3, 6), (2, 4, 5)]
    from oracles import ghz_formula_best

    assert t.soundness() == Fraction(ghz_formula_best(), 4) == Fraction(3, 4)
