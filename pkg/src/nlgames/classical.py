"""Exact classical values by deterministic-strategy enumeration, and the
polynomial-time value-one test for two-player binary games."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .game import BudgetError, Game, GameError

DEFAULT_BUDGET = 2**30
_CHUNK = 4096


@dataclass(frozen=True)
class StrategyProfile:
    """Per-player answer tables, each covering exactly that player's support."""

    assignments: tuple[dict[int, int], ...]

    def to_json(self, g: Game | None = None) -> list:
        out = []
        for table in self.assignments:
            if g is None:
                out.append({str(q): a for q, a in sorted(table.items())})
            else:
                out.append({g.questions[q]: g.answers[a] for q, a in sorted(table.items())})
        return out


def profile_count(g: Game) -> int:
    return math.prod(g.n_answers ** len(g.player_support(i)) for i in range(g.players))


def _digits(idx: np.ndarray, base: int, width: int) -> np.ndarray:
    """Most-significant-first base-``base`` digits of each entry of ``idx``."""
    out = np.empty(idx.shape + (width,), dtype=np.int64)
    rem = idx.copy()
    for pos in range(width - 1, -1, -1):
        out[..., pos] = rem % base
        rem //= base
    return out


def classical_value(g: Game, budget: int = DEFAULT_BUDGET) -> tuple[Fraction, StrategyProfile]:
    """Maximum winning probability over deterministic profiles.

    Profiles are ordered lexicographically (player 0 most significant, each
    player's support questions in increasing order); the witness is the first
    maximizer in that order.  The last player's answers are chosen by best
    response, which is exact because the value separates over its questions.
    """
    m, _, na = g.shape
    count = profile_count(g)
    if count > budget:
        raise BudgetError(f"classical enumeration needs {count} profiles, budget is {budget}")

    support = g.support()
    supports = [g.player_support(i) for i in range(m)]
    pos = [{x: j for j, x in enumerate(s)} for s in supports]
    T = len(support)
    weights = [g.distribution[q] for q in support]
    den = math.lcm(*(w.denominator for w in weights))
    iw = [int(w * den) for w in weights]
    # python ints when the common denominator would overflow int64 sums
    dtype = np.int64 if den * T < 2**62 else object
    W = np.array(iw, dtype=dtype)

    n_ans = na**m
    acc = np.zeros((T, n_ans), dtype=bool)
    for t, q in enumerate(support):
        for a in g.accepted_answers(q):
            flat = 0
            for x in a:
                flat = flat * na + x
            acc[t, flat] = True

    # position of each tuple's question within each player's support
    qpos = np.array([[pos[i][q[i]] for i in range(m)] for q in support], dtype=np.int64).reshape(T, m)
    k_last = len(supports[-1])
    onehot = np.zeros((T, k_last), dtype=dtype)
    onehot[np.arange(T), qpos[:, m - 1]] = 1

    radix = [na ** len(s) for s in supports[:-1]]
    n_prefix = math.prod(radix)

    best_val = -1
    best_prefix = None
    best_last = None
    for start in range(0, n_prefix, _CHUNK):
        idx = np.arange(start, min(start + _CHUNK, n_prefix), dtype=np.int64)
        C = len(idx)
        base = np.zeros((C, T), dtype=np.int64)
        rem = idx.copy()
        per_player = []
        for i in range(m - 2, -1, -1):
            per_player.append(rem % radix[i])
            rem //= radix[i]
        per_player.reverse()
        for i in range(m - 1):
            digs = _digits(per_player[i], na, len(supports[i]))  # (C, k_i)
            base = base * na + digs[:, qpos[:, i]]
        # score[c, a_last, x] = sum over tuples t with q_last(t)=x of W[t]*accept
        rows = np.arange(T)
        scores = []
        for a_last in range(na):
            hit = acc[rows[None, :], base * na + a_last]  # (C, T)
            scores.append((hit * W[None, :]) @ onehot)  # (C, k_last)
        scores = np.stack(scores, axis=1)  # (C, na, k_last)
        choice = scores.argmax(axis=1)  # first maximal answer per question
        totals = scores.max(axis=1).sum(axis=1)
        c = int(np.argmax(totals))
        if totals[c] > best_val:
            best_val = totals[c]
            best_prefix = [int(p[c]) for p in per_player]
            best_last = [int(x) for x in choice[c]]

    assignments = []
    for i in range(m - 1):
        digs = _digits(np.array([best_prefix[i]]), na, len(supports[i]))[0]
        assignments.append({x: int(d) for x, d in zip(supports[i], digs)})
    assignments.append({x: a for x, a in zip(supports[-1], best_last)})
    return Fraction(int(best_val), den), StrategyProfile(tuple(assignments))


class ValueOne(enum.Enum):
    ONE = "ONE"
    LESS_THAN_ONE = "LESS_THAN_ONE"


@dataclass(frozen=True)
class ValueOneDecision:
    decision: ValueOne
    profile: StrategyProfile | None = None
    # for LESS_THAN_ONE: either a tuple rejecting every answer pair, or a
    # (player, question) variable forced both ways by the clauses
    conflict: dict | None = None

    @property
    def value_one(self) -> bool:
        return self.decision is ValueOne.ONE


def _kosaraju(n: int, adj: list[list[int]]) -> list[int]:
    """Strongly connected components; ids are in topological order of the condensation."""
    order: list[int] = []
    seen = [False] * n
    for root in range(n):
        if seen[root]:
            continue
        seen[root] = True
        stack = [(root, iter(adj[root]))]
        while stack:
            v, it = stack[-1]
            for w in it:
                if not seen[w]:
                    seen[w] = True
                    stack.append((w, iter(adj[w])))
                    break
            else:
                stack.pop()
                order.append(v)
    radj: list[list[int]] = [[] for _ in range(n)]
    for v in range(n):
        for w in adj[v]:
            radj[w].append(v)
    comp = [-1] * n
    c = 0
    for root in reversed(order):
        if comp[root] != -1:
            continue
        comp[root] = c
        stack = [root]
        while stack:
            v = stack.pop()
            for w in radj[v]:
                if comp[w] == -1:
                    comp[w] = c
                    stack.append(w)
        c += 1
    return comp


def decide_value_one_2p_binary(g: Game) -> ValueOneDecision:
    """Decide whether a two-player binary game can be won with certainty.

    One boolean per (player, support question); every rejected answer pair
    on a support tuple forbids that combination, giving a 2SAT instance
    solved through implication-graph SCCs.
    """
    if g.players != 2 or g.n_answers != 2:
        raise GameError("value-one decider needs exactly two players with binary answers")
    supports = [g.player_support(0), g.player_support(1)]
    var = {}
    for i in range(2):
        for x in supports[i]:
            var[(i, x)] = len(var)
    nv = len(var)
    # literal 2v means "answer 1", 2v+1 means "answer 0"
    def lit(v: int, answer: int) -> int:
        return 2 * v if answer == 1 else 2 * v + 1

    adj: list[list[int]] = [[] for _ in range(2 * nv)]
    for q in g.support():
        ok = g.accepted_answers(q)
        if not ok:
            return ValueOneDecision(
                ValueOne.LESS_THAN_ONE, conflict={"empty_clause": list(q)}
            )
        v1, v2 = var[(0, q[0])], var[(1, q[1])]
        for a1 in (0, 1):
            for a2 in (0, 1):
                if (a1, a2) in ok:
                    continue
                # clause (x1 != a1) or (x2 != a2)
                adj[lit(v1, a1)].append(lit(v2, 1 - a2))
                adj[lit(v2, a2)].append(lit(v1, 1 - a1))
    comp = _kosaraju(2 * nv, adj)
    inv = {v: k for k, v in var.items()}
    for v in range(nv):
        if comp[2 * v] == comp[2 * v + 1]:
            player, x = inv[v]
            return ValueOneDecision(
                ValueOne.LESS_THAN_ONE, conflict={"player": player, "question": x}
            )
    # a literal is true when its component comes later in topological order
    tables: tuple[dict[int, int], dict[int, int]] = ({}, {})
    for (i, x), v in var.items():
        tables[i][x] = 1 if comp[2 * v] > comp[2 * v + 1] else 0
    return ValueOneDecision(ValueOne.ONE, profile=StrategyProfile(tables))
