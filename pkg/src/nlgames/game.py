"""Games, behaviors and exact evaluation of winning probabilities.

A game is a referee's distribution over question tuples plus an acceptance
predicate.  A behavior is a conditional probability table over answer tuples.
All probabilities here are :class:`fractions.Fraction`; floating point only
shows up in the quantum modules.
"""
from __future__ import annotations

import itertools
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

QTuple = tuple[int, ...]
ATuple = tuple[int, ...]


class GameError(ValueError):
    """Raised on malformed input that cannot be reported as data."""


class BudgetError(RuntimeError):
    """Raised when a computation would exceed its configured size budget."""


@dataclass(frozen=True)
class Report:
    """Outcome of a validity check; violations are data, not exceptions."""

    violations: tuple[str, ...] = ()
    max_violation: Fraction = Fraction(0)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True, eq=False)
class Game:
    """An m-player one-round game.

    ``distribution`` maps question-index tuples to probabilities.  The
    predicate is either a table (``accept`` holds every accepted (q, a) pair)
    or an XOR rule (``xor_targets`` maps q to the required answer parity).
    Exactly one of the two is set.
    """

    players: int
    questions: tuple[str, ...]
    answers: tuple[str, ...]
    distribution: Mapping[QTuple, Fraction]
    accept: frozenset[tuple[QTuple, ATuple]] | None = None
    xor_targets: Mapping[QTuple, int] | None = None
    _accept_index: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        if (self.accept is None) == (self.xor_targets is None):
            raise GameError("exactly one of accept table or XOR targets must be given")
        if self.accept is not None:
            index: dict[QTuple, set[ATuple]] = defaultdict(set)
            for q, a in self.accept:
                index[q].add(a)
            object.__setattr__(self, "_accept_index", dict(index))

    @property
    def predicate_type(self) -> str:
        return "xor" if self.xor_targets is not None else "table"

    @property
    def n_questions(self) -> int:
        return len(self.questions)

    @property
    def n_answers(self) -> int:
        return len(self.answers)

    @property
    def shape(self) -> tuple[int, int, int]:
        return (self.players, self.n_questions, self.n_answers)

    def support(self) -> list[QTuple]:
        """Question tuples with nonzero probability, sorted."""
        return sorted(q for q, p in self.distribution.items() if p != 0)

    def player_support(self, i: int) -> list[int]:
        """Questions player ``i`` receives with nonzero probability."""
        return sorted({q[i] for q in self.support()})

    def answer_tuples(self) -> Iterable[ATuple]:
        return itertools.product(range(self.n_answers), repeat=self.players)

    def accepts(self, q: QTuple, a: ATuple) -> bool:
        if self.xor_targets is not None:
            b = self.xor_targets.get(q)
            return b is not None and sum(a) % 2 == b
        return a in self._accept_index.get(q, ())

    def accepted_answers(self, q: QTuple) -> list[ATuple]:
        return [a for a in self.answer_tuples() if self.accepts(q, a)]


@dataclass(frozen=True, eq=False)
class Behavior:
    """Conditional distribution S(a | q) stored sparsely.

    Zero entries are dropped; the behavior is defined on exactly the question
    tuples that carry at least one nonzero entry (see :attr:`domain`).
    """

    players: int
    n_questions: int
    n_answers: int
    table: Mapping[tuple[QTuple, ATuple], Fraction]

    @classmethod
    def from_entries(cls, shape, entries: Iterable[tuple[QTuple, ATuple, Fraction]]) -> "Behavior":
        m, nq, na = shape
        table: dict[tuple[QTuple, ATuple], Fraction] = {}
        for q, a, p in entries:
            p = Fraction(p)
            if p:
                key = (tuple(q), tuple(a))
                table[key] = table.get(key, Fraction(0)) + p
        return cls(m, nq, na, table)

    @property
    def shape(self) -> tuple[int, int, int]:
        return (self.players, self.n_questions, self.n_answers)

    @property
    def domain(self) -> list[QTuple]:
        return sorted({q for q, _ in self.table})

    def conditional(self, q: QTuple) -> dict[ATuple, Fraction]:
        return {a: p for (qq, a), p in self.table.items() if qq == q}

    def prob(self, q: QTuple, a: ATuple) -> Fraction:
        return self.table.get((q, a), Fraction(0))


def validate_game(g: Game) -> Report:
    violations: list[str] = []
    m, nq, na = g.shape
    if m < 1:
        violations.append(f"players must be positive, got {m}")
    if nq < 1 or na < 1:
        violations.append("question and answer alphabets must be nonempty")
    for q, p in g.distribution.items():
        if len(q) != m:
            violations.append(f"question tuple {list(q)} has arity {len(q)} != {m}")
        elif any(not 0 <= x < nq for x in q):
            violations.append(f"question tuple {list(q)} has an index out of range")
        if p < 0:
            violations.append(f"negative probability {p} at {list(q)}")
    # summing by distinct value keeps this cheap for games with huge uniform supports
    total = sum((p * c for p, c in Counter(g.distribution.values()).items()), Fraction(0))
    if total != 1:
        violations.append(f"distribution sums to {total} ≠ 1")
    if g.xor_targets is not None:
        if na != 2:
            violations.append("XOR rule requires binary answers")
        for q, b in g.xor_targets.items():
            if b not in (0, 1):
                violations.append(f"XOR target at {list(q)} must be 0 or 1, got {b}")
        for q in g.support():
            if q not in g.xor_targets:
                violations.append(f"XOR rule undefined on support tuple {list(q)}")
    else:
        for q, a in g.accept:
            if len(q) != m or len(a) != m:
                violations.append(f"accept entry ({list(q)}, {list(a)}) has wrong arity")
            elif any(not 0 <= x < na for x in a) or any(not 0 <= x < nq for x in q):
                violations.append(f"accept entry ({list(q)}, {list(a)}) has an index out of range")
    return Report(tuple(violations))


def _check_shape(g: Game, s: Behavior) -> None:
    if g.shape != s.shape:
        raise GameError("behavior shape incompatible with game")


def behavior_value(g: Game, s: Behavior) -> Fraction:
    """Exact winning probability  sum_q pi(q) sum_a S(a|q) V(a|q)."""
    _check_shape(g, s)
    by_q: dict[QTuple, list[tuple[ATuple, Fraction]]] = defaultdict(list)
    for (q, a), p in s.table.items():
        by_q[q].append((a, p))
    total = Fraction(0)
    for q, w in g.distribution.items():
        if w == 0:
            continue
        if q not in by_q:
            raise GameError("behavior shape incompatible with game")
        total += w * sum((p for a, p in by_q[q] if g.accepts(q, a)), Fraction(0))
    return total


def check_normalized(s: Behavior) -> Report:
    violations = []
    sums: dict[QTuple, Fraction] = defaultdict(Fraction)
    for (q, a), p in s.table.items():
        if not 0 <= p <= 1:
            violations.append(f"entry S({list(a)}|{list(q)}) = {p} outside [0,1]")
        sums[q] += p
    worst = Fraction(0)
    for q, t in sorted(sums.items()):
        if t != 1:
            violations.append(f"S(.|{list(q)}) sums to {t} ≠ 1")
            worst = max(worst, abs(t - 1))
    return Report(tuple(violations), worst)


def check_no_signaling(s: Behavior) -> Report:
    """Check that each player's answer cannot reveal its question to the others.

    For every player i and fixed (q_-i, a_-i) the marginal sum over a_i must
    not depend on q_i.  Only question tuples in the behavior's domain are
    compared.  The report lists the first violation found, and the largest
    discrepancy as ``max_violation``.
    """
    m = s.players
    domain = s.domain
    first = None
    worst = Fraction(0)
    for i in range(m):
        # marginals[(q_-i, a_-i)][q_i]
        marginals: dict[tuple, dict[int, Fraction]] = defaultdict(lambda: defaultdict(Fraction))
        for q in domain:
            rest_q = q[:i] + q[i + 1:]
            # make sure every (q_-i, a_-i) cell exists for q, even when zero
            for a_rest in itertools.product(range(s.n_answers), repeat=m - 1):
                marginals[(rest_q, a_rest)][q[i]] += 0
        for (q, a), p in s.table.items():
            marginals[(q[:i] + q[i + 1:], a[:i] + a[i + 1:])][q[i]] += p
        for (rest_q, rest_a), by_qi in sorted(marginals.items()):
            items = sorted(by_qi.items())
            for (x, px), (y, py) in itertools.combinations(items, 2):
                if px != py:
                    d = abs(px - py)
                    if d > worst:
                        worst = d
                    if first is None:
                        first = (
                            f"player {i}: q_-i={list(rest_q)} a_-i={list(rest_a)} "
                            f"marginal {px} at q_i={x} vs {py} at q_i={y}"
                        )
    return Report((first,) if first else (), worst)


def deterministic_behavior(g: Game, assignments: Sequence[Mapping[int, int]]) -> Behavior:
    """Behavior of players answering by fixed per-player lookup tables.

    The domain is the product of the questions each table covers; every
    support question of every player must be covered.
    """
    if len(assignments) != g.players:
        raise GameError(f"need {g.players} assignments, got {len(assignments)}")
    for i, table in enumerate(assignments):
        missing = set(g.player_support(i)) - set(table)
        if missing:
            raise GameError(f"assignment for player {i} misses questions {sorted(missing)}")
        if any(not 0 <= v < g.n_answers for v in table.values()):
            raise GameError(f"assignment for player {i} uses an answer out of range")
    keys = [sorted(t) for t in assignments]
    entries = {}
    for q in itertools.product(*keys):
        entries[(q, tuple(assignments[i][x] for i, x in enumerate(q)))] = Fraction(1)
    return Behavior(g.players, g.n_questions, g.n_answers, entries)


def mix_behaviors(s1: Behavior, s2: Behavior, lam: Fraction) -> Behavior:
    """Convex combination lam*s1 + (1-lam)*s2 over a shared domain."""
    if s1.shape != s2.shape or s1.domain != s2.domain:
        raise GameError("behaviors must share shape and domain")
    lam = Fraction(lam)
    keys = set(s1.table) | set(s2.table)
    return Behavior.from_entries(
        s1.shape, ((q, a, lam * s1.prob(q, a) + (1 - lam) * s2.prob(q, a)) for q, a in keys)
    )


def is_symmetric_game(g: Game) -> bool:
    m = g.players
    dist = {q: p for q, p in g.distribution.items() if p != 0}
    perms = list(itertools.permutations(range(m)))
    for q, p in dist.items():
        for sigma in perms:
            qs = tuple(q[sigma[j]] for j in range(m))
            if dist.get(qs, Fraction(0)) != p:
                return False
    for q in dist:
        for a in g.answer_tuples():
            v = g.accepts(q, a)
            for sigma in perms:
                qs = tuple(q[sigma[j]] for j in range(m))
                as_ = tuple(a[sigma[j]] for j in range(m))
                if g.accepts(qs, as_) != v:
                    return False
    return True


@dataclass(frozen=True)
class XorCheck:
    """Result of :func:`extract_xor_rule`: targets on success, else a witness."""

    targets: dict[QTuple, int] | None
    witness: tuple[QTuple, ATuple, ATuple] | None = None
    reason: str = ""

    @property
    def ok(self) -> bool:
        return self.targets is not None


def extract_xor_rule(g: Game) -> XorCheck:
    """Recover target parities b(q) if acceptance depends only on the answer XOR."""
    if g.n_answers != 2:
        raise GameError("XOR rule requires binary answers")
    targets: dict[QTuple, int] = {}
    for q in g.support():
        verdict: dict[int, tuple[ATuple, bool]] = {}
        for a in g.answer_tuples():
            par = sum(a) % 2
            v = g.accepts(q, a)
            if par in verdict and verdict[par][1] != v:
                return XorCheck(None, (q, verdict[par][0], a), "verdict differs at equal parity")
            verdict.setdefault(par, (a, v))
        even, odd = verdict[0], verdict.get(1, verdict[0])
        if even[1] == odd[1]:
            # both or neither parity accepted: not expressible as one target
            return XorCheck(None, (q, even[0], odd[0]), "verdict independent of parity")
        targets[q] = 0 if even[1] else 1
    return XorCheck(targets)


def xor_game(players: int, questions, distribution, targets, answers=("0", "1")) -> Game:
    return Game(
        players,
        tuple(questions),
        tuple(answers),
        {tuple(q): Fraction(p) for q, p in distribution.items()},
        xor_targets={tuple(q): int(b) for q, b in targets.items()},
    )


def table_game(players: int, questions, answers, distribution, accept) -> Game:
    return Game(
        players,
        tuple(questions),
        tuple(answers),
        {tuple(q): Fraction(p) for q, p in distribution.items()},
        accept=frozenset((tuple(q), tuple(a)) for q, a in accept),
    )


def with_table_predicate(g: Game) -> Game:
    """Same game with the predicate spelled out as an accept table."""
    accept = [(q, a) for q in g.support() for a in g.answer_tuples() if g.accepts(q, a)]
    return table_game(g.players, g.questions, g.answers, dict(g.distribution), accept)
