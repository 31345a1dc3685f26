"""Three-prover games compiled from 3-query non-adaptive PCP verifiers."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .game import Game, GameError, table_game

Bits = tuple[int, int, int]


@dataclass(frozen=True)
class Check:
    weight: Fraction
    positions: tuple[int, int, int]  # 1-based proof positions
    accepted: frozenset[Bits]


@dataclass(frozen=True)
class PcpVerifierTable:
    """Weighted list of checks; each reads three distinct proof positions."""

    proof_length: int
    r_bits: int
    checks: tuple[Check, ...]

    def __post_init__(self):
        total = Fraction(0)
        for c in self.checks:
            if c.weight < 0:
                raise GameError(f"negative check weight {c.weight}")
            if len(set(c.positions)) != 3:
                raise GameError(f"check positions {c.positions} are not distinct")
            if any(not 1 <= p <= self.proof_length for p in c.positions):
                raise GameError(f"check positions {c.positions} outside 1..{self.proof_length}")
            if any(len(b) != 3 or set(b) - {0, 1} for b in c.accepted):
                raise GameError("accepted answers must be bit triples")
            total += c.weight
        if total != 1:
            raise GameError(f"check weights sum to {total} ≠ 1")

    def acceptance(self, proof: Sequence[int]) -> Fraction:
        """Probability that the verifier accepts a proof string (proof[0] is position 1)."""
        return sum(
            (c.weight for c in self.checks if tuple(proof[p - 1] for p in c.positions) in c.accepted),
            Fraction(0),
        )

    def soundness(self) -> Fraction:
        """Best acceptance over all proof strings (brute force)."""
        return max(self.acceptance(p) for p in itertools.product((0, 1), repeat=self.proof_length))

    def to_json(self) -> dict:
        return {
            "proof_length": self.proof_length,
            "r_bits": self.r_bits,
            "checks": [
                {
                    "p": [c.weight.numerator, c.weight.denominator],
                    "q": list(c.positions),
                    "accept": [list(b) for b in sorted(c.accepted)],
                }
                for c in self.checks
            ],
        }

    @classmethod
    def from_json(cls, d) -> "PcpVerifierTable":
        from .io import load_json, parse_frac

        d = load_json(d)
        try:
            checks = tuple(
                Check(
                    parse_frac(c["p"]),
                    tuple(int(x) for x in c["q"]),
                    frozenset(tuple(int(x) for x in b) for b in c["accept"]),
                )
                for c in d["checks"]
            )
            return cls(int(d["proof_length"]), int(d.get("r_bits", 0)), checks)
        except (KeyError, TypeError) as exc:
            raise GameError(f"malformed verifier JSON: {exc}") from exc


def _compile(t: PcpVerifierTable, consistency: bool) -> Game:
    positions = sorted({p for c in t.checks for p in c.positions})
    qi = {p: k for k, p in enumerate(positions)}
    dist: dict[tuple, Fraction] = {}
    verdicts: dict[tuple, frozenset] = {}

    def add(q: tuple, w: Fraction, accepted: frozenset):
        if q in verdicts and verdicts[q] != accepted:
            raise GameError(f"ambiguous compiled predicate at question tuple {q}")
        verdicts[q] = accepted
        dist[q] = dist.get(q, Fraction(0)) + w

    same = frozenset({(0, 0, 0), (1, 1, 1)})
    sim_share = Fraction(1, 2) if consistency else Fraction(1)
    for c in t.checks:
        if consistency:
            for p in c.positions:
                add((qi[p],) * 3, c.weight / 6, same)
        for sigma in itertools.permutations(range(3)):
            # prover k receives position c.positions[sigma[k]]
            q = tuple(qi[c.positions[sigma[k]]] for k in range(3))
            accepted = set()
            for a in itertools.product((0, 1), repeat=3):
                bits = [0, 0, 0]
                for k in range(3):
                    bits[sigma[k]] = a[k]
                if tuple(bits) in c.accepted:
                    accepted.add(a)
            add(q, c.weight * sim_share / 6, frozenset(accepted))
    accept = [(q, a) for q, acc in verdicts.items() for a in acc]
    return table_game(3, [str(p) for p in positions], ("0", "1"), dist, accept)


def compile_three_prover(t: PcpVerifierTable) -> Game:
    """Consistency test and simulation test, each with probability 1/2.

    Consistency sends one of the check's three positions to every prover and
    accepts iff the answers coincide; simulation sends the three positions to
    the provers in a uniformly random order and applies the check.
    """
    return _compile(t, consistency=True)


def compile_simulation_only(t: PcpVerifierTable) -> Game:
    return _compile(t, consistency=False)


def soundness_bound(r: int, s: Fraction) -> Fraction:
    """(1/384)(1 - s)^2 2^(-2r); the compiled game's cheating value is at most 1 minus this."""
    s = Fraction(s)
    if s > 1:
        raise GameError("soundness must be at most 1")
    if r < 0:
        raise GameError("randomness must be nonnegative")
    return Fraction(1, 384) * (1 - s) ** 2 / 4**r


@dataclass(frozen=True)
class XorConstraint:
    variables: tuple[int, int, int]
    parity: int

    def satisfying(self) -> frozenset[Bits]:
        return frozenset(b for b in itertools.product((0, 1), repeat=3) if sum(b) % 2 == self.parity)


@dataclass(frozen=True)
class OrClause:
    """Disjunction of literals; -v is the negation of variable v."""

    literals: tuple[int, int, int]

    @property
    def variables(self) -> tuple[int, int, int]:
        return tuple(abs(x) for x in self.literals)

    def satisfying(self) -> frozenset[Bits]:
        return frozenset(
            b
            for b in itertools.product((0, 1), repeat=3)
            if any((bit == 1) == (lit > 0) for bit, lit in zip(b, self.literals))
        )


def cnf3_to_verifier(
    clauses: Iterable[XorConstraint | OrClause], proof_length: int | None = None
) -> PcpVerifierTable:
    """Verifier picking a uniformly random constraint and checking it."""
    clauses = list(clauses)
    if not clauses:
        raise GameError("need at least one constraint")
    for c in clauses:
        if len(set(c.variables)) != 3 or min(c.variables) < 1:
            raise GameError(f"constraint {c} must touch three distinct positive variables")
    n = proof_length or max(max(c.variables) for c in clauses)
    w = Fraction(1, len(clauses))
    checks = tuple(Check(w, tuple(c.variables), c.satisfying()) for c in clauses)
    return PcpVerifierTable(n, math.ceil(math.log2(len(clauses))), checks)


def ghz_constraints() -> list[XorConstraint]:
    """x1+x3+x5 odd; x1+x4+x6, x2+x3+x6 and x2+x4+x5 even -- jointly unsatisfiable."""
    return [
        XorConstraint((1, 3, 5), 1),
        XorConstraint((1, 4, 6), 0),
        XorConstraint((2, 3, 6), 0),
        XorConstraint((2, 4, 5), 0),
    ]


def ghz_verifier_table() -> PcpVerifierTable:
    return cnf3_to_verifier(ghz_constraints(), proof_length=6)


def honest_profile(g: Game, proof: Sequence[int]) -> list[dict[int, int]]:
    """Every prover answers the proof bit at the asked position."""
    table = {k: int(proof[int(label) - 1]) for k, label in enumerate(g.questions)}
    return [dict(table) for _ in range(g.players)]
