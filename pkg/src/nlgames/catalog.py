"""Concrete games: n-player Magic Square variants, CHSH, and Latin squares."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .game import Game, GameError, xor_game


@dataclass(frozen=True)
class LatinSquare:
    """Order-n square; ``cells[j][k]`` is the 1-based player asked cell (j+1, k+1)."""

    cells: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.cells)
        if n < 2:
            raise GameError("Latin square order must be at least 2")
        want = set(range(1, n + 1))
        for row in self.cells:
            if len(row) != n or set(row) != want:
                raise GameError(f"row {list(row)} is not a permutation of 1..{n}")
        for k in range(n):
            if {row[k] for row in self.cells} != want:
                raise GameError(f"column {k + 1} is not a permutation of 1..{n}")

    @property
    def order(self) -> int:
        return len(self.cells)

    def player(self, j: int, k: int) -> int:
        """Player (1-based) asked the cell at 1-based row j, column k."""
        return self.cells[j - 1][k - 1]

    def to_json(self) -> dict:
        return {"order": self.order, "cells": [list(r) for r in self.cells]}

    @classmethod
    def from_json(cls, d) -> "LatinSquare":
        sq = cls(tuple(tuple(int(x) for x in row) for row in d["cells"]))
        if "order" in d and int(d["order"]) != sq.order:
            raise GameError("order field disagrees with cells")
        return sq


def cyclic_latin(n: int) -> LatinSquare:
    if n < 2:
        raise GameError("Latin square order must be at least 2")
    return LatinSquare(tuple(tuple((k - j) % n + 1 for k in range(1, n + 1)) for j in range(1, n + 1)))


def order4_noncyclic_latin() -> LatinSquare:
    return LatinSquare(((1, 2, 3, 4), (2, 1, 4, 3), (3, 4, 1, 2), (4, 3, 2, 1)))


def cell_index(n: int, j: int, k: int) -> int:
    """Question index of the 1-based cell (j, k); cells are ordered row-major."""
    return (j - 1) * n + (k - 1)


def cell_labels(n: int) -> tuple[str, ...]:
    return tuple(f"{j},{k}" for j in range(1, n + 1) for k in range(1, n + 1))


def lines(n: int) -> list[tuple[list[tuple[int, int]], int]]:
    """All 2n rows and columns as (cells, target parity); only column n is odd."""
    out = []
    for j in range(1, n + 1):
        out.append(([(j, k) for k in range(1, n + 1)], 0))
    for k in range(1, n + 1):
        out.append(([(j, k) for j in range(1, n + 1)], 1 if k == n else 0))
    return out


def ms_game(n: int) -> Game:
    """Magic Square game with a uniformly random routing of cells to players."""
    if n < 2:
        raise GameError("Magic Square order must be at least 2")
    w = Fraction(1, 2 * n * math.factorial(n))
    dist: dict[tuple[int, ...], Fraction] = {}
    targets: dict[tuple[int, ...], int] = {}
    for cells, b in lines(n):
        idx = [cell_index(n, j, k) for j, k in cells]
        for q in itertools.permutations(idx):
            dist[q] = dist.get(q, 0) + w
            targets[q] = b
    return xor_game(n, cell_labels(n), dist, targets)


def ms_game_with_assignment(L: LatinSquare) -> Game:
    """Magic Square game where player L[j][k] always receives cell (j, k)."""
    n = L.order
    w = Fraction(1, 2 * n)
    dist: dict[tuple[int, ...], Fraction] = {}
    targets: dict[tuple[int, ...], int] = {}
    for cells, b in lines(n):
        q = [0] * n
        for j, k in cells:
            q[L.player(j, k) - 1] = cell_index(n, j, k)
        q = tuple(q)
        dist[q] = dist.get(q, 0) + w
        targets[q] = b
    return xor_game(n, cell_labels(n), dist, targets)


def chsh_game() -> Game:
    return ms_game_with_assignment(cyclic_latin(2))


def ghz_verifier_table():
    """Four-check verifier of the unsatisfiable GHZ parity formula."""
    from .pcp import ghz_verifier_table as build

    return build()
