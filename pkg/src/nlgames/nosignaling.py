"""No-signaling values by exact linear programming, and the perfect parity
behavior for XOR games."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .game import Behavior, BudgetError, Game, GameError, extract_xor_rule

DEFAULT_MAX_VARS = 10**6


class LPError(RuntimeError):
    pass


@dataclass(frozen=True)
class LinearProgram:
    """maximize c.x  subject to  A x = b,  x >= 0   (all entries exact).

    ``rows`` is sparse: each row is a dict column -> coefficient.
    """

    columns: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]
    objective: tuple[Fraction, ...]
    rows: tuple[dict[int, Fraction], ...]
    rhs: tuple[Fraction, ...]
    n_normalization: int
    shape: tuple[int, int, int]

    @property
    def n_vars(self) -> int:
        return len(self.columns)


def build_nosignaling_lp(g: Game, max_vars: int = DEFAULT_MAX_VARS) -> LinearProgram:
    """LP over behaviors on the product of per-player supports.

    Variables are S(a|q); constraints are normalization per q and, for each
    player i and each pair q_i < q_i', equality of the (q_-i, a_-i) marginals.
    """
    m, _, na = g.shape
    supports = [g.player_support(i) for i in range(m)]
    n_q = math.prod(len(s) for s in supports)
    n_vars = n_q * na**m
    if n_vars > max_vars:
        raise BudgetError(
            f"no-signaling LP needs {n_q} question tuples x {na ** m} answer tuples"
            f" = {n_vars} variables, budget is {max_vars}"
        )
    qtuples = list(itertools.product(*supports))
    atuples = list(itertools.product(range(na), repeat=m))
    columns = [(q, a) for q in qtuples for a in atuples]
    col = {key: j for j, key in enumerate(columns)}
    objective = [
        g.distribution.get(q, Fraction(0)) if g.accepts(q, a) else Fraction(0) for q, a in columns
    ]

    rows: list[dict[int, Fraction]] = []
    rhs: list[Fraction] = []
    for q in qtuples:
        rows.append({col[(q, a)]: Fraction(1) for a in atuples})
        rhs.append(Fraction(1))
    n_norm = len(rows)
    for i in range(m):
        others = [supports[k] for k in range(m) if k != i]
        for x, y in itertools.combinations(supports[i], 2):
            for rest_q in itertools.product(*others):
                qx = rest_q[:i] + (x,) + rest_q[i:]
                qy = rest_q[:i] + (y,) + rest_q[i:]
                for rest_a in itertools.product(range(na), repeat=m - 1):
                    row: dict[int, Fraction] = {}
                    for ai in range(na):
                        a = rest_a[:i] + (ai,) + rest_a[i:]
                        row[col[(qx, a)]] = Fraction(1)
                        row[col[(qy, a)]] = Fraction(-1)
                    rows.append(row)
                    rhs.append(Fraction(0))
    return LinearProgram(
        tuple(columns), tuple(objective), tuple(rows), tuple(rhs), n_norm, g.shape
    )


class _Tableau:
    """Dense tableau simplex over Fractions with Bland's rule."""

    def __init__(self, rows, rhs, n_cols):
        self.m = len(rows)
        self.n = n_cols
        self.T = []
        for r, b in zip(rows, rhs):
            line = [Fraction(0)] * n_cols + [Fraction(b)]
            for j, v in r.items():
                line[j] = Fraction(v)
            if line[-1] < 0:
                line = [-v for v in line]
            self.T.append(line)
        self.basis = [-1] * self.m

    def pivot(self, r: int, c: int) -> None:
        T = self.T
        pr = T[r]
        pv = pr[c]
        if pv != 1:
            inv = 1 / pv
            pr = [v * inv if v else v for v in pr]
            T[r] = pr
        nz = [j for j, v in enumerate(pr) if v]
        for i in range(self.m):
            if i == r:
                continue
            row = T[i]
            f = row[c]
            if f:
                for j in nz:
                    row[j] -= f * pr[j]
        self.basis[r] = c

    def run(self, cost: list[Fraction], allowed: int) -> Fraction:
        """Maximize cost.x over columns < ``allowed``; returns the optimum.

        ``cost`` has one entry per column (length n).  Reduced costs are
        recomputed from the basis each iteration, which is cheap at this
        scale and keeps the tableau free of an objective row.
        """
        while True:
            # duals: y_i = cost of basic variable in row i
            cb = [cost[b] for b in self.basis]
            enter = -1
            for j in range(allowed):
                if j in self._basic_set:
                    continue
                rc = cost[j] - sum((cb[i] * self.T[i][j] for i in range(self.m) if cb[i] and self.T[i][j]), Fraction(0))
                if rc > 0:
                    enter = j
                    break
            if enter < 0:
                return sum((cb[i] * self.T[i][-1] for i in range(self.m)), Fraction(0))
            best = None
            leave = -1
            for i in range(self.m):
                a = self.T[i][enter]
                if a > 0:
                    ratio = self.T[i][-1] / a
                    if best is None or ratio < best or (ratio == best and self.basis[i] < self.basis[leave]):
                        best, leave = ratio, i
            if leave < 0:
                raise LPError("LP is unbounded")
            self._basic_set.discard(self.basis[leave])
            self.pivot(leave, enter)
            self._basic_set.add(enter)


def _simplex(rows, rhs, objective) -> tuple[Fraction, list[Fraction]]:
    n = len(objective)
    m = len(rows)
    # artificials occupy columns n .. n+m-1
    art_rows = []
    for i, r in enumerate(rows):
        r = dict(r)
        r[n + i] = Fraction(1)
        art_rows.append(r)
    tab = _Tableau(art_rows, rhs, n + m)
    # rows were sign-normalized so rhs >= 0; artificial column must stay +1
    for i in range(m):
        if tab.T[i][n + i] < 0:
            tab.T[i] = [-v for v in tab.T[i]]
    tab.basis = [n + i for i in range(m)]
    tab._basic_set = set(tab.basis)

    phase1 = [Fraction(0)] * n + [Fraction(-1)] * m
    if tab.run(phase1, n + m) != 0:
        raise LPError("LP is infeasible")

    # drive artificials out of the basis; rows that cannot be pivoted are redundant
    keep = []
    for i in range(m):
        if tab.basis[i] >= n:
            col = next((j for j in range(n) if tab.T[i][j] != 0 and j not in tab._basic_set), None)
            if col is None:
                continue
            tab._basic_set.discard(tab.basis[i])
            tab.pivot(i, col)
            tab._basic_set.add(col)
        keep.append(i)
    tab.T = [[*tab.T[i][:n], tab.T[i][-1]] for i in keep]
    tab.basis = [tab.basis[i] for i in keep]
    tab.m = len(keep)
    tab.n = n
    tab._basic_set = set(tab.basis)

    opt = tab.run(list(objective), n)
    x = [Fraction(0)] * n
    for i, b in enumerate(tab.basis):
        x[b] = tab.T[i][-1]
    return opt, x


def solve_lp(lp: LinearProgram) -> tuple[Fraction, Behavior]:
    """Exact optimum and an optimal behavior."""
    opt, x = _simplex(lp.rows, lp.rhs, lp.objective)
    entries = [(q, a, v) for (q, a), v in zip(lp.columns, x) if v]
    return opt, Behavior.from_entries(lp.shape, entries)


def nosignaling_value(g: Game, max_vars: int = DEFAULT_MAX_VARS) -> tuple[Fraction, Behavior]:
    return solve_lp(build_nosignaling_lp(g, max_vars))


def parity_witness(g: Game, max_entries: int = DEFAULT_MAX_VARS) -> Behavior:
    """No-signaling behavior winning an XOR game with certainty.

    Every answer tuple of the right parity gets weight 2^-(m-1), on all of
    Q^m, with target 0 off the support.
    """
    check = extract_xor_rule(g)
    if not check.ok:
        raise GameError(f"not an XOR game: {check.reason} at {check.witness}")
    m, nq, na = g.shape
    size = nq**m * 2 ** (m - 1)
    if size > max_entries:
        raise BudgetError(f"parity witness has {size} entries, budget is {max_entries}")
    w = Fraction(1, 2 ** (m - 1))
    atuples = list(itertools.product(range(2), repeat=m))
    table = {}
    for q in itertools.product(range(nq), repeat=m):
        b = check.targets.get(q, 0)
        for a in atuples:
            if sum(a) % 2 == b:
                table[(q, a)] = w
    return Behavior(m, nq, na, table)
