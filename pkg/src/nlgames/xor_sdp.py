"""Entangled value of two-player XOR games through the vector relaxation.

The optimal bias is max sum_{s,t} pi(s,t) c(s,t) <u_s, v_t> over unit
vectors; it is found by alternating exact maximization of each side.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .game import Game, GameError, extract_xor_rule


@dataclass(frozen=True)
class XorGame2P:
    rows: tuple[int, ...]  # player-0 support questions
    cols: tuple[int, ...]  # player-1 support questions
    weights: tuple[tuple[Fraction, ...], ...]
    signs: tuple[tuple[int, ...], ...]  # +1 iff target parity is 0

    def __post_init__(self):
        total = sum((w for row in self.weights for w in row), Fraction(0))
        if total != 1 or any(w < 0 for row in self.weights for w in row):
            raise GameError("XOR game weights must be nonnegative and sum to 1")

    def coefficient_matrix(self) -> np.ndarray:
        return np.array(self.weights, dtype=float) * np.array(self.signs, dtype=float)


def from_game(g: Game) -> XorGame2P:
    if g.players != 2 or g.n_answers != 2:
        raise GameError("not a two-player binary game")
    check = extract_xor_rule(g)
    if not check.ok:
        raise GameError("not an XOR game")
    rows, cols = g.player_support(0), g.player_support(1)
    weights = [[g.distribution.get((s, t), Fraction(0)) for t in cols] for s in rows]
    signs = [[1 - 2 * check.targets.get((s, t), 0) for t in cols] for s in rows]
    return XorGame2P(
        tuple(rows), tuple(cols), tuple(map(tuple, weights)), tuple(map(tuple, signs))
    )


@dataclass(frozen=True)
class XorSolution:
    value: float
    bias: float
    u: np.ndarray  # (|S|, dim)
    v: np.ndarray  # (|T|, dim)


def _normalize_rows(x: np.ndarray, fallback: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(x, axis=1, keepdims=True)
    # a zero weighted sum leaves that vector free; keep the previous one
    return np.where(norms > 1e-300, x / np.where(norms > 0, norms, 1), fallback)


def quantum_value(
    x: XorGame2P, tol: float = 1e-6, restarts: int = 32, seed: int = 0, max_iter: int = 100000
) -> XorSolution:
    """Best bias over ``restarts`` seeded random starts; value = (1 + bias)/2."""
    K = x.coefficient_matrix()
    S, T = K.shape
    dim = S + T
    rng = np.random.default_rng(seed)
    best = None
    for _ in range(restarts):
        u = rng.standard_normal((S, dim))
        u /= np.linalg.norm(u, axis=1, keepdims=True)
        v = _normalize_rows(K.T @ u, rng.standard_normal((T, dim)))
        v /= np.linalg.norm(v, axis=1, keepdims=True)
        bias = float(np.sum(K * (u @ v.T)))
        for _ in range(max_iter):
            u = _normalize_rows(K @ v, u)
            v = _normalize_rows(K.T @ u, v)
            new = float(np.sum(K * (u @ v.T)))
            # each half-step is an exact maximization, so the bias never drops
            done = new - bias < tol / 10
            bias = new
            if done:
                break
        if best is None or bias > best.bias:
            best = XorSolution((1 + bias) / 2, bias, u.copy(), v.copy())
    return best


def witness_bias(x: XorGame2P, u: np.ndarray, v: np.ndarray) -> float:
    return float(np.sum(x.coefficient_matrix() * (u @ v.T)))
