"""Statevector and operator simulation of entangled strategies.

Two strategy models are supported:

* :class:`TensorStrategy` -- every player measures its own tensor factor of a
  shared pure state;
* :class:`GlobalStrategy` -- every player measures the whole space, with
  operators of different players required to commute.

All measurements are binary PVMs {P0, P1}; answer 0 corresponds to the +1
outcome of the observable X = P0 - P1.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

import numpy as np

from .game import Behavior, BudgetError, Game, GameError
from .linalg import is_hermitian, max_entry, observable_from_projector, projector_from_observable

STATE_TOL = 1e-12
PVM_TOL = 1e-9
COMMUTE_TOL = 1e-6

Key = tuple[int, int]  # (player, question index)


class QuantumError(ValueError):
    pass


def _check_pvm(p0: np.ndarray, where) -> None:
    d = p0.shape[0]
    if p0.shape != (d, d):
        raise QuantumError(f"PVM at {where} is not square")
    if not np.all(np.isfinite(p0)):
        raise QuantumError(f"PVM at {where} has non-finite entries")
    if not is_hermitian(p0, PVM_TOL):
        raise QuantumError(f"PVM at {where} is not Hermitian")
    if max_entry(p0 @ p0 - p0) > PVM_TOL:
        raise QuantumError(f"PVM at {where} is not a projector")


def _check_state(state: np.ndarray, dim: int) -> None:
    if state.shape != (dim,):
        raise QuantumError(f"state has dimension {state.shape}, expected {dim}")
    if abs(np.linalg.norm(state) - 1) > STATE_TOL:
        raise QuantumError("state is not normalized")


@dataclass(frozen=True, eq=False)
class TensorStrategy:
    dims: tuple[int, ...]
    state: np.ndarray
    pvm: Mapping[Key, np.ndarray]  # (player, question) -> P0 on that player's factor

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        object.__setattr__(self, "state", np.asarray(self.state, dtype=complex).ravel())
        object.__setattr__(self, "pvm", {k: np.asarray(v, dtype=complex) for k, v in self.pvm.items()})
        _check_state(self.state, math.prod(self.dims))
        for (i, q), p0 in self.pvm.items():
            if not 0 <= i < len(self.dims):
                raise QuantumError(f"PVM for unknown player {i}")
            if p0.shape != (self.dims[i], self.dims[i]):
                raise QuantumError(f"PVM for player {i}, question {q} has wrong dimension")
            _check_pvm(p0, (i, q))

    @property
    def players(self) -> int:
        return len(self.dims)

    def observable(self, i: int, q: int) -> np.ndarray:
        return observable_from_projector(self.pvm[(i, q)])

    @classmethod
    def from_observables(cls, dims, state, observables: Mapping[Key, np.ndarray]) -> "TensorStrategy":
        return cls(dims, state, {k: projector_from_observable(x) for k, x in observables.items()})

    def to_global(self) -> "GlobalStrategy":
        """Embed each local projector as I ⊗ ... ⊗ P ⊗ ... ⊗ I."""
        ops = {}
        for (i, q), p0 in self.pvm.items():
            left = math.prod(self.dims[:i])
            right = math.prod(self.dims[i + 1:])
            ops[(i, q)] = np.kron(np.kron(np.eye(left), p0), np.eye(right))
        return GlobalStrategy(self.players, self.state, ops)


@dataclass(frozen=True, eq=False)
class GlobalStrategy:
    players: int
    state: np.ndarray
    pvm: Mapping[Key, np.ndarray]  # (player, question) -> P0 on the whole space
    check_commutation: bool = True

    def __post_init__(self):
        object.__setattr__(self, "state", np.asarray(self.state, dtype=complex).ravel())
        object.__setattr__(self, "pvm", {k: np.asarray(v, dtype=complex) for k, v in self.pvm.items()})
        _check_state(self.state, self.dim)
        for k, p0 in self.pvm.items():
            if p0.shape != (self.dim, self.dim):
                raise QuantumError(f"PVM at {k} has wrong dimension")
            _check_pvm(p0, k)

    @property
    def dim(self) -> int:
        return self.state.shape[0]

    def questions(self, i: int) -> list[int]:
        return sorted(q for (p, q) in self.pvm if p == i)


def commutation_defect(s: GlobalStrategy, same_player: bool = False) -> tuple[float, tuple | None]:
    """Largest commutator entry over operator pairs, and the worst pair.

    Pairs of the same player are included only when ``same_player`` is set.
    """
    worst, pair = 0.0, None
    for (k1, a), (k2, b) in itertools.combinations(sorted(s.pvm.items()), 2):
        if k1[0] == k2[0] and not same_player:
            continue
        d = max_entry(a @ b - b @ a)
        if d > worst:
            worst, pair = d, (k1, k2)
    return worst, pair


# -- named states and strategies --------------------------------------------

def phi_state(n: int) -> np.ndarray:
    """n-qubit state with amplitude ±2^-(n-1)/2 on even-weight strings.

    The sign is + when the Hamming weight is 0 mod 4 and - when it is 2 mod 4.
    """
    if not 1 <= n <= 20:
        raise QuantumError("phi_state needs 1 <= n <= 20")
    x = np.arange(2**n)
    weight = np.zeros(2**n, dtype=np.int64)
    for b in range(n):
        weight += (x >> b) & 1
    amp = np.where(weight % 4 == 0, 1.0, np.where(weight % 4 == 2, -1.0, 0.0))
    return (amp / 2 ** ((n - 1) / 2)).astype(complex)


def z_theta(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, s], [s, -c]], dtype=complex)


def magic_angle(n: int, j: int, k: int) -> float:
    """Measurement angle for the 1-based cell (j, k) of the order-n square."""
    if j < n and k < n:
        return 0.0
    if j < n:
        return math.pi / (2 * n)
    if k < n:
        return -math.pi / (2 * n)
    return math.pi / 2


def magic_square_strategy(n: int) -> TensorStrategy:
    """Each player holds one qubit of phi_state(n) and measures Z_theta(j,k)
    on cell (j, k), whichever cell it is routed."""
    from .catalog import cell_index

    if not 2 <= n <= 12:
        raise QuantumError("magic_square_strategy needs 2 <= n <= 12")
    obs = {}
    for j in range(1, n + 1):
        for k in range(1, n + 1):
            x = z_theta(magic_angle(n, j, k))
            for i in range(n):
                obs[(i, cell_index(n, j, k))] = x
    return TensorStrategy.from_observables((2,) * n, phi_state(n), obs)


def ghz_strategy(positions=range(1, 7), questions: tuple[str, ...] | None = None) -> TensorStrategy:
    """Three provers share (|000> - |111>)/sqrt 2 and measure sigma_x on odd
    proof positions, sigma_y on even ones.

    ``questions`` is the compiled game's question label list (positions as
    strings); by default positions 1..6 map to question indices 0..5.
    """
    sx = np.array([[0, 1], [1, 0]], dtype=complex)
    sy = np.array([[0, -1j], [1j, 0]], dtype=complex)
    state = np.zeros(8, dtype=complex)
    state[0], state[7] = 1 / math.sqrt(2), -1 / math.sqrt(2)
    if questions is None:
        questions = tuple(str(p) for p in positions)
    obs = {}
    for qi, label in enumerate(questions):
        x = sx if int(label) % 2 == 1 else sy
        for i in range(3):
            obs[(i, qi)] = x
    return TensorStrategy.from_observables((2, 2, 2), state, obs)


# -- tensor-product expectation engine -----------------------------------------

def _kron_batch(mats: list[np.ndarray]) -> np.ndarray:
    """Batched Kronecker product of per-factor stacks (K, d_f, d_f)."""
    K = mats[0].shape[0] if mats else 1
    out = np.ones((K, 1, 1), dtype=complex)
    for m in mats:
        a, d = out.shape[1], m.shape[1]
        out = np.einsum("kab,kcd->kacbd", out, m).reshape(K, a * d, a * d)
    return out


def _unique_rows(idx: np.ndarray):
    if idx.shape[1] == 0:
        return np.zeros((1, 0), dtype=idx.dtype), np.zeros(idx.shape[0], dtype=np.int64)
    keys, inv = np.unique(idx, axis=0, return_inverse=True)
    return keys, inv.ravel()


def batched_expectations(
    state: np.ndarray, dims, ops: list[np.ndarray], idx: np.ndarray, chunk: int = 16384
) -> np.ndarray:
    """<psi| op_0[idx[t,0]] ⊗ ... ⊗ op_{m-1}[idx[t,m-1]] |psi> for every row t.

    ``ops[i]`` is a stack (K_i, d_i, d_i) of local operators for player i.
    Players are split into a left and right block; each distinct left product
    A is folded into C_A = Psi^† A Psi once, after which every row costs one
    elementwise product with its right operator.
    """
    dims = tuple(dims)
    m = len(dims)
    D = math.prod(dims)
    idx = np.asarray(idx, dtype=np.int64).reshape(-1, m)
    h = min(range(m + 1), key=lambda h: abs(math.prod(dims[:h]) - math.prod(dims[h:])))
    dL = math.prod(dims[:h])
    dR = D // dL
    psi = np.asarray(state, dtype=complex).reshape(dL, dR)

    lkeys, linv = _unique_rows(idx[:, :h])
    rkeys, rinv = _unique_rows(idx[:, h:])
    A = _kron_batch([ops[i][lkeys[:, i]] for i in range(h)]) if h else np.ones((1, 1, 1), complex)
    C = np.einsum("ai,kab,bj->kij", psi.conj(), A, psi, optimize=True).reshape(len(lkeys), dR * dR)
    B = _kron_batch([ops[h + i][rkeys[:, i]] for i in range(m - h)]) if h < m else np.ones((1, 1, 1), complex)
    B = B.reshape(len(rkeys), dR * dR)
    out = np.empty(len(idx), dtype=complex)
    for s in range(0, len(idx), chunk):
        e = slice(s, s + chunk)
        out[e] = np.einsum("ti,ti->t", C[linv[e]], B[rinv[e]])
    return out


def tensor_expectation(state, dims, local_ops) -> complex:
    """<psi| ⊗_i local_ops[i] |psi>; ``None`` stands for the identity."""
    ops = [
        (np.eye(d, dtype=complex) if x is None else np.asarray(x, dtype=complex))[None]
        for d, x in zip(dims, local_ops)
    ]
    return complex(batched_expectations(state, dims, ops, np.zeros((1, len(dims)), np.int64))[0])


def expectation_product(state, thetas) -> float:
    """<state| Z_theta1 ⊗ ... ⊗ Z_thetan |state> for an n-qubit state."""
    n = len(thetas)
    state = np.asarray(state, dtype=complex).ravel()
    if state.shape != (2**n,):
        raise QuantumError(f"state dimension {state.shape[0]} does not match {n} angles")
    return tensor_expectation(state, (2,) * n, [z_theta(t) for t in thetas]).real


def _player_stacks(g: Game, s: TensorStrategy, with_projectors: bool) -> list[np.ndarray]:
    stacks = []
    for i in range(g.players):
        d = s.dims[i]
        needed = set(g.player_support(i))
        missing = sorted(q for q in needed if (i, q) not in s.pvm)
        if missing:
            raise GameError(f"strategy has no measurement for player {i} on questions {missing}")
        if with_projectors:
            st = np.zeros((2 * g.n_questions, d, d), dtype=complex)
            for q in needed:
                p0 = s.pvm[(i, q)]
                st[2 * q], st[2 * q + 1] = p0, np.eye(d) - p0
        else:
            st = np.zeros((g.n_questions, d, d), dtype=complex)
            for q in needed:
                st[q] = s.observable(i, q)
        stacks.append(st)
    return stacks


def strategy_value(g: Game, s: TensorStrategy) -> float:
    """Winning probability of a tensor strategy.

    XOR games use the correlator identity P(win | q) = (1 + (-1)^b(q) <⊗X>)/2;
    table games sum the accepted answer probabilities <psi|⊗P|psi>.
    """
    if g.n_answers != 2:
        raise GameError("quantum strategies answer with binary PVMs")
    if g.players != s.players:
        raise GameError("strategy and game disagree on the number of players")
    support = g.support()
    weights = np.array([float(g.distribution[q]) for q in support])
    qidx = np.array(support, dtype=np.int64).reshape(len(support), g.players)
    if g.xor_targets is not None:
        corr = batched_expectations(s.state, s.dims, _player_stacks(g, s, False), qidx).real
        signs = np.array([1.0 - 2 * g.xor_targets[q] for q in support])
        return float(np.sum(weights * (1 + signs * corr) / 2))
    stacks = _player_stacks(g, s, True)
    rows, wts = [], []
    for q, w in zip(support, weights):
        for a in g.accepted_answers(q):
            rows.append([2 * x + b for x, b in zip(q, a)])
            wts.append(w)
    if not rows:
        return 0.0
    probs = batched_expectations(s.state, s.dims, stacks, np.array(rows)).real
    return float(np.dot(wts, probs))


# -- commuting-operator strategies ---------------------------------------------

def _ordered_prob(s: GlobalStrategy, q, a, reverse: bool = False) -> float:
    v = s.state
    order = range(len(q)) if reverse else range(len(q) - 1, -1, -1)
    for i in order:
        p0 = s.pvm[(i, q[i])]
        v = p0 @ v if a[i] == 0 else v - p0 @ v
    return float(np.vdot(s.state, v).real)


def global_behavior_probs(g: Game, s: GlobalStrategy, reverse: bool = False) -> dict:
    """S(a|q) = <Psi| M1 ... Mm |Psi> for each support tuple, as floats."""
    out = {}
    for q in g.support():
        for i, x in enumerate(q):
            if (i, x) not in s.pvm:
                raise GameError(f"strategy has no measurement for player {i} on question {x}")
        for a in g.answer_tuples():
            out[(q, a)] = _ordered_prob(s, q, a, reverse)
    return out


def global_strategy_value(g: Game, s: GlobalStrategy, diagnostic: bool = False):
    """Winning probability of a commuting-operator strategy.

    Products are taken in player order.  With ``diagnostic`` the value is
    returned together with the largest change in any S(a|q) when the product
    order is reversed, which measures how much commutation tolerance is used.
    """
    if g.n_answers != 2 or g.players != s.players:
        raise GameError("strategy shape incompatible with game")
    defect, pair = commutation_defect(s)
    if defect > COMMUTE_TOL:
        raise QuantumError(f"operators of different players do not commute: {pair} (defect {defect:.3g})")
    probs = global_behavior_probs(g, s)
    value = sum(float(g.distribution[q]) * p for (q, a), p in probs.items() if g.accepts(q, a))
    if not diagnostic:
        return value
    rev = global_behavior_probs(g, s, reverse=True)
    return value, max((abs(probs[k] - rev[k]) for k in probs), default=0.0)


def permutations_of(m: int) -> list[tuple[int, ...]]:
    return list(itertools.permutations(range(m)))


def _compose(a, b):
    """(a ∘ b)(x) = a(b(x))."""
    return tuple(a[b[x]] for x in range(len(b)))


def _inverse(a):
    inv = [0] * len(a)
    for x, y in enumerate(a):
        inv[y] = x
    return tuple(inv)


def permutation_representation(sigma, m: int, D: int) -> np.ndarray:
    """Phi(sigma): |phi> ⊗ |tau> -> |phi> ⊗ |tau sigma^-1> on H ⊗ C^{m!}."""
    perms = permutations_of(m)
    pos = {t: k for k, t in enumerate(perms)}
    P = np.zeros((len(perms), len(perms)))
    sinv = _inverse(tuple(sigma))
    for tau in perms:
        P[pos[_compose(tau, sinv)], pos[tau]] = 1
    return np.kron(np.eye(D), P)


def symmetrize(s: GlobalStrategy, m: int | None = None, max_dim: int = 4096) -> GlobalStrategy:
    """Average a strategy over all relabelings of the players.

    The new space is H ⊗ C^{m!} with state Psi ⊗ uniform superposition over
    permutations; player i measures sum_tau M^(tau(i)) ⊗ |tau><tau|.
    """
    m = s.players if m is None else m
    if m != s.players:
        raise GameError("player count does not match strategy")
    perms = permutations_of(m)
    D = s.dim
    if D * len(perms) > max_dim:
        raise BudgetError(f"symmetrized dimension {D * len(perms)} exceeds budget {max_dim}")
    qsets = {tuple(s.questions(i)) for i in range(m)}
    if len(qsets) != 1:
        raise GameError("symmetrization needs every player to answer the same questions")
    questions = qsets.pop()
    k = len(perms)
    uniform = np.ones(k) / math.sqrt(k)
    state = np.kron(s.state, uniform)
    ops = {}
    for i in range(m):
        for q in questions:
            acc = np.zeros((D * k, D * k), dtype=complex)
            for t, tau in enumerate(perms):
                e = np.zeros((k, k))
                e[t, t] = 1
                acc += np.kron(s.pvm[(tau[i], q)], e)
            ops[(i, q)] = acc
    return GlobalStrategy(m, state, ops)


def symmetry_defect(sym: GlobalStrategy, base_dim: int) -> tuple[float, float]:
    """How far a strategy on H ⊗ C^{m!} is from being symmetric.

    Returns (max |Phi(sigma) Psi - Psi|, max |Phi(sigma^-1) N^(sigma(i)) Phi(sigma) - N^(i)|)
    over all sigma, players and questions.
    """
    m = sym.players
    state_def, op_def = 0.0, 0.0
    for sigma in permutations_of(m):
        phi = permutation_representation(sigma, m, base_dim)
        phi_inv = permutation_representation(_inverse(sigma), m, base_dim)
        state_def = max(state_def, max_entry(phi @ sym.state - sym.state))
        for (i, q), n_op in sym.pvm.items():
            moved = phi_inv @ sym.pvm[(sigma[i], q)] @ phi
            op_def = max(op_def, max_entry(moved - n_op))
    return state_def, op_def


@dataclass(frozen=True)
class ClassicalExtraction:
    """Joint distribution over full answer tables and the behavior it induces.

    ``keys`` lists (player, question) in order; each distribution key gives
    the answer to every entry of ``keys``.
    """

    keys: tuple[Key, ...]
    distribution: dict[tuple[int, ...], float]
    behavior: Behavior


def extract_classical(
    s: GlobalStrategy, n_questions: int | None = None, max_tables: int = 2**20
) -> ClassicalExtraction:
    """Shared-randomness strategy reproducing a fully commuting strategy.

    Every answer table a gets probability <psi|M(a)|psi> with M(a) the product
    of all projectors selected by a.
    """
    keys = tuple(sorted(s.pvm))
    if 2 ** len(keys) > max_tables:
        raise BudgetError(f"{2 ** len(keys)} answer tables exceed budget {max_tables}")
    defect, pair = commutation_defect(s, same_player=True)
    if defect > COMMUTE_TOL:
        raise QuantumError(f"operators do not all commute: {pair} (defect {defect:.3g})")

    dist: dict[tuple[int, ...], float] = {}
    ops = [s.pvm[k] for k in keys]

    def walk(depth: int, v: np.ndarray, bits: tuple[int, ...]):
        if np.vdot(v, v).real < 1e-30:
            return
        if depth == len(ops):
            p = float(np.vdot(s.state, v).real)
            dist[bits] = max(p, 0.0) if p >= -1e-9 else p
            return
        pv = ops[depth] @ v
        walk(depth + 1, pv, bits + (0,))
        walk(depth + 1, v - pv, bits + (1,))

    # product M(a) = O_0 O_1 ... applied right to left; order is immaterial
    # up to commutation tolerance
    walk(0, s.state, ())
    bad = [p for p in dist.values() if p < 0]
    if bad:
        raise QuantumError(f"negative assignment probability {min(bad):.3g}")

    # exact rational copy so the induced behavior is normalized exactly
    fr = {b: Fraction(p).limit_denominator(10**12) for b, p in dist.items()}
    total = sum(fr.values(), Fraction(0))
    fr = {b: p / total for b, p in fr.items() if p}

    m = s.players
    nq = n_questions if n_questions is not None else 1 + max(q for _, q in keys)
    pos = {k: j for j, k in enumerate(keys)}
    qsets = [s.questions(i) for i in range(m)]
    table: dict = {}
    for q in itertools.product(*qsets):
        cols = [pos[(i, x)] for i, x in enumerate(q)]
        for bits, p in fr.items():
            a = tuple(bits[c] for c in cols)
            table[(q, a)] = table.get((q, a), Fraction(0)) + p
    return ClassicalExtraction(keys, dist, Behavior(m, nq, 2, table))


# -- serialization ---------------------------------------------------------------

def strategy_to_json(s: TensorStrategy, questions: tuple[str, ...]) -> dict:
    from .io import cmat_to_json, cvec_to_json

    return {
        "dims": list(s.dims),
        "state": cvec_to_json(s.state),
        "pvm": [
            {"player": i, "question": questions[q], "p0": cmat_to_json(p0)}
            for (i, q), p0 in sorted(s.pvm.items())
        ],
    }


def strategy_from_json(src, questions: tuple[str, ...]) -> TensorStrategy:
    from .io import cmat_from_json, cvec_from_json, load_json

    d = load_json(src)
    qpos = {label: k for k, label in enumerate(questions)}
    pvm = {}
    try:
        for e in d["pvm"]:
            label = str(e["question"])
            if label not in qpos:
                raise GameError(f"strategy refers to unknown question {label!r}")
            pvm[(int(e["player"]), qpos[label])] = cmat_from_json(e["p0"])
        return TensorStrategy(tuple(d["dims"]), cvec_from_json(d["state"]), pvm)
    except (KeyError, TypeError) as exc:
        raise GameError(f"malformed strategy JSON: {exc}") from exc
