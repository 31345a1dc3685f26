"""Numerical checks of the operator inequalities behind the n-party bound,
and seeded random campaigns that exercise them."""
from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .linalg import (
    is_hermitian,
    is_unitary,
    jacobi_eigh,
    max_entry,
    psd_sqrt,
    random_density,
    random_observable,
    random_povm,
    random_state,
    random_unitary,
    trace_norm,
)
from .quantum import (
    QuantumError,
    TensorStrategy,
    batched_expectations,
    expectation_product,
    magic_angle,
    phi_state,
    z_theta,
)

POVM_TOL = 1e-9


def tsirelson_bound(n: int) -> float:
    return 2 * n * math.cos(math.pi / (2 * n))


def tsirelson_lhs(n: int, s: TensorStrategy) -> float:
    """sum_j <M_j> + sum_{k<n} <N_k> - <N_n> for a party-by-index strategy.

    ``s`` has n parties; its key (i, j) holds party i's observable with
    0-based index j.  M_j multiplies every party's index-j observable, N_k
    party i's index (k - i) mod n one.
    """
    if s.players != n or any((i, j) not in s.pvm for i in range(n) for j in range(n)):
        raise QuantumError(f"tsirelson_lhs needs observables for {n} parties x {n} indices")
    stacks = [np.stack([s.observable(i, j) for j in range(n)]) for i in range(n)]
    rows = [[j] * n for j in range(n)]
    rows += [[(k - i) % n for i in range(n)] for k in range(n)]
    e = batched_expectations(s.state, s.dims, stacks, np.array(rows)).real
    return float(e[:n].sum() + e[n:2 * n - 1].sum() - e[2 * n - 1])


def cyclic_tsirelson_strategy(n: int) -> TensorStrategy:
    """The Magic Square strategy relabeled for :func:`tsirelson_lhs`.

    Under the cyclic routing party i answers cell (j, j+i mod n) of row j,
    so its index-j observable is that cell's Z_theta.
    """
    obs = {}
    for i in range(n):
        for j in range(n):
            k = (j + i) % n
            obs[(i, j)] = z_theta(magic_angle(n, j + 1, k + 1))
    return TensorStrategy.from_observables((2,) * n, phi_state(n), obs)


def wehner_strategy(xs, ys, state, dims) -> TensorStrategy:
    """Two-system observables X_j (on H1), Y_j (on H2) placed as party n-1 and
    party 0; parties in between are trivial.  ``state`` lives on H2 ⊗ H1.
    """
    n = len(xs)
    d1, d2 = dims
    if n == 1:
        raise QuantumError("Wehner embedding needs n >= 2")
    pdims = (d2,) + (1,) * (n - 2) + (d1,)
    obs = {}
    for j in range(n):
        obs[(0, j)] = ys[j]
        obs[(n - 1, j)] = xs[j]
        for i in range(1, n - 1):
            obs[(i, j)] = np.eye(1)
    return TensorStrategy.from_observables(pdims, state, obs)


def random_tensor_strategy(n: int, rng: np.random.Generator, d: int = 2) -> TensorStrategy:
    """n parties with local dimension d, a random pure state and random ±1
    observables for indices 0..n-1."""
    obs = {(i, j): random_observable(d, rng) for i in range(n) for j in range(n)}
    return TensorStrategy.from_observables((d,) * n, random_state(d**n, rng), obs)


def perturbed_cyclic_strategy(n: int, rng: np.random.Generator, eps: float) -> TensorStrategy:
    """Optimal strategy with every observable conjugated by a unitary close to
    I and the state nudged; probes the bound near its equality case."""
    base = cyclic_tsirelson_strategy(n)
    obs = {}
    for key in base.pvm:
        h = random_observable(2, rng) * rng.uniform(-eps, eps)
        w, V = np.linalg.eigh(h)
        u = (V * np.exp(1j * w)) @ V.conj().T
        obs[key] = u @ base.observable(*key) @ u.conj().T
    state = base.state + eps * random_state(2**n, rng) * rng.random()
    return TensorStrategy.from_observables(base.dims, state / np.linalg.norm(state), obs)


def key_lemma_gap(phi, A, B) -> tuple[float, float]:
    """(|<AB> - <A><B>|, sqrt(1-|<A>|^2) sqrt(1-|<B>|^2)) for unitaries A, B."""
    phi = np.asarray(phi, dtype=complex)
    if abs(np.linalg.norm(phi) - 1) > 1e-9:
        raise QuantumError("phi must be a unit vector")
    if not (is_unitary(A) and is_unitary(B)):
        raise QuantumError("A and B must be unitary")
    alpha = np.vdot(phi, A @ phi)
    beta = np.vdot(phi, B @ phi)
    lhs = abs(np.vdot(phi, A @ (B @ phi)) - alpha * beta)
    rhs = math.sqrt(max(0.0, 1 - abs(alpha) ** 2)) * math.sqrt(max(0.0, 1 - abs(beta) ** 2))
    return float(lhs), rhs


def _corollary_terms(phi, observables) -> tuple[float, float]:
    phi = np.asarray(phi, dtype=complex)
    thetas = []
    for a in observables:
        if not is_hermitian(a) or max_entry(a @ a - np.eye(a.shape[0])) > 1e-9:
            raise QuantumError("each observable must be Hermitian with A^2 = I")
        thetas.append(math.acos(min(1.0, max(-1.0, np.vdot(phi, a @ phi).real))))
    total = sum(thetas)
    if total >= math.pi:
        raise QuantumError("corollary hypothesis violated: angles sum to at least pi")
    v = phi
    for a in reversed(observables):
        v = a @ v
    return float(np.vdot(phi, v).real), math.cos(total)


def corollary_chain_check(phi, observables, tol: float = 1e-9) -> bool:
    """Re<phi|A_1...A_n|phi> >= cos(theta_1 + ... + theta_n), where
    cos(theta_i) = <phi|A_i|phi> and the angles sum to less than pi."""
    re, bound = _corollary_terms(phi, observables)
    return re >= bound - tol


def lemma_max_check(thetas, tol: float = 1e-12) -> bool:
    """sum cos(theta_i) <= n cos(pi/n) whenever theta_i in [0, pi] sum to >= pi."""
    th = np.asarray(thetas, dtype=float)
    n = len(th)
    if n < 1 or np.any(th < 0) or np.any(th > math.pi):
        raise QuantumError("angles must lie in [0, pi]")
    if th.sum() < math.pi - 1e-12:
        raise QuantumError("angles must sum to at least pi")
    return float(np.cos(th).sum()) <= n * math.cos(math.pi / n) + tol


@dataclass(frozen=True)
class FilterQuantities:
    lam: float
    delta: float

    @property
    def bound(self) -> float:
        return 2 * math.sqrt(2 * max(self.lam, 0.0))


def _check_povm(elems, d, name):
    total = np.zeros((d, d), dtype=complex)
    for e in elems:
        if e.shape != (d, d) or not is_hermitian(e, POVM_TOL):
            raise QuantumError(f"{name} has a non-Hermitian or misshapen element")
        if jacobi_eigh(e)[0][0] < -POVM_TOL:
            raise QuantumError(f"{name} has an element that is not positive semidefinite")
        total += e
    if max_entry(total - np.eye(d)) > POVM_TOL:
        raise QuantumError(f"{name} elements do not sum to the identity")


def filter_quantities(rho, M, N) -> FilterQuantities:
    """lambda = 1 - sum_i tr rho (sqrt M_i sqrt N_i + sqrt N_i sqrt M_i)/2 and
    Delta = sum_i || sqrt M_i rho sqrt M_i - sqrt N_i rho sqrt N_i ||_tr."""
    rho = np.asarray(rho, dtype=complex)
    d = rho.shape[0]
    if not is_hermitian(rho, POVM_TOL) or abs(np.trace(rho).real - 1) > POVM_TOL:
        raise QuantumError("rho must be Hermitian with unit trace")
    if jacobi_eigh(rho)[0][0] < -POVM_TOL:
        raise QuantumError("rho must be positive semidefinite")
    M = [np.asarray(x, dtype=complex) for x in M]
    N = [np.asarray(x, dtype=complex) for x in N]
    if len(M) != len(N):
        raise QuantumError("POVMs must have the same number of outcomes")
    _check_povm(M, d, "M")
    _check_povm(N, d, "N")
    lam, delta = 1.0, 0.0
    for m_i, n_i in zip(M, N):
        sm, sn = psd_sqrt(m_i), psd_sqrt(n_i)
        lam -= np.trace(rho @ (sm @ sn + sn @ sm)).real / 2
        delta += trace_norm(sm @ rho @ sm - sn @ rho @ sn)
    return FilterQuantities(float(lam), float(delta))


# -- campaigns ---------------------------------------------------------------------

@dataclass(frozen=True)
class CampaignResult:
    """Worst slack (bound minus value) over a seeded set of random trials."""

    lemma: str
    trials: int
    seed: int
    n: int | None
    worst_slack: float
    tolerance: float
    seconds: float

    @property
    def passed(self) -> bool:
        return self.worst_slack >= -self.tolerance

    def to_json(self, timing: bool = False) -> dict:
        out = {
            "lemma": self.lemma,
            "trials": self.trials,
            "seed": self.seed,
            "n": self.n,
            "worst_slack": self.worst_slack,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }
        if timing:
            out["seconds"] = self.seconds
        return out


def _campaign_state(trials, rng, n):
    ns = range(1, 7) if n is None else [n]
    worst = math.inf
    for k in ns:
        for _ in range(trials):
            th = rng.uniform(-2 * math.pi, 2 * math.pi, size=k)
            worst = min(worst, -abs(expectation_product(phi_state(k), th) - math.cos(th.sum())))
    return worst, 1e-9


def _campaign_key(trials, rng, n):
    worst = math.inf
    for _ in range(trials):
        d = int(rng.integers(2, 9))
        phi = random_state(d, rng)
        A, B = random_unitary(d, rng), random_unitary(d, rng)
        lhs, rhs = key_lemma_gap(phi, A, B)
        worst = min(worst, rhs - lhs)
    return worst, 1e-9


def sample_corollary_instance(rng: np.random.Generator, n: int | None = None):
    """Rejection-sample (phi, A_1..A_n) whose angles sum to less than pi.

    Observables get few -1 eigenvalues so that expectations are near 1 and
    the hypothesis holds often enough.
    """
    while True:
        k = int(rng.integers(1, 5)) if n is None else n
        d = int(rng.integers(2, 9))
        phi = random_state(d, rng)
        obs = [random_observable(d, rng, int(rng.integers(0, d // 2 + 1))) for _ in range(k)]
        angles = [math.acos(min(1.0, max(-1.0, np.vdot(phi, a @ phi).real))) for a in obs]
        if sum(angles) < math.pi:
            return phi, obs


def _campaign_corollary(trials, rng, n):
    worst = math.inf
    for _ in range(trials):
        phi, obs = sample_corollary_instance(rng, n)
        re, bound = _corollary_terms(phi, obs)
        worst = min(worst, re - bound)
    return worst, 1e-9


def _campaign_filter(trials, rng, n):
    worst = math.inf
    for _ in range(trials):
        d = int(rng.integers(2, 9))
        v = int(rng.integers(2, 5))
        fq = filter_quantities(random_density(d, rng), random_povm(d, v, rng), random_povm(d, v, rng))
        worst = min(worst, fq.bound - fq.delta)
    return worst, 1e-8


def lemma_max_slack(thetas: np.ndarray) -> np.ndarray:
    """Row-wise n cos(pi/n) - sum cos(theta) for a (trials, n) array."""
    n = thetas.shape[1]
    return n * math.cos(math.pi / n) - np.cos(thetas).sum(axis=1)


def sample_lemma_max(rng: np.random.Generator, n: int, trials: int) -> np.ndarray:
    """Feasible angle vectors: half rescaled onto sum = pi (the tight face)."""
    if n == 1:
        return np.full((trials, 1), math.pi)
    out = np.empty((0, n))
    while len(out) < trials:
        th = rng.uniform(0, math.pi, size=(2 * trials, n))
        th = th[th.sum(axis=1) >= math.pi]
        tight = rng.random(len(th)) < 0.5
        th[tight] *= (math.pi / th[tight].sum(axis=1))[:, None]
        out = np.vstack([out, th])
    return out[:trials]


def _campaign_max(trials, rng, n):
    ns = range(1, 7) if n is None else [n]
    worst = math.inf
    for k in ns:
        worst = min(worst, float(lemma_max_slack(sample_lemma_max(rng, k, trials)).min()))
    return worst, 1e-12


def _campaign_tsirelson(trials, rng, n):
    ns = [2, 3, 4] if n is None else [n]
    worst = math.inf
    for k in ns:
        bound = tsirelson_bound(k)
        for t in range(trials):
            if t % 2:
                s = perturbed_cyclic_strategy(k, rng, float(rng.uniform(0, 0.3)))
            else:
                s = random_tensor_strategy(k, rng)
            worst = min(worst, bound - tsirelson_lhs(k, s))
    return worst, 1e-9


CAMPAIGNS = {
    "state": _campaign_state,
    "key": _campaign_key,
    "filter": _campaign_filter,
    "max": _campaign_max,
    "corollary": _campaign_corollary,
    "tsirelson": _campaign_tsirelson,
}


def run_campaign(lemma: str, trials: int, seed: int, n: int | None = None) -> CampaignResult:
    if lemma not in CAMPAIGNS:
        raise ValueError(f"unknown lemma {lemma!r}; choose from {sorted(CAMPAIGNS)}")
    rng = np.random.default_rng(seed)
    t0 = time.perf_counter()
    worst, tol = CAMPAIGNS[lemma](trials, rng, n)
    return CampaignResult(lemma, trials, seed, n, float(worst), tol, time.perf_counter() - t0)
