import math

import numpy as np
import pytest

from nlgames.lemmas import (
    CAMPAIGNS,
    corollary_chain_check,
    cyclic_tsirelson_strategy,
    filter_quantities,
    key_lemma_gap,
    lemma_max_check,
    random_tensor_strategy,
    run_campaign,
    sample_lemma_max,
    tsirelson_bound,
    tsirelson_lhs,
    wehner_strategy,
)
from nlgames.linalg import random_density, random_observable, random_povm, random_state, random_unitary
from nlgames.quantum import QuantumError


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_cyclic_strategy_is_tight(n):
    assert tsirelson_lhs(n, cyclic_tsirelson_strategy(n)) == pytest.approx(tsirelson_bound(n), abs=1e-12)


def test_chsh_bound():
    assert tsirelson_bound(2) == pytest.approx(2 * math.sqrt(2))


@pytest.mark.parametrize("n", [2, 3])
def test_random_below_bound(n):
    rng = np.random.default_rng(n)
    for _ in range(50):
        assert tsirelson_lhs(n, random_tensor_strategy(n, rng)) <= tsirelson_bound(n) + 1e-9


@pytest.mark.parametrize("n", [2, 3, 4])
def test_wehner_embedding(n):
    """Two-system chained correlator equals the n-party expression."""
    rng = np.random.default_rng(10 + n)
    d1, d2 = 2, 3
    xs = [random_observable(d1, rng) for _ in range(n)]
    ys = [random_observable(d2, rng) for _ in range(n)]
    psi = random_state(d1 * d2, rng)
    s = wehner_strategy(xs, ys, psi, (d1, d2))

    def corr(y, x):
        return np.vdot(psi, np.kron(y, x) @ psi).real

    # only party 0 (Y, index k) and party n-1 (X, index k-(n-1)) are nontrivial
    want = sum(corr(ys[j], xs[j]) for j in range(n))
    for k in range(n):
        sign = -1 if k == n - 1 else 1
        want += sign * corr(ys[k], xs[(k - (n - 1)) % n])
    assert tsirelson_lhs(n, s) == pytest.approx(want, abs=1e-12)
    assert tsirelson_lhs(n, s) <= tsirelson_bound(n) + 1e-9


def test_wehner_needs_two():
    with pytest.raises(QuantumError):
        wehner_strategy([np.eye(2)], [np.eye(2)], np.array([1, 0, 0, 0]), (2, 2))


def test_key_lemma_extremes():
    rng = np.random.default_rng(0)
    d = 4
    phi = random_state(d, rng)
    u = random_unitary(d, rng)
    lhs, rhs = key_lemma_gap(phi, np.eye(d), u)
    # rhs is sqrt(1 - |<I>|^2): double rounding of order 1e-16 becomes 1e-8
    assert lhs == pytest.approx(0, abs=1e-14) and rhs == pytest.approx(0, abs=1e-7)
    with pytest.raises(QuantumError):
        key_lemma_gap(phi, 2 * np.eye(d), u)


def test_corollary_hypothesis():
    phi = np.array([1, 0])
    x = np.array([[0, 1], [1, 0]])
    # <x> = 0 so two copies sum to pi: hypothesis fails
    with pytest.raises(QuantumError, match="hypothesis"):
        corollary_chain_check(phi, [x, x])
    assert corollary_chain_check(phi, [x])


def test_lemma_max_equality():
    for n in range(1, 7):
        assert lemma_max_check([math.pi / n] * n, tol=1e-12)
        th = np.full((1, n), math.pi / n)
        assert abs(n * math.cos(math.pi / n) - np.cos(th).sum()) < 1e-12


def test_lemma_max_domain():
    with pytest.raises(QuantumError):
        lemma_max_check([0.1, 0.1])
    with pytest.raises(QuantumError):
        lemma_max_check([4.0, 0.0])


def test_sample_lemma_max_feasible():
    th = sample_lemma_max(np.random.default_rng(0), 4, 1000)
    assert th.shape == (1000, 4)
    assert (th.sum(axis=1) >= math.pi - 1e-12).all()
    assert ((th >= 0) & (th <= math.pi)).all()


def test_filter_identical_povms():
    rng = np.random.default_rng(1)
    rho = random_density(3, rng)
    m = random_povm(3, 2, rng)
    fq = filter_quantities(rho, m, m)
    assert fq.lam == pytest.approx(0, abs=1e-10)
    assert fq.delta == pytest.approx(0, abs=1e-10)


def test_filter_validation():
    rng = np.random.default_rng(2)
    rho = random_density(2, rng)
    with pytest.raises(QuantumError):
        filter_quantities(rho, [np.eye(2)], [np.eye(2) / 2])
    with pytest.raises(QuantumError):
        filter_quantities(2 * rho, [np.eye(2)], [np.eye(2)])


@pytest.mark.parametrize("lemma", sorted(CAMPAIGNS))
def test_campaigns_small(lemma):
    res = run_campaign(lemma, 30, seed=3)
    assert res.passed, res
    js = res.to_json()
    assert "seconds" not in js and js["lemma"] == lemma


def test_campaign_deterministic():
    a = run_campaign("key", 20, seed=4)
    b = run_campaign("key", 20, seed=4)
    assert a.worst_slack == b.worst_slack


def test_unknown_campaign():
    with pytest.raises(ValueError):
        run_campaign("nope", 1, 0)
