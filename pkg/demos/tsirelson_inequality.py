"""The n-party correlation inequality and the operator lemmas behind it.

The chained expression sum_j <M_j> + sum_{k<n} <N_k> - <N_n> is bounded by
2n cos(pi/2n); the Magic Square observables, read off the cyclic square,
reach that bound.
"""
import math

import numpy as np

from nlgames.lemmas import (
    cyclic_tsirelson_strategy,
    lemma_max_check,
    perturbed_cyclic_strategy,
    random_tensor_strategy,
    run_campaign,
    tsirelson_bound,
    tsirelson_lhs,
)

rng = np.random.default_rng(1)

print(" n   optimal lhs       bound            best of 200 random   perturbed optimum")
for n in (2, 3, 4):
    bound = tsirelson_bound(n)
    opt = tsirelson_lhs(n, cyclic_tsirelson_strategy(n))
    rand = max(tsirelson_lhs(n, random_tensor_strategy(n, rng)) for _ in range(200))
    pert = tsirelson_lhs(n, perturbed_cyclic_strategy(n, rng, 0.05))
    print(f"{n:2d}   {opt:.12f}  {bound:.12f}   {rand:.6f}             {pert:.6f}")

# equality case of the cosine-sum bound
for n in (2, 3, 6):
    th = [math.pi / n] * n
    print(f"n={n}: sum cos(pi/n) = {sum(map(math.cos, th)):.15f}, bound holds: {lemma_max_check(th)}")

print()
for lemma in ("state", "key", "corollary", "filter", "max", "tsirelson"):
    r = run_campaign(lemma, trials=100, seed=0)
    print(f"{lemma:10s} worst slack {r.worst_slack: .3e}  (tolerance {r.tolerance:.0e})  passed={r.passed}")
