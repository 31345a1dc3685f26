"""Making a strategy symmetric under relabeling the players.

The shared space grows by a factor m!; the new state carries a uniform
superposition over permutations, and each player measures the operator of
whichever player the permutation register points to.
"""
import numpy as np

from nlgames.catalog import ms_game
from nlgames.game import check_no_signaling
from nlgames.linalg import random_observable, random_state
from nlgames.quantum import (
    GlobalStrategy,
    TensorStrategy,
    commutation_defect,
    extract_classical,
    global_strategy_value,
    magic_square_strategy,
    symmetrize,
    symmetry_defect,
)

g = ms_game(3)
base = magic_square_strategy(3).to_global()
sym = symmetrize(base)
print("dimension", base.dim, "->", sym.dim)
print("value before %.12f after %.12f" % (global_strategy_value(g, base), global_strategy_value(g, sym)))
print("largest commutator between players: %.1e" % commutation_defect(sym)[0])
print("symmetry defect (state, operators): %.1e %.1e" % symmetry_defect(sym, base.dim))

# When every operator commutes, even within one player, the strategy is
# classical: sample a full answer table, then read off the asked entries.
z = np.diag([1.0, 0.0])
p = {(0, 0): np.kron(z, np.eye(2)), (0, 1): np.kron(np.eye(2), z),
     (1, 0): np.kron(np.eye(2), z), (1, 1): np.kron(z, z)}
psi = np.array([0.5, 0.5, 0.5, 0.5])
ex = extract_classical(GlobalStrategy(2, psi, p))
print()
print("answer tables with positive weight:", len(ex.distribution))
print("induced behavior is no-signaling:", check_no_signaling(ex.behavior).ok)
