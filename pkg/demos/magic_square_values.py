"""Magic Square games: classical, entangled and no-signaling values side by side.

Run with ``python demos/magic_square_values.py``.
"""
import math

from nlgames import io
from nlgames.catalog import cyclic_latin, ms_game, ms_game_with_assignment
from nlgames.classical import classical_value
from nlgames.nosignaling import nosignaling_value, parity_witness
from nlgames.game import behavior_value
from nlgames.quantum import magic_square_strategy, strategy_value

# The order-n square has 2n lines; the referee picks one and hands its cells
# to the n players.  Under a Latin square L the routing is fixed.
for n in (2, 3):
    g = ms_game_with_assignment(cyclic_latin(n))
    wc, profile = classical_value(g)
    wq = strategy_value(g, magic_square_strategy(n))
    wns, _ = nosignaling_value(g)
    print(f"MS_{n}(cyclic): classical {wc}  entangled {wq:.6f}  no-signaling {wns}")
    print("   best deterministic tables:", profile.to_json(g))

# The entangled strategy never looks at the routing, so the random-routing
# game gets the same value for every n.
print()
print(" n   strategy value      (1+cos(pi/2n))/2")
for n in range(2, 7):
    v = strategy_value(ms_game(n), magic_square_strategy(n))
    print(f"{n:2d}   {v:.15f}   {(1 + math.cos(math.pi / (2 * n))) / 2:.15f}")

# The parity behavior wins with certainty and is exactly no-signaling.
g = ms_game(3)
s = parity_witness(g)
print()
print("parity behavior on MS_3:", len(s.table), "entries, value", behavior_value(g, s))
print("first entry:", io.dumps(io.behavior_to_json(s)["entries"][0]))
