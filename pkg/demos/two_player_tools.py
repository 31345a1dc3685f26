"""Two-player tools: the vector relaxation for XOR games and the 2SAT test
for perfect classical strategies."""
import itertools
import random
from fractions import Fraction

from nlgames.catalog import chsh_game
from nlgames.classical import classical_value, decide_value_one_2p_binary
from nlgames.game import xor_game
from nlgames.nosignaling import nosignaling_value
from nlgames.xor_sdp import from_game, quantum_value, witness_bias

g = chsh_game()
sol = quantum_value(from_game(g))
print("CHSH: classical", classical_value(g)[0], " entangled %.10f" % sol.value, " no-signaling", nosignaling_value(g)[0])
print("Gram vectors reproduce the bias:", witness_bias(from_game(g), sol.u, sol.v), sol.bias)
print("value one?", decide_value_one_2p_binary(g).decision.value)

# a random 3x3 XOR game
rng = random.Random(5)
qs = list(itertools.product(range(3), repeat=2))
dist = {q: Fraction(1, 9) for q in qs}
h = xor_game(2, ["x", "y", "z"], dist, {q: rng.randint(0, 1) for q in qs})
print()
print("random 3x3 XOR game: classical", classical_value(h)[0], " entangled %.6f" % quantum_value(from_game(h)).value)

# an 'equality' game is won by answering 0 everywhere
eq = xor_game(2, ["x", "y", "z"], dist, {q: 0 for q in qs})
d = decide_value_one_2p_binary(eq)
print("equality game value one:", d.value_one, "tables", d.profile.to_json(eq))
