"""From an unsatisfiable parity formula to a game entangled provers win.

x1+x3+x5 = 1, x1+x4+x6 = x2+x3+x6 = x2+x4+x5 = 0 (mod 2) cannot all hold.
Compiled into a three-prover game, classical provers lose, but provers
sharing a GHZ state pass the simulation test every time.
"""
from fractions import Fraction

from nlgames.classical import classical_value
from nlgames.pcp import (
    OrClause,
    XorConstraint,
    cnf3_to_verifier,
    compile_simulation_only,
    compile_three_prover,
    ghz_verifier_table,
    honest_profile,
    soundness_bound,
)
from nlgames.game import behavior_value, deterministic_behavior
from nlgames.quantum import ghz_strategy, strategy_value

t = ghz_verifier_table()
print("best proof passes", t.soundness(), "of the checks")

sim = compile_simulation_only(t)
full = compile_three_prover(t)
print(f"simulation-only game: {len(sim.support())} question triples, classical {classical_value(sim)[0]}")
print(f"with consistency test: {len(full.support())} question triples, classical {classical_value(full)[0]}")
print("GHZ provers on simulation-only:", strategy_value(sim, ghz_strategy(questions=sim.questions)))
print("GHZ provers on the full game:  ", strategy_value(full, ghz_strategy(questions=full.questions)))

# completeness: a satisfiable instance and its honest provers
clauses = [OrClause((1, -2, 3)), XorConstraint((2, 3, 4), 1), OrClause((-1, -3, 4))]
proof = (0, 0, 1, 0)
vt = cnf3_to_verifier(clauses)
g = compile_three_prover(vt)
print()
print("verifier accepts the proof with probability", vt.acceptance(proof))
print("satisfiable instance, honest provers win with probability",
      behavior_value(g, deterministic_behavior(g, honest_profile(g, proof))))

for r, s in [(2, Fraction(1, 2)), (4, Fraction(3, 4)), (3, Fraction(1))]:
    print(f"soundness gap for r={r}, s={s}: {soundness_bound(r, s)}")
