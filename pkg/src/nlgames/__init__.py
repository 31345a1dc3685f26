"""Nonlocal games: classical, no-signaling and entangled values, explicit
quantum strategies, and three-prover games compiled from PCP verifiers."""

from .catalog import (
    LatinSquare,
    chsh_game,
    cyclic_latin,
    ghz_verifier_table,
    ms_game,
    ms_game_with_assignment,
    order4_noncyclic_latin,
)
from .classical import classical_value, decide_value_one_2p_binary
from .game import (
    Behavior,
    BudgetError,
    Game,
    GameError,
    behavior_value,
    check_no_signaling,
    deterministic_behavior,
    extract_xor_rule,
    is_symmetric_game,
    validate_game,
)
from .nosignaling import build_nosignaling_lp, nosignaling_value, parity_witness, solve_lp
from .pcp import compile_simulation_only, compile_three_prover, cnf3_to_verifier, soundness_bound
from .quantum import (
    GlobalStrategy,
    TensorStrategy,
    magic_square_strategy,
    phi_state,
    strategy_value,
    z_theta,
)

__version__ = "0.1.0"
