"""Command-line entry point.

Every command prints one canonical JSON document.  Exit status is 0 on
success, 2 on bad input and 3 when a size budget would be exceeded.
"""
from __future__ import annotations

import argparse
import hashlib
import os
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import catalog, classical, io, lemmas, nosignaling, pcp, quantum, xor_sdp
from .game import BudgetError, GameError, validate_game

EXIT_INPUT = 2
EXIT_BUDGET = 3

# hard ceilings that flags cannot raise budgets past
MAX_PROFILES = 2**40
MAX_LP_VARS = 10**7


class InputError(Exception):
    pass


def _digest(path: str) -> str:
    return "sha256:" + hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _load_game(path: str):
    try:
        g = io.game_from_json(path)
    except (OSError, ValueError) as exc:
        raise InputError(f"cannot read game {path}: {exc}") from exc
    report = validate_game(g)
    if not report.ok:
        raise InputError("invalid game:\n  " + "\n  ".join(report.violations))
    return g


def _capped(value: int, cap: int, name: str) -> int:
    if value > cap:
        raise InputError(f"--{name} {value} exceeds the hard cap {cap}")
    return value


def _report(args, payload: dict, inputs: dict, seed=None) -> dict:
    out = dict(payload)
    out["command"] = args.command_name
    out["inputs"] = inputs
    out["seed"] = seed
    return out


# -- handlers ---------------------------------------------------------------------

def cmd_catalog_ms(args):
    if args.latin is None:
        return io.game_to_json(catalog.ms_game(args.n))
    if args.latin == "cyclic":
        sq = catalog.cyclic_latin(args.n)
    elif args.latin == "noncyclic4":
        if args.n != 4:
            raise InputError("the non-cyclic square is only defined for n = 4")
        sq = catalog.order4_noncyclic_latin()
    else:
        sq = catalog.LatinSquare.from_json(io.load_json(args.latin))
        if sq.order != args.n:
            raise InputError(f"Latin square has order {sq.order}, expected {args.n}")
    return io.game_to_json(catalog.ms_game_with_assignment(sq))


def cmd_catalog_chsh(args):
    return io.game_to_json(catalog.chsh_game())


def cmd_catalog_latin(args):
    sq = catalog.order4_noncyclic_latin() if args.kind == "noncyclic4" else catalog.cyclic_latin(args.n)
    return sq.to_json()


def cmd_catalog_ghz(args):
    return pcp.ghz_verifier_table().to_json()


def cmd_value_classical(args):
    g = _load_game(args.game)
    budget = _capped(args.budget, MAX_PROFILES, "budget")
    value, profile = classical.classical_value(g, budget=budget)
    payload = {"value": io.frac_json(value), "witness": profile.to_json(g)}
    return _report(args, payload, {"game": _digest(args.game)})


def cmd_value_nosignaling(args):
    g = _load_game(args.game)
    max_vars = _capped(args.max_vars, MAX_LP_VARS, "max-vars")
    value, behavior = nosignaling.nosignaling_value(g, max_vars=max_vars)
    payload = {"value": io.frac_json(value), "witness": None}
    if args.witness_out:
        Path(args.witness_out).write_text(io.dumps(io.behavior_to_json(behavior)) + "\n")
        payload["witness"] = args.witness_out
    return _report(args, payload, {"game": _digest(args.game)})


def cmd_value_xor_quantum(args):
    g = _load_game(args.game)
    sol = xor_sdp.quantum_value(xor_sdp.from_game(g), tol=args.tol, restarts=args.restarts, seed=args.seed)
    return _report(args, {"value": sol.value, "bias": sol.bias}, {"game": _digest(args.game)}, args.seed)


def cmd_decide_one(args):
    g = _load_game(args.game)
    d = classical.decide_value_one_2p_binary(g)
    witness = d.profile.to_json(g) if d.profile is not None else d.conflict
    return _report(args, {"value_one": d.value_one, "witness": witness}, {"game": _digest(args.game)})


def cmd_simulate_quantum(args):
    g = _load_game(args.game)
    try:
        s = quantum.strategy_from_json(args.strategy, g.questions)
    except OSError as exc:
        raise InputError(f"cannot read strategy {args.strategy}: {exc}") from exc
    value = quantum.strategy_value(g, s)
    inputs = {"game": _digest(args.game), "strategy": _digest(args.strategy)}
    return _report(args, {"value": value}, inputs)


def cmd_witness_parity(args):
    g = _load_game(args.game)
    return io.behavior_to_json(nosignaling.parity_witness(g))


def cmd_compile_pcp(args):
    try:
        table = pcp.PcpVerifierTable.from_json(args.verifier)
    except OSError as exc:
        raise InputError(f"cannot read verifier {args.verifier}: {exc}") from exc
    build = pcp.compile_simulation_only if args.simulation_only else pcp.compile_three_prover
    return io.game_to_json(build(table))


def cmd_bound_soundness(args):
    try:
        s = Fraction(args.s)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad --s {args.s!r}") from exc
    eps = pcp.soundness_bound(args.r, s)
    return _report(args, {"epsilon": io.frac_json(eps), "r": args.r, "s": io.frac_json(s)}, {})


def cmd_check_lemma(args):
    res = lemmas.run_campaign(args.lemma, args.trials, args.seed, args.n)
    return _report(args, res.to_json(), {}, args.seed)


# -- parser ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="nlgames",
        description="Values, strategies and inequality checks for one-round cooperative games.",
    )
    p.add_argument("--timing", action="store_true", help="add wall-clock seconds to reports")
    sub = p.add_subparsers(dest="group", required=True)

    def leaf(parent, name, handler, help_):
        sp = parent.add_parser(name, help=help_, description=help_)
        sp.set_defaults(handler=handler, command_name=None)
        return sp

    cat = sub.add_parser("catalog", help="emit built-in games, Latin squares and verifiers")
    cat_sub = cat.add_subparsers(dest="what", required=True)
    sp = leaf(cat_sub, "ms", cmd_catalog_ms,
              "n-player Magic Square game: random routing of cells to players, "
              "or fixed routing by a Latin square")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--latin", help="'cyclic', 'noncyclic4', or a Latin square JSON file")
    leaf(cat_sub, "chsh", cmd_catalog_chsh, "CHSH game (2-player Magic Square, cyclic routing)")
    sp = leaf(cat_sub, "latin", cmd_catalog_latin, "Latin square JSON")
    sp.add_argument("--n", type=int, default=4)
    sp.add_argument("--kind", choices=["cyclic", "noncyclic4"], default="cyclic")
    leaf(cat_sub, "ghz", cmd_catalog_ghz, "verifier table of the unsatisfiable GHZ parity formula")

    val = sub.add_parser("value", help="game values")
    val_sub = val.add_subparsers(dest="kind", required=True)
    sp = leaf(val_sub, "classical", cmd_value_classical,
              "exact classical value by enumerating deterministic strategies")
    sp.add_argument("game")
    sp.add_argument("--budget", type=int, default=classical.DEFAULT_BUDGET)
    sp = leaf(val_sub, "nosignaling", cmd_value_nosignaling,
              "exact no-signaling value by rational simplex")
    sp.add_argument("game")
    sp.add_argument("--witness-out", help="write the optimal behavior JSON here")
    sp.add_argument("--max-vars", type=int, default=nosignaling.DEFAULT_MAX_VARS)
    sp = leaf(val_sub, "xor-quantum", cmd_value_xor_quantum,
              "entangled value of a two-player XOR game via the vector relaxation")
    sp.add_argument("game")
    sp.add_argument("--tol", type=float, default=1e-6)
    sp.add_argument("--restarts", type=int, default=32)
    sp.add_argument("--seed", type=int, default=0)

    dec = sub.add_parser("decide", help="decision procedures")
    dec_sub = dec.add_subparsers(dest="kind", required=True)
    sp = leaf(dec_sub, "one", cmd_decide_one,
              "decide value 1 for two-player binary games through 2SAT")
    sp.add_argument("game")

    sim = sub.add_parser("simulate", help="strategy simulation")
    sim_sub = sim.add_subparsers(dest="kind", required=True)
    sp = leaf(sim_sub, "quantum", cmd_simulate_quantum, "winning probability of a tensor-product strategy")
    sp.add_argument("game")
    sp.add_argument("strategy")

    wit = sub.add_parser("witness", help="explicit behaviors")
    wit_sub = wit.add_subparsers(dest="kind", required=True)
    sp = leaf(wit_sub, "parity", cmd_witness_parity, "perfect no-signaling behavior for an XOR game")
    sp.add_argument("game")

    com = sub.add_parser("compile", help="game compilers")
    com_sub = com.add_subparsers(dest="kind", required=True)
    sp = leaf(com_sub, "pcp", cmd_compile_pcp,
              "three-prover game from a 3-query verifier (consistency + simulation tests)")
    sp.add_argument("verifier")
    sp.add_argument("--simulation-only", action="store_true")

    bnd = sub.add_parser("bound", help="closed-form bounds")
    bnd_sub = bnd.add_subparsers(dest="kind", required=True)
    sp = leaf(bnd_sub, "soundness", cmd_bound_soundness,
              "epsilon = (1/384)(1-s)^2 2^(-2r) for the compiled three-prover game")
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--s", required=True, help="PCP soundness as num/den")

    chk = sub.add_parser("check", help="randomized inequality campaigns")
    chk_sub = chk.add_subparsers(dest="kind", required=True)
    sp = leaf(chk_sub, "lemma", cmd_check_lemma,
              "state: product expectations on the shared state; key: covariance bound for unitaries; "
              "filter: POVM disturbance bound; max: cosine-sum bound; corollary: chained cosine bound; "
              "tsirelson: the n-party correlation inequality")
    sp.add_argument("lemma", choices=sorted(lemmas.CAMPAIGNS))
    sp.add_argument("--trials", type=int, default=1000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--n", type=int, default=None)
    return p


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    args.command_name = " ".join(
        x for x in (args.group, getattr(args, "what", None) or getattr(args, "kind", None)) if x
    )
    t0 = time.perf_counter()
    try:
        out = args.handler(args)
    except BudgetError as exc:
        print(f"budget exceeded: {exc}", file=stderr)
        return EXIT_BUDGET
    except (InputError, GameError, quantum.QuantumError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_INPUT
    if args.timing and "command" in out:
        out["wall_time"] = time.perf_counter() - t0
    print(io.dumps(out), file=stdout)
    return 0


def main() -> None:
    try:
        code = run()
        sys.stdout.flush()
    except BrokenPipeError:
        # reader went away (e.g. `| head`); silence the flush at interpreter exit
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        code = 0
    sys.exit(code)


if __name__ == "__main__":
    main()
