"""JSON formats for games, behaviors, strategies and verifier tables.

Output is canonical: keys sorted, rationals as ``[num, den]``, floats with
17 significant digits so that reports are byte-for-byte reproducible.
"""
from __future__ import annotations

import json
import math
from fractions import Fraction
from pathlib import Path

import numpy as np

from .game import Behavior, Game, GameError, table_game, xor_game


def frac_json(x: Fraction) -> list[int]:
    x = Fraction(x)
    return [x.numerator, x.denominator]


def parse_frac(v) -> Fraction:
    if isinstance(v, (list, tuple)):
        if len(v) != 2 or v[1] == 0:
            raise GameError(f"bad rational {v!r}")
        return Fraction(int(v[0]), int(v[1]))
    if isinstance(v, str):
        return Fraction(v)
    if isinstance(v, int):
        return Fraction(v)
    raise GameError(f"bad rational {v!r}")


def _encode(obj) -> str:
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            raise ValueError(f"non-finite float {x}")
        return format(x, ".17g")
    if isinstance(obj, Fraction):
        return _encode(frac_json(obj))
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        items = sorted((str(k), v) for k, v in obj.items())
        return "{" + ",".join(json.dumps(k) + ":" + _encode(v) for k, v in items) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(_encode(v) for v in obj) + "]"
    raise TypeError(f"cannot encode {type(obj).__name__}")


def dumps(obj) -> str:
    """Canonical JSON: sorted keys, no whitespace, 17-significant-digit floats."""
    return _encode(obj)


def load_json(src):
    if isinstance(src, (str, Path)):
        with open(src) as fh:
            return json.load(fh)
    return src


# -- games -------------------------------------------------------------------

def game_to_json(g: Game) -> dict:
    dist = [{"q": list(q), "p": frac_json(p)} for q, p in sorted(g.distribution.items())]
    if g.xor_targets is not None:
        pred = {
            "type": "xor",
            "targets": [{"q": list(q), "b": b} for q, b in sorted(g.xor_targets.items())],
        }
    else:
        pred = {
            "type": "table",
            "accept": [{"q": list(q), "a": list(a)} for q, a in sorted(g.accept)],
        }
    return {
        "players": g.players,
        "questions": list(g.questions),
        "answers": list(g.answers),
        "distribution": dist,
        "predicate": pred,
    }


def game_from_json(src) -> Game:
    d = load_json(src)
    try:
        m = int(d["players"])
        questions = [str(x) for x in d["questions"]]
        answers = [str(x) for x in d["answers"]]
        dist: dict[tuple, Fraction] = {}
        for e in d["distribution"]:
            q = tuple(int(x) for x in e["q"])
            dist[q] = dist.get(q, Fraction(0)) + parse_frac(e["p"])
        pred = d["predicate"]
        if pred["type"] == "xor":
            targets = {tuple(int(x) for x in e["q"]): int(e["b"]) for e in pred["targets"]}
            return xor_game(m, questions, dist, targets, answers)
        if pred["type"] == "table":
            accept = [(tuple(e["q"]), tuple(e["a"])) for e in pred["accept"]]
            return table_game(m, questions, answers, dist, accept)
        raise GameError(f"unknown predicate type {pred['type']!r}")
    except (KeyError, TypeError) as exc:
        raise GameError(f"malformed game JSON: {exc}") from exc


# -- behaviors -----------------------------------------------------------------

def behavior_to_json(s: Behavior) -> dict:
    return {
        "entries": [
            {"q": list(q), "a": list(a), "p": frac_json(p)} for (q, a), p in sorted(s.table.items())
        ]
    }


def behavior_from_json(src, shape) -> Behavior:
    d = load_json(src)
    return Behavior.from_entries(
        shape, ((tuple(e["q"]), tuple(e["a"]), parse_frac(e["p"])) for e in d["entries"])
    )


# -- complex matrices ----------------------------------------------------------

def cvec_to_json(v) -> list:
    return [[float(z.real), float(z.imag)] for z in np.asarray(v, dtype=complex).ravel()]


def cmat_to_json(m) -> list:
    return [cvec_to_json(row) for row in np.asarray(m, dtype=complex)]


def cvec_from_json(v) -> np.ndarray:
    return np.array([complex(re, im) for re, im in v], dtype=complex)


def cmat_from_json(m) -> np.ndarray:
    return np.array([[complex(re, im) for re, im in row] for row in m], dtype=complex)
