"""Spec and report files.

Both are JSON. Complex numbers are ``[re, im]`` pairs and a 2x2 matrix is a
list of two rows of such pairs. A spec looks like::

    {"label": "meyer",
     "initial": "heads",
     "ops": ["identity", "sigma1"],
     "weights": [0.5, 0.5]}

``initial`` is "heads", "tails" or a ket ``[[re, im], [re, im]]``; ``weights``
is optional (uniform). Ops are preset names, ``flip(alpha)``, ``nonflip(beta)``
or raw matrices.
"""

from __future__ import annotations

import json
import math
import re
from pathlib import Path
from typing import Any

import numpy as np

from ..errors import DomainError
from ..gamesim import HEADS, TAILS, GameSpec, StrategyPair, pure_density
from ..qalg import HADAMARD, IDENTITY, SIGMA1, SIGMA2, SIGMA3, as_unitary
from ..solver.families import flip_op, nonflip_op

PRESETS = {
    "identity": IDENTITY,
    "sigma1": SIGMA1,
    "sigma2": SIGMA2,
    "sigma3": SIGMA3,
    "hadamard": HADAMARD,
}

# presets that are members of the flip / non-flip families
TYPED_PRESETS = {
    "identity": ("nonflip", 0.0),
    "sigma1": ("flip", 0.0),
    "sigma3": ("nonflip", math.pi),
}

_TYPED_RE = re.compile(r"^\s*(flip|nonflip)\s*\(\s*([^()]+?)\s*\)\s*$")

BUILTIN_SPECS = ("meyer-spec", "sigma13-spec", "phase-spec")


_NUM = r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_PI_RE = re.compile(rf"^([+-])?({_NUM})?\*?(pi)?(?:/({_NUM}))?$")


def _term(text: str, expr: str) -> float:
    m = _PI_RE.match(expr)
    if not m or not (m.group(2) or m.group(3)):
        raise DomainError(f"cannot read angle {text!r}")
    sign, coef, pi, div = m.groups()
    value = float(coef) if coef else 1.0
    if pi:
        value *= math.pi
    if div:
        if float(div) == 0.0:
            raise DomainError(f"cannot read angle {text!r}")
        value /= float(div)
    return -value if sign == "-" else value


def parse_angle(text: str) -> float:
    """A sum of float literals and multiples of pi: ``1.3``, ``-pi/2``, ``0.5*pi``, ``0.3+2pi``."""
    expr = text.replace(" ", "").lower()
    terms = re.split(r"(?<=[^e+\-*/])(?=[+-])", expr) if expr else [""]
    value = sum(_term(text, t) for t in terms)
    if not math.isfinite(value):
        raise DomainError(f"angle {text!r} is not finite")
    return value


def parse_typed(item: Any) -> tuple[str, float] | None:
    """(kind, angle) for typed ops, None for anything else."""
    if not isinstance(item, str):
        return None
    name = item.strip().lower()
    if name in TYPED_PRESETS:
        return TYPED_PRESETS[name]
    m = _TYPED_RE.match(name)
    if m:
        return m.group(1), parse_angle(m.group(2))
    return None


def encode_matrix(m: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m)]


def decode_matrix(data: Any) -> np.ndarray:
    try:
        arr = np.array([[complex(re_, im) for re_, im in row] for row in data], dtype=complex)
    except (TypeError, ValueError) as exc:
        raise DomainError(f"matrix entries must be [re, im] pairs: {exc}") from exc
    return as_unitary(arr)


def parse_op(item: Any) -> np.ndarray:
    if isinstance(item, str):
        name = item.strip().lower()
        if name in PRESETS:
            return PRESETS[name].copy()
        typed = parse_typed(name)
        if typed is None:
            raise DomainError(f"unknown operation {item!r}")
        kind, angle = typed
        return flip_op(angle) if kind == "flip" else nonflip_op(angle)
    return decode_matrix(item)


def _parse_initial(item: Any) -> np.ndarray:
    if item is None or item == "heads":
        return HEADS
    if item == "tails":
        return TAILS
    try:
        ket = [complex(re_, im) for re_, im in item]
    except (TypeError, ValueError) as exc:
        raise DomainError(f"initial state must be 'heads', 'tails' or a ket: {exc}") from exc
    if len(ket) != 2 or abs(np.linalg.norm(ket) - 1.0) > 1e-9:
        raise DomainError("initial ket must be a normalized 2-vector")
    return pure_density(ket)


def spec_from_dict(data: dict) -> GameSpec:
    if not isinstance(data, dict) or "ops" not in data:
        raise DomainError("spec must be an object with an 'ops' list")
    items = data["ops"]
    if not isinstance(items, list) or not items:
        raise DomainError("'ops' must be a non-empty list")
    ops = [parse_op(x) for x in items]
    weights = data.get("weights")
    if weights is None:
        weights = [1.0 / len(ops)] * len(ops)
    names = tuple(x if isinstance(x, str) else "raw" for x in items)
    return GameSpec(_parse_initial(data.get("initial")), tuple(ops), tuple(float(w) for w in weights),
                    str(data.get("label", "")), names)


def builtin_spec(name: str, alpha: float = 0.0, beta: float = 0.0) -> dict:
    if name == "meyer-spec":
        return {"label": "meyer", "ops": ["identity", "sigma1"]}
    if name == "sigma13-spec":
        return {"label": "sigma13", "ops": ["sigma1", "sigma3"]}
    if name == "phase-spec":
        return {"label": "phase-variable", "ops": [f"flip({alpha!r})", f"nonflip({beta!r})"]}
    raise DomainError(f"unknown built-in spec {name!r}")


def load_spec_dict(source: str, alpha: float = 0.0, beta: float = 0.0) -> dict:
    """Read a spec from a built-in name or a JSON file."""
    if source in BUILTIN_SPECS:
        return builtin_spec(source, alpha, beta)
    path = Path(source)
    try:
        return json.loads(path.read_text())
    except OSError as exc:
        raise DomainError(f"cannot read spec {source!r}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise DomainError(f"spec {source!r} is not valid JSON: {exc}") from exc


def load_strategy_file(path: str) -> StrategyPair:
    """Strategy matrices from a previously written report."""
    try:
        data = json.loads(Path(path).read_text())
        strat = data["strategy"]
        return StrategyPair(decode_matrix(strat["u1"]), decode_matrix(strat["u2"]))
    except OSError as exc:
        raise DomainError(f"cannot read strategy file {path!r}: {exc.strerror}") from exc
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise DomainError(f"strategy file {path!r} has no usable 'strategy' entry") from exc


def strategy_dict(pair: StrategyPair) -> dict:
    return {"u1": encode_matrix(pair.u1), "u2": encode_matrix(pair.u2)}


def to_jsonable(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


def dump_report(report: dict, out: str | None) -> str:
    text = json.dumps(to_jsonable(report), indent=2, sort_keys=False)
    if out:
        Path(out).write_text(text + "\n")
    return text
