"""JSON documents for chaos elements and deterministic report output.

A chaos document looks like::

    {"grid": {"horizon": 1, "cells": 1},
     "degrees": {"0": [0.5, 0], "1": [[1, 0]]}}

Complex numbers are ``[re, im]`` pairs, degree-``n`` kernels are nested
row-major arrays of depth ``n`` with every axis of length ``cells``.
"""
from __future__ import annotations

import json
import math

import numpy as np

from .chaos import ChaosElement
from .exceptions import ParseError, SchemaError
from .grid import CoeffTensor, GridSpec

__all__ = [
    "dumps",
    "parse_chaos_json",
    "parse_chaos_document",
    "chaos_document",
    "emit_chaos_json",
    "parse_grid",
    "parse_degrees",
    "parse_direction",
    "complex_pair",
]


def _format_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"cannot serialize non-finite value {x!r}")
    text = format(x, ".17g")
    if x == 0:
        return "0"
    return text


def dumps(obj, indent: int = 2) -> str:
    """Serialize with every float written to 17 significant digits."""

    def enc(o, level):
        pad = " " * (indent * (level + 1))
        end = " " * (indent * level)
        if isinstance(o, bool) or o is None:
            return json.dumps(o)
        if isinstance(o, (int, np.integer)):
            return str(int(o))
        if isinstance(o, (float, np.floating)):
            return _format_float(float(o))
        if isinstance(o, str):
            return json.dumps(o)
        if isinstance(o, dict):
            if not o:
                return "{}"
            items = [f"{pad}{json.dumps(str(k))}: {enc(v, level + 1)}" for k, v in o.items()]
            return "{\n" + ",\n".join(items) + "\n" + end + "}"
        if isinstance(o, (list, tuple)):
            if not o:
                return "[]"
            if all(not isinstance(v, (list, tuple, dict)) for v in o):
                return "[" + ", ".join(enc(v, level + 1) for v in o) + "]"
            items = [pad + enc(v, level + 1) for v in o]
            return "[\n" + ",\n".join(items) + "\n" + end + "]"
        raise TypeError(f"cannot serialize {type(o).__name__}")

    return enc(obj, 0) + "\n"


def complex_pair(z) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def _pairs(arr: np.ndarray):
    if arr.ndim == 0:
        return complex_pair(arr)
    return [_pairs(sub) for sub in arr]


def _read_number(x, where: str) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise SchemaError(f"{where}: expected a number, got {x!r}")
    return float(x)


def _read_pair(x, where: str) -> complex:
    if not (isinstance(x, list) and len(x) == 2):
        raise SchemaError(f"{where}: expected an [re, im] pair, got {x!r}")
    return complex(_read_number(x[0], where), _read_number(x[1], where))


def _read_nested(x, depth: int, cells: int, where: str) -> np.ndarray:
    if depth == 0:
        return np.asarray(_read_pair(x, where), dtype=complex)
    if not isinstance(x, list):
        raise SchemaError(f"{where}: nesting depth too shallow")
    if len(x) != cells:
        raise SchemaError(f"{where}: axis of length {len(x)}, expected {cells}")
    return np.stack([_read_nested(sub, depth - 1, cells, f"{where}[{i}]") for i, sub in enumerate(x)])


def parse_grid(obj) -> GridSpec:
    if not isinstance(obj, dict) or set(obj) != {"horizon", "cells"}:
        raise SchemaError("grid must be an object with exactly 'horizon' and 'cells'")
    cells = obj["cells"]
    if isinstance(cells, bool) or not isinstance(cells, int) or cells < 1:
        raise SchemaError(f"cells must be a positive integer, got {cells!r}")
    horizon = _read_number(obj["horizon"], "grid.horizon")
    if horizon <= 0:
        raise SchemaError("grid.horizon must be positive")
    return GridSpec(horizon, cells)


def parse_degrees(obj, grid: GridSpec) -> ChaosElement:
    if not isinstance(obj, dict):
        raise SchemaError("degrees must be an object")
    parts = {}
    for key, value in obj.items():
        if not (isinstance(key, str) and key.isdigit() and str(int(key)) == key):
            raise SchemaError(f"degree key {key!r} is not a decimal integer")
        n = int(key)
        parts[n] = _read_nested(value, n, grid.cells, f"degrees[{key}]")
    return ChaosElement(grid, parts)


def parse_direction(obj, grid: GridSpec) -> CoeffTensor:
    """A degree-1 kernel given as a list of ``[re, im]`` pairs."""
    return CoeffTensor(grid, _read_nested(obj, 1, grid.cells, "direction"))


def _load(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON: {exc}") from exc


def parse_chaos_document(doc) -> ChaosElement:
    if not isinstance(doc, dict) or set(doc) != {"grid", "degrees"}:
        raise SchemaError("chaos document needs exactly 'grid' and 'degrees'")
    return parse_degrees(doc["degrees"], parse_grid(doc["grid"]))


def parse_chaos_json(text: str) -> ChaosElement:
    return parse_chaos_document(_load(text))


def chaos_document(y: ChaosElement) -> dict:
    horizon = y.grid.horizon
    return {
        "grid": {"horizon": int(horizon) if horizon.is_integer() else horizon, "cells": y.grid.cells},
        "degrees": {str(n): _pairs(a) for n, a in y.arrays().items()},
    }


def emit_chaos_json(y: ChaosElement) -> str:
    return dumps(chaos_document(y))


def load_json(text: str):
    return _load(text)
