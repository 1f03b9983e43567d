"""Deterministic JSON rendering of decomposition results.

Floats are written with 17 significant digits so every double round-trips.
Complex matrices become ``{"re": [[...]], "im": [[...]]}``; matrices whose
imaginary part is exactly zero are written as plain real arrays.
"""

import json
import math

import numpy as np

__all__ = ["format_float", "matrix", "dumps"]


def format_float(x):
    x = float(x)
    if math.isnan(x) or math.isinf(x):
        return "null"
    if x == 0.0:
        return "0.0"
    s = format(x, ".17g")
    if "e" not in s and "." not in s:
        s += ".0"
    return s


def matrix(M):
    """JSON-ready form of a real or complex array."""
    M = np.asarray(M)
    if np.iscomplexobj(M):
        if np.any(M.imag != 0):
            return {"re": M.real.tolist(), "im": M.imag.tolist()}
        M = M.real
    return M.tolist()


def _is_flat(seq):
    return all(not isinstance(v, (list, tuple, dict)) for v in seq)


def _emit(obj, indent, level, out):
    pad = " " * (indent * level)
    inner = " " * (indent * (level + 1))
    if isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        items = list(obj.items())
        for k, (key, val) in enumerate(items):
            out.append(f"{inner}{json.dumps(str(key))}: ")
            _emit(val, indent, level + 1, out)
            out.append(",\n" if k < len(items) - 1 else "\n")
        out.append(pad + "}")
    elif isinstance(obj, (list, tuple)):
        if not obj:
            out.append("[]")
        elif _is_flat(obj):
            # rows of a matrix stay on one line
            out.append("[")
            for k, val in enumerate(obj):
                _emit(val, indent, level + 1, out)
                if k < len(obj) - 1:
                    out.append(", ")
            out.append("]")
        else:
            out.append("[\n")
            for k, val in enumerate(obj):
                out.append(inner)
                _emit(val, indent, level + 1, out)
                out.append(",\n" if k < len(obj) - 1 else "\n")
            out.append(pad + "]")
    elif isinstance(obj, (bool, np.bool_)):
        out.append("true" if obj else "false")
    elif obj is None:
        out.append("null")
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(format_float(obj))
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, np.ndarray):
        _emit(matrix(obj), indent, level, out)
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj, indent=2):
    out = []
    _emit(obj, indent, 0, out)
    out.append("\n")
    return "".join(out)
