"""Deterministic JSON writer with a pluggable float format.

``json.dumps`` always writes floats with ``repr``; reports need a fixed
17-significant-digit form instead, so floats are rendered here.
"""
import json
import math

import numpy as np


def g17(x):
    return format(x, ".17g")


def _float(x, float_format):
    if math.isnan(x) or math.isinf(x):
        # not representable in strict JSON
        return "null"
    return float_format(x)


def _render(obj, float_format, indent, level):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _float(float(obj), float_format)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_render(v, float_format, indent, level + 1)}"
                 for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in obj):
            return "[" + ", ".join(_render(v, float_format, indent, level + 1) for v in obj) + "]"
        items = [pad + _render(v, float_format, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(obj, float_format=g17, indent=2):
    return _render(obj, float_format, indent, 0)
