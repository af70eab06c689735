"""Canonical JSON: sorted keys, floats at 9 significant digits.

Equal documents serialize byte-identically on every platform, which
makes project files diff-friendly and exports reproducible. Floats are
formatted with %.9g (integral values lose the trailing ".0"; they parse
back equal). NaN and infinities are rejected.
"""

from __future__ import annotations

import json
import math


def format_float(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        raise ValueError("non-finite floats cannot be serialized")
    if x == 0.0:
        return "0"  # normalizes -0.0 as well
    return format(x, ".9g")


def quantize(x: float) -> float:
    """Snap a float onto the 9-significant-digit serialization grid."""
    return float(format_float(x))


def _write(value, out: list[str]) -> None:
    if value is None:
        out.append("null")
    elif value is True:
        out.append("true")
    elif value is False:
        out.append("false")
    elif isinstance(value, str):
        out.append(json.dumps(value, ensure_ascii=False))
    elif isinstance(value, int):
        out.append(str(value))
    elif isinstance(value, float):
        out.append(format_float(value))
    elif isinstance(value, dict):
        out.append("{")
        first = True
        for key in sorted(value.keys()):
            if not isinstance(key, str):
                raise TypeError(f"object keys must be strings, got {type(key).__name__}")
            if not first:
                out.append(",")
            first = False
            out.append(json.dumps(key, ensure_ascii=False))
            out.append(":")
            _write(value[key], out)
        out.append("}")
    elif isinstance(value, (list, tuple)):
        out.append("[")
        for i, item in enumerate(value):
            if i:
                out.append(",")
            _write(item, out)
        out.append("]")
    else:
        raise TypeError(f"cannot canonicalize {type(value).__name__}")


def dumps(value) -> str:
    out: list[str] = []
    _write(value, out)
    return "".join(out)


def dump_bytes(value) -> bytes:
    return dumps(value).encode("utf-8")


def loads(text: str | bytes):
    return json.loads(text)
