"""Stable JSON rendering of results."""

from __future__ import annotations

import json
from dataclasses import asdict, is_dataclass
from fractions import Fraction

from gmpy2 import mpq, mpz


def _plain(obj):
    if hasattr(obj, "to_dict"):
        return _plain(obj.to_dict())
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if type(obj) is type(mpz(0)):
        return int(obj)
    if isinstance(obj, (Fraction, type(mpq(0)))):
        # rationals travel as "a/b" strings so nothing is rounded
        return str(obj.numerator) if obj.denominator == 1 else f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, float):
        raise TypeError("floats are not emitted; convert to an exact value first")
    if is_dataclass(obj):
        return _plain(asdict(obj))
    return str(obj)


def emit_json(result) -> str:
    """Key-sorted, indented JSON; the same result always gives the same bytes."""
    return json.dumps(_plain(result), sort_keys=True, indent=2, ensure_ascii=True) + "\n"
