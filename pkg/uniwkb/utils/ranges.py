"""
ranges.py
Parsers for the compact command-line forms "0..5", "k=v,k=v" and "a,b".
"""
from __future__ import annotations

from typing import Dict, List, Optional, Sequence

from uniwkb.core.errors import ValidationError


def parse_quantum_numbers(text: str) -> List[int]:
    """
    "0..5" → [0, 1, 2, 3, 4, 5];  "3" → [3].

    Raises:
        ValidationError: malformed text, negative numbers or an empty range.
    """
    text = (text or "").strip()
    if ".." in text:
        head, _, tail = text.partition("..")
        lo, hi = _integer(head), _integer(tail)
    else:
        lo = hi = _integer(text)
    if lo < 0:
        raise ValidationError(f"quantum numbers must be non-negative, got {text!r}")
    if hi < lo:
        raise ValidationError(f"range must be ascending, got {text!r}")
    return list(range(lo, hi + 1))


def _integer(text: str) -> int:
    try:
        return int(text.strip())
    except ValueError:
        raise ValidationError(f"expected an integer, got {text!r}") from None


def parse_params(text: Optional[str]) -> Dict[str, str]:
    """"v0=1,alpha=2" → {"v0": "1", "alpha": "2"}; values stay strings."""
    params: Dict[str, str] = {}
    if not text:
        return params
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        key, sep, value = item.partition("=")
        if not sep or not key.strip() or not value.strip():
            raise ValidationError(f"parameters must look like key=value, got {item!r}")
        if key.strip() in params:
            raise ValidationError(f"parameter {key.strip()!r} given twice")
        params[key.strip()] = value.strip()
    return params


def parse_methods(text: Optional[str], valid: Sequence[str], default: Sequence[str]) -> List[str]:
    """"wkb,improved" → ["wkb", "improved"], each checked against ``valid``."""
    if not text:
        return list(default)
    methods = [m.strip() for m in text.split(",") if m.strip()]
    if not methods:
        raise ValidationError("at least one method is required")
    for method in methods:
        if method not in valid:
            raise ValidationError(f"method must be one of {list(valid)}, got {method!r}")
    return list(dict.fromkeys(methods))
