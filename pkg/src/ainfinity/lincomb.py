"""Linear combinations as dicts mapping basis keys to nonzero scalars.

The zero combination is the empty dict; helpers keep the no-stored-zero
invariant so equality-to-zero is just ``not combo``.
"""

from __future__ import annotations


def add_term(acc: dict, x, c) -> None:
    """acc += c*x, dropping the entry if it cancels."""
    if not c:
        return
    cur = acc.get(x)
    if cur is None:
        acc[x] = c
    else:
        new = cur + c
        if new:
            acc[x] = new
        else:
            del acc[x]


def add_scaled(acc: dict, other: dict, c) -> None:
    """acc += c * other."""
    if not c:
        return
    for x, v in other.items():
        add_term(acc, x, c * v)


def scaled(combo: dict, c) -> dict:
    if not c:
        return {}
    return {x: c * v for x, v in combo.items()}


def sorted_terms(combo: dict, order=None):
    """Deterministic list of (element, coefficient) pairs."""
    if order is None:
        return sorted(combo.items(), key=lambda kv: kv[0].sort_key())
    return sorted(combo.items(), key=lambda kv: order(kv[0]))


def format_combo(combo: dict) -> str:
    if not combo:
        return "0"
    parts = []
    for x, c in sorted_terms(combo):
        parts.append(f"{c} {x.name}" if hasattr(x, "name") else f"{c} {x}")
    return " + ".join(parts)
