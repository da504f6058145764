"""Uniform check records shared by all verification suites.

Every suite returns a flat list of records with the same keys so the CLI can
serialize them without knowing which module produced them:

    {"id", "eq_tag", "mode", "status", "residual", "payload"}

``eq_tag`` is the identity tag used throughout the reports (a short string
such as "2.7"); ``mode`` is "exact" or "float".  Exact checks never carry a
nonzero residual: either the identity holds and the residual is 0, or the
record fails and the witnesses go into the payload.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Optional

from .scalars import QG


def render_value(x):
    """Recursively convert a payload value into something json.dumps accepts.

    Exact scalars become strings (no precision loss), complex numbers become
    [re, im] pairs, containers recurse. Everything else passes through.
    """
    if isinstance(x, QG):
        return str(x)
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return str(x.numerator)
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, dict):
        return {str(k): render_value(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [render_value(v) for v in x]
    return x


def check(check_id: str, eq_tag: Optional[str], ok: bool, mode: str = "exact",
          residual=0, **payload) -> dict:
    if mode not in ("exact", "float"):
        raise ValueError(f"unknown arithmetic mode {mode!r}")
    # exactness marking: a passing exact check must report residual 0
    if mode == "exact":
        residual = 0
    return {
        "id": check_id,
        "eq_tag": eq_tag,
        "mode": mode,
        "status": "pass" if ok else "fail",
        "residual": residual,
        "payload": payload,
    }


def all_pass(checks: List[dict]) -> bool:
    return all(c["status"] == "pass" for c in checks)


def failing(checks: List[dict]) -> List[str]:
    return [c["id"] for c in checks if c["status"] != "pass"]
