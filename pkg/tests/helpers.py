from __future__ import annotations

from functools import lru_cache

from tricolor.code import make_code
from tricolor.lattice import build_hex_torus, build_triangle_488, build_triangle_666

ACCEPTANCE: dict[int, tuple[str, bool]] = {}


@lru_cache(maxsize=None)
def code_for(family: str, *size: int):
    if family == "hex-torus":
        return make_code(build_hex_torus(*size), family)
    if family == "tri-666":
        return make_code(build_triangle_666(*size), family)
    return make_code(build_triangle_488(*size), family)


def record(criterion: int, label: str, passed: bool) -> None:
    """Store a verdict for the terminal summary; a criterion passes only if every check did."""
    prev = ACCEPTANCE.get(criterion)
    ACCEPTANCE[criterion] = (label, passed and (prev is None or prev[1]))
