"""Table of code parameters and bitwise gate behaviour for the built-in families.

    python3 scripts/code_table.py
"""

from __future__ import annotations

import argparse
import time
from dataclasses import dataclass

from tricolor.code import distance, make_code, noncontractible_string_weight
from tricolor.errors import SearchBudgetExceeded
from tricolor.lattice import build_hex_torus, build_triangle_488, build_triangle_666
from tricolor.tableau import verify_transversal


@dataclass
class TableConfig:
    max_d: int = 7
    tori: tuple[tuple[int, int], ...] = ((3, 3), (3, 6), (6, 6))


def _gate(code, kind: str) -> str:
    rep = verify_transversal(code, kind)
    if not rep.preserves_code:
        return f"breaks {len(rep.failing_generators)}"
    return rep.logical_action or "symplectic"


def rows(cfg: TableConfig):
    entries = [(f"hex-torus {a}x{b}", build_hex_torus(a, b)) for a, b in cfg.tori]
    for d in range(3, cfg.max_d + 1, 2):
        entries.append((f"tri-666 d={d}", build_triangle_666(d)))
        entries.append((f"tri-488 d={d}", build_triangle_488(d)))
    for name, lat in entries:
        start = time.perf_counter()
        code = make_code(lat)
        try:
            d = distance(code)
        except SearchBudgetExceeded:
            d = None
        if d is None and lat.surface == "torus":
            d_text = f"{noncontractible_string_weight(code)} (strings)"
        else:
            d_text = str(d)
        yield (name, code.n, code.k, d_text, _gate(code, "H"), _gate(code, "K"), _gate(code, "CNOT"), time.perf_counter() - start)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-d", type=int, default=TableConfig.max_d)
    cfg = TableConfig(max_d=ap.parse_args().max_d)
    header = ("code", "n", "k", "d", "H", "K", "CNOT", "s")
    print("{:<16} {:>4} {:>3} {:>14} {:>10} {:>10} {:>10} {:>6}".format(*header))
    for r in rows(cfg):
        print("{:<16} {:>4} {:>3} {:>14} {:>10} {:>10} {:>10} {:>6.2f}".format(*r))


if __name__ == "__main__":
    main()
