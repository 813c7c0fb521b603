"""Command-line entry point: ``tricolor <subcommand> [flags]``.

Exit codes: 0 success, 2 invalid input, 3 search budget exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from typing import Sequence

from . import lattice as L
from .code import ColorCode, distance_witness, make_code, noncontractible_string_weight
from .decode import NoiseModel, build_decoder, run_monte_carlo
from .errors import SearchBudgetExceeded, TricolorValidationError
from .pauli import format_pauli, parse_pauli
from .render import render_svg
from .tableau import verify_transversal

FAMILIES = ("hex-torus", "tri-666", "tri-488")
CSV_HEADER = ("family", "d", "p", "trials", "logical_errors", "rate", "seed")


class UsageError(TricolorValidationError):
    pass


@dataclass
class CommandConfig:
    subcommand: str
    family: str | None = None
    a: int | None = None
    b: int | None = None
    d: int | None = None
    max_weight: int = 9
    trials: int = 10_000
    seed: int | None = None
    p: list[float] = field(default_factory=list)
    threads: int = 1
    out: str | None = None
    path: str | None = None

    def check(self) -> None:
        if self.max_weight < 1:
            raise UsageError("--max-weight must be >= 1")
        if self.trials < 1:
            raise UsageError("--trials must be >= 1")
        if self.threads < 1:
            raise UsageError("--threads must be >= 1")
        if any(not 0 <= p <= 1 for p in self.p):
            raise UsageError("--p values must lie in [0, 1]")
        if self.subcommand == "simulate":
            if self.seed is None:
                raise UsageError("simulate needs --seed")
            if not self.p:
                raise UsageError("simulate needs at least one --p")


def _lattice(cfg: CommandConfig) -> L.ColoredLattice:
    if cfg.family is None:
        raise UsageError("--family is required")
    if cfg.family == "hex-torus":
        if cfg.a is None or cfg.b is None:
            raise UsageError("hex-torus needs --a and --b")
        return L.build_hex_torus(cfg.a, cfg.b)
    if cfg.d is None:
        raise UsageError(f"{cfg.family} needs --d")
    if cfg.family == "tri-666":
        return L.build_triangle_666(cfg.d)
    return L.build_triangle_488(cfg.d)


def _code(cfg: CommandConfig) -> ColorCode:
    return make_code(_lattice(cfg), cfg.family)


def _json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def cmd_build(cfg: CommandConfig) -> str:
    return L.dumps(_lattice(cfg))


def cmd_validate(cfg: CommandConfig) -> str:
    text = sys.stdin.read() if cfg.path in (None, "-") else open(cfg.path).read()
    report = L.validate(L.loads(text))
    return _json(report.to_dict())


def cmd_info(cfg: CommandConfig) -> str:
    code = _code(cfg)
    try:
        found = distance_witness(code, cfg.max_weight, threads=cfg.threads)
        d = None if found is None else found[0]
    except SearchBudgetExceeded:
        d = None
    summary = {
        "family": cfg.family,
        "n": code.n,
        "k": code.k,
        "d": d,
        "chi": code.lattice.euler_characteristic,
        "plaquette_sizes": {str(k): v for k, v in code.plaquette_sizes().items()},
    }
    return _json(summary)


def cmd_distance(cfg: CommandConfig) -> str:
    found = distance_witness(_code(cfg), cfg.max_weight, threads=cfg.threads)
    if found is None:
        return _json({"d": None, "max_weight": cfg.max_weight, "witness": None})
    return _json({"d": found[0], "witness": format_pauli(found[1])})


def cmd_verify_gates(cfg: CommandConfig) -> str:
    code = _code(cfg)
    return _json([verify_transversal(code, g).to_dict() for g in ("H", "K", "CNOT")])


def cmd_simulate(cfg: CommandConfig) -> str:
    code = _code(cfg)
    d = cfg.d if cfg.family != "hex-torus" else noncontractible_string_weight(code)
    decoder = build_decoder(code)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for p in cfg.p:
        res = run_monte_carlo(code, NoiseModel.depolarizing(p), cfg.trials, cfg.seed, decoder, cfg.threads)
        w.writerow((cfg.family, d, repr(p), cfg.trials, res.logical_errors, repr(res.rate), cfg.seed))
    return buf.getvalue()


def cmd_render(cfg: CommandConfig) -> str:
    lat = _lattice(cfg)
    overlays = []
    if cfg.path:
        with open(cfg.path) as fh:
            for line in fh:
                line = line.strip()
                if line and not line.startswith("#"):
                    overlays.append(parse_pauli(line, lat.n))
    return render_svg(lat, overlays)


COMMANDS = {
    "build": cmd_build,
    "validate": cmd_validate,
    "info": cmd_info,
    "distance": cmd_distance,
    "verify-gates": cmd_verify_gates,
    "simulate": cmd_simulate,
    "render": cmd_render,
}


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tricolor", description="Color code construction and analysis.")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--family", choices=FAMILIES)
        sp.add_argument("--a", type=int)
        sp.add_argument("--b", type=int)
        sp.add_argument("--d", type=int)
        sp.add_argument("--max-weight", type=int, default=9)
        sp.add_argument("--trials", type=int, default=10_000)
        sp.add_argument("--seed", type=int)
        sp.add_argument("--p", type=float, action="append", default=[])
        sp.add_argument("--threads", type=int, default=1)
        sp.add_argument("--out")
        if name == "validate":
            sp.add_argument("path", nargs="?", help="lattice JSON file; stdin when omitted")
        if name == "render":
            sp.add_argument("path", nargs="?", help="file of Pauli literals to overlay, one per line")
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    try:
        ns = _parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    cfg = CommandConfig(**vars(ns))
    try:
        cfg.check()
        text = COMMANDS[cfg.subcommand](cfg)
    except SearchBudgetExceeded as exc:
        print(f"tricolor: search budget exceeded: {exc}", file=sys.stderr)
        return 3
    except (TricolorValidationError, ValueError, OSError) as exc:
        print(f"tricolor: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
