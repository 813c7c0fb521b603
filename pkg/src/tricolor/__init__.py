"""Topological color codes: lattices, stabilizers, transversal gates and decoding."""

from .code import ColorCode, distance, make_code
from .decode import NoiseModel, build_decoder, run_monte_carlo, syndrome_of
from .lattice import Color, ColoredLattice, build_hex_torus, build_triangle_488, build_triangle_666, validate
from .pauli import PauliOperator, commutes, format_pauli, multiply, parse_pauli
from .tableau import conjugate, prepare_logical_zero, verify_transversal

__all__ = [
    "Color",
    "ColorCode",
    "ColoredLattice",
    "NoiseModel",
    "PauliOperator",
    "build_decoder",
    "build_hex_torus",
    "build_triangle_488",
    "build_triangle_666",
    "commutes",
    "conjugate",
    "distance",
    "format_pauli",
    "make_code",
    "multiply",
    "parse_pauli",
    "prepare_logical_zero",
    "run_monte_carlo",
    "syndrome_of",
    "validate",
    "verify_transversal",
]
