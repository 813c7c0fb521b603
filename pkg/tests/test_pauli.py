from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from tests.helpers import code_for
from tests.oracles import brute_coset_min, dense_product, dense_rank
from tricolor.errors import LengthMismatch, SearchBudgetExceeded, UnknownPlaquette
from tricolor.lattice import COLORS, build_hex_torus, build_triangle_666
from tricolor.pauli import (
    BinaryMatrix,
    CosetSearch,
    PauliOperator,
    commutes,
    decompose,
    format_pauli,
    in_span,
    min_weight_in_coset,
    min_weight_nontrivial,
    multiply,
    parse_pauli,
    plaquette_operator,
    product,
    rank,
)


@st.composite
def paulis(draw, n=None):
    n = draw(st.integers(1, 12)) if n is None else n
    x = draw(st.integers(0, (1 << n) - 1))
    z = draw(st.integers(0, (1 << n) - 1))
    return PauliOperator(n, x, z, draw(st.sampled_from([1, -1])))


@st.composite
def pauli_triples(draw):
    n = draw(st.integers(1, 10))
    return draw(paulis(n)), draw(paulis(n)), draw(paulis(n))


def X(n, *qs):
    return PauliOperator.from_support(n, qs, "X")


def Z(n, *qs):
    return PauliOperator.from_support(n, qs, "Z")


def test_single_qubit_products():
    xz = multiply(X(1, 0), Z(1, 0))
    assert (xz.x, xz.z, xz.sign) == (1, 1, 1)
    zx = multiply(Z(1, 0), X(1, 0))
    assert (zx.x, zx.z, zx.sign) == (1, 1, -1)


@given(paulis())
def test_pure_words_square_to_identity(a):
    for word in (PauliOperator(a.n, a.x, 0, a.sign), PauliOperator(a.n, 0, a.z, a.sign)):
        sq = multiply(word, word)
        assert sq.is_identity and sq.sign == 1


@given(pauli_triples())
def test_multiply_matches_dense_oracle(t):
    a, b, _ = t
    assert multiply(a, b) == dense_product(a, b)


@given(pauli_triples())
def test_multiply_is_associative(t):
    a, b, c = t
    assert multiply(multiply(a, b), c) == multiply(a, multiply(b, c))


@given(pauli_triples())
def test_commutes_agrees_with_product_order(t):
    a, b, _ = t
    ab, ba = multiply(a, b), multiply(b, a)
    assert (ab.x, ab.z) == (ba.x, ba.z)
    assert commutes(a, b) == (ab.sign == ba.sign)


def test_commutes_basic():
    assert not commutes(X(2, 0), Z(2, 0))
    assert commutes(X(2, 0), Z(2, 1))
    with pytest.raises(LengthMismatch):
        commutes(X(2, 0), Z(3, 0))
    with pytest.raises(LengthMismatch):
        multiply(X(2, 0), Z(3, 0))


def test_literal_format():
    op = PauliOperator(7, x=0b1000001, z=0b1000100)
    assert format_pauli(op) == "+X1 Z3 Y7"
    assert parse_pauli("+X1 Z3 Y7", 7) == op
    assert format_pauli(PauliOperator.identity(4)) == "+I"
    assert parse_pauli("-I", 4) == -PauliOperator.identity(4)
    for bad in ("+X0", "+X8", "+Q1", "+X1 Z1"):
        with pytest.raises(ValueError):
            parse_pauli(bad, 7)


@given(paulis())
def test_literal_round_trip(op):
    assert parse_pauli(format_pauli(op), op.n) == op


def test_rank_examples():
    assert rank(BinaryMatrix.from_lists([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])) == 4
    assert rank(BinaryMatrix.from_lists([[1, 0, 1], [1, 0, 1]])) == 1
    assert rank(BinaryMatrix((), 0)) == 0


@st.composite
def matrices(draw):
    rows = draw(st.integers(1, 10))
    cols = draw(st.integers(1, 14))
    return [[draw(st.integers(0, 1)) for _ in range(cols)] for _ in range(rows)]


@given(matrices(), st.randoms(use_true_random=False))
def test_rank_matches_oracle_and_is_invariant(rows, rnd):
    r = rank(BinaryMatrix.from_lists(rows))
    assert r == dense_rank(rows)
    assert r <= min(len(rows), len(rows[0]))
    shuffled = rows[:]
    rnd.shuffle(shuffled)
    assert rank(BinaryMatrix.from_lists(shuffled)) == r
    i, j = rnd.randrange(len(rows)), rnd.randrange(len(rows))
    if i != j:
        added = [row[:] for row in rows]
        added[i] = [a ^ b for a, b in zip(added[i], added[j])]
        assert rank(BinaryMatrix.from_lists(added)) == r


def test_torus_generator_rank(torus33):
    assert len(torus33.generators) == 18
    assert rank(BinaryMatrix.from_operators(list(torus33.generators))) == 14


def test_plaquette_operator():
    torus = build_hex_torus(3, 3)
    for p in range(len(torus.plaquettes)):
        op = plaquette_operator(torus, p, "X")
        assert op.weight == 6 and op.z == 0 and op.sign == 1
    tri = build_triangle_666(3)
    for p in range(3):
        op = plaquette_operator(tri, p, "Z")
        assert op.weight == 4 and op.x == 0
        assert commutes(op, plaquette_operator(tri, p, "X"))
    with pytest.raises(UnknownPlaquette):
        plaquette_operator(tri, 3, "X")


@pytest.mark.parametrize("family,size", [("hex-torus", (3, 3)), ("tri-666", (5,)), ("tri-488", (5,))])
def test_plaquette_operators_commute(family, size):
    gens = code_for(family, *size).generators
    assert all(commutes(a, b) for a in gens for b in gens)


def test_in_span_basics(tri3):
    for g in tri3.generators:
        assert in_span(g, tri3.generators)
    xhat = PauliOperator.from_support(7, range(7), "X")
    assert not in_span(xhat, tri3.z_generators)
    assert in_span(-tri3.generators[0], tri3.generators)
    assert not in_span(-tri3.generators[0], tri3.generators, mod_sign=False)


@pytest.mark.parametrize("size", [(3, 3), (6, 3), (6, 6)])
def test_color_products_agree(size):
    # the X operators of all red plaquettes equal those of all green, and of all blue
    code = code_for("hex-torus", *size)
    lat = code.lattice
    for sigma in "XZ":
        for c in COLORS:
            prod = product([plaquette_operator(lat, p.id, sigma) for p in lat.plaquettes_of(c)])
            others = [plaquette_operator(lat, p.id, sigma) for p in lat.plaquettes if p.color != c]
            assert in_span(prod, others, mod_sign=False)


def test_min_weight_examples(tri3):
    assert min_weight_in_coset(PauliOperator.identity(5), [])[0] == 0
    assert min_weight_in_coset(X(5, 2), [])[0] == 1
    xhat = PauliOperator.from_support(7, range(7), "X")
    w, wit = min_weight_in_coset(xhat, list(tri3.x_generators))
    assert w == 3 == brute_coset_min(xhat, list(tri3.x_generators))
    assert in_span(multiply(wit, xhat), tri3.x_generators)
    assert min_weight_in_coset(xhat, list(tri3.x_generators), max_weight=2) is None


@st.composite
def cosets(draw):
    n = draw(st.integers(2, 10))
    gens = draw(st.lists(paulis(n), max_size=7))
    return draw(paulis(n)), gens


@given(cosets())
def test_min_weight_matches_brute_force(case):
    offset, gens = case
    w, wit = min_weight_in_coset(offset, gens)
    assert w == brute_coset_min(offset, gens)
    assert wit.weight == w <= offset.weight
    diff = PauliOperator(offset.n, offset.x ^ wit.x, offset.z ^ wit.z)
    assert decompose(diff, gens) is not None
    # the witness sign comes from an actual product offset * g
    idx = decompose(diff, gens)
    assert multiply(offset, product([gens[i] for i in idx], offset.n)) == wit


@given(cosets())
def test_support_enumeration_agrees_with_exhaustive(case):
    offset, gens = case
    exhaustive = min_weight_in_coset(offset, gens, method="exhaustive")
    fallback = min_weight_in_coset(offset, gens, method="support")
    assert fallback[0] == exhaustive[0]
    assert fallback[1].weight == fallback[0]


def test_fallback_search_runs_when_budget_small():
    gens = [X(6, 0, 1), X(6, 1, 2), Z(6, 3, 4)]
    offset = X(6, 0, 2, 5)
    # 2^3 coset elements exceed a budget of 4, so the support enumeration takes over
    assert min_weight_in_coset(offset, gens, budget=400)[0] == 1
    with pytest.raises(SearchBudgetExceeded):
        CosetSearch(gens, 6, budget=4)
    with pytest.raises(SearchBudgetExceeded):
        min_weight_in_coset(offset, gens, budget=4)


def test_search_independent_of_threads(torus33):
    logicals = list(torus33.logical_operators)
    one = min_weight_nontrivial(list(torus33.generators), logicals, threads=1)
    many = min_weight_nontrivial(list(torus33.generators), logicals, threads=4)
    assert one == many
    assert one[0] == 4


def test_nontrivial_fallback_matches(tri3):
    logicals = list(tri3.logical_operators)
    exhaustive = min_weight_nontrivial(list(tri3.generators), logicals)
    fallback = min_weight_nontrivial(list(tri3.generators), logicals, method="support")
    assert exhaustive[0] == fallback[0] == 3
    assert not in_span(fallback[1], tri3.generators)
    assert all(commutes(fallback[1], g) for g in tri3.generators)
