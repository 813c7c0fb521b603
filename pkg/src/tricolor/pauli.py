"""Binary-symplectic Pauli words and GF(2) linear algebra on packed integers.

A :class:`PauliOperator` stores its X part and Z part as Python ints (bit i is
qubit i) and denotes ``sign * X^x Z^z`` with all X factors written to the left
of all Z factors.  Under that convention a qubit with both bits set carries
``XZ = -iY``; the literal ``Y`` is shorthand for that bit pattern.
"""

from __future__ import annotations

import itertools
import math
import os
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import LengthMismatch, SearchBudgetExceeded, UnknownPlaquette
from .lattice import ColoredLattice

DEFAULT_BUDGET = 10**8
EXHAUSTIVE_MAX_RANK = 28


def default_budget() -> int:
    raw = os.environ.get("TRICOLOR_BUDGET")
    return int(float(raw)) if raw else DEFAULT_BUDGET


@dataclass(frozen=True)
class PauliOperator:
    n: int
    x: int = 0
    z: int = 0
    sign: int = 1

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {self.sign}")
        if self.x >> self.n or self.z >> self.n or self.x < 0 or self.z < 0:
            raise ValueError("bits beyond qubit count")

    @classmethod
    def identity(cls, n: int) -> "PauliOperator":
        return cls(n)

    @classmethod
    def from_support(cls, n: int, qubits: Iterable[int], sigma: str) -> "PauliOperator":
        bits = 0
        for q in qubits:
            if not 0 <= q < n:
                raise IndexError(q)
            bits ^= 1 << q
        if sigma == "X":
            return cls(n, bits, 0)
        if sigma == "Z":
            return cls(n, 0, bits)
        if sigma == "Y":
            return cls(n, bits, bits)
        raise ValueError(f"unknown Pauli {sigma!r}")

    @property
    def weight(self) -> int:
        return (self.x | self.z).bit_count()

    @property
    def support(self) -> list[int]:
        s = self.x | self.z
        return [i for i in range(self.n) if s >> i & 1]

    @property
    def is_identity(self) -> bool:
        return self.x == 0 and self.z == 0

    @property
    def vector(self) -> int:
        """Symplectic row ``x | z << n``."""
        return self.x | (self.z << self.n)

    @classmethod
    def from_vector(cls, n: int, v: int, sign: int = 1) -> "PauliOperator":
        mask = (1 << n) - 1
        return cls(n, v & mask, v >> n, sign)

    def unsigned(self) -> "PauliOperator":
        return PauliOperator(self.n, self.x, self.z)

    def __neg__(self) -> "PauliOperator":
        return PauliOperator(self.n, self.x, self.z, -self.sign)

    def __mul__(self, other: "PauliOperator") -> "PauliOperator":
        return multiply(self, other)

    def letter(self, q: int) -> str:
        return "IXZY"[(self.x >> q & 1) | (self.z >> q & 1) << 1]

    def __str__(self) -> str:
        return format_pauli(self)


def _check(a: PauliOperator, b: PauliOperator) -> None:
    if a.n != b.n:
        raise LengthMismatch(f"operators act on {a.n} and {b.n} qubits")


def multiply(a: PauliOperator, b: PauliOperator) -> PauliOperator:
    """Product ``a * b``; moving b's X part past a's Z part costs ``(-1)^|z_a & x_b|``."""
    _check(a, b)
    flips = (a.z & b.x).bit_count()
    return PauliOperator(a.n, a.x ^ b.x, a.z ^ b.z, a.sign * b.sign * (-1 if flips & 1 else 1))


def commutes(a: PauliOperator, b: PauliOperator) -> bool:
    _check(a, b)
    return ((a.x & b.z).bit_count() + (a.z & b.x).bit_count()) % 2 == 0


def product(ops: Sequence[PauliOperator], n: int | None = None) -> PauliOperator:
    if not ops:
        if n is None:
            raise ValueError("empty product needs n")
        return PauliOperator.identity(n)
    out = ops[0]
    for op in ops[1:]:
        out = multiply(out, op)
    return out


def plaquette_operator(lat: ColoredLattice, p: int, sigma: str) -> PauliOperator:
    """``sigma`` on every site of plaquette ``p``."""
    if not isinstance(p, int) or not 0 <= p < len(lat.plaquettes):
        raise UnknownPlaquette(p)
    return PauliOperator.from_support(lat.n, lat.plaquettes[p].sites, sigma)


_TOKEN = re.compile(r"^([IXYZ])(\d+)$")


def format_pauli(op: PauliOperator) -> str:
    """``+X1 Z3 Y7`` with 1-based qubit indices; identity prints as ``+I``."""
    sign = "+" if op.sign > 0 else "-"
    terms = [f"{op.letter(q)}{q + 1}" for q in op.support]
    if not terms:
        return sign + "I"
    return sign + " ".join(terms)


def parse_pauli(text: str, n: int) -> PauliOperator:
    s = text.strip()
    sign = 1
    if s[:1] in "+-":
        sign = -1 if s[0] == "-" else 1
        s = s[1:].strip()
    if s in ("", "I"):
        return PauliOperator(n, 0, 0, sign)
    x = z = 0
    for tok in s.split():
        m = _TOKEN.match(tok)
        if not m:
            raise ValueError(f"bad Pauli token {tok!r}")
        q = int(m.group(2)) - 1
        if not 0 <= q < n:
            raise ValueError(f"qubit {q + 1} out of range 1..{n}")
        if (x | z) >> q & 1:
            raise ValueError(f"qubit {q + 1} repeated")
        letter = m.group(1)
        if letter in "XY":
            x |= 1 << q
        if letter in "ZY":
            z |= 1 << q
    return PauliOperator(n, x, z, sign)


# ---------------------------------------------------------------------------
# GF(2) algebra


@dataclass(frozen=True)
class BinaryMatrix:
    rows: tuple[int, ...]
    ncols: int

    @classmethod
    def from_lists(cls, rows: Sequence[Sequence[int]]) -> "BinaryMatrix":
        ncols = len(rows[0]) if rows else 0
        packed = []
        for r in rows:
            if len(r) != ncols:
                raise LengthMismatch("ragged matrix")
            packed.append(sum(1 << i for i, b in enumerate(r) if b & 1))
        return cls(tuple(packed), ncols)

    @classmethod
    def from_operators(cls, ops: Sequence[PauliOperator]) -> "BinaryMatrix":
        if not ops:
            return cls((), 0)
        n = ops[0].n
        for op in ops:
            if op.n != n:
                raise LengthMismatch("operators of different lengths")
        return cls(tuple(op.vector for op in ops), 2 * n)

    def to_array(self) -> np.ndarray:
        return np.array([[r >> c & 1 for c in range(self.ncols)] for r in self.rows], dtype=np.uint8).reshape(
            len(self.rows), self.ncols
        )


class Eliminator:
    """Incremental GF(2) row reduction keeping, per basis row, which inputs built it.

    Pivots are the lowest set bit of each row, so the reduction is deterministic
    for a fixed insertion order.
    """

    def __init__(self):
        self.pivots: dict[int, tuple[int, int]] = {}  # pivot bit -> (row, combination mask)
        self.count = 0

    def reduce(self, v: int) -> tuple[int, int]:
        combo = 0
        while v:
            low = v & -v
            hit = self.pivots.get(low)
            if hit is None:
                break
            v ^= hit[0]
            combo ^= hit[1]
        return v, combo

    def _full_reduce(self, v: int) -> tuple[int, int]:
        combo = 0
        rest = v
        out = 0
        while rest:
            low = rest & -rest
            hit = self.pivots.get(low)
            if hit is None:
                out |= low
                rest ^= low
            else:
                rest ^= hit[0]
                combo ^= hit[1]
        return out, combo

    def add(self, v: int) -> bool:
        """Insert the next input row; returns True when it was independent."""
        idx = self.count
        self.count += 1
        r, combo = self._full_reduce(v)
        if r == 0:
            return False
        self.pivots[r & -r] = (r, combo ^ (1 << idx))
        return True

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def solve(self, v: int) -> int | None:
        """Mask of inputs whose XOR equals ``v``, or None when ``v`` is outside the span."""
        r, combo = self._full_reduce(v)
        return combo if r == 0 else None


def rank(mat: BinaryMatrix | Sequence[int]) -> int:
    rows = mat.rows if isinstance(mat, BinaryMatrix) else mat
    e = Eliminator()
    for r in rows:
        e.add(r)
    return e.rank


def independent_subset(ops: Sequence[PauliOperator]) -> list[int]:
    """Indices of a maximal independent subset, greedy in input order."""
    e = Eliminator()
    return [i for i, op in enumerate(ops) if e.add(op.vector)]


def decompose(op: PauliOperator, gens: Sequence[PauliOperator]) -> list[int] | None:
    """Indices of generators whose product matches ``op`` up to sign."""
    e = Eliminator()
    for g in gens:
        _check(op, g)
        e.add(g.vector)
    mask = e.solve(op.vector)
    if mask is None:
        return None
    return [i for i in range(len(gens)) if mask >> i & 1]


def in_span(op: PauliOperator, gens: Sequence[PauliOperator], mod_sign: bool = True) -> bool:
    """Whether ``op`` is a product of ``gens``; with ``mod_sign=False`` the sign must match too.

    The reconstructed sign multiplies the chosen generators in index order,
    which is order-independent when they commute.
    """
    idx = decompose(op, gens)
    if idx is None:
        return False
    if mod_sign:
        return True
    return product([gens[i] for i in idx], op.n).sign == op.sign


# ---------------------------------------------------------------------------
# minimum-weight search


def _words(n: int) -> int:
    return max(1, (n + 63) // 64)


def _pack(values: Sequence[int], n: int) -> np.ndarray:
    w = _words(n)
    out = np.zeros((len(values), w), dtype=np.uint64)
    mask = (1 << 64) - 1
    for i, v in enumerate(values):
        for k in range(w):
            out[i, k] = (v >> (64 * k)) & mask
    return out


def _unpack(row: np.ndarray) -> int:
    return sum(int(v) << (64 * k) for k, v in enumerate(row))


def _span_table(x_rows: list[int], z_rows: list[int], n: int) -> tuple[np.ndarray, np.ndarray]:
    """All 2^m XOR combinations; entry ``c`` combines the rows whose bits are set in ``c``."""
    w = _words(n)
    tx = np.zeros((1, w), dtype=np.uint64)
    tz = np.zeros((1, w), dtype=np.uint64)
    for xr, zr in zip(_pack(x_rows, n), _pack(z_rows, n)):
        tx = np.concatenate([tx, tx ^ xr])
        tz = np.concatenate([tz, tz ^ zr])
    return tx, tz


class CosetSearch:
    """Exhaustive minimum-weight search over ``offset * span(gens)``.

    The span is split into two halves whose 2^(r/2) combination tables are
    built once; each query XORs one table against every entry of the other.
    Ties are broken toward the smallest ``(x, z)`` integer pair.
    """

    def __init__(self, gens: Sequence[PauliOperator], n: int, budget: int | None = None, threads: int = 1):
        self.n = n
        basis = [gens[i] for i in independent_subset(gens)] if gens else []
        self.rank = len(basis)
        budget = default_budget() if budget is None else budget
        if self.rank > EXHAUSTIVE_MAX_RANK or (1 << self.rank) > budget:
            raise SearchBudgetExceeded(f"2^{self.rank} coset elements exceed the search budget {budget}")
        self.threads = max(1, threads)
        half = self.rank // 2
        lo, hi = basis[:half], basis[half:]
        self.ax, self.az = _span_table([g.x for g in lo], [g.z for g in lo], n)
        self.bx, self.bz = _span_table([g.x for g in hi], [g.z for g in hi], n)
        # iterate over the smaller table, vectorize over the larger
        if len(self.ax) > len(self.bx):
            self.ax, self.az, self.bx, self.bz = self.bx, self.bz, self.ax, self.az

    def _scan(self, ox: np.ndarray, oz: np.ndarray, rows: range) -> tuple[int, tuple[int, int]] | None:
        best = None
        for i in rows:
            x = self.bx ^ (self.ax[i] ^ ox)
            z = self.bz ^ (self.az[i] ^ oz)
            w = np.bitwise_count(x | z).sum(axis=1)
            m = int(w.min())
            if best is not None and m > best[0]:
                continue
            for j in np.flatnonzero(w == m):
                key = (_unpack(x[j]), _unpack(z[j]))
                if best is None or (m, key) < best:
                    best = (m, key)
        return best

    def min_weight(self, offset: PauliOperator) -> tuple[int, PauliOperator]:
        ox = _pack([offset.x], self.n)[0]
        oz = _pack([offset.z], self.n)[0]
        total = len(self.ax)
        if self.threads == 1 or total < 2:
            best = self._scan(ox, oz, range(total))
        else:
            step = -(-total // self.threads)
            chunks = [range(s, min(total, s + step)) for s in range(0, total, step)]
            with ThreadPoolExecutor(self.threads) as pool:
                parts = [p for p in pool.map(lambda r: self._scan(ox, oz, r), chunks) if p is not None]
            best = min(parts)
        w, (x, z) = best
        return w, PauliOperator(self.n, x, z)


def _supports(n: int, w: int):
    for combo in itertools.combinations(range(n), w):
        yield combo


def min_weight_in_coset(
    offset: PauliOperator,
    gens: Sequence[PauliOperator],
    max_weight: int | None = None,
    budget: int | None = None,
    threads: int = 1,
    method: str = "auto",
) -> tuple[int, PauliOperator] | None:
    """Minimum support weight over ``offset * span(gens)``.

    Returns ``(weight, witness)`` or None when the minimum exceeds
    ``max_weight``.  The witness carries a sign reconstructed from the
    generators multiplied in index order.  With ``method="auto"`` small spans
    are enumerated exhaustively and larger ones fall back to weight-ordered
    support enumeration; ``"exhaustive"`` and ``"support"`` force one strategy.
    """
    for g in gens:
        _check(offset, g)
    if max_weight is not None and max_weight < 0:
        raise ValueError("max_weight must be >= 0")
    n = offset.n
    budget = default_budget() if budget is None else budget
    r = rank([g.vector for g in gens])
    small = r <= EXHAUSTIVE_MAX_RANK and (1 << r) <= budget
    if method == "exhaustive" or (method == "auto" and small):
        w, wit = CosetSearch(gens, n, budget, threads).min_weight(offset)
        if max_weight is not None and w > max_weight:
            return None
        return w, _with_sign(offset, wit, gens)
    return _support_search(offset, gens, max_weight, budget)


def _with_sign(offset: PauliOperator, witness: PauliOperator, gens: Sequence[PauliOperator]) -> PauliOperator:
    diff = PauliOperator(offset.n, offset.x ^ witness.x, offset.z ^ witness.z)
    idx = decompose(diff, gens)
    if idx is None:  # pragma: no cover - the search only produces coset members
        raise AssertionError("witness left the coset")
    return multiply(offset, product([gens[i] for i in idx], offset.n))


def _support_search(offset, gens, max_weight, budget):
    """Weight-ordered enumeration of supports T; succeed when the coset has an element inside T."""
    n = offset.n
    limit = n if max_weight is None else min(max_weight, n)
    visited = 0
    full = (1 << n) - 1
    for w in range(limit + 1):
        # a node is one row-reduction step; each support costs about rows^2 of them
        visited += math.comb(n, w) * max(1, len(gens)) ** 2
        if visited > budget:
            raise SearchBudgetExceeded(f"support enumeration needs more than {budget} nodes at weight {w}")
        for combo in _supports(n, w):
            t = 0
            for q in combo:
                t |= 1 << q
            outside = (full ^ t) | ((full ^ t) << n)
            e = Eliminator()
            for g in gens:
                e.add(g.vector & outside)
            mask = e.solve(offset.vector & outside)
            if mask is None:
                continue
            chosen = [gens[i] for i in range(len(gens)) if mask >> i & 1]
            return w, multiply(offset, product(chosen, n))
    return None


def min_weight_nontrivial(
    gens: Sequence[PauliOperator],
    logicals: Sequence[PauliOperator],
    max_weight: int | None = None,
    budget: int | None = None,
    threads: int = 1,
    method: str = "auto",
) -> tuple[int, PauliOperator] | None:
    """Lightest element of ``span(gens + logicals)`` that is not in ``span(gens)``.

    Enumerates every nontrivial logical class and searches its coset, or falls
    back to support enumeration over the centralizer when the stabilizer span
    is too large to list.
    """
    if not logicals:
        return None
    n = logicals[0].n
    budget = default_budget() if budget is None else budget
    classes = (1 << len(logicals)) - 1
    r = rank([g.vector for g in gens])
    small = r <= EXHAUSTIVE_MAX_RANK and (1 << r) * classes <= budget
    if method == "exhaustive" or (method == "auto" and small):
        search = CosetSearch(gens, n, budget, threads)
        best = None
        for mask in range(1, classes + 1):
            rep = product([logicals[i] for i in range(len(logicals)) if mask >> i & 1], n)
            w, wit = search.min_weight(rep)
            if best is None or (w, wit.x, wit.z) < (best[0], best[1].x, best[1].z):
                best = (w, _with_sign(rep, wit, gens))
        if max_weight is not None and best[0] > max_weight:
            return None
        return best
    return _centralizer_support_search(gens, logicals, max_weight, budget)


def _centralizer_support_search(gens, logicals, max_weight, budget):
    n = logicals[0].n
    limit = n if max_weight is None else min(max_weight, n)
    full = (1 << n) - 1
    visited = 0
    for w in range(1, limit + 1):
        visited += math.comb(n, w) * (len(gens) + len(logicals)) ** 2
        if visited > budget:
            raise SearchBudgetExceeded(f"support enumeration needs more than {budget} nodes at weight {w}")
        for combo in _supports(n, w):
            t = 0
            for q in combo:
                t |= 1 << q
            outside = (full ^ t) | ((full ^ t) << n)
            found = _kernel_logical(gens, logicals, outside)
            if found is not None:
                return w, found
    return None


def _kernel_logical(gens, logicals, outside) -> PauliOperator | None:
    """An operator from span(gens + logicals) vanishing on ``outside`` and not in span(gens).

    Generators go in first, so any dependency that involves a logical row
    yields an operator outside the stabilizer span.
    """
    ops = list(gens) + list(logicals)
    n = logicals[0].n
    ng = len(gens)
    probe = Eliminator()
    for i, op in enumerate(ops):
        r, combo = probe._full_reduce(op.vector & outside)
        if r == 0 and i >= ng:
            mask = combo ^ (1 << i)
            return product([ops[j] for j in range(len(ops)) if mask >> j & 1], n)
        if r:
            probe.pivots[r & -r] = (r, combo ^ (1 << i))
        probe.count += 1
    return None
