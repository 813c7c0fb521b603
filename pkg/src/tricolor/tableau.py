"""Stabilizer-frame simulation and transversal gate checks.

Operators are tracked internally as ``i^e X^x Z^z`` (``e`` mod 4), which
covers phases a signed :class:`~tricolor.pauli.PauliOperator` cannot carry,
such as the ``Y = i XZ`` produced by conjugating X with the phase gate.
A circuit ``g_1, ..., g_m`` maps ``P`` to ``U P U^dagger`` with
``U = g_m ... g_1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .code import ColorCode
from .errors import IndexOutOfRange, NotATriangle, PhaseNotRepresentable
from .pauli import Eliminator, PauliOperator, decompose, product

GATE_KINDS = ("H", "K", "CNOT")


@dataclass(frozen=True)
class CliffordGate:
    kind: str
    qubits: tuple[int, ...]

    def __post_init__(self):
        if self.kind not in GATE_KINDS:
            raise ValueError(f"unknown gate {self.kind!r}")
        want = 2 if self.kind == "CNOT" else 1
        if len(self.qubits) != want:
            raise ValueError(f"{self.kind} takes {want} qubit(s)")
        if any(q < 0 for q in self.qubits):
            raise IndexOutOfRange(f"negative qubit index in {self}")
        if self.kind == "CNOT" and self.qubits[0] == self.qubits[1]:
            raise IndexOutOfRange("CNOT control and target coincide")


def H(q: int) -> CliffordGate:
    return CliffordGate("H", (q,))


def K(q: int) -> CliffordGate:
    return CliffordGate("K", (q,))


def CNOT(control: int, target: int) -> CliffordGate:
    return CliffordGate("CNOT", (control, target))


def _check_circuit(circuit: Sequence[CliffordGate], n: int) -> None:
    for g in circuit:
        if max(g.qubits) >= n:
            raise IndexOutOfRange(f"{g.kind}{g.qubits} on {n} qubits")


def _apply(gate: CliffordGate, e: int, x: int, z: int) -> tuple[int, int, int]:
    if gate.kind == "H":
        q = gate.qubits[0]
        a, b = x >> q & 1, z >> q & 1
        # X^a Z^b -> Z^a X^b = (-1)^(ab) X^b Z^a
        x ^= (a ^ b) << q
        z ^= (a ^ b) << q
        return (e + 2 * (a & b)) % 4, x, z
    if gate.kind == "K":
        q = gate.qubits[0]
        a = x >> q & 1
        # X -> iXZ, Z -> Z
        return (e + a) % 4, x, z ^ (a << q)
    c, t = gate.qubits
    x ^= (x >> c & 1) << t
    z ^= (z >> t & 1) << c
    return e, x, z


def conjugate_phase(op: PauliOperator, circuit: Sequence[CliffordGate]) -> tuple[int, PauliOperator]:
    """Image of ``op`` as ``(e, word)`` meaning ``i^e * word``; the word carries sign +1."""
    _check_circuit(circuit, op.n)
    e, x, z = (0 if op.sign > 0 else 2), op.x, op.z
    for g in circuit:
        e, x, z = _apply(g, e, x, z)
    return e, PauliOperator(op.n, x, z)


def conjugate(op: PauliOperator, circuit: Sequence[CliffordGate]) -> PauliOperator:
    """Image of ``op`` under the circuit with exact sign.

    Raises :class:`PhaseNotRepresentable` when the image is ``+-i`` times a
    word; :func:`conjugate_phase` returns such images.
    """
    e, w = conjugate_phase(op, circuit)
    if e % 2:
        raise PhaseNotRepresentable(f"image of {op} is i^{e} times {w}")
    return w if e == 0 else -w


# ---------------------------------------------------------------------------
# tableau


def _mul(a: tuple[int, int, int], b: tuple[int, int, int]) -> tuple[int, int, int]:
    ea, xa, za = a
    eb, xb, zb = b
    return ((ea + eb + 2 * (za & xb).bit_count()) % 4, xa ^ xb, za ^ zb)


def _anti(a: tuple[int, int, int], b: tuple[int, int, int]) -> bool:
    return ((a[1] & b[2]).bit_count() + (a[2] & b[1]).bit_count()) & 1 == 1


def _hermitian(op: PauliOperator) -> tuple[int, int, int]:
    """Phased form of a signed word; the word must be Hermitian (even number of XZ pairs)."""
    if (op.x & op.z).bit_count() % 2:
        raise PhaseNotRepresentable(f"{op} is not Hermitian")
    return (0 if op.sign > 0 else 2, op.x, op.z)


def _to_operator(n: int, row: tuple[int, int, int]) -> PauliOperator:
    e, x, z = row
    if e % 2:
        raise PhaseNotRepresentable(f"row i^{e} X^{x} Z^{z} has an imaginary phase")
    return PauliOperator(n, x, z, 1 if e == 0 else -1)


class Tableau:
    """Stabilizer state on n qubits with paired destabilizers.

    Rows are phased words ``(e, x, z)``; stabilizer and destabilizer rows are
    kept Hermitian by construction.
    """

    def __init__(self, n: int, stabilizers: list, destabilizers: list):
        self.n = n
        self.stab = list(stabilizers)
        self.destab = list(destabilizers)

    @classmethod
    def zero_state(cls, n: int) -> "Tableau":
        return cls(n, [(0, 0, 1 << q) for q in range(n)], [(0, 1 << q, 0) for q in range(n)])

    def copy(self) -> "Tableau":
        return Tableau(self.n, self.stab, self.destab)

    def stabilizers(self) -> list[PauliOperator]:
        return [_to_operator(self.n, r) for r in self.stab]

    def apply(self, gate: CliffordGate) -> None:
        _check_circuit([gate], self.n)
        self.stab = [_apply(gate, *r) for r in self.stab]
        self.destab = [_apply(gate, *r) for r in self.destab]

    def apply_circuit(self, circuit: Sequence[CliffordGate]) -> None:
        for g in circuit:
            self.apply(g)

    def apply_pauli(self, op: PauliOperator) -> None:
        """Act with a Pauli operator: rows anticommuting with it flip sign."""
        probe = (0, op.x, op.z)
        self.stab = [((r[0] + 2) % 4, r[1], r[2]) if _anti(r, probe) else r for r in self.stab]
        self.destab = [((r[0] + 2) % 4, r[1], r[2]) if _anti(r, probe) else r for r in self.destab]

    def _value(self, row: tuple[int, int, int]) -> int | None:
        """+1 or -1 when ``row`` is (up to sign) in the stabilizer group, None when it is random."""
        if any(_anti(row, s) for s in self.stab):
            return None
        acc = (0, 0, 0)
        for d, s in zip(self.destab, self.stab):
            if _anti(row, d):
                acc = _mul(acc, s)
        if (acc[1], acc[2]) != (row[1], row[2]):  # pragma: no cover - tableau invariant
            raise AssertionError("stabilizer group does not reproduce the measured word")
        diff = (acc[0] - row[0]) % 4
        return 1 if diff == 0 else -1

    def expectation(self, op: PauliOperator) -> int:
        """+1, -1, or 0 for a Hermitian operator."""
        v = self._value(_hermitian(op))
        return 0 if v is None else v

    def measure(self, op: PauliOperator, rng: np.random.Generator | None = None, forced: int | None = None) -> int:
        """Measure a Hermitian Pauli; returns 0 for eigenvalue +1 and 1 for -1.

        A random outcome is drawn from ``rng`` unless ``forced`` fixes it,
        which projects onto that eigenspace.
        """
        row = _hermitian(op)
        hits = [i for i, s in enumerate(self.stab) if _anti(row, s)]
        if not hits:
            return 0 if self._value(row) == 1 else 1
        p = hits[0]
        pivot = self.stab[p]
        for i in hits[1:]:
            self.stab[i] = _mul(self.stab[i], pivot)
        for i, d in enumerate(self.destab):
            if i != p and _anti(row, d):
                self.destab[i] = _mul(d, pivot)
        if forced is not None:
            outcome = forced
        else:
            outcome = int((rng if rng is not None else np.random.default_rng()).integers(2))
        self.destab[p] = pivot
        self.stab[p] = ((row[0] + 2 * outcome) % 4, row[1], row[2])
        return outcome

    def measure_z(self, q: int, rng: np.random.Generator | None = None) -> int:
        if not 0 <= q < self.n:
            raise IndexOutOfRange(q)
        return self.measure(PauliOperator(self.n, 0, 1 << q), rng)

    def check_invariants(self) -> None:
        """Raise AssertionError unless the rows form a valid symplectic frame."""
        rows = self.stab + self.destab
        n = self.n
        for i in range(n):
            for j in range(n):
                assert not _anti(self.stab[i], self.stab[j]), "stabilizers must commute"
                assert not _anti(self.destab[i], self.destab[j]), "destabilizers must commute"
                assert _anti(self.destab[i], self.stab[j]) == (i == j), "destabilizer pairing broken"
        e = Eliminator()
        for r in rows:
            e.add(r[1] | r[2] << n)
        assert e.rank == 2 * n, "rows must be independent"
        for r in rows:
            assert ((r[1] & r[2]).bit_count() + r[0]) % 2 == 0, "rows must be Hermitian"


def prepare_logical_zero(code: ColorCode) -> Tableau:
    """Project ``|0...0>`` onto the +1 eigenspace of every X plaquette operator."""
    if code.lattice.surface != "triangle" or code.k != 1:
        raise NotATriangle("logical zero preparation needs a triangular code")
    t = Tableau.zero_state(code.n)
    for g in code.x_generators:
        t.measure(g, forced=0)
    return t


def sample_z_basis(t: Tableau, seed: int) -> str:
    """One Z-basis outcome for every qubit, qubit 0 first, as a '0'/'1' string."""
    rng = np.random.default_rng(seed)
    work = t.copy()
    return "".join(str(work.measure_z(q, rng)) for q in range(t.n))


def sample_z_basis_many(t: Tableau, seed: int, shots: int) -> list[str]:
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(shots):
        work = t.copy()
        out.append("".join(str(work.measure_z(q, rng)) for q in range(t.n)))
    return out


# ---------------------------------------------------------------------------
# transversal gates


def apply_hat(kind: str, code: ColorCode) -> list[CliffordGate]:
    """The same single-qubit gate on every qubit."""
    if kind not in ("H", "K"):
        raise ValueError(f"bitwise single-qubit gate must be H or K, got {kind!r}")
    return [CliffordGate(kind, (q,)) for q in range(code.n)]


def apply_hat_cnot(code: ColorCode) -> list[CliffordGate]:
    """CNOT from qubit i of the first layer to qubit i of the second (index i + n)."""
    return [CNOT(q, q + code.n) for q in range(code.n)]


def _embed(op: PauliOperator, offset: int, n: int) -> PauliOperator:
    return PauliOperator(n, op.x << offset, op.z << offset, op.sign)


@dataclass(frozen=True)
class _Frame:
    n: int
    generators: tuple[PauliOperator, ...]
    logicals: tuple[tuple[PauliOperator, PauliOperator], ...]


def _frame(code: ColorCode, layers: int) -> _Frame:
    n = code.n * layers
    gens, logs = [], []
    for layer in range(layers):
        gens += [_embed(g, layer * code.n, n) for g in code.generators]
        logs += [(_embed(x, layer * code.n, n), _embed(z, layer * code.n, n)) for x, z in code.logical_reps]
    return _Frame(n, tuple(gens), tuple(logs))


@dataclass(frozen=True)
class LogicalActionReport:
    gate: str
    preserves_code: bool
    generator_in_span: tuple[bool, ...]
    # +1/-1 relative to the stabilizer element with the same word, None when the word is outside the span
    generator_signs: tuple[int | None, ...]
    # column j is the image of logical j (order X1, Z1, X2, Z2, ...) as a 2k-bit list
    matrix: tuple[tuple[int, ...], ...] = ()
    # power of i multiplying the ordered product of logical representatives
    phases: tuple[int, ...] = ()
    logical_action: str | None = None

    @property
    def failing_generators(self) -> list[int]:
        return [i for i, ok in enumerate(self.generator_in_span) if not ok]

    def is_symplectic(self) -> bool:
        m = len(self.matrix)
        if m == 0:
            return True
        cols = [[self.matrix[r][c] for r in range(m)] for c in range(m)]

        def form(u, v):
            return sum(u[2 * i] * v[2 * i + 1] + u[2 * i + 1] * v[2 * i] for i in range(m // 2)) % 2

        return all(form(cols[a], cols[b]) == (1 if a // 2 == b // 2 and a != b else 0) for a in range(m) for b in range(m))

    def to_dict(self) -> dict:
        action = self.logical_action
        if action is None and self.matrix:
            action = {"matrix": [list(r) for r in self.matrix], "phases": list(self.phases)}
        return {
            "gate": self.gate,
            "preserves_code": self.preserves_code,
            "failing_generators": self.failing_generators,
            "logical_action": action,
        }


def _signed_membership(frame: _Frame, e: int, w: PauliOperator) -> int | None:
    idx = decompose(w, frame.generators)
    if idx is None or e % 2:
        return None
    stab = product([frame.generators[i] for i in idx], frame.n)
    image_sign = w.sign * (1 if e == 0 else -1)
    return 1 if image_sign == stab.sign else -1


def _logical_image(frame: _Frame, e: int, w: PauliOperator) -> tuple[list[int], int] | None:
    """Express ``i^e w`` as ``i^c * (ordered logical product) * stabilizer``."""
    ops = [op for pair in frame.logicals for op in pair]
    coeffs = []
    for x, z in frame.logicals:
        # the X_j coefficient is detected by Z_j and vice versa
        coeffs.append(0 if _commutes(w, z) else 1)
        coeffs.append(0 if _commutes(w, x) else 1)
    chosen = [ops[i] for i, c in enumerate(coeffs) if c]
    lprod = product(chosen, frame.n)
    rest = PauliOperator(frame.n, w.x ^ lprod.x, w.z ^ lprod.z)
    idx = decompose(rest, frame.generators)
    if idx is None:
        return None
    full = product([lprod] + [frame.generators[i] for i in idx], frame.n)
    # i^e w = i^c full, with both words equal up to sign
    c = (e + (0 if w.sign == full.sign else 2)) % 4
    return coeffs, c


def _commutes(a: PauliOperator, b: PauliOperator) -> bool:
    return ((a.x & b.z).bit_count() + (a.z & b.x).bit_count()) % 2 == 0


# (matrix rows, phases) for one logical qubit; Y = i X Z, so X -> i XZ is K and X -> -i XZ is K^dagger
_NAMED_1 = {
    ((0, 1), (1, 0), (0, 0)): "H",
    ((1, 0), (0, 1), (0, 0)): "I",
    ((1, 0), (1, 1), (1, 0)): "K",
    ((1, 0), (1, 1), (3, 0)): "Kdag",
}


def _name(matrix: tuple[tuple[int, ...], ...], phases: tuple[int, ...], k: int) -> str | None:
    if k == 1:
        return _NAMED_1.get((matrix[0], matrix[1], phases))
    ident = tuple(tuple(1 if r == c else 0 for c in range(2 * k)) for r in range(2 * k))
    if matrix == ident and all(p == 0 for p in phases):
        return "I"
    if k == 2:
        # X1 -> X1 X2, Z1 -> Z1, X2 -> X2, Z2 -> Z1 Z2
        cnot = ((1, 0, 0, 0), (0, 1, 0, 1), (1, 0, 1, 0), (0, 0, 0, 1))
        if matrix == cnot and all(p == 0 for p in phases):
            return "CNOT"
    return None


def _report(frame: _Frame, circuit: Sequence[CliffordGate], gate: str) -> LogicalActionReport:
    in_span_flags, signs = [], []
    for g in frame.generators:
        e, w = conjugate_phase(g, circuit)
        s = _signed_membership(frame, e, w)
        signs.append(s)
        in_span_flags.append(s == 1)
    preserves = all(in_span_flags)
    cols, phases = [], []
    if preserves:
        for x, z in frame.logicals:
            for op in (x, z):
                e, w = conjugate_phase(op, circuit)
                img = _logical_image(frame, e, w)
                if img is None:  # pragma: no cover - a code-preserving Clifford maps logicals to logicals
                    raise AssertionError("logical image left the centralizer")
                cols.append(img[0])
                phases.append(img[1])
    m = len(cols)
    matrix = tuple(tuple(cols[c][r] for c in range(m)) for r in range(m))
    k = len(frame.logicals)
    name = _name(matrix, tuple(phases), k) if preserves and m else None
    return LogicalActionReport(gate, preserves, tuple(in_span_flags), tuple(signs), matrix, tuple(phases), name)


def verify_transversal(code: ColorCode, gate_kind: str, repeat: int = 1) -> LogicalActionReport:
    """Conjugate every generator and logical representative by the bitwise gate.

    ``CNOT`` acts on two stacked copies of the code.  ``repeat`` applies the
    bitwise layer that many times.
    """
    if gate_kind == "CNOT":
        frame = _frame(code, 2)
        layer = apply_hat_cnot(code)
    elif gate_kind in ("H", "K"):
        frame = _frame(code, 1)
        layer = apply_hat(gate_kind, code)
    else:
        raise ValueError(f"gate must be H, K or CNOT, got {gate_kind!r}")
    return _report(frame, layer * repeat, gate_kind)


def logical_action(code: ColorCode, circuit: Sequence[CliffordGate], layers: int = 1, label: str = "circuit") -> LogicalActionReport:
    return _report(_frame(code, layers), circuit, label)
