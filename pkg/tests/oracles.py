"""Slow, independent reference implementations used only to cross-check the library."""

from __future__ import annotations

import itertools

import numpy as np

from tricolor.pauli import PauliOperator

_I = np.eye(2, dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def _local(x: int, z: int) -> np.ndarray:
    return (np.linalg.matrix_power(_X, x)) @ (np.linalg.matrix_power(_Z, z))


def dense_product(a: PauliOperator, b: PauliOperator) -> PauliOperator:
    """Multiply qubit by qubit with explicit 2x2 matrices and read the sign back off."""
    sign = a.sign * b.sign
    x = z = 0
    for q in range(a.n):
        m = _local(a.x >> q & 1, a.z >> q & 1) @ _local(b.x >> q & 1, b.z >> q & 1)
        xq = (a.x ^ b.x) >> q & 1
        zq = (a.z ^ b.z) >> q & 1
        ref = _local(xq, zq)
        c = np.trace(ref.conj().T @ m) / 2
        assert abs(abs(c) - 1) < 1e-9 and abs(c.imag) < 1e-9
        sign *= 1 if c.real > 0 else -1
        x |= xq << q
        z |= zq << q
    return PauliOperator(a.n, x, z, sign)


def dense_conjugate(op: PauliOperator, gates) -> np.ndarray:
    """``U op U^dagger`` as a full matrix (small n only); gates are (kind, qubits) with qubit 0 most significant."""
    n = op.n
    full = np.array([[1]], dtype=complex)
    for q in range(n):
        full = np.kron(full, _local(op.x >> q & 1, op.z >> q & 1))
    full = op.sign * full
    U = np.eye(2**n, dtype=complex)
    for kind, qubits in gates:
        U = _gate_matrix(kind, qubits, n) @ U
    return U @ full @ U.conj().T


def pauli_matrix(op: PauliOperator, phase: complex = 1) -> np.ndarray:
    full = np.array([[1]], dtype=complex)
    for q in range(op.n):
        full = np.kron(full, _local(op.x >> q & 1, op.z >> q & 1))
    return phase * op.sign * full


def _gate_matrix(kind, qubits, n):
    if kind == "H":
        g = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
    elif kind == "K":
        g = np.diag([1, 1j])
    else:
        c, t = qubits
        dim = 2**n
        m = np.zeros((dim, dim), dtype=complex)
        for i in range(dim):
            bits = [(i >> (n - 1 - q)) & 1 for q in range(n)]
            if bits[c]:
                bits[t] ^= 1
            j = sum(b << (n - 1 - q) for q, b in enumerate(bits))
            m[j, i] = 1
        return m
    (q,) = qubits
    return np.kron(np.kron(np.eye(2**q), g), np.eye(2 ** (n - q - 1)))


def dense_rank(rows: list[list[int]]) -> int:
    """Gaussian elimination on a numpy array, scanning columns left to right."""
    m = np.array(rows, dtype=np.uint8) % 2
    if m.size == 0:
        return 0
    r = 0
    for c in range(m.shape[1]):
        piv = [i for i in range(r, m.shape[0]) if m[i, c]]
        if not piv:
            continue
        m[[r, piv[0]]] = m[[piv[0], r]]
        for i in range(m.shape[0]):
            if i != r and m[i, c]:
                m[i] ^= m[r]
        r += 1
    return r


def span_elements(gens: list[PauliOperator]) -> list[tuple[int, int]]:
    """Every (x, z) word in the span, by Gray-code walk over all 2^len(gens) subsets."""
    x = z = 0
    out = [(0, 0)]
    for i in range(1, 1 << len(gens)):
        bit = (i & -i).bit_length() - 1
        x ^= gens[bit].x
        z ^= gens[bit].z
        out.append((x, z))
    return out


def brute_force_distance(gens: list[PauliOperator], logicals: list[PauliOperator]) -> int:
    """Minimum weight over every nontrivial logical class times every stabilizer element."""
    from tricolor.pauli import independent_subset

    basis = [gens[i] for i in independent_subset(gens)]
    elems = span_elements(basis)
    best = None
    for mask in range(1, 1 << len(logicals)):
        lx = lz = 0
        for i, op in enumerate(logicals):
            if mask >> i & 1:
                lx ^= op.x
                lz ^= op.z
        w = min(((lx ^ x) | (lz ^ z)).bit_count() for x, z in elems)
        best = w if best is None else min(best, w)
    return best


def brute_coset_min(offset: PauliOperator, gens: list[PauliOperator]) -> int:
    return min(((offset.x ^ x) | (offset.z ^ z)).bit_count() for x, z in span_elements(gens))


def all_paulis(n: int, weight: int):
    for support in itertools.combinations(range(n), weight):
        for letters in itertools.product("XYZ", repeat=weight):
            x = sum(1 << q for q, l in zip(support, letters) if l in "XY")
            z = sum(1 << q for q, l in zip(support, letters) if l in "YZ")
            yield PauliOperator(n, x, z)
