"""Noise sampling, syndromes, lookup decoding and Monte Carlo estimates."""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .code import ColorCode, logical_hat
from .errors import LengthMismatch, NotATriangle, TableTooLarge
from .lattice import Color
from .pauli import Eliminator, PauliOperator, min_weight_in_coset
from .tableau import prepare_logical_zero, sample_z_basis_many

MAX_TABLE_RANK = 24
BLOCK = 4096


@dataclass(frozen=True)
class NoiseModel:
    px: float
    py: float
    pz: float

    def __post_init__(self):
        probs = (self.px, self.py, self.pz)
        if any(p < 0 for p in probs) or sum(probs) > 1 + 1e-12:
            raise ValueError(f"invalid Pauli probabilities {probs}")

    @classmethod
    def depolarizing(cls, p: float) -> "NoiseModel":
        return cls(p / 3, p / 3, p / 3)


def _draw(model: NoiseModel, u: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Map uniforms to (x, z) error bits: X below px, then Y, then Z."""
    a = model.px
    b = a + model.py
    c = b + model.pz
    x = u < b
    z = (u >= a) & (u < c)
    return x, z


def _bits(row: np.ndarray) -> int:
    return int(sum(1 << i for i in np.flatnonzero(row)))


def sample_error(model: NoiseModel, n: int, seed) -> PauliOperator:
    """I.i.d. single-qubit Paulis; a Y error sets both bits."""
    u = np.random.default_rng(seed).random(n)
    x, z = _draw(model, u)
    return PauliOperator(n, _bits(x), _bits(z))


# ---------------------------------------------------------------------------
# syndromes and excitations


@dataclass(frozen=True)
class Syndrome:
    bits: tuple[int, ...]  # one per generator, 1 = violated

    @property
    def violated(self) -> list[int]:
        return [i for i, b in enumerate(self.bits) if b]

    @property
    def weight(self) -> int:
        return sum(self.bits)


@dataclass(frozen=True)
class Excitation:
    plaquette: int
    type: str  # X or Z, the generator that is violated
    color: Color


def syndrome_of(code: ColorCode, error: PauliOperator) -> Syndrome:
    if error.n != code.n:
        raise LengthMismatch(f"error acts on {error.n} qubits, code has {code.n}")
    bits = tuple(((error.x & g.z).bit_count() + (error.z & g.x).bit_count()) & 1 for g in code.generators)
    return Syndrome(bits)


def excitations(code: ColorCode, syndrome: Syndrome) -> list[Excitation]:
    out = []
    for g in syndrome.violated:
        p, sigma = code.generator_info(g)
        out.append(Excitation(p, sigma, code.lattice.plaquettes[p].color))
    return out


def energy(code: ColorCode, syndrome: Syndrome) -> int:
    """Eigenvalue of minus the sum of all generators: -s plus 2 per violated generator."""
    return -len(code.generators) + 2 * syndrome.weight


def ground_degeneracy(code: ColorCode) -> int:
    return 2 ** (code.n - code.rank)


# ---------------------------------------------------------------------------
# lookup decoder


def _pivot_generators(code: ColorCode) -> list[int]:
    e = Eliminator()
    return [i for i, g in enumerate(code.generators) if e.add(g.vector)]


def _pauli_letters(w: int):
    """All assignments of X, Y, Z to w qubits, as (x, z) bit pairs, in X < Y < Z order."""
    return itertools.product(((1, 0), (1, 1), (0, 1)), repeat=w)


@dataclass
class DecodeTable:
    """Coset-leader corrections keyed by the syndrome of an independent generator subset.

    Entries were filled in order of weight, then lexicographic support, then
    X < Y < Z per qubit, so every stored correction is the first
    minimum-weight error met with that syndrome.
    """

    code: ColorCode
    pivots: tuple[int, ...]
    table: dict[int, PauliOperator]

    def key(self, syndrome: Syndrome) -> int:
        return sum(syndrome.bits[g] << i for i, g in enumerate(self.pivots))

    def error_key(self, error: PauliOperator) -> int:
        key = 0
        for i, g in enumerate(self.pivots):
            gen = self.code.generators[g]
            key |= (((error.x & gen.z).bit_count() + (error.z & gen.x).bit_count()) & 1) << i
        return key

    def decode(self, syndrome: Syndrome) -> PauliOperator:
        return self.table[self.key(syndrome)]

    def __len__(self) -> int:
        return len(self.table)


def build_decoder(code: ColorCode, max_rank: int = MAX_TABLE_RANK) -> DecodeTable:
    pivots = _pivot_generators(code)
    r = len(pivots)
    if r > max_rank:
        raise TableTooLarge(f"2^{r} syndromes exceed the table limit 2^{max_rank}")
    n = code.n
    # per-qubit key contribution of an X error and of a Z error
    kx = [0] * n
    kz = [0] * n
    for i, g in enumerate(pivots):
        gen = code.generators[g]
        for q in range(n):
            kx[q] |= (gen.z >> q & 1) << i
            kz[q] |= (gen.x >> q & 1) << i
    table: dict[int, PauliOperator] = {0: PauliOperator.identity(n)}
    total = 1 << r
    w = 0
    while len(table) < total:
        w += 1
        if w > n:  # pragma: no cover - rank bound guarantees coverage
            raise AssertionError("syndromes left unfilled")
        for support in itertools.combinations(range(n), w):
            for letters in _pauli_letters(w):
                key = 0
                for q, (a, b) in zip(support, letters):
                    if a:
                        key ^= kx[q]
                    if b:
                        key ^= kz[q]
                if key in table:
                    continue
                x = sum(1 << q for q, (a, _) in zip(support, letters) if a)
                z = sum(1 << q for q, (_, b) in zip(support, letters) if b)
                table[key] = PauliOperator(n, x, z)
            if len(table) == total:
                break
    return DecodeTable(code, tuple(pivots), table)


def logical_class(code: ColorCode, residual: PauliOperator) -> tuple[int, ...]:
    """Symplectic pairing of a centralizer element with (Z1, X1, Z2, X2, ...).

    The tuple is all zero exactly when the element is a stabilizer up to sign.
    """
    out = []
    for x, z in code.logical_reps:
        for probe in (z, x):
            out.append(((residual.x & probe.z).bit_count() + (residual.z & probe.x).bit_count()) & 1)
    return tuple(out)


def decode_error(decoder: DecodeTable, error: PauliOperator) -> tuple[PauliOperator, tuple[int, ...]]:
    """Correction applied to ``error`` and the logical class of the residual."""
    corr = decoder.table[decoder.error_key(error)]
    residual = PauliOperator(error.n, error.x ^ corr.x, error.z ^ corr.z)
    return corr, logical_class(decoder.code, residual)


def uncorrectable_errors(decoder: DecodeTable, weight: int) -> list[PauliOperator]:
    """Every error of exactly ``weight`` whose residual after decoding is a logical operator."""
    n = decoder.code.n
    bad = []
    for support in itertools.combinations(range(n), weight):
        for letters in _pauli_letters(weight):
            x = sum(1 << q for q, (a, _) in zip(support, letters) if a)
            z = sum(1 << q for q, (_, b) in zip(support, letters) if b)
            err = PauliOperator(n, x, z)
            if any(decode_error(decoder, err)[1]):
                bad.append(err)
    return bad


# ---------------------------------------------------------------------------
# Monte Carlo


@dataclass(frozen=True)
class MonteCarloResult:
    trials: int
    logical_errors: int
    counts: dict[str, int]  # logical class bits -> occurrences; all zeros is success

    @property
    def rate(self) -> float:
        return self.logical_errors / self.trials if self.trials else 0.0


class _Packed:
    """Decoder tables as uint64 arrays for block-vectorized trials (n <= 64)."""

    def __init__(self, decoder: DecodeTable):
        code = decoder.code
        if code.n > 64:
            raise TableTooLarge("vectorized decoding supports at most 64 qubits")
        self.n = code.n
        size = 1 << len(decoder.pivots)
        self.cx = np.zeros(size, dtype=np.uint64)
        self.cz = np.zeros(size, dtype=np.uint64)
        for k, op in decoder.table.items():
            self.cx[k] = op.x
            self.cz[k] = op.z
        gens = [code.generators[g] for g in decoder.pivots]
        self.gx = np.array([g.x for g in gens], dtype=np.uint64)
        self.gz = np.array([g.z for g in gens], dtype=np.uint64)
        probes = []
        for x, z in code.logical_reps:
            probes += [z, x]
        self.lx = np.array([p.x for p in probes], dtype=np.uint64)
        self.lz = np.array([p.z for p in probes], dtype=np.uint64)
        self.weights = np.uint64(1) << np.arange(self.n, dtype=np.uint64)

    def pack(self, bits: np.ndarray) -> np.ndarray:
        return (bits.astype(np.uint64) * self.weights).sum(axis=1, dtype=np.uint64)

    @staticmethod
    def _pairing(ex, ez, px, pz) -> np.ndarray:
        odd = np.bitwise_count(ex[:, None] & pz[None, :]) + np.bitwise_count(ez[:, None] & px[None, :])
        return (odd & 1).astype(np.uint64)

    def run(self, ex: np.ndarray, ez: np.ndarray) -> np.ndarray:
        """Logical class bits (trials x 2k) of the residual after decoding."""
        syn = self._pairing(ex, ez, self.gx, self.gz)
        keys = (syn << np.arange(syn.shape[1], dtype=np.uint64)).sum(axis=1, dtype=np.uint64).astype(np.int64)
        rx = ex ^ self.cx[keys]
        rz = ez ^ self.cz[keys]
        return self._pairing(rx, rz, self.lx, self.lz)


def run_monte_carlo(
    code: ColorCode,
    model: NoiseModel,
    trials: int,
    seed: int,
    decoder: DecodeTable | None = None,
    threads: int = 1,
    block: int = BLOCK,
) -> MonteCarloResult:
    """Sample, decode and classify ``trials`` errors.

    Trials are split into fixed blocks; block b draws from the stream seeded
    by ``(seed, b)``, so the counts do not depend on ``threads``.
    """
    if trials < 0:
        raise ValueError("trials must be >= 0")
    decoder = decoder if decoder is not None else build_decoder(code)
    packed = _Packed(decoder)
    nblocks = -(-trials // block)

    def one(b: int) -> dict[str, int]:
        size = min(block, trials - b * block)
        u = np.random.default_rng([seed, b]).random((size, code.n))
        x, z = _draw(model, u)
        cls = packed.run(packed.pack(x), packed.pack(z))
        keys, counts = np.unique(cls, axis=0, return_counts=True)
        return {"".join(str(int(v)) for v in k): int(c) for k, c in zip(keys, counts)}

    if threads > 1 and nblocks > 1:
        with ThreadPoolExecutor(threads) as pool:
            parts = list(pool.map(one, range(nblocks)))
    else:
        parts = [one(b) for b in range(nblocks)]
    counts: dict[str, int] = {}
    for part in parts:
        for k, c in part.items():
            counts[k] = counts.get(k, 0) + c
    failures = sum(c for k, c in counts.items() if "1" in k)
    return MonteCarloResult(trials, failures, dict(sorted(counts.items())))


# ---------------------------------------------------------------------------
# destructive measurement


def classical_measurement_distance(code: ColorCode, budget: int | None = None) -> int:
    """Minimum Hamming distance between Z-basis outputs of logical 0 and logical 1.

    Outputs of logical 0 form the span of the X plaquette supports and those
    of logical 1 its translate by the all-ones string, so the distance is the
    lightest X-type representative of the hat operator.
    """
    if code.lattice.surface != "triangle":
        raise NotATriangle("destructive measurement analysis needs a triangular code")
    found = min_weight_in_coset(logical_hat(code, "X"), list(code.x_generators), budget=budget)
    return found[0]


class ClassicalDecoder:
    """Minimum-weight bit-flip correction against the Z plaquette parity checks.

    The kernel of those checks is the X-support span plus its all-ones
    translate, so after correction the output's parity is the logical value.
    """

    def __init__(self, code: ColorCode):
        if code.lattice.surface != "triangle":
            raise NotATriangle("classical decoding needs a triangular code")
        self.n = code.n
        e = Eliminator()
        self.checks = [g.z for g in code.z_generators if e.add(g.z)]
        r = len(self.checks)
        table = {0: 0}
        w = 0
        while len(table) < (1 << r):
            w += 1
            for support in itertools.combinations(range(self.n), w):
                flips = sum(1 << q for q in support)
                key = self._key(flips)
                table.setdefault(key, flips)
        self.table = table

    def _key(self, bits: int) -> int:
        return sum(((bits & c).bit_count() & 1) << i for i, c in enumerate(self.checks))

    def logical_value(self, outcome: str | int) -> int:
        bits = int(outcome[::-1], 2) if isinstance(outcome, str) else outcome
        corrected = bits ^ self.table[self._key(bits)]
        return corrected.bit_count() & 1


def _flip(outcome: str, flip_set: Iterable[int]) -> str:
    chars = list(outcome)
    for q in flip_set:
        chars[q] = "1" if chars[q] == "0" else "0"
    return "".join(chars)


def faulty_measurement_equivalence(code: ColorCode, flip_set: Sequence[int], seed: int, shots: int = 64) -> bool:
    """Compare outcome flips after measurement with X errors before it.

    For both logical states and ``shots`` samples each, the flipped output and
    the output of the X-corrupted state must decode to the same value, and
    that value must be the prepared one.
    """
    flips = sorted(set(flip_set))
    if any(not 0 <= q < code.n for q in flips):
        raise IndexError(f"flip set {flips} outside 0..{code.n - 1}")
    dec = ClassicalDecoder(code)
    zero = prepare_logical_zero(code)
    err = PauliOperator.from_support(code.n, flips, "X")
    for value in (0, 1):
        state = zero.copy()
        if value:
            state.apply_pauli(logical_hat(code, "X"))
        corrupted = state.copy()
        corrupted.apply_pauli(err)
        clean = sample_z_basis_many(state, seed + value, shots)
        noisy = sample_z_basis_many(corrupted, seed + value + 2, shots)
        for out_a, out_b in zip(clean, noisy):
            a = dec.logical_value(_flip(out_a, flips))
            b = dec.logical_value(out_b)
            if a != b or a != value:
                return False
    return True
