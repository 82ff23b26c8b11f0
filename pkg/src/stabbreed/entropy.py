"""Entropies of phase-vector distributions and subspace coset structure.

A noise model is a dense probability table over the 2^n phase vectors,
indexed by the integer whose bit i is coordinate i.  The central quantity
is the coset entropy C(G): the Shannon entropy of the class label G^T b,
i.e. of the coset masses of G-perp = {v | G^T v = 0}.  The minimum of
C over admissible subspace sums drives the yield linear program, and
H - C(G) is the asymptotic per-copy exponent of the number of typical
sequences sharing a coset-label sequence.

Caches: coset entropies are memoized on (noise model, canonical subspace),
and the combinatorial geometry behind h_f is memoized independently of the
noise model, so sweeping a noise parameter re-uses all subspace work.
Lookups are idempotent, so concurrent readers are safe.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache, reduce
from itertools import combinations, product
from typing import Iterable, Sequence, Union

import numpy as np

from .gf2 import BitVector, rref_rows
from .measurements import MeasurableSubspace

DEFAULT_MAX_QUBITS = 12
_PROB_SUM_TOL = 1e-12


class NoiseModel:
    """Probability table p(b) over all 2^n phase vectors."""

    __slots__ = ("n", "p", "_key")

    def __init__(self, n: int, p: Iterable[float], max_qubits: int = DEFAULT_MAX_QUBITS):
        if n < 0:
            raise ValueError("negative qubit count")
        if n > max_qubits:
            raise ValueError(f"dense table over 2^{n} entries exceeds the"
                             f" {max_qubits}-qubit cap")
        arr = np.asarray(list(p) if not isinstance(p, np.ndarray) else p, dtype=float)
        if arr.shape != (2 ** n,):
            raise ValueError(f"expected {2 ** n} probabilities, got {arr.shape}")
        if arr.min(initial=0.0) < 0:
            raise ValueError("negative probability")
        if abs(float(arr.sum()) - 1.0) > _PROB_SUM_TOL:
            raise ValueError(f"probabilities sum to {arr.sum()!r}, not 1")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "p", arr)
        object.__setattr__(self, "_key", (n, arr.tobytes()))

    def __setattr__(self, name, value):
        raise AttributeError("NoiseModel is immutable")

    def __eq__(self, other):
        return isinstance(other, NoiseModel) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"NoiseModel(n={self.n})"

    # ----- constructors ---------------------------------------------------

    @classmethod
    def werner(cls, n: int, fidelity: float, **kw) -> "NoiseModel":
        """p(0) = F and the remaining mass spread uniformly over b != 0."""
        if not 0.0 <= fidelity <= 1.0:
            raise ValueError("fidelity must lie in [0, 1]")
        size = 2 ** n
        if size == 1:
            return cls(n, [1.0], **kw)
        table = np.full(size, (1.0 - fidelity) / (size - 1))
        table[0] = fidelity
        return cls(n, table, **kw)

    @classmethod
    def uniform(cls, n: int, **kw) -> "NoiseModel":
        return cls(n, np.full(2 ** n, 1.0 / 2 ** n), **kw)

    @classmethod
    def point_mass(cls, n: int, index: int = 0, **kw) -> "NoiseModel":
        table = np.zeros(2 ** n)
        table[index] = 1.0
        return cls(n, table, **kw)


_PhaseSeq = Sequence[Union[int, BitVector]]


def _as_indices(seq: _PhaseSeq, n: int) -> list[int]:
    out = []
    for item in seq:
        if isinstance(item, BitVector):
            if item.n != n:
                raise ValueError("phase vector length mismatch")
            out.append(item.bits)
        else:
            idx = int(item)
            if not 0 <= idx < 2 ** n:
                raise ValueError(f"phase index {idx} out of range for n={n}")
            out.append(idx)
    return out


@dataclass(frozen=True)
class SubspaceKey:
    """A subspace of Z_2^n in canonical reduced-echelon form.

    ``rows`` are the RREF basis vectors as packed integers with strictly
    increasing pivots, so equal subspaces compare equal.
    """

    n: int
    rows: tuple[int, ...]

    @classmethod
    def from_vectors(cls, n: int, vectors: Iterable[int]) -> "SubspaceKey":
        return cls(n, rref_rows(vectors, n))

    @classmethod
    def from_subspace(cls, v: MeasurableSubspace) -> "SubspaceKey":
        return cls.from_vectors(v.n, v.basis_columns())

    @classmethod
    def zero(cls, n: int) -> "SubspaceKey":
        return cls(n, ())

    @property
    def dim(self) -> int:
        return len(self.rows)

    def __or__(self, other: "SubspaceKey") -> "SubspaceKey":
        """Sum (span of the union) of the two subspaces."""
        if self.n != other.n:
            raise ValueError("ambient dimension mismatch")
        return SubspaceKey.from_vectors(self.n, self.rows + other.rows)

    def contains(self, vector: int) -> bool:
        v = vector
        for row in self.rows:
            pivot = row & -row
            if v & pivot:
                v ^= row
        return v == 0

    def vectors(self) -> list[int]:
        """All 2^dim elements (small subspaces only)."""
        out = []
        for coeffs in product((0, 1), repeat=self.dim):
            x = 0
            for c, row in zip(coeffs, self.rows):
                if c:
                    x ^= row
            out.append(x)
        return sorted(out)


# ----- entropies --------------------------------------------------------


def _entropy_bits(masses: np.ndarray) -> float:
    pos = masses[masses > 0]
    return float(-(pos * np.log2(pos)).sum())


def entropy_H(nm: NoiseModel) -> float:
    """Shannon entropy of the phase distribution, in bits (0 log 0 = 0)."""
    return _entropy_bits(nm.p)


@lru_cache(maxsize=None)
def _parity(n: int) -> np.ndarray:
    """parity[v] = popcount(v) mod 2 for v < 2^n."""
    table = np.zeros(2 ** n, dtype=np.int64)
    for i in range(1, 2 ** n):
        table[i] = table[i >> 1] ^ (i & 1)
    table.flags.writeable = False
    return table


@lru_cache(maxsize=None)
def _labels(key: SubspaceKey) -> np.ndarray:
    """Class label G^T b for every phase vector b, as an integer array."""
    parity = _parity(key.n)
    indices = np.arange(2 ** key.n)
    labels = np.zeros(2 ** key.n, dtype=np.int64)
    for bit, row in enumerate(key.rows):
        labels |= parity[indices & row] << bit
    labels.flags.writeable = False
    return labels


@lru_cache(maxsize=None)
def coset_entropy(nm: NoiseModel, g: SubspaceKey) -> float:
    """Entropy of the class label G^T b: the coset masses of G-perp."""
    if g.n != nm.n:
        raise ValueError("subspace lives in the wrong ambient dimension")
    if g.dim == 0:
        return 0.0
    masses = np.bincount(_labels(g), weights=nm.p, minlength=2 ** g.dim)
    return _entropy_bits(masses)


def typical_count_exponent(nm: NoiseModel, g: SubspaceKey) -> float:
    """H - C(G): per-copy exponent of the typical sequences in a fixed
    coset-label class."""
    return entropy_H(nm) - coset_entropy(nm, g)


# ----- subspace enumeration ----------------------------------------------


def gaussian_binomial(m: int, d: int) -> int:
    """Number of d-dimensional subspaces of a binary m-dimensional space."""
    if d < 0 or d > m:
        return 0
    num = den = 1
    for i in range(d):
        num *= 2 ** (m - i) - 1
        den *= 2 ** (d - i) - 1
    return num // den


def enumerate_subspaces(v: MeasurableSubspace, d: int) -> tuple[SubspaceKey, ...]:
    """All d-dimensional subspaces of V(M), in a deterministic order.

    Enumerates the RREF matrices over the abstract coordinates of the
    basis (pivot columns in lexicographic order, free bits counting up)
    and maps each row through the basis.
    """
    m = v.dim
    if not 0 <= d <= m:
        raise ValueError(f"requested dimension {d} outside 0..{m}")
    basis = v.basis_columns()
    if d == 0:
        return (SubspaceKey.zero(v.n),)
    out = []
    for pivots in combinations(range(m), d):
        pivot_set = set(pivots)
        free_slots = [(i, j) for i, p in enumerate(pivots)
                      for j in range(p + 1, m) if j not in pivot_set]
        for fill in range(2 ** len(free_slots)):
            abstract = [1 << p for p in pivots]
            for t, (i, j) in enumerate(free_slots):
                if (fill >> t) & 1:
                    abstract[i] |= 1 << j
            concrete = []
            for row in abstract:
                x = 0
                bits = row
                while bits:
                    j = (bits & -bits).bit_length() - 1
                    x ^= basis[j]
                    bits &= bits - 1
                concrete.append(x)
            out.append(SubspaceKey.from_vectors(v.n, concrete))
    return tuple(out)


@lru_cache(maxsize=None)
def _sum_keys(subspaces: tuple[MeasurableSubspace, ...], f: tuple[int, ...]
              ) -> tuple[SubspaceKey, ...]:
    """Distinct sums over all admissible per-partition subspace choices.

    Noise-independent, so a parameter sweep hits this cache.
    """
    per_partition = [enumerate_subspaces(v, v.dim - fi)
                     for v, fi in zip(subspaces, f)]
    n = subspaces[0].n
    sums = {reduce(lambda a, b: a | b, combo, SubspaceKey.zero(n))
            for combo in product(*per_partition)}
    return tuple(sorted(sums, key=lambda k: (k.dim, k.rows)))


def h_f(nm: NoiseModel, subspaces: Sequence[MeasurableSubspace],
        f: Sequence[int]) -> float:
    """Minimized coset entropy over subspace choices G(M) <= V(M) with
    dim G(M) = n(M) - f(M), of the sum of the choices.

    Exact: the product of per-partition Gaussian-binomial choices is
    enumerated in full, with an early exit when the zero subspace (entropy
    0) is attainable.
    """
    subspaces = tuple(subspaces)
    if not subspaces:
        raise ValueError("empty partition list")
    f = tuple(int(x) for x in f)
    if len(f) != len(subspaces):
        raise ValueError("f must assign one value per partition")
    for v, fi in zip(subspaces, f):
        if not 0 <= fi <= v.dim:
            raise ValueError(f"f value {fi} outside 0..{v.dim}")
    if all(fi == v.dim for v, fi in zip(subspaces, f)):
        return 0.0
    best = math.inf
    for key in _sum_keys(subspaces, f):
        value = coset_entropy(nm, key)
        if value < best:
            best = value
            if best == 0.0:
                break
    return best


# ----- strongly typical sets ------------------------------------------------


def is_strongly_typical(seq: _PhaseSeq, nm: NoiseModel, eps: float) -> bool:
    """True iff every empirical symbol frequency is within eps of p."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    idx = _as_indices(seq, nm.n)
    if not idx:
        raise ValueError("empty sequence")
    freqs = np.bincount(idx, minlength=2 ** nm.n) / len(idx)
    return bool(np.all(np.abs(freqs - nm.p) < eps))


# ----- noise model file format ------------------------------------------------


def parse_noise_spec(text: str, n: int) -> NoiseModel:
    """Parse "werner F" or an explicit table of "bitstring probability" lines."""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and
             not ln.strip().startswith("#")]
    if not lines:
        raise ValueError("empty noise specification")
    first = lines[0].split()
    if first[0].lower() == "werner":
        if len(lines) != 1 or len(first) != 2:
            raise ValueError("werner spec must be a single line 'werner F'")
        return NoiseModel.werner(n, float(first[1]))
    table = np.zeros(2 ** n)
    seen = set()
    for lineno, line in enumerate(lines, start=1):
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected 'bitstring probability'")
        bits, prob = parts
        if len(bits) != n or set(bits) - {"0", "1"}:
            raise ValueError(f"line {lineno}: bad bitstring {bits!r}")
        idx = BitVector.from_string(bits).bits
        if idx in seen:
            raise ValueError(f"line {lineno}: duplicate bitstring {bits!r}")
        seen.add(idx)
        table[idx] = float(prob)
    if len(seen) != 2 ** n:
        raise ValueError(f"table has {len(seen)} entries, expected {2 ** n}")
    return NoiseModel(n, table)


def format_noise_table(nm: NoiseModel) -> str:
    lines = [f"{BitVector(nm.n, i).to_string()} {float(nm.p[i])!r}"
             for i in range(2 ** nm.n)]
    return "\n".join(lines) + "\n"
