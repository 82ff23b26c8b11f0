"""Measurement partitions and the subspace of learnable phase bits.

A partition M assigns every qubit one of the local measurements z, x, y.
After measuring, the outcomes determine v^T b exactly for the exponents v
in a subspace V(M): per qubit i the support conditions collapse to one
linear constraint on (S_z v, S_x v)_i, so V(M) is a nullspace.  n(M)
denotes dim V(M).

Qubit indices are zero-based throughout the API; the text format is a
positional string like "xxzzz" (character i = measurement on qubit i).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .gf2 import BitMatrix, BitVector, nullspace_basis
from .stabilizer import StabilizerRep

DEFAULT_ENUMERATION_LIMIT = 10


def support(v: BitVector) -> frozenset[int]:
    """Indices of the nonzero coordinates (zero-based)."""
    out = set()
    bits = v.bits
    while bits:
        out.add((bits & -bits).bit_length() - 1)
        bits &= bits - 1
    return frozenset(out)


@dataclass(frozen=True)
class MeasurementPartition:
    """Disjoint cover (M_z, M_x, M_y) of the qubit indices."""

    mz: frozenset[int]
    mx: frozenset[int]
    my: frozenset[int]

    def __post_init__(self) -> None:
        total = len(self.mz) + len(self.mx) + len(self.my)
        union = self.mz | self.mx | self.my
        if len(union) != total:
            raise ValueError("measurement sets overlap")
        if union != frozenset(range(total)):
            raise ValueError("measurement sets must cover 0..n-1 exactly")

    @classmethod
    def from_sets(cls, mz: Iterable[int], mx: Iterable[int],
                  my: Iterable[int] = ()) -> "MeasurementPartition":
        return cls(frozenset(mz), frozenset(mx), frozenset(my))

    @classmethod
    def from_string(cls, text: str) -> "MeasurementPartition":
        text = text.strip().lower()
        sets: dict[str, set[int]] = {"z": set(), "x": set(), "y": set()}
        for i, ch in enumerate(text):
            if ch not in sets:
                raise ValueError(f"bad measurement letter {ch!r} at position {i}")
            sets[ch].add(i)
        return cls(frozenset(sets["z"]), frozenset(sets["x"]), frozenset(sets["y"]))

    @property
    def n(self) -> int:
        return len(self.mz) + len(self.mx) + len(self.my)

    def letter(self, qubit: int) -> str:
        if qubit in self.mz:
            return "z"
        if qubit in self.mx:
            return "x"
        if qubit in self.my:
            return "y"
        raise IndexError(qubit)

    def to_string(self) -> str:
        return "".join(self.letter(i) for i in range(self.n))

    def __repr__(self) -> str:
        return f"MeasurementPartition({self.to_string()!r})"


@dataclass(frozen=True)
class MeasurableSubspace:
    """V(M) for a state: basis matrix (n x n(M)) of the learnable exponents."""

    partition: MeasurementPartition
    v_basis: BitMatrix

    @property
    def dim(self) -> int:
        return self.v_basis.cols

    @property
    def n(self) -> int:
        return self.v_basis.rows

    def basis_columns(self) -> tuple[int, ...]:
        return tuple(self.v_basis.column(j).bits for j in range(self.dim))


def _constraint_matrix(state: StabilizerRep, m: MeasurementPartition) -> BitMatrix:
    sz, sx = state.s_z, state.s_x
    rows = []
    for i in range(state.n):
        letter = m.letter(i)
        if letter == "z":
            rows.append(sx.data[i])
        elif letter == "x":
            rows.append(sz.data[i])
        else:
            rows.append(sz.data[i] ^ sx.data[i])
    return BitMatrix(state.n, state.n, rows)


def _satisfies_support_conditions(state: StabilizerRep, m: MeasurementPartition,
                                  v: BitVector) -> bool:
    """Literal support-set form of the learnability conditions."""
    zsupp = support(state.s_z.matvec(v))
    xsupp = support(state.s_x.matvec(v))
    return ((zsupp - xsupp) <= m.mz
            and (xsupp - zsupp) <= m.mx
            and (zsupp & xsupp) <= m.my)


def measurable_subspace(state: StabilizerRep, m: MeasurementPartition) -> MeasurableSubspace:
    """Basis of V(M) = {v | the measurement outcomes under M determine v^T b}.

    Per qubit the support conditions are one linear equation -- z-measured
    qubits kill (S_x v)_i, x-measured kill (S_z v)_i, y-measured kill the
    sum -- so the basis is the nullspace of an n x n system.
    """
    if m.n != state.n:
        raise ValueError(f"partition on {m.n} qubits for an {state.n}-qubit state")
    basis = nullspace_basis(_constraint_matrix(state, m))
    out = MeasurableSubspace(m, basis)
    for j in range(out.dim):
        if not _satisfies_support_conditions(state, m, basis.column(j)):
            raise AssertionError("nullspace vector violates the support conditions")
    return out


def enumerate_partitions(n: int, limit: int = DEFAULT_ENUMERATION_LIMIT
                         ) -> list[MeasurementPartition]:
    """All 3^n partitions, ordered as a ternary counter (qubit 0 least significant).

    Digit values 0, 1, 2 mean z, x, y.
    """
    if n > limit:
        raise ValueError(f"3^{n} partitions exceed the enumeration limit {limit};"
                         " raise the limit or supply explicit partitions")
    out = []
    for t in range(3 ** n):
        sets: tuple[set[int], set[int], set[int]] = (set(), set(), set())
        code = t
        for i in range(n):
            sets[code % 3].add(i)
            code //= 3
        out.append(MeasurementPartition(frozenset(sets[0]), frozenset(sets[1]),
                                        frozenset(sets[2])))
    return out


def best_partitions(state: StabilizerRep, limit: int = DEFAULT_ENUMERATION_LIMIT
                    ) -> list[MeasurableSubspace]:
    """All partitions attaining the maximum n(M), in enumeration order.

    The maximum is over the full 3^n enumeration; restricting later
    analysis to these partitions is not guaranteed optimal in general.
    """
    subspaces = [measurable_subspace(state, m)
                 for m in enumerate_partitions(state.n, limit)]
    top = max(s.dim for s in subspaces)
    return [s for s in subspaces if s.dim == top]


def parse_partitions(text: str, n: int) -> list[MeasurementPartition]:
    """One partition per line, n letters from {z, x, y}."""
    out = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if len(line) != n:
            raise ValueError(f"line {lineno}: expected {n} letters, got {len(line)}")
        try:
            out.append(MeasurementPartition.from_string(line))
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
    if not out:
        raise ValueError("no partitions found")
    return out


def format_partitions(partitions: Sequence[MeasurementPartition]) -> str:
    return "\n".join(m.to_string() for m in partitions) + "\n"
