"""Dense bit-packed linear algebra over GF(2).

Rows are stored as Python integers: bit ``c`` of the row word holds entry
``(r, c)``, so a row XOR runs word-parallel whatever the width.  Gaussian
elimination always picks the leftmost pivot column and the topmost
available row, which makes echelon forms canonical.

Empty matrices (zero rows or zero columns) are legal values everywhere;
a product with an empty inner dimension is a zero matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence


def _check_bits(bits: int, width: int) -> int:
    if bits < 0 or bits >> width:
        raise ValueError(f"value 0x{bits:x} does not fit in {width} bits")
    return bits


@dataclass(frozen=True)
class BitVector:
    """Vector over GF(2); coordinate ``i`` is bit ``i`` of ``bits``."""

    n: int
    bits: int = 0

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError("negative length")
        _check_bits(self.bits, self.n)

    @classmethod
    def from_bits(cls, values: Iterable[int]) -> "BitVector":
        bits = 0
        n = 0
        for v in values:
            if v not in (0, 1):
                raise ValueError(f"entry {v!r} is not a bit")
            bits |= v << n
            n += 1
        return cls(n, bits)

    @classmethod
    def from_string(cls, text: str) -> "BitVector":
        return cls.from_bits(int(ch) for ch in text.strip())

    @classmethod
    def zeros(cls, n: int) -> "BitVector":
        return cls(n, 0)

    @classmethod
    def ones(cls, n: int) -> "BitVector":
        return cls(n, (1 << n) - 1)

    def __len__(self) -> int:
        return self.n

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self.n:
            raise IndexError(i)
        return (self.bits >> i) & 1

    def __xor__(self, other: "BitVector") -> "BitVector":
        if self.n != other.n:
            raise ValueError("length mismatch")
        return BitVector(self.n, self.bits ^ other.bits)

    def __iter__(self) -> Iterator[int]:
        return ((self.bits >> i) & 1 for i in range(self.n))

    def dot(self, other: "BitVector") -> int:
        """Inner product mod 2."""
        if self.n != other.n:
            raise ValueError("length mismatch")
        return (self.bits & other.bits).bit_count() & 1

    def weight(self) -> int:
        return self.bits.bit_count()

    def is_zero(self) -> bool:
        return self.bits == 0

    def concat(self, other: "BitVector") -> "BitVector":
        return BitVector(self.n + other.n, self.bits | (other.bits << self.n))

    def to_tuple(self) -> tuple[int, ...]:
        return tuple(self)

    def to_string(self) -> str:
        return "".join(str(b) for b in self)

    def __repr__(self) -> str:
        return f"BitVector({self.to_string()!r})"


class BitMatrix:
    """Immutable dense GF(2) matrix with int-packed rows."""

    __slots__ = ("rows", "cols", "data")

    rows: int
    cols: int
    data: tuple[int, ...]

    def __init__(self, rows: int, cols: int, data: Sequence[int]):
        if rows < 0 or cols < 0:
            raise ValueError("negative dimension")
        if len(data) != rows:
            raise ValueError(f"expected {rows} rows, got {len(data)}")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "data", tuple(_check_bits(r, cols) for r in data))

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("BitMatrix is immutable")

    # ----- constructors -------------------------------------------------

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BitMatrix":
        return cls(rows, cols, [0] * rows)

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls(n, n, [1 << i for i in range(n)])

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]]) -> "BitMatrix":
        vecs = [BitVector.from_bits(r) for r in rows]
        if not vecs:
            return cls(0, 0, [])
        width = vecs[0].n
        if any(v.n != width for v in vecs):
            raise ValueError("ragged rows")
        return cls(len(vecs), width, [v.bits for v in vecs])

    @classmethod
    def from_columns(cls, cols: Iterable[BitVector]) -> "BitMatrix":
        cols = list(cols)
        if not cols:
            return cls(0, 0, [])
        n = cols[0].n
        if any(c.n != n for c in cols):
            raise ValueError("ragged columns")
        data = [0] * n
        for j, c in enumerate(cols):
            bits = c.bits
            while bits:
                i = (bits & -bits).bit_length() - 1
                data[i] |= 1 << j
                bits &= bits - 1
        return cls(n, len(cols), data)

    # ----- accessors ----------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def get(self, r: int, c: int) -> int:
        if not (0 <= r < self.rows and 0 <= c < self.cols):
            raise IndexError((r, c))
        return (self.data[r] >> c) & 1

    def row(self, r: int) -> BitVector:
        return BitVector(self.cols, self.data[r])

    def column(self, c: int) -> BitVector:
        if not 0 <= c < self.cols:
            raise IndexError(c)
        bits = 0
        for r in range(self.rows):
            bits |= ((self.data[r] >> c) & 1) << r
        return BitVector(self.rows, bits)

    @property
    def T(self) -> "BitMatrix":
        data = [0] * self.cols
        for r, word in enumerate(self.data):
            while word:
                c = (word & -word).bit_length() - 1
                data[c] |= 1 << r
                word &= word - 1
        return BitMatrix(self.cols, self.rows, data)

    def is_zero(self) -> bool:
        return all(w == 0 for w in self.data)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_symmetric(self) -> bool:
        return self.is_square() and self == self.T

    def has_zero_diagonal(self) -> bool:
        if not self.is_square():
            raise ValueError("diagonal of a non-square matrix")
        return all(not (self.data[i] >> i) & 1 for i in range(self.rows))

    def to_lists(self) -> list[list[int]]:
        return [[(w >> c) & 1 for c in range(self.cols)] for w in self.data]

    # ----- algebra ------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return self.shape == other.shape and self.data == other.data

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.data))

    def __xor__(self, other: "BitMatrix") -> "BitMatrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        return BitMatrix(self.rows, self.cols,
                         [a ^ b for a, b in zip(self.data, other.data)])

    def __matmul__(self, other: "BitMatrix") -> "BitMatrix":
        return matmul(self, other)

    def matvec(self, v: BitVector) -> BitVector:
        if v.n != self.cols:
            raise ValueError(f"length mismatch: {self.cols} columns, vector of {v.n}")
        bits = 0
        for r, word in enumerate(self.data):
            bits |= ((word & v.bits).bit_count() & 1) << r
        return BitVector(self.rows, bits)

    def hstack(self, other: "BitMatrix") -> "BitMatrix":
        if self.rows != other.rows:
            raise ValueError("row count mismatch")
        data = [a | (b << self.cols) for a, b in zip(self.data, other.data)]
        return BitMatrix(self.rows, self.cols + other.cols, data)

    def vstack(self, other: "BitMatrix") -> "BitMatrix":
        if self.cols != other.cols:
            raise ValueError("column count mismatch")
        return BitMatrix(self.rows + other.rows, self.cols, self.data + other.data)

    def kron(self, other: "BitMatrix") -> "BitMatrix":
        """Kronecker product self (x) other."""
        data = []
        for i in range(self.rows):
            arow = self.data[i]
            for s in range(other.rows):
                brow = other.data[s]
                word = 0
                bits = arow
                while bits:
                    j = (bits & -bits).bit_length() - 1
                    word |= brow << (j * other.cols)
                    bits &= bits - 1
                data.append(word)
        return BitMatrix(self.rows * other.rows, self.cols * other.cols, data)

    def submatrix(self, row_range: range, col_range: range) -> "BitMatrix":
        mask = 0
        for c in col_range:
            mask |= 1 << c
        shift = col_range.start if len(col_range) else 0
        data = [(self.data[r] & mask) >> shift for r in row_range]
        return BitMatrix(len(row_range), len(col_range), data)

    def __repr__(self) -> str:
        if self.rows * self.cols > 400:
            return f"BitMatrix({self.rows}x{self.cols})"
        body = ",".join(self.row(r).to_string() for r in range(self.rows))
        return f"BitMatrix({self.rows}x{self.cols}:{body})"


# ----- elimination core ------------------------------------------------


def _eliminate(rows: list[int], cols: int, reduce: bool = True) -> tuple[list[int], list[int]]:
    """Gaussian elimination in place.  Returns (rows, pivot column list).

    Pivots are chosen leftmost-column first and topmost-row first, so the
    reduced form is the canonical RREF of the row space.
    """
    pivots: list[int] = []
    r = 0
    nrows = len(rows)
    for c in range(cols):
        if r == nrows:
            break
        bit = 1 << c
        pivot = -1
        for i in range(r, nrows):
            if rows[i] & bit:
                pivot = i
                break
        if pivot < 0:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        src = rows[r]
        sweep = range(nrows) if reduce else range(r + 1, nrows)
        for i in sweep:
            if i != r and rows[i] & bit:
                rows[i] ^= src
        pivots.append(c)
        r += 1
    return rows, pivots


def rref_rows(rows: Iterable[int], width: int) -> tuple[int, ...]:
    """Canonical RREF of a set of row vectors (zero rows dropped)."""
    work, pivots = _eliminate(list(rows), width, reduce=True)
    return tuple(work[: len(pivots)])


# ----- core operations ---------------------------------------------------


def matmul(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    """Product over GF(2); entry (i, j) is the parity of sum_k a(i,k) b(k,j)."""
    if a.cols != b.rows:
        raise ValueError(f"inner dimension mismatch: {a.shape} @ {b.shape}")
    brows = b.data
    data = []
    for word in a.data:
        acc = 0
        bits = word
        while bits:
            k = (bits & -bits).bit_length() - 1
            acc ^= brows[k]
            bits &= bits - 1
        data.append(acc)
    return BitMatrix(a.rows, b.cols, data)


def transpose(m: BitMatrix) -> BitMatrix:
    return m.T


def rank(m: BitMatrix) -> int:
    """GF(2) rank via row elimination."""
    _, pivots = _eliminate(list(m.data), m.cols, reduce=False)
    return len(pivots)


def nullspace_basis(m: BitMatrix) -> BitMatrix:
    """Basis of {x | m x = 0}, one basis vector per column.

    The number of columns is ``m.cols - rank(m)``; free coordinates are
    taken in increasing column order, so the result is canonical.
    """
    work, pivots = _eliminate(list(m.data), m.cols, reduce=True)
    pivot_set = set(pivots)
    free = [c for c in range(m.cols) if c not in pivot_set]
    basis = []
    for fc in free:
        bits = 1 << fc
        fbit = 1 << fc
        for i, pc in enumerate(pivots):
            if work[i] & fbit:
                bits |= 1 << pc
        basis.append(BitVector(m.cols, bits))
    return BitMatrix.from_columns(basis) if basis else BitMatrix.zeros(m.cols, 0)


def solve(a: BitMatrix, b: BitVector) -> Optional[BitVector]:
    """Some x with a x = b, or None when b is outside the column space."""
    if a.rows != b.n:
        raise ValueError(f"dimension mismatch: {a.rows} rows, vector of {b.n}")
    aug = [a.data[i] | (((b.bits >> i) & 1) << a.cols) for i in range(a.rows)]
    work, pivots = _eliminate(aug, a.cols, reduce=True)
    aug_bit = 1 << a.cols
    for i in range(len(pivots), a.rows):
        if work[i] & aug_bit:
            return None
    bits = 0
    for i, pc in enumerate(pivots):
        if work[i] & aug_bit:
            bits |= 1 << pc
    return BitVector(a.cols, bits)


def inverse(m: BitMatrix) -> Optional[BitMatrix]:
    """Inverse of a square matrix, or None when it is singular."""
    if not m.is_square():
        raise ValueError("inverse of a non-square matrix")
    n = m.rows
    aug = [m.data[i] | (1 << (n + i)) for i in range(n)]
    work, pivots = _eliminate(aug, n, reduce=True)
    if len(pivots) != n:
        return None
    return BitMatrix(n, n, [w >> n for w in work])


def symplectic_form(n: int) -> BitMatrix:
    """The 2n x 2n block matrix [[0, I],[I, 0]]."""
    top = BitMatrix.zeros(n, n).hstack(BitMatrix.identity(n))
    bot = BitMatrix.identity(n).hstack(BitMatrix.zeros(n, n))
    return top.vstack(bot)


def is_symplectic(c: BitMatrix) -> bool:
    """True iff c^T P c = P for the off-diagonal block form P."""
    if not c.is_square():
        raise ValueError("symplectic test on a non-square matrix")
    if c.rows % 2:
        raise ValueError("symplectic test on an odd dimension")
    p = symplectic_form(c.rows // 2)
    return matmul(matmul(c.T, p), c) == p


def is_orthogonal(a: BitMatrix) -> bool:
    """True iff a^T a = I."""
    if not a.is_square():
        return False
    return matmul(a.T, a) == BitMatrix.identity(a.rows)


# ----- text serialization ----------------------------------------------


def to_text(m: BitMatrix) -> str:
    """Serialize: first line "rows cols", then one 0/1 string per row."""
    lines = [f"{m.rows} {m.cols}"]
    lines.extend(m.row(r).to_string() for r in range(m.rows))
    return "\n".join(lines) + "\n"


def from_text(text: str) -> BitMatrix:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty matrix text")
    header = lines[0].split()
    if len(header) != 2:
        raise ValueError(f"bad header {lines[0]!r}: expected 'rows cols'")
    rows, cols = int(header[0]), int(header[1])
    if cols == 0:
        return BitMatrix.zeros(rows, 0)
    if len(lines) - 1 < rows:
        raise ValueError(f"expected {rows} rows, found {len(lines) - 1}")
    data = []
    for i in range(rows):
        line = lines[1 + i]
        if len(line) != cols or set(line) - {"0", "1"}:
            raise ValueError(f"line {i + 2}: expected {cols} binary digits, got {line!r}")
        data.append(int(line[::-1], 2))
    return BitMatrix(rows, cols, data)
