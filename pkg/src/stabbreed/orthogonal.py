"""Constructive GF(2) factorizations behind the breeding Clifford.

Three building blocks, each an explicit construction with a runtime
product check:

* symmetric_factor: any symmetric W equals R D R^T with R invertible and
  D canonical -- a direct sum of [[0,1],[1,0]] blocks when W has zero
  diagonal, an identity block otherwise, padded with zeros to rank.
* gram_root: a square M with M^T M = W exists iff W is not both full rank
  and zero-diagonal.
* extend_to_orthogonal: a column-isometry W (W^T W = I) extends to an
  orthogonal square matrix by appending columns iff the all-ones vector
  avoids col(W).

Composing them builds, for any full-column-rank Q, an orthogonal A whose
lower-left block is (a possibly repaired) Q transposed: gram_root of
I + Q^T Q supplies the block M making [Q; M] an isometry, which is then
completed to A^T.  Two repairs can occur and are logged: appending one
standard-basis column to Q (making the column count odd, which always
unblocks the gram root) and mixing one column of Q into another (which
removes the all-ones vector from col([Q; M])).  Measurement outcomes for
a repaired Q are linear functions of the outcomes for the original.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Literal, Optional, Union

from .errors import VerificationError
from .gf2 import (
    BitMatrix,
    BitVector,
    inverse,
    is_orthogonal,
    matmul,
    nullspace_basis,
    rank,
    solve,
)

AddedColumn = tuple[Literal["added_column"], int]
MixedColumns = tuple[Literal["mixed_columns"], int, int]
Repair = Union[AddedColumn, MixedColumns]


@dataclass(frozen=True)
class SymmetricFactorization:
    """W = r d r^T with r invertible and d the canonical block form."""

    r: BitMatrix
    d: BitMatrix
    kind: Literal["zero-diagonal", "nonzero-diagonal"]
    rank: int


@dataclass(frozen=True)
class BreedingMatrix:
    """Orthogonal A whose lower-left block is q_used^T, plus the repair log."""

    a: BitMatrix
    q_used: BitMatrix
    column_repairs: tuple[Repair, ...]

    @property
    def k(self) -> int:
        return self.q_used.rows

    @property
    def num_measurements(self) -> int:
        return self.q_used.cols


def _swap_bit(word: int, a: int, b: int) -> int:
    if ((word >> a) ^ (word >> b)) & 1:
        word ^= (1 << a) | (1 << b)
    return word


class _Accumulator:
    """Tracks R while peeling: stores R^T rows so column ops on R are O(1)."""

    def __init__(self, n: int):
        self.rt = [1 << i for i in range(n)]

    def swap(self, i: int, j: int) -> None:
        self.rt[i], self.rt[j] = self.rt[j], self.rt[i]

    def add_columns_into(self, target: int, sources_bits: int, offset: int) -> None:
        """R column `target` += sum of R columns (offset + s) over set bits s."""
        acc = self.rt[target]
        bits = sources_bits
        while bits:
            s = (bits & -bits).bit_length() - 1
            acc ^= self.rt[offset + s]
            bits &= bits - 1
        self.rt[target] = acc

    def apply_three(self, g: int) -> None:
        """Multiply R on the right by diag(I, V, I) at offset g, where
        V V^T = diag(1, [[0,1],[1,0]])."""
        r0, r1, r2 = self.rt[g], self.rt[g + 1], self.rt[g + 2]
        self.rt[g] = r0 ^ r1 ^ r2
        self.rt[g + 1] = r0 ^ r1
        self.rt[g + 2] = r0 ^ r2

    def matrix(self, n: int) -> BitMatrix:
        return BitMatrix(n, n, self.rt).T


def symmetric_factor(w: BitMatrix) -> SymmetricFactorization:
    """Factor a symmetric matrix as R D R^T by peeling one canonical block
    per step.

    A nonzero diagonal entry is moved to the front (its row/column become a
    rank-one block); otherwise the first off-diagonal 1 is moved to
    positions (0, 1) and peeled as a [[0,1],[1,0]] block.  When the input
    diagonal is nonzero the pair blocks are converted to identity blocks
    afterwards, three columns at a time.  Pivot searches take the smallest
    row, then the smallest column, so the output is deterministic.
    """
    if not w.is_symmetric():
        raise ValueError("symmetric factorization of a non-symmetric matrix")
    n = w.rows
    res = list(w.data)
    acc = _Accumulator(n)
    ones = 0
    pairs = 0
    offset = 0

    def res_swap(i: int, j: int) -> None:
        res[i], res[j] = res[j], res[i]
        for t in range(len(res)):
            res[t] = _swap_bit(res[t], i, j)
        acc.swap(offset + i, offset + j)

    while res:
        m = len(res)
        diag = next((i for i in range(m) if (res[i] >> i) & 1), -1)
        if diag >= 0:
            if diag:
                res_swap(0, diag)
            a_bits = 0
            for s in range(1, m):
                a_bits |= (res[s] & 1) << (s - 1)
            acc.add_columns_into(offset, a_bits, offset + 1)
            res = [res[s] >> 1 for s in range(1, m)]
            bits = a_bits
            while bits:
                s = (bits & -bits).bit_length() - 1
                res[s] ^= a_bits
                bits &= bits - 1
            ones += 1
            offset += 1
            continue
        row = next((i for i in range(m) if res[i]), -1)
        if row < 0:
            break
        col = (res[row] & -res[row]).bit_length() - 1
        if row:
            res_swap(0, row)  # col > row >= 1, so the column is untouched
        if col != 1:
            res_swap(1, col)
        if not (res[0] >> 1) & 1:
            raise AssertionError("pair pivot lost during permutation")
        a_bits = 0
        b_bits = 0
        for s in range(2, m):
            a_bits |= (res[s] & 1) << (s - 2)
            b_bits |= ((res[s] >> 1) & 1) << (s - 2)
        acc.add_columns_into(offset, b_bits, offset + 2)
        acc.add_columns_into(offset + 1, a_bits, offset + 2)
        res = [res[s] >> 2 for s in range(2, m)]
        bits = a_bits
        while bits:
            s = (bits & -bits).bit_length() - 1
            res[s] ^= b_bits
            bits &= bits - 1
        bits = b_bits
        while bits:
            s = (bits & -bits).bit_length() - 1
            res[s] ^= a_bits
            bits &= bits - 1
        pairs += 2
        offset += 2

    total_rank = ones + pairs
    kind: Literal["zero-diagonal", "nonzero-diagonal"]
    kind = "zero-diagonal" if w.has_zero_diagonal() else "nonzero-diagonal"
    if kind == "zero-diagonal" and ones:
        raise AssertionError("rank-one block peeled from a zero-diagonal matrix")
    if kind == "nonzero-diagonal":
        start = ones
        while start < total_rank:
            acc.apply_three(start - 1)
            start += 2

    d_rows = [0] * n
    if kind == "zero-diagonal":
        for t in range(total_rank // 2):
            d_rows[2 * t] = 1 << (2 * t + 1)
            d_rows[2 * t + 1] = 1 << (2 * t)
    else:
        for i in range(total_rank):
            d_rows[i] = 1 << i
    return SymmetricFactorization(r=acc.matrix(n), d=BitMatrix(n, n, d_rows),
                                  kind=kind, rank=total_rank)


def _chain_root(n: int, r: int) -> BitMatrix:
    """Square U with U^T U = the rank-r zero-diagonal canonical form, r < n.

    Column 2t is the even prefix 1...1 of length 2t+2, column 2t+1 has ones
    at 2t+1 and 2t+2; all pairwise parities then reproduce the pair blocks.
    For one block this is the classic 3 x 3 identity; the chain iterates it.
    """
    cols = []
    for t in range(r // 2):
        cols.append(BitVector(n, (1 << (2 * t + 2)) - 1))
        cols.append(BitVector(n, (1 << (2 * t + 1)) | (1 << (2 * t + 2))))
    cols.extend(BitVector(n, 0) for _ in range(n - r))
    return BitMatrix.from_columns(cols)


def gram_root(w: BitMatrix) -> Optional[BitMatrix]:
    """Square M with M^T M = W, or None when W is full rank with zero diagonal."""
    if not w.is_symmetric():
        raise ValueError("gram root of a non-symmetric matrix")
    n = w.rows
    if n == 0:
        return BitMatrix.zeros(0, 0)
    fact = symmetric_factor(w)
    if fact.kind == "nonzero-diagonal":
        rt = fact.r.T
        m = BitMatrix(n, n, rt.data[:fact.rank] + (0,) * (n - fact.rank))
    else:
        if fact.rank == n:
            return None
        u = _chain_root(n, fact.rank)
        if matmul(u.T, u) != fact.d:
            raise VerificationError("chain root failed its product check")
        m = matmul(u, fact.r.T)
    if matmul(m.T, m) != w:
        raise VerificationError("gram root failed its product check")
    return m


def extend_to_orthogonal(w: BitMatrix) -> Optional[BitMatrix]:
    """Complete an isometry to an orthogonal matrix by appending columns.

    Returns None unless W^T W = I and the all-ones vector avoids col(W).
    The completion is Y R^{-T} for a kernel basis Y of W^T and the
    factorization Y^T Y = R I R^T; that Gram matrix is provably full rank
    with nonzero diagonal, which is re-checked at runtime.
    """
    n, r = w.rows, w.cols
    if matmul(w.T, w) != BitMatrix.identity(r):
        return None
    if solve(w, BitVector.ones(n)) is not None:
        return None
    y = nullspace_basis(w.T)
    gram = matmul(y.T, y)
    fact = symmetric_factor(gram)
    if fact.kind != "nonzero-diagonal" or fact.rank != n - r:
        raise VerificationError("kernel Gram matrix is not an identity congruate;"
                                " input conditions must have been violated")
    rinv = inverse(fact.r)
    if rinv is None:
        raise VerificationError("factorization returned a singular R")
    z = matmul(y, rinv.T)
    a = w.hstack(z)
    if not is_orthogonal(a):
        raise VerificationError("orthogonal completion failed its product check")
    return a


def _first_missing_basis_column(q: BitMatrix) -> Optional[int]:
    for i in range(q.rows):
        if solve(q, BitVector(q.rows, 1 << i)) is None:
            return i
    return None


def _mix_columns(q: BitMatrix, target: int, source: int) -> BitMatrix:
    """Add column `source` into column `target` (a rank-preserving column op)."""
    data = [row ^ (((row >> source) & 1) << target) for row in q.data]
    return BitMatrix(q.rows, q.cols, data)


def build_breeding_matrix(q: BitMatrix) -> BreedingMatrix:
    """Orthogonal A with lower-left block equal to the transpose of Q
    (possibly repaired; see the module docstring).

    The input must have full column rank with at most as many columns as
    rows.  The repair log never exceeds two entries.
    """
    k, c = q.rows, q.cols
    if c > k:
        raise ValueError(f"{c} measurement columns for only {k} noisy copies")
    got = rank(q)
    if got < c:
        raise ValueError(f"rank-deficient measurement matrix: rank {got} < {c}")
    repairs: list[Repair] = []
    qcur = q
    for _ in range(4):
        cc = qcur.cols
        gram = BitMatrix.identity(cc) ^ matmul(qcur.T, qcur)
        m = gram_root(gram)
        if m is None:
            idx = _first_missing_basis_column(qcur)
            if idx is None:
                raise VerificationError("no rank-preserving column extends a"
                                        " square measurement matrix")
            qcur = qcur.hstack(BitMatrix.from_columns(
                [BitVector(k, 1 << idx)]))
            repairs.append(("added_column", idx))
            if len(repairs) > 2:
                raise VerificationError("repair log exceeded two entries")
            continue
        w = qcur.vstack(m)
        if matmul(w.T, w) != BitMatrix.identity(cc):
            raise VerificationError("[Q; M] is not an isometry")
        ext = extend_to_orthogonal(w)
        if ext is None:
            x = solve(w, BitVector.ones(k + cc))
            if x is None:
                raise VerificationError("extension failed although the all-ones"
                                        " vector avoids col([Q; M])")
            if cc < 2:
                idx = _first_missing_basis_column(qcur)
                if idx is None:
                    raise VerificationError("no rank-preserving column extends a"
                                            " square measurement matrix")
                qcur = qcur.hstack(BitMatrix.from_columns(
                    [BitVector(k, 1 << idx)]))
                repairs.append(("added_column", idx))
            else:
                target = (x.bits & -x.bits).bit_length() - 1
                source = 1 if target == 0 else 0
                qcur = _mix_columns(qcur, target, source)
                repairs.append(("mixed_columns", target, source))
            if len(repairs) > 2:
                raise VerificationError("repair log exceeded two entries")
            continue
        cc = qcur.cols
        z = ext.submatrix(range(k + cc), range(cc, k + cc))
        a = z.hstack(w).T
        if not is_orthogonal(a):
            raise VerificationError("breeding matrix is not orthogonal")
        if a.submatrix(range(k, k + cc), range(k)) != qcur.T:
            raise VerificationError("lower-left block does not match Q^T")
        return BreedingMatrix(a=a, q_used=qcur, column_repairs=tuple(repairs))
    raise VerificationError("breeding matrix construction did not converge")


def random_full_rank(k: int, c: int, rng: random.Random) -> BitMatrix:
    """Uniform full-column-rank k x c matrix by rejection sampling."""
    if not 0 <= c <= k:
        raise ValueError(f"cannot draw a full-rank {k} x {c} matrix")
    while True:
        m = BitMatrix(k, c, [rng.getrandbits(c) for _ in range(k)])
        if rank(m) == c:
            return m
