"""Binary-picture objects: Pauli operations, stabilizer states, Cliffords.

A Pauli operation on n qubits is a length-2n vector (z-part first, then
x-part); two Paulis commute iff their symplectic product a^T P b vanishes,
with P the off-diagonal block identity.  A stabilizer state is a pair
(S, b): a rank-n matrix S in Z_2^{2n x n} whose columns generate the
stabilizer (so S^T P S = 0) and the phase bits b.  A Clifford operation is
a symplectic 2n x 2n matrix acting as S -> C S.

Phase conventions: the generator-change correction d and the Clifford
correction f are both taken to be zero, which costs nothing for
distillation purposes; phase_correction_pauli recovers the Pauli fix-up
sigma_g with S^T P g = f for callers that need the general rule.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .gf2 import (
    BitMatrix,
    BitVector,
    inverse,
    is_orthogonal,
    is_symplectic,
    matmul,
    rank,
    solve,
    symplectic_form,
)


@dataclass(frozen=True)
class PauliRep:
    """Hermitian Pauli: binary vector (z-part then x-part) and a sign bit.

    The sign is stored but not propagated through Clifford conjugation;
    yield analysis depends only on the binary part.
    """

    a: BitVector
    sign: int = 0

    def __post_init__(self) -> None:
        if self.a.n % 2:
            raise ValueError("Pauli vector must have even length")
        if self.sign not in (0, 1):
            raise ValueError("sign must be a bit")

    @property
    def n(self) -> int:
        return self.a.n // 2

    @property
    def z_part(self) -> BitVector:
        return BitVector(self.n, self.a.bits & ((1 << self.n) - 1))

    @property
    def x_part(self) -> BitVector:
        return BitVector(self.n, self.a.bits >> self.n)


@dataclass(frozen=True)
class StabilizerRep:
    """Stabilizer state as generator matrix S (2n x n) and phase bits b."""

    s: BitMatrix
    b: BitVector

    def __post_init__(self) -> None:
        n = self.s.cols
        if self.s.rows != 2 * n:
            raise ValueError(f"generator matrix must be 2n x n, got {self.s.shape}")
        if self.b.n != n:
            raise ValueError("phase vector length must equal the qubit count")
        if rank(self.s) != n:
            raise ValueError("stabilizer generators are linearly dependent")
        p = symplectic_form(n)
        if not matmul(matmul(self.s.T, p), self.s).is_zero():
            raise ValueError("generators do not commute (S^T P S != 0)")

    @property
    def n(self) -> int:
        return self.s.cols

    @property
    def s_z(self) -> BitMatrix:
        return self.s.submatrix(range(self.n), range(self.n))

    @property
    def s_x(self) -> BitMatrix:
        return self.s.submatrix(range(self.n, 2 * self.n), range(self.n))


@dataclass(frozen=True)
class CliffordRep:
    """Clifford operation as its symplectic binary matrix."""

    c: BitMatrix

    def __post_init__(self) -> None:
        if not is_symplectic(self.c):
            raise ValueError("Clifford matrix must be symplectic")

    @property
    def n(self) -> int:
        return self.c.rows // 2


def symplectic_product(a: BitVector, b: BitVector) -> int:
    """a^T P b for length-2n vectors: z(a).x(b) + x(a).z(b) mod 2."""
    if a.n != b.n:
        raise ValueError("length mismatch")
    if a.n % 2:
        raise ValueError("vectors must have even length")
    n = a.n // 2
    mask = (1 << n) - 1
    az, ax = a.bits & mask, a.bits >> n
    bz, bx = b.bits & mask, b.bits >> n
    return ((az & bx).bit_count() + (ax & bz).bit_count()) & 1


def commutes(p: PauliRep, q: PauliRep) -> bool:
    """True iff the two Pauli operations commute."""
    return symplectic_product(p.a, q.a) == 0


def tensor_stab(r1: StabilizerRep, r2: StabilizerRep) -> StabilizerRep:
    """Tensor product: z-blocks stacked block-diagonally above x-blocks."""
    n1, n2 = r1.n, r2.n
    top = r1.s_z.hstack(BitMatrix.zeros(n1, n2)).vstack(
        BitMatrix.zeros(n2, n1).hstack(r2.s_z))
    bot = r1.s_x.hstack(BitMatrix.zeros(n1, n2)).vstack(
        BitMatrix.zeros(n2, n1).hstack(r2.s_x))
    return StabilizerRep(top.vstack(bot), r1.b.concat(r2.b))


def change_generators(r: StabilizerRep, rmat: BitMatrix) -> StabilizerRep:
    """Switch generating set: S -> S R, b -> R^T b (zero d convention)."""
    if rmat.shape != (r.n, r.n):
        raise ValueError(f"change-of-generators matrix must be {r.n} x {r.n}")
    if inverse(rmat) is None:
        raise ValueError("change-of-generators matrix is singular")
    return StabilizerRep(matmul(r.s, rmat), rmat.T.matvec(r.b))


def apply_clifford(q: CliffordRep, r: StabilizerRep) -> StabilizerRep:
    """Conjugate the stabilizer: S -> C S, b unchanged (zero f convention)."""
    if q.c.cols != r.s.rows:
        raise ValueError(f"Clifford on {q.n} qubits applied to {r.n}-qubit state")
    return StabilizerRep(matmul(q.c, r.s), r.b)


def phase_correction_pauli(r: StabilizerRep, f: BitVector) -> Optional[PauliRep]:
    """Pauli sigma_g with S^T P g = f, absorbing a phase flip f ahead of a Clifford.

    Always solvable because S has rank n and P is invertible.
    """
    if f.n != r.n:
        raise ValueError("phase vector length must equal the qubit count")
    lhs = matmul(r.s.T, symplectic_form(r.n))
    g = solve(lhs, f)
    return None if g is None else PauliRep(g)


def tensor_clifford(q1: CliffordRep, q2: CliffordRep) -> CliffordRep:
    """Tensor product of Cliffords: the four blocks of each operand interleave."""
    n1, n2 = q1.n, q2.n

    def block(m: CliffordRep, r0: int, c0: int, n: int) -> BitMatrix:
        return m.c.submatrix(range(r0, r0 + n), range(c0, c0 + n))

    a1, b1 = block(q1, 0, 0, n1), block(q1, 0, n1, n1)
    c1, d1 = block(q1, n1, 0, n1), block(q1, n1, n1, n1)
    a2, b2 = block(q2, 0, 0, n2), block(q2, 0, n2, n2)
    c2, d2 = block(q2, n2, 0, n2), block(q2, n2, n2, n2)

    z1 = BitMatrix.zeros(n1, n2)
    z2 = BitMatrix.zeros(n2, n1)
    rows = [
        a1.hstack(z1).hstack(b1).hstack(z1),
        z2.hstack(a2).hstack(z2).hstack(b2),
        c1.hstack(z1).hstack(d1).hstack(z1),
        z2.hstack(c2).hstack(z2).hstack(d2),
    ]
    out = rows[0]
    for m in rows[1:]:
        out = out.vstack(m)
    return CliffordRep(out)


def cnot_clifford(a: BitMatrix) -> CliffordRep:
    """CNOT-only Clifford: block-diagonal [[A, 0], [0, A^{-T}]]."""
    if not a.is_square():
        raise ValueError("CNOT-type Clifford needs a square matrix")
    ainv = inverse(a)
    if ainv is None:
        raise ValueError("CNOT-type Clifford needs an invertible matrix")
    n = a.rows
    top = a.hstack(BitMatrix.zeros(n, n))
    bot = BitMatrix.zeros(n, n).hstack(ainv.T)
    return CliffordRep(top.vstack(bot))


def copies_rep(s: BitMatrix, kbar: int) -> BitMatrix:
    """Generator matrix of kbar identical copies, qubits arranged per party: S (x) I."""
    if s.rows != 2 * s.cols:
        raise ValueError(f"generator matrix must be 2n x n, got {s.shape}")
    if kbar < 1:
        raise ValueError("copy count must be positive")
    return s.kron(BitMatrix.identity(kbar))


def breeding_transform(bbar: BitVector, a: BitMatrix, n: int) -> BitVector:
    """Phase update under the collective CNOT Clifford: each party segment b_i -> A b_i."""
    if not is_orthogonal(a):
        raise ValueError("breeding transform requires an orthogonal matrix")
    kbar = a.rows
    if bbar.n != n * kbar:
        raise ValueError(f"phase vector of length {bbar.n}, expected {n} x {kbar}")
    mask = (1 << kbar) - 1
    out = 0
    for i in range(n):
        seg = (bbar.bits >> (i * kbar)) & mask
        out |= a.matvec(BitVector(kbar, seg)).bits << (i * kbar)
    return BitVector(bbar.n, out)


def graph_state_rep(theta: BitMatrix) -> StabilizerRep:
    """Graph state for adjacency theta: S = [theta; I], b = 0."""
    if not theta.is_symmetric():
        raise ValueError("adjacency matrix must be symmetric")
    if not theta.has_zero_diagonal():
        raise ValueError("adjacency matrix must have zero diagonal")
    n = theta.rows
    return StabilizerRep(theta.vstack(BitMatrix.identity(n)), BitVector.zeros(n))


def zero_state(n: int) -> StabilizerRep:
    """The all-|0> product state: S = [I; 0]."""
    return StabilizerRep(BitMatrix.identity(n).vstack(BitMatrix.zeros(n, n)),
                         BitVector.zeros(n))


def per_copy_to_per_party(b: BitVector, n: int, k: int) -> BitVector:
    """Reindex nk phase bits from copy-major to party-major order."""
    if b.n != n * k:
        raise ValueError("length mismatch")
    out = 0
    for copy in range(k):
        for party in range(n):
            if (b.bits >> (copy * n + party)) & 1:
                out |= 1 << (party * k + copy)
    return BitVector(n * k, out)


def per_party_to_per_copy(b: BitVector, n: int, k: int) -> BitVector:
    """Inverse reindexing of per_copy_to_per_party."""
    if b.n != n * k:
        raise ValueError("length mismatch")
    out = 0
    for party in range(n):
        for copy in range(k):
            if (b.bits >> (party * k + copy)) & 1:
                out |= 1 << (copy * n + party)
    return BitVector(n * k, out)
