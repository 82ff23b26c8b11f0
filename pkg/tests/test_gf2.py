import random

import pytest

from stabbreed.gf2 import (
    BitMatrix,
    BitVector,
    from_text,
    inverse,
    is_orthogonal,
    is_symplectic,
    matmul,
    nullspace_basis,
    rank,
    rref_rows,
    solve,
    symplectic_form,
    to_text,
)


# ----- naive reference implementation (oracle) --------------------------

def naive_matmul(a, b):
    """Triple-loop mod-2 product on plain lists."""
    rows, inner, cols = len(a), len(b), len(b[0]) if b else 0
    out = [[0] * cols for _ in range(rows)]
    for i in range(rows):
        for j in range(cols):
            s = 0
            for k in range(inner):
                s ^= a[i][k] & b[k][j]
            out[i][j] = s
    return out


def random_matrix(rng, rows, cols):
    return BitMatrix(rows, cols, [rng.getrandbits(cols) for _ in range(rows)])


def random_invertible(rng, n):
    while True:
        m = random_matrix(rng, n, n)
        if rank(m) == n:
            return m


# ----- matmul ------------------------------------------------------------

def test_matmul_identity():
    rng = random.Random(1)
    x = random_matrix(rng, 3, 7)
    assert matmul(BitMatrix.identity(3), x) == x


def test_matmul_swap_involution():
    swap = BitMatrix.from_rows([[0, 1], [1, 0]])
    assert matmul(swap, swap) == BitMatrix.identity(2)


def test_matmul_matches_naive_reference():
    rng = random.Random(7)
    for _ in range(25):
        r, k, c = rng.randint(1, 8), rng.randint(1, 8), rng.randint(1, 8)
        a = random_matrix(rng, r, k)
        b = random_matrix(rng, k, c)
        expected = naive_matmul(a.to_lists(), b.to_lists())
        assert matmul(a, b).to_lists() == expected


def test_matmul_matches_naive_up_to_64():
    rng = random.Random(11)
    for size in (16, 33, 64):
        a = random_matrix(rng, size, size)
        b = random_matrix(rng, size, size)
        assert matmul(a, b).to_lists() == naive_matmul(a.to_lists(), b.to_lists())


def test_matmul_dimension_mismatch():
    with pytest.raises(ValueError):
        matmul(BitMatrix.zeros(2, 3), BitMatrix.zeros(2, 3))


def test_matmul_empty_inner_dimension_gives_zero():
    a = BitMatrix.zeros(3, 0)
    b = BitMatrix.zeros(0, 4)
    assert matmul(a, b) == BitMatrix.zeros(3, 4)


# ----- rank --------------------------------------------------------------

def test_rank_identity():
    assert rank(BitMatrix.identity(5)) == 5


def test_rank_zero_matrix():
    assert rank(BitMatrix.zeros(4, 4)) == 0


def test_rank_repeated_row():
    assert rank(BitMatrix.from_rows([[1, 1], [1, 1]])) == 1


def test_rank_equals_rank_of_transpose():
    rng = random.Random(3)
    for _ in range(30):
        m = random_matrix(rng, rng.randint(0, 10), rng.randint(0, 10))
        assert rank(m) == rank(m.T)


def test_rank_of_product_bounded():
    rng = random.Random(5)
    for _ in range(30):
        a = random_matrix(rng, rng.randint(1, 9), rng.randint(1, 9))
        b = random_matrix(rng, a.cols, rng.randint(1, 9))
        assert rank(matmul(a, b)) <= min(rank(a), rank(b))


# ----- nullspace ----------------------------------------------------------

def test_nullspace_full_rank_is_empty():
    for n in (1, 4):
        ns = nullspace_basis(BitMatrix.identity(n))
        assert ns.shape == (n, 0)


def test_nullspace_of_zero_matrix_spans_everything():
    ns = nullspace_basis(BitMatrix.zeros(3, 3))
    assert ns.shape == (3, 3)
    assert rank(ns) == 3


def test_nullspace_single_parity_row():
    m = BitMatrix.from_rows([[1, 1, 0]])
    ns = nullspace_basis(m)
    assert ns.shape == (3, 2)
    # brute-force oracle: all 8 vectors orthogonal to (1,1,0)
    kernel = {v for v in range(8) if ((v & 1) ^ ((v >> 1) & 1)) == 0}
    spanned = set()
    for c0 in (0, 1):
        for c1 in (0, 1):
            x = (ns.column(0).bits * c0) ^ (ns.column(1).bits * c1)
            spanned.add(x)
    assert spanned == kernel


def test_nullspace_dimension_plus_rank_is_cols():
    rng = random.Random(9)
    for _ in range(30):
        m = random_matrix(rng, rng.randint(0, 8), rng.randint(0, 8))
        ns = nullspace_basis(m)
        assert ns.cols + rank(m) == m.cols
        if ns.cols:
            assert matmul(m, ns).is_zero()
            assert rank(ns) == ns.cols


# ----- solve ---------------------------------------------------------------

def test_solve_identity():
    b = BitVector.from_bits([1, 0, 1, 1])
    assert solve(BitMatrix.identity(4), b) == b


def test_solve_zero_matrix_nonzero_rhs():
    assert solve(BitMatrix.zeros(3, 3), BitVector.from_bits([1, 0, 0])) is None


def test_solve_back_substitution_case():
    a = BitMatrix.from_rows([[1, 1], [0, 1]])
    x = solve(a, BitVector.from_bits([1, 1]))
    assert x == BitVector.from_bits([0, 1])


def test_solve_random_consistency():
    rng = random.Random(13)
    for _ in range(40):
        m = random_matrix(rng, rng.randint(1, 9), rng.randint(1, 9))
        x = BitVector(m.cols, rng.getrandbits(m.cols))
        b = m.matvec(x)
        got = solve(m, b)
        assert got is not None
        assert m.matvec(got) == b


# ----- inverse --------------------------------------------------------------

def test_inverse_identity_and_swap():
    assert inverse(BitMatrix.identity(3)) == BitMatrix.identity(3)
    swap = BitMatrix.from_rows([[0, 1], [1, 0]])
    assert inverse(swap) == swap


def test_inverse_random_full_rank_16():
    rng = random.Random(17)
    m = random_invertible(rng, 16)
    mi = inverse(m)
    assert mi is not None
    assert matmul(m, mi) == BitMatrix.identity(16)
    assert inverse(mi) == m


def test_inverse_singular_returns_none():
    assert inverse(BitMatrix.zeros(3, 3)) is None


# ----- symplectic / orthogonal ----------------------------------------------

def test_symplectic_identity_and_form():
    assert is_symplectic(BitMatrix.identity(6))
    assert is_symplectic(symplectic_form(3))


def test_symplectic_2x2_upper_triangular():
    # for n=1, C = [[1,1],[0,1]]: C^T P C = [[0,1],[1,0]] = P
    c = BitMatrix.from_rows([[1, 1], [0, 1]])
    assert is_symplectic(c)


def test_symplectic_odd_dimension_raises():
    with pytest.raises(ValueError):
        is_symplectic(BitMatrix.identity(3))


def test_orthogonal_identity_and_permutation():
    assert is_orthogonal(BitMatrix.identity(4))
    perm = BitMatrix.from_rows([[0, 1, 0], [0, 0, 1], [1, 0, 0]])
    assert is_orthogonal(perm)


def test_orthogonal_rejects_shear():
    assert not is_orthogonal(BitMatrix.from_rows([[1, 1], [0, 1]]))


def test_orthogonal_inverse_is_transpose():
    rng = random.Random(19)
    perm_rows = list(range(8))
    rng.shuffle(perm_rows)
    a = BitMatrix.from_rows([[1 if c == perm_rows[r] else 0 for c in range(8)]
                             for r in range(8)])
    assert is_orthogonal(a)
    for _ in range(10):
        b = BitVector(8, rng.getrandbits(8))
        x = solve(a, b)
        assert x == a.T.matvec(b)


# ----- serialization ----------------------------------------------------------

def test_text_roundtrip():
    rng = random.Random(23)
    for _ in range(10):
        m = random_matrix(rng, rng.randint(0, 6), rng.randint(0, 6))
        assert from_text(to_text(m)) == m


def test_text_format_example():
    m = BitMatrix.from_rows([[1, 0, 1], [0, 1, 0]])
    assert to_text(m) == "2 3\n101\n010\n"


def test_from_text_rejects_bad_line():
    with pytest.raises(ValueError):
        from_text("1 3\n10\n")
    with pytest.raises(ValueError):
        from_text("1 3\n1x1\n")


# ----- misc helpers -------------------------------------------------------------

def test_rref_rows_is_canonical():
    rng = random.Random(29)
    for _ in range(20):
        width = rng.randint(1, 8)
        rows = [rng.getrandbits(width) for _ in range(rng.randint(1, 6))]
        key = rref_rows(rows, width)
        # invariance under shuffling and row sums
        shuffled = rows[:]
        rng.shuffle(shuffled)
        if len(shuffled) >= 2:
            shuffled[0] ^= shuffled[1]
        assert rref_rows(shuffled, width) == key


def test_kron_small():
    a = BitMatrix.from_rows([[1], [0]])  # column (1,0)
    k = a.kron(BitMatrix.identity(2))
    assert k.to_lists() == [[1, 0], [0, 1], [0, 0], [0, 0]]


def test_bitvector_dot_and_concat():
    u = BitVector.from_bits([1, 0, 1])
    v = BitVector.from_bits([1, 1, 1])
    assert u.dot(v) == 0
    assert u.concat(v).to_string() == "101111"
