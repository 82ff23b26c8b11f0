import math
import random
from collections import Counter
from itertools import product

import pytest

from stabbreed.entropy import (
    NoiseModel,
    SubspaceKey,
    coset_entropy,
    entropy_H,
    enumerate_subspaces,
    format_noise_table,
    gaussian_binomial,
    h_f,
    is_strongly_typical,
    parse_noise_spec,
    typical_count_exponent,
)
from stabbreed.gf2 import BitMatrix
from stabbreed.measurements import MeasurementPartition, measurable_subspace
from stabbreed.stabilizer import graph_state_rep

RING5_THETA = BitMatrix.from_rows([
    [0, 0, 1, 1, 0],
    [0, 0, 0, 1, 1],
    [1, 0, 0, 0, 1],
    [1, 1, 0, 0, 0],
    [0, 1, 1, 0, 0],
])

RING5_PARTITIONS = [
    MeasurementPartition.from_sets(mz={2, 3, 4}, mx={0, 1}),
    MeasurementPartition.from_sets(mz={0, 3, 4}, mx={1, 2}),
    MeasurementPartition.from_sets(mz={0, 1, 4}, mx={2, 3}),
    MeasurementPartition.from_sets(mz={0, 1, 2}, mx={3, 4}),
    MeasurementPartition.from_sets(mz={1, 2, 3}, mx={0, 4}),
]


def ring_subspaces():
    state = graph_state_rep(RING5_THETA)
    return [measurable_subspace(state, m) for m in RING5_PARTITIONS]


def direct_entropy(table):
    """Independent oracle: direct summation of -p log2 p."""
    return -sum(p * math.log2(p) for p in table if p > 0)


def mixture_coset_entropy(fidelity, dim, n=5):
    """Coset entropy of the uniform-error mixture for a dim-d subspace.

    The 2^d classes all have 2^(n-d) members; the class of the zero vector
    carries the fidelity mass plus its share of the error mass.
    """
    q = (1 - fidelity) / (2 ** n - 1)
    masses = [fidelity + (2 ** (n - dim) - 1) * q]
    masses += [2 ** (n - dim) * q] * (2 ** dim - 1)
    return direct_entropy(masses)


# ----- NoiseModel -----------------------------------------------------------

def test_noise_model_validation():
    with pytest.raises(ValueError):
        NoiseModel(1, [0.5, 0.6])
    with pytest.raises(ValueError):
        NoiseModel(1, [1.5, -0.5])
    with pytest.raises(ValueError):
        NoiseModel(13, [0.0] * 2 ** 13)


def test_werner_table():
    nm = NoiseModel.werner(5, 0.9)
    assert nm.p[0] == pytest.approx(0.9)
    assert nm.p[17] == pytest.approx(0.1 / 31)


def test_noise_spec_parsing():
    nm = parse_noise_spec("werner 0.85", 5)
    assert nm == NoiseModel.werner(5, 0.85)
    table = parse_noise_spec("00 0.5\n10 0.25\n01 0.125\n11 0.125\n", 2)
    assert list(table.p) == [0.5, 0.25, 0.125, 0.125]
    roundtrip = parse_noise_spec(format_noise_table(table), 2)
    assert roundtrip == table
    with pytest.raises(ValueError):
        parse_noise_spec("00 0.5\n10 0.5\n", 2)


# ----- entropy_H ---------------------------------------------------------------

def test_entropy_point_mass_is_zero():
    assert entropy_H(NoiseModel.point_mass(3)) == 0.0


def test_entropy_uniform_is_n():
    for n in (1, 2, 5):
        assert entropy_H(NoiseModel.uniform(n)) == pytest.approx(n)


def test_entropy_mixture_matches_direct_summation():
    nm = NoiseModel.werner(5, 0.9)
    assert entropy_H(nm) == pytest.approx(direct_entropy(nm.p), abs=1e-12)
    closed = -0.9 * math.log2(0.9) - 31 * (0.1 / 31) * math.log2(0.1 / 31)
    assert entropy_H(nm) == pytest.approx(closed, abs=1e-12)


# ----- coset entropy --------------------------------------------------------------

def test_coset_entropy_trivial_subspace():
    nm = NoiseModel.werner(3, 0.8)
    assert coset_entropy(nm, SubspaceKey.zero(3)) == 0.0


def test_coset_entropy_full_space_is_H():
    nm = NoiseModel.werner(4, 0.8)
    full = SubspaceKey.from_vectors(4, [1, 2, 4, 8])
    assert coset_entropy(nm, full) == pytest.approx(entropy_H(nm), abs=1e-12)


def test_coset_entropy_mixture_one_dimensional():
    nm = NoiseModel.werner(5, 0.9)
    for g in (0b00001, 0b10110, 0b11111):
        got = coset_entropy(nm, SubspaceKey.from_vectors(5, [g]))
        assert got == pytest.approx(mixture_coset_entropy(0.9, 1), abs=1e-12)


def test_coset_entropy_bounds_and_monotonicity():
    rng = random.Random(41)
    for _ in range(15):
        n = rng.randint(1, 5)
        table = [rng.random() for _ in range(2 ** n)]
        total = sum(table)
        nm = NoiseModel(n, [x / total for x in table])
        vecs = [rng.getrandbits(n) for _ in range(rng.randint(0, n))]
        small = SubspaceKey.from_vectors(n, vecs)
        big = small | SubspaceKey.from_vectors(n, [rng.getrandbits(n)])
        h = entropy_H(nm)
        cs, cb = coset_entropy(nm, small), coset_entropy(nm, big)
        assert -1e-12 <= cs <= min(small.dim, h) + 1e-9
        assert cs <= cb + 1e-12
        assert cb <= h + 1e-9


# ----- subspace enumeration ---------------------------------------------------------

def test_gaussian_binomial_values():
    assert gaussian_binomial(2, 1) == 3
    assert gaussian_binomial(4, 2) == 35
    assert gaussian_binomial(3, 0) == 1
    assert gaussian_binomial(3, 3) == 1


def test_enumerate_subspaces_counts():
    sub = ring_subspaces()[0]
    assert len(enumerate_subspaces(sub, 0)) == 1
    assert enumerate_subspaces(sub, 0)[0].dim == 0
    assert len(enumerate_subspaces(sub, 2)) == 1
    ones = enumerate_subspaces(sub, 1)
    assert len(ones) == 3
    assert sorted(k.rows for k in ones) == [(0b00001,), (0b00010,), (0b00011,)]


def test_enumerate_subspaces_gaussian_counts_random():
    rng = random.Random(43)
    state = graph_state_rep(BitMatrix.zeros(4, 4))
    sub = measurable_subspace(state, MeasurementPartition.from_string("xxxx"))
    assert sub.dim == 4
    for d in range(5):
        keys = enumerate_subspaces(sub, d)
        assert len(keys) == gaussian_binomial(4, d)
        assert len(set(keys)) == len(keys)
        assert all(k.dim == d for k in keys)


def test_subspace_key_canonical_and_sum():
    a = SubspaceKey.from_vectors(3, [0b011, 0b101])
    b = SubspaceKey.from_vectors(3, [0b110, 0b011])
    assert a == b  # same span, canonical form
    assert (a | SubspaceKey.from_vectors(3, [0b110])).dim == 2
    assert (a | SubspaceKey.from_vectors(3, [0b111])).dim == 3
    assert a.contains(0b110)
    assert not a.contains(0b111)


# ----- h_f -------------------------------------------------------------------------

def test_h_f_all_max_is_zero():
    subs = ring_subspaces()
    nm = NoiseModel.werner(5, 0.9)
    assert h_f(nm, subs, [2, 2, 2, 2, 2]) == 0.0


def test_h_f_zero_forces_full_sum():
    subs = ring_subspaces()
    nm = NoiseModel.werner(5, 0.9)
    # all five V(M) sum to the full space, so C = H
    assert h_f(nm, subs, [0, 0, 0, 0, 0]) == pytest.approx(entropy_H(nm), abs=1e-12)


def test_h_f_single_one_hits_dim_one_row():
    subs = ring_subspaces()
    nm = NoiseModel.werner(5, 0.9)
    expected = mixture_coset_entropy(0.9, 1)
    for i in range(5):
        f = [2] * 5
        f[i] = 1
        assert h_f(nm, subs, f) == pytest.approx(expected, abs=1e-9)


def test_h_f_ring_dim_rows():
    subs = ring_subspaces()
    for fidelity in (0.8, 0.95):
        nm = NoiseModel.werner(5, fidelity)
        cases = {
            (2, 2, 2, 2, 2): 0,
            (1, 2, 2, 2, 2): 1,
            (0, 2, 2, 2, 2): 2,
            (0, 2, 1, 2, 2): 3,
            (0, 2, 2, 0, 2): 4,
            (0, 0, 0, 0, 0): 5,
        }
        for f, dim in cases.items():
            expected = mixture_coset_entropy(fidelity, dim)
            assert h_f(nm, subs, f) == pytest.approx(expected, abs=1e-9), (f, dim)


def test_h_f_monotone_nonincreasing():
    rng = random.Random(47)
    state = graph_state_rep(RING5_THETA)
    subs = [measurable_subspace(state, m) for m in RING5_PARTITIONS[:3]]
    for _ in range(5):
        table = [rng.random() for _ in range(32)]
        total = sum(table)
        nm = NoiseModel(5, [x / total for x in table])
        for f in product(range(3), repeat=3):
            base = h_f(nm, subs, f)
            for i in range(3):
                if f[i] < subs[i].dim:
                    bumped = list(f)
                    bumped[i] += 1
                    assert h_f(nm, subs, bumped) <= base + 1e-12


def test_h_f_range_validation():
    subs = ring_subspaces()
    nm = NoiseModel.werner(5, 0.9)
    with pytest.raises(ValueError):
        h_f(nm, subs, [3, 2, 2, 2, 2])
    with pytest.raises(ValueError):
        h_f(nm, subs, [2, 2, 2, 2])


# ----- typical sets ------------------------------------------------------------------

def test_typical_count_exponent_extremes():
    nm = NoiseModel(2, [0.5, 0.25, 0.125, 0.125])
    full = SubspaceKey.from_vectors(2, [1, 2])
    assert typical_count_exponent(nm, full) == pytest.approx(0.0, abs=1e-12)
    assert typical_count_exponent(nm, SubspaceKey.zero(2)) == pytest.approx(
        entropy_H(nm), abs=1e-12)


def brute_force_class_count(nm, key, u, eps):
    """Oracle: enumerate every sequence, filter by label match and typicality."""
    n = nm.n
    size = 2 ** n
    label = {b: sum(((b & row).bit_count() & 1) << i
                    for i, row in enumerate(key.rows)) for b in range(size)}
    target = tuple(label[s] for s in u)
    k = len(u)
    count = 0
    for seq in product(range(size), repeat=k):
        if tuple(label[s] for s in seq) != target:
            continue
        hist = Counter(seq)
        if all(abs(hist.get(a, 0) / k - nm.p[a]) < eps for a in range(size)):
            count += 1
    return count


def finite_k_band(nm, k, eps):
    """Honest finite-k width of the approximation log2|N|/k = H - C."""
    slope = sum(abs(math.log2(p)) for p in nm.p if p > 0)
    support = int((nm.p > 0).sum())
    return eps * slope + support * math.log2(k + 1) / k


def test_typical_class_count_against_brute_force():
    nm = NoiseModel(2, [0.5, 0.25, 0.125, 0.125])
    key = SubspaceKey.from_vectors(2, [0b01])
    eps = 0.15  # wide enough that the typical set is nonempty at k = 4
    predicted = typical_count_exponent(nm, key)
    deviations = []
    for k, u in [(4, (0, 0, 1, 2)), (8, (0, 0, 0, 0, 1, 1, 2, 3))]:
        count = brute_force_class_count(nm, key, u, eps)
        assert count >= 1
        dev = abs(math.log2(count) / k - predicted)
        assert dev <= finite_k_band(nm, k, eps)
        deviations.append(dev)
    assert deviations[1] < deviations[0]


def test_is_strongly_typical_cases():
    nm = NoiseModel(2, [0.97, 0.01, 0.01, 0.01])
    assert is_strongly_typical([0] * 20, nm, eps=0.05)

    exact = NoiseModel(2, [0.5, 0.25, 0.125, 0.125])
    seq = [0] * 4 + [1] * 2 + [2] + [3]
    assert is_strongly_typical(seq, exact, eps=1e-9)


def test_is_strongly_typical_rejects_shifted_frequency():
    nm = NoiseModel(1, [0.5, 0.5])
    eps = 0.1
    seq = [0] * 7 + [1] * 3  # f_0 = 0.7 = p + 2 eps
    assert not is_strongly_typical(seq, nm, eps)
    with pytest.raises(ValueError):
        is_strongly_typical(seq, nm, 0.0)


def test_sampled_sequences_enter_typical_set():
    rng = random.Random(53)
    nm = NoiseModel(2, [0.5, 0.25, 0.125, 0.125])
    eps = 0.1
    pop = list(range(4))
    weights = list(nm.p)

    def in_set_fraction(k, samples=400):
        hits = 0
        for _ in range(samples):
            seq = rng.choices(pop, weights=weights, k=k)
            hits += is_strongly_typical(seq, nm, eps)
        return hits / samples

    low, high = in_set_fraction(25), in_set_fraction(400)
    assert high > low + 0.3
    assert high > 0.95
