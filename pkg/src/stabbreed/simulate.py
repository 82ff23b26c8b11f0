"""Monte-Carlo simulation of the breeding protocol at small sizes.

One run: sample the hidden phase assignment for k noisy copies, build the
collective CNOT Clifford from a fresh random full-rank measurement matrix
Q, measure the (1-gamma)k ancilla copies under the configured partition
allocation, and eliminate candidate assignments inconsistent with the
outcomes.  In the binary picture measurement i under partition M reveals
V(M)^T U q_i, with q_i the i-th column of the Q actually embedded in the
Clifford; a candidate differing by a nonzero Delta survives measurement i
with probability 2^-rank(V^T Delta B), which is what the Monte-Carlo
estimator checks.

Candidate tracking is sampled, not exhaustive: the full typical set is
exponential, and the survival statement is per-candidate anyway.  The
protocol gives no finite-k success certificate, so results report
surviving-candidate counts rather than declaring success.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional, Sequence, Union

from .entropy import NoiseModel, SubspaceKey, is_strongly_typical
from .errors import VerificationError
from .gf2 import BitMatrix, BitVector, matmul, rank
from .measurements import MeasurableSubspace, MeasurementPartition, measurable_subspace
from .orthogonal import BreedingMatrix, build_breeding_matrix, random_full_rank
from .stabilizer import StabilizerRep, breeding_transform, copies_rep

Allocation = Sequence[tuple[MeasurementPartition, int]]
_MIX64 = 0x9E3779B97F4A7C15
_MASK64 = (1 << 64) - 1


def _spawn_seed(seed: int, index: int) -> int:
    return (seed * _MIX64 + index * 0xD1B54A32D192ED03 + 1) & _MASK64


def _as_rng(seed: Union[int, random.Random]) -> random.Random:
    return seed if isinstance(seed, random.Random) else random.Random(seed)


@dataclass(frozen=True)
class ProtocolConfig:
    """One simulated breeding run.

    ``allocation`` assigns ancilla measurements to partitions; the counts
    must sum to round((1 - gamma) k).  ``tracked_deltas`` are explicit
    nonzero n x k difference matrices whose survival is reported
    individually, on top of ``sample_candidates`` candidates drawn from
    the noise ensemble.
    """

    state: StabilizerRep
    noise: NoiseModel
    k: int
    gamma: float
    allocation: tuple[tuple[MeasurementPartition, int], ...]
    eps: float = 0.1
    seed: int = 0
    sample_candidates: int = 32
    tracked_deltas: tuple[BitMatrix, ...] = ()
    check_structure: bool = True

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError("need at least one noisy copy")
        if not 0.0 <= self.gamma <= 1.0:
            raise ValueError("gamma must lie in [0, 1]")
        if self.noise.n != self.state.n:
            raise ValueError("noise model and state disagree on the qubit count")
        total = sum(cnt for _, cnt in self.allocation)
        if total != self.num_measurements:
            raise ValueError(f"allocation sums to {total}, expected"
                             f" (1 - gamma) k = {self.num_measurements}")
        for m, cnt in self.allocation:
            if cnt < 0:
                raise ValueError("negative measurement count")
            if m.n != self.state.n:
                raise ValueError("partition qubit count mismatch")
        for delta in self.tracked_deltas:
            if delta.shape != (self.state.n, self.k):
                raise ValueError("tracked delta must be an n x k matrix")
            if delta.is_zero():
                raise ValueError("tracked delta must be nonzero")

    @property
    def num_measurements(self) -> int:
        return round((1.0 - self.gamma) * self.k)


@dataclass(frozen=True)
class RunResult:
    """Outcome of one protocol run.

    ``true_u`` holds the sampled hidden phase vectors as matrix columns;
    it survives every measurement by construction.  ``eliminated_history``
    records the candidate count after each measurement; the tallies
    include the true assignment, so they never drop below one.
    """

    true_u: BitMatrix
    candidates_remaining: int
    outcomes: tuple[BitVector, ...]
    eliminated_history: tuple[int, ...]
    measurement_partitions: tuple[MeasurementPartition, ...]
    breeding: BreedingMatrix
    initial_candidates: int
    tracked_survived: tuple[bool, ...]
    true_u_typical: bool


def round_allocation(fractions: Sequence[float], total: int) -> list[int]:
    """Largest-remainder rounding of total * fractions to integers summing
    to ``total`` (fractions are normalized first)."""
    if total < 0:
        raise ValueError("negative total")
    weight = sum(fractions)
    if weight <= 0:
        raise ValueError("fractions must have positive sum")
    shares = [total * f / weight for f in fractions]
    counts = [int(s) for s in shares]
    remainders = sorted(range(len(shares)),
                        key=lambda i: (-(shares[i] - counts[i]), i))
    for i in remainders[: total - sum(counts)]:
        counts[i] += 1
    return counts


def sample_ensemble(nm: NoiseModel, k: int,
                    seed: Union[int, random.Random]) -> list[BitVector]:
    """k independent phase vectors drawn from the noise distribution."""
    if k < 1:
        raise ValueError("need at least one draw")
    rng = _as_rng(seed)
    population = range(2 ** nm.n)
    draws = rng.choices(population, weights=nm.p, k=k)
    return [BitVector(nm.n, b) for b in draws]


def measurement_outcome(v: BitVector, ub_column: BitVector,
                        subspace: Optional[MeasurableSubspace] = None) -> int:
    """The revealed parity v^T u for one measured copy.

    When ``subspace`` is supplied, v is checked to lie in V(M); a miss is
    a protocol-logic bug, not a legal outcome.
    """
    if subspace is not None:
        if not SubspaceKey.from_subspace(subspace).contains(v.bits):
            raise ValueError("exponent outside the measurable subspace V(M)")
    return v.dot(ub_column)


def _partition_matrices(state: StabilizerRep, allocation: Allocation,
                        delta: BitMatrix) -> list[tuple[BitMatrix, int]]:
    out = []
    for m, cnt in allocation:
        sub = measurable_subspace(state, m)
        out.append((matmul(sub.v_basis.T, delta), cnt))
    return out


def survival_exponent(state: StabilizerRep, delta_b_tilde: BitMatrix,
                      allocation: Allocation) -> int:
    """Sum over measurements of d(M, Delta) = rank(V(M)^T Delta B)."""
    return sum(cnt * rank(mat)
               for mat, cnt in _partition_matrices(state, allocation, delta_b_tilde))


def survival_probability_mc(state: StabilizerRep, delta_b_tilde: BitMatrix,
                            allocation: Allocation, trials: int,
                            seed: Union[int, random.Random]) -> float:
    """Monte-Carlo estimate of the probability that a candidate differing
    by Delta survives every measurement, over uniform measurement columns.

    Converges to 2^-(sum of d(M, Delta) over measurements).
    """
    if delta_b_tilde.is_zero():
        raise ValueError("survival of a zero difference is trivially 1;"
                         " pass a nonzero delta")
    if trials < 1:
        raise ValueError("need at least one trial")
    base = _as_rng(seed).getrandbits(64)
    k = delta_b_tilde.cols
    mats = [(mat.data, cnt)
            for mat, cnt in _partition_matrices(state, allocation, delta_b_tilde)]
    survived = 0
    for trial in range(trials):
        # independent per-trial stream, so trials can run in any order
        trial_rng = random.Random(_spawn_seed(base, trial))
        ok = True
        for rows, cnt in mats:
            for _ in range(cnt):
                q = trial_rng.getrandbits(k)
                if any((row & q).bit_count() & 1 for row in rows):
                    ok = False
                    break
            if not ok:
                break
        survived += ok
    return survived / trials


def run_protocol(cfg: ProtocolConfig) -> RunResult:
    """Simulate one breeding run and eliminate inconsistent candidates."""
    k = cfg.k
    c = cfg.num_measurements

    sample_rng = random.Random(_spawn_seed(cfg.seed, 1))
    true_cols = sample_ensemble(cfg.noise, k, sample_rng)
    utilde = BitMatrix.from_columns(true_cols)

    q = random_full_rank(k, c, random.Random(_spawn_seed(cfg.seed, 2)))
    bm = build_breeding_matrix(q)
    partitions = [m for m, cnt in cfg.allocation for _ in range(cnt)]
    while len(partitions) < bm.num_measurements:
        # a column-append repair adds one measurement; reuse the first partition
        partitions.append(partitions[0] if partitions else cfg.allocation[0][0])

    if cfg.check_structure:
        _check_transform_structure(cfg.state, bm, utilde)

    subspaces = [measurable_subspace(cfg.state, m) for m in partitions]
    outcome_vectors = []
    for i, sub in enumerate(subspaces):
        ancilla = matmul(utilde, BitMatrix.from_columns([bm.q_used.column(i)]))
        outcome_vectors.append(matmul(sub.v_basis.T, ancilla).column(0))

    candidate_rng = random.Random(_spawn_seed(cfg.seed, 3))
    sampled: dict[tuple[int, ...], BitMatrix] = {}
    for _ in range(cfg.sample_candidates):
        cols = sample_ensemble(cfg.noise, k, candidate_rng)
        cand = BitMatrix.from_columns(cols)
        if cand != utilde:
            sampled.setdefault(cand.data, cand)
    tracked = [utilde ^ delta for delta in cfg.tracked_deltas]
    for t in tracked:
        sampled.pop(t.data, None)
    candidates = list(sampled.values()) + tracked

    alive = [True] * len(candidates)
    history = []
    for i, sub in enumerate(subspaces):
        qcol = BitMatrix.from_columns([bm.q_used.column(i)])
        expected = outcome_vectors[i]
        for j, cand in enumerate(candidates):
            if not alive[j]:
                continue
            got = matmul(sub.v_basis.T, matmul(cand, qcol)).column(0)
            if got != expected:
                alive[j] = False
        history.append(1 + sum(alive))

    tracked_survived = tuple(alive[len(sampled):])
    remaining = 1 + sum(alive)
    if remaining < 1:
        raise VerificationError("true assignment was eliminated")
    return RunResult(
        true_u=utilde,
        candidates_remaining=remaining,
        outcomes=tuple(outcome_vectors),
        eliminated_history=tuple(history),
        measurement_partitions=tuple(partitions),
        breeding=bm,
        initial_candidates=len(candidates),
        tracked_survived=tracked_survived,
        true_u_typical=is_strongly_typical([col.bits for col in true_cols],
                                           cfg.noise, cfg.eps),
    )


def _check_transform_structure(state: StabilizerRep, bm: BreedingMatrix,
                               utilde: BitMatrix) -> None:
    """Once per run: the collective Clifford leaves S (x) I invariant, and
    the transformed ancilla phase bits match Q^T applied per party."""
    n = state.n
    kbar = bm.a.rows
    k = bm.k
    stacked = copies_rep(state.s, kbar)
    lhs = matmul(matmul(BitMatrix.identity(2 * n).kron(bm.a), stacked),
                 BitMatrix.identity(n).kron(bm.a.T))
    if lhs != stacked:
        raise VerificationError("collective Clifford does not preserve the"
                                " copies layout")
    bbar_bits = 0
    for party in range(n):
        seg = 0
        for copy in range(k):
            seg |= utilde.get(party, copy) << copy
        bbar_bits |= seg << (party * kbar)
    transformed = breeding_transform(BitVector(n * kbar, bbar_bits), bm.a, n)
    expected = matmul(bm.q_used.T, utilde.T)  # c x n: ancilla bits per party
    for party in range(n):
        for j in range(bm.num_measurements):
            got = (transformed.bits >> (party * kbar + k + j)) & 1
            if got != expected.get(j, party):
                raise VerificationError("ancilla phase bits disagree with Q^T U")
