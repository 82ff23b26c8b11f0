"""Stabilizer-state breeding in the binary (GF(2)) picture.

Computes asymptotic distillation yields by solving a linear program over
measurement-partition fractions, constructs the binary orthogonal matrices
realizing the protocol's collective CNOT Cliffords, and validates the
survival-probability analysis by Monte-Carlo simulation.
"""

from .entropy import (
    NoiseModel,
    SubspaceKey,
    coset_entropy,
    entropy_H,
    enumerate_subspaces,
    h_f,
    is_strongly_typical,
    typical_count_exponent,
)
from .errors import VerificationError
from .gf2 import (
    BitMatrix,
    BitVector,
    inverse,
    is_orthogonal,
    is_symplectic,
    matmul,
    nullspace_basis,
    rank,
    solve,
)
from .measurements import (
    MeasurableSubspace,
    MeasurementPartition,
    best_partitions,
    enumerate_partitions,
    measurable_subspace,
    support,
)
from .orthogonal import (
    BreedingMatrix,
    SymmetricFactorization,
    build_breeding_matrix,
    extend_to_orthogonal,
    gram_root,
    random_full_rank,
    symmetric_factor,
)
from .simulate import (
    ProtocolConfig,
    RunResult,
    measurement_outcome,
    run_protocol,
    sample_ensemble,
    survival_exponent,
    survival_probability_mc,
)
from .stabilizer import (
    CliffordRep,
    PauliRep,
    StabilizerRep,
    apply_clifford,
    breeding_transform,
    change_generators,
    cnot_clifford,
    commutes,
    copies_rep,
    graph_state_rep,
    phase_correction_pauli,
    tensor_clifford,
    tensor_stab,
)
from .yieldlp import (
    YieldProblem,
    YieldSolution,
    build_problem,
    enumerate_f,
    solve_lp,
    yield_curve,
)

__version__ = "0.1.0"
