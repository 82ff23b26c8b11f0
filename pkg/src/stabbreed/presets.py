"""Built-in worked example: the 5-qubit ring graph state.

Bundles the ring adjacency, the five measurement partitions that attain
n(M) = 2, and the uniform-error mixture, so the pipeline runs end to end
without any input files.  For this mixture every measurement extracts the
full two bits and the yield has the closed form 1 - H/2.
"""

from __future__ import annotations

import math

from .entropy import NoiseModel
from .gf2 import BitMatrix
from .measurements import MeasurableSubspace, MeasurementPartition, measurable_subspace
from .stabilizer import StabilizerRep, graph_state_rep

RING5_THETA = BitMatrix.from_rows([
    [0, 0, 1, 1, 0],
    [0, 0, 0, 1, 1],
    [1, 0, 0, 0, 1],
    [1, 1, 0, 0, 0],
    [0, 1, 1, 0, 0],
])

RING5_PARTITION_STRINGS = ("xxzzz", "zxxzz", "zzxxz", "zzzxx", "xzzzx")


def ring5_state() -> StabilizerRep:
    return graph_state_rep(RING5_THETA)


def ring5_partitions() -> list[MeasurementPartition]:
    return [MeasurementPartition.from_string(s) for s in RING5_PARTITION_STRINGS]


def ring5_subspaces() -> list[MeasurableSubspace]:
    state = ring5_state()
    return [measurable_subspace(state, m) for m in ring5_partitions()]


def ring5_noise(fidelity: float) -> NoiseModel:
    return NoiseModel.werner(5, fidelity)


def ring5_entropy(fidelity: float) -> float:
    """-F log2 F - (1-F) log2((1-F)/31), the mixture entropy in bits."""
    h = 0.0
    if fidelity > 0:
        h -= fidelity * math.log2(fidelity)
    if fidelity < 1:
        h -= (1 - fidelity) * math.log2((1 - fidelity) / 31)
    return h


def ring5_closed_form_gamma(fidelity: float) -> float:
    """The ring yield 1 - H/2, clamped at zero."""
    return max(0.0, 1.0 - ring5_entropy(fidelity) / 2)
