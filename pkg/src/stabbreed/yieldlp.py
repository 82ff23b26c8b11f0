"""The linear program whose optimum is the breeding yield.

For a noise model with entropy H and a list of measurement partitions, the
total measurement fraction is minimized subject to

    sum_M m(M) f(M) >= H - H_f   for every admissible f not identically 0,
    m(M) >= 0,

and the yield is gamma = 1 - sum_M m(M).  The strict inequalities of the
asymptotic argument are solved as closed ones: the open region's infimum
sits on its boundary and is the asymptotic yield.

Two exact solvers are provided: vertex enumeration for small instances and
a dense simplex on the packing dual (feasible at y = 0, so no phase 1)
with Bland's rule for everything else.  Both are deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from math import comb
from typing import Callable, Optional, Sequence

import numpy as np

from .entropy import NoiseModel, entropy_H, h_f
from .errors import VerificationError
from .measurements import MeasurableSubspace, best_partitions, measurable_subspace
from .stabilizer import StabilizerRep

FVector = tuple[int, ...]

_RHS_TOL = 1e-12
_FEAS_TOL = 1e-9
_PIVOT_TOL = 1e-9
_BINDING_TOL = 1e-9
_VERTEX_BUDGET = 20_000
_F_ENUMERATION_CAP = 200_000


@dataclass(frozen=True)
class YieldProblem:
    """Constraint set over the per-partition measurement fractions."""

    subspaces: tuple[MeasurableSubspace, ...]
    constraints: tuple[tuple[FVector, float], ...]
    entropy_bits: float

    def __post_init__(self) -> None:
        dims = [v.dim for v in self.subspaces]
        for f, rhs in self.constraints:
            if len(f) != len(dims):
                raise ValueError("constraint arity mismatch")
            if all(x == 0 for x in f):
                raise ValueError("the zero f vector is not a constraint")
            if any(not 0 <= x <= d for x, d in zip(f, dims)):
                raise ValueError(f"f vector {f} outside its admissible box")
            if rhs < 0:
                raise ValueError("negative right-hand side")

    @property
    def num_partitions(self) -> int:
        return len(self.subspaces)


@dataclass(frozen=True)
class YieldSolution:
    """Optimal measurement fractions and the resulting yield.

    ``gamma`` is clamped at zero; ``clamped`` flags noise levels where
    1 - sum_m would be negative and breeding is infeasible.
    """

    m: tuple[float, ...]
    gamma: float
    sum_m: float
    binding: tuple[FVector, ...]
    clamped: bool


def enumerate_f(subspaces: Sequence[MeasurableSubspace]) -> list[FVector]:
    """All nonzero f with 0 <= f(M) <= n(M), in product-counter order."""
    if not subspaces:
        raise ValueError("empty partition list")
    ranges = [range(v.dim + 1) for v in subspaces]
    return [f for f in product(*ranges) if any(f)]


def build_problem(nm: NoiseModel, subspaces: Sequence[MeasurableSubspace]
                  ) -> YieldProblem:
    """One constraint per nonzero f, with right-hand side max(0, H - H_f)."""
    subspaces = tuple(subspaces)
    total = 1
    for v in subspaces:
        total *= v.dim + 1
    if total - 1 > _F_ENUMERATION_CAP:
        raise ValueError(f"{total - 1} f vectors exceed the enumeration cap;"
                         " restrict the partition list")
    h = entropy_H(nm)
    constraints = tuple((f, max(0.0, h - h_f(nm, subspaces, f)))
                        for f in enumerate_f(subspaces))
    return YieldProblem(subspaces, constraints, h)


# ----- solvers ------------------------------------------------------------


def _simplex_dual(fmat: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Covering LP min 1.m, F m >= r, m >= 0 via its packing dual.

    The dual max r.y, F^T y <= 1, y >= 0 starts feasible at y = 0; the
    optimal primal fractions are the reduced costs of the slack columns.
    Bland's rule (smallest entering index, smallest-index leaving basic
    variable) rules out cycling.
    """
    j, d = fmat.shape
    tableau = np.zeros((d + 1, j + d + 1))
    tableau[:d, :j] = fmat.T
    tableau[:d, j:j + d] = np.eye(d)
    tableau[:d, -1] = 1.0
    tableau[d, :j] = -rhs
    basis = list(range(j, j + d))
    max_iters = 200 * (j + d + 1)
    for _ in range(max_iters):
        objrow = tableau[d, :j + d]
        entering = -1
        for col in range(j + d):
            if objrow[col] < -_PIVOT_TOL:
                entering = col
                break
        if entering < 0:
            break
        ratios = []
        for row in range(d):
            coeff = tableau[row, entering]
            if coeff > _PIVOT_TOL:
                ratios.append((tableau[row, -1] / coeff, basis[row], row))
        if not ratios:
            raise VerificationError("dual LP unbounded; the primal should always"
                                    " be feasible")
        ratios.sort(key=lambda t: (t[0], t[1]))
        leave = ratios[0][2]
        pivot = tableau[leave, entering]
        tableau[leave] /= pivot
        for row in range(d + 1):
            if row != leave and tableau[row, entering] != 0.0:
                tableau[row] -= tableau[row, entering] * tableau[leave]
        basis[leave] = entering
    else:
        raise VerificationError("simplex failed to terminate")
    m = tableau[d, j:j + d].copy()
    m[np.abs(m) < _PIVOT_TOL] = 0.0
    if m.min(initial=0.0) < -_FEAS_TOL:
        raise VerificationError("negative measurement fraction from the solver")
    return np.maximum(m, 0.0)


def _solve_vertex(fmat: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Exact vertex enumeration over {F m >= r, m >= 0}; small instances only."""
    from itertools import combinations

    j, d = fmat.shape
    rows = np.vstack([fmat, np.eye(d)])
    b = np.concatenate([rhs, np.zeros(d)])
    best_obj = None
    best_m: Optional[np.ndarray] = None
    for combo in combinations(range(j + d), d):
        square = rows[list(combo)]
        if abs(np.linalg.det(square)) < 1e-9:
            continue
        m = np.linalg.solve(square, b[list(combo)])
        if (rows @ m - b).min() < -_FEAS_TOL:
            continue
        obj = float(m.sum())
        if (best_obj is None or obj < best_obj - 1e-12
                or (abs(obj - best_obj) <= 1e-12 and tuple(m) < tuple(best_m))):
            best_obj, best_m = obj, m
    if best_m is None:
        raise VerificationError("vertex enumeration found no feasible vertex")
    return np.where(np.abs(best_m) < 1e-12, 0.0, best_m)


def solve_lp(prob: YieldProblem, solver: Optional[str] = None) -> YieldSolution:
    """Minimize the total measurement fraction; report yield and binding f.

    ``solver`` forces "vertex" or "simplex"; by default vertex enumeration
    handles small instances and the simplex everything else.
    """
    d = prob.num_partitions
    active = [(f, r) for f, r in prob.constraints if r > _RHS_TOL]
    if not active:
        m = np.zeros(d)
    else:
        fmat = np.array([f for f, _ in active], dtype=float)
        rhs = np.array([r for _, r in active])
        if solver is None:
            solver = ("vertex" if d <= 8 and comb(len(active) + d, d) <= _VERTEX_BUDGET
                      else "simplex")
        if solver == "vertex":
            m = _solve_vertex(fmat, rhs)
        elif solver == "simplex":
            m = _simplex_dual(fmat, rhs)
        else:
            raise ValueError(f"unknown solver {solver!r}")
    binding = []
    for f, r in prob.constraints:
        value = float(np.dot(f, m))
        if value - r < -_FEAS_TOL:
            raise VerificationError(f"constraint {f} violated by {r - value:.3g}")
        if abs(value - r) <= _BINDING_TOL:
            binding.append(f)
    sum_m = float(m.sum())
    gamma = 1.0 - sum_m
    return YieldSolution(m=tuple(float(x) for x in m),
                         gamma=max(0.0, gamma),
                         sum_m=sum_m,
                         binding=tuple(binding),
                         clamped=gamma < 0.0)


# ----- parameter sweeps ------------------------------------------------------


@dataclass(frozen=True)
class YieldPoint:
    parameter: float
    gamma: float
    sum_m: float
    binding: tuple[FVector, ...]
    clamped: bool


def yield_curve(state: StabilizerRep, parameters: Sequence[float],
                partitions=None,
                family: Optional[Callable[[float], NoiseModel]] = None,
                limit: int = 10) -> list[YieldPoint]:
    """Solve the LP on a grid of noise parameters (default: the uniform-error
    mixture with fidelity F)."""
    if len(parameters) == 0:
        raise ValueError("empty parameter grid")
    if partitions is None:
        subspaces = tuple(best_partitions(state, limit))
    else:
        subspaces = tuple(measurable_subspace(state, m) for m in partitions)
    if family is None:
        family = lambda fid: NoiseModel.werner(state.n, fid)  # noqa: E731
    points = []
    for value in parameters:
        sol = solve_lp(build_problem(family(value), subspaces))
        points.append(YieldPoint(parameter=float(value), gamma=sol.gamma,
                                 sum_m=sol.sum_m, binding=sol.binding,
                                 clamped=sol.clamped))
    return points


def _format_float(x: float) -> str:
    return format(x, ".12g")


def _format_binding(binding: Sequence[FVector]) -> str:
    return ";".join("-".join(str(x) for x in f) for f in binding)


def curve_to_csv(points: Sequence[YieldPoint],
                 closed_form: Optional[Sequence[float]] = None) -> str:
    """CSV rows "F,gamma,sum_m,binding_f"; binding f vectors are
    semicolon-separated, entries dash-joined."""
    header = "F,gamma,sum_m,binding_f"
    if closed_form is not None:
        header += ",closed_form"
    lines = [header]
    for i, pt in enumerate(points):
        row = ",".join([_format_float(pt.parameter), _format_float(pt.gamma),
                        _format_float(pt.sum_m), _format_binding(pt.binding)])
        if closed_form is not None:
            row += "," + _format_float(closed_form[i])
        lines.append(row)
    return "\n".join(lines) + "\n"
