"""Command-line front end.

Subcommands: ``yield`` sweeps the noise parameter and prints the yield
curve as CSV, ``partitions`` reports the partitions with maximal n(M),
``orthogonal`` builds a breeding matrix from a measurement matrix, and
``simulate`` Monte-Carlos the elimination protocol.

Exit codes: 0 success, 1 usage error, 2 input validation error, 3 internal
verification failure.
"""

from __future__ import annotations

import argparse
import os
import random
import sys
from typing import Optional, Sequence

from . import presets
from .entropy import NoiseModel, parse_noise_spec
from .errors import VerificationError
from .gf2 import BitMatrix, BitVector, from_text, to_text
from .measurements import (
    MeasurementPartition,
    best_partitions,
    enumerate_partitions,
    measurable_subspace,
    parse_partitions,
)
from .orthogonal import build_breeding_matrix, random_full_rank
from .simulate import (
    ProtocolConfig,
    round_allocation,
    run_protocol,
    sample_ensemble,
    survival_exponent,
)
from .stabilizer import StabilizerRep, graph_state_rep
from .yieldlp import build_problem, curve_to_csv, solve_lp, yield_curve


class _Parser(argparse.ArgumentParser):
    """argparse, but usage errors exit with code 1 instead of 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _load_state(spec: str) -> StabilizerRep:
    if spec == "ring5":
        return presets.ring5_state()
    with open(spec) as fh:
        lines = [ln.strip() for ln in fh.read().splitlines() if ln.strip()]
    if not lines:
        raise ValueError(f"{spec}: empty state file")
    rows, cols = (int(x) for x in lines[0].split())
    matrix = from_text("\n".join(lines[: rows + 1]))
    if rows == cols:
        return graph_state_rep(matrix)
    if rows == 2 * cols:
        b = BitVector.zeros(cols)
        if len(lines) > rows + 1:
            b = BitVector.from_string(lines[rows + 1])
        return StabilizerRep(matrix, b)
    raise ValueError(f"{spec}: expected an n x n adjacency or 2n x n generator"
                     f" matrix, got {rows} x {cols}")


def _load_partitions(spec: str, state: StabilizerRep,
                     limit: int) -> list[MeasurementPartition]:
    if spec == "auto":
        return [s.partition for s in best_partitions(state, limit)]
    if spec == "ring5":
        return presets.ring5_partitions()
    with open(spec) as fh:
        return parse_partitions(fh.read(), state.n)


def _load_noise(spec: str, n: int) -> NoiseModel:
    if os.path.exists(spec):
        with open(spec) as fh:
            return parse_noise_spec(fh.read(), n)
    return parse_noise_spec(spec, n)


def _write_output(text: str, path: Optional[str]) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


# ----- yield ---------------------------------------------------------------


def _cmd_yield(args) -> int:
    state = _load_state(args.state)
    partitions = _load_partitions(args.partitions, state, args.limit)
    if args.fidelity:
        grid = [float(x) for x in args.fidelity.split(",")]
    else:
        if args.points < 1:
            raise ValueError("need at least one grid point")
        if args.points == 1:
            grid = [args.f_max]
        else:
            step = (args.f_max - args.f_min) / (args.points - 1)
            grid = [args.f_min + i * step for i in range(args.points)]
    if any(not 0 < f <= 1 for f in grid):
        raise ValueError("fidelities must lie in (0, 1]")
    closed = None
    if args.closed_form_check:
        if args.state != "ring5":
            raise ValueError("--closed-form-check is only defined for the"
                             " ring5 preset")
        closed = [presets.ring5_closed_form_gamma(f) for f in grid]
    points = yield_curve(state, grid, partitions=partitions)
    for pt in points:
        if pt.clamped:
            print(f"warning: F={pt.parameter:g}: breeding infeasible at this"
                  f" noise level (measurement fraction {pt.sum_m:.6g} > 1);"
                  " yield clamped to 0", file=sys.stderr)
    _write_output(curve_to_csv(points, closed_form=closed), args.output)
    return 0


# ----- partitions ------------------------------------------------------------


def _cmd_partitions(args) -> int:
    state = _load_state(args.state)
    limit = state.n if args.force else args.limit
    best = best_partitions(state, limit)
    total = len(enumerate_partitions(state.n, limit))
    out = [f"# {total} partitions enumerated; maximum n(M) = {best[0].dim};"
           f" {len(best)} attain it",
           "# restricting to these is not guaranteed optimal in general"]
    for sub in best:
        basis = ",".join(sub.v_basis.column(j).to_string()
                         for j in range(sub.dim))
        out.append(f"{sub.partition.to_string()} dim={sub.dim} V=[{basis}]")
    _write_output("\n".join(out) + "\n", args.output)
    return 0


# ----- orthogonal -------------------------------------------------------------


def _cmd_orthogonal(args) -> int:
    if args.q is not None:
        with open(args.q) as fh:
            q = from_text(fh.read())
    else:
        if args.k is None or args.c is None:
            raise ValueError("either --q FILE or both --k and --c are required")
        if not 0 <= args.c <= args.k:
            raise ValueError("need 0 <= c <= k")
        q = random_full_rank(args.k, args.c, random.Random(args.seed))
    bm = build_breeding_matrix(q)
    parts = ["A", to_text(bm.a).rstrip("\n"), "Q_used",
             to_text(bm.q_used).rstrip("\n"), f"repairs {len(bm.column_repairs)}"]
    parts.extend(" ".join(str(x) for x in rep) for rep in bm.column_repairs)
    _write_output("\n".join(parts) + "\n", args.output)
    return 0


# ----- simulate ----------------------------------------------------------------


def _random_delta(state, noise, k, rng) -> BitMatrix:
    for _ in range(1000):
        a = BitMatrix.from_columns(sample_ensemble(noise, k, rng))
        b = BitMatrix.from_columns(sample_ensemble(noise, k, rng))
        delta = a ^ b
        if not delta.is_zero():
            return delta
    raise ValueError("noise model too concentrated to sample a nonzero"
                     " difference")


def _cmd_simulate(args) -> int:
    state = _load_state(args.state)
    noise = _load_noise(args.noise, state.n)
    partitions = _load_partitions(args.partitions, state, args.limit)
    subspaces = [measurable_subspace(state, m) for m in partitions]

    if args.allocation == "auto":
        sol = solve_lp(build_problem(noise, subspaces))
        gamma = args.gamma if args.gamma is not None else sol.gamma
        total = round((1 - gamma) * args.k)
        if sol.sum_m <= 0:
            counts = [0] * len(partitions)
            counts[:1] = [total]
        else:
            counts = round_allocation(sol.m, total)
        allocation = tuple(zip(partitions, counts))
    else:
        if args.gamma is None:
            raise ValueError("--gamma is required with an explicit allocation"
                             " file")
        gamma = args.gamma
        with open(args.allocation) as fh:
            allocation = _parse_allocation(fh.read(), state.n)

    rng = random.Random(args.seed)
    deltas = tuple(_random_delta(state, noise, args.k, rng)
                   for _ in range(args.num_deltas))

    survived = [0] * len(deltas)
    remaining = []
    for trial in range(args.trials):
        cfg = ProtocolConfig(
            state=state, noise=noise, k=args.k, gamma=gamma,
            allocation=allocation, seed=rng.getrandbits(48),
            sample_candidates=args.candidates, tracked_deltas=deltas,
            check_structure=(trial == 0))
        result = run_protocol(cfg)
        remaining.append(result.candidates_remaining)
        for i, ok in enumerate(result.tracked_survived):
            survived[i] += ok

    lines = ["delta,sigma_d,predicted,empirical,trials"]
    for i, delta in enumerate(deltas):
        sigma = survival_exponent(state, delta, allocation)
        rows = "|".join(delta.row(r).to_string() for r in range(delta.rows))
        lines.append(f"{rows},{sigma},{2.0 ** -sigma:.6g},"
                     f"{survived[i] / args.trials:.6g},{args.trials}")
    _write_output("\n".join(lines) + "\n", args.output)
    unique = sum(1 for r in remaining if r == 1)
    print(f"runs: {args.trials}; unique-candidate runs: {unique};"
          f" mean candidates remaining: {sum(remaining) / len(remaining):.2f}",
          file=sys.stderr)
    return 0


def _parse_allocation(text: str, n: int) -> tuple:
    out = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected '<zxy-string> <count>'")
        m = MeasurementPartition.from_string(parts[0])
        if m.n != n:
            raise ValueError(f"line {lineno}: partition on {m.n} qubits,"
                             f" expected {n}")
        out.append((m, int(parts[1])))
    if not out:
        raise ValueError("empty allocation file")
    return tuple(out)


# ----- entry point ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="stabbreed",
                     description="breeding-protocol yield analysis for"
                                 " stabilizer states in the binary picture")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("yield", help="solve the yield LP over a fidelity grid")
    p.add_argument("--state", default="ring5",
                   help="'ring5' or a matrix file (adjacency or generators)")
    p.add_argument("--partitions", default="auto",
                   help="'auto', 'ring5', or a partition file")
    p.add_argument("--f-min", type=float, default=0.01)
    p.add_argument("--f-max", type=float, default=1.0)
    p.add_argument("--points", type=int, default=99)
    p.add_argument("--fidelity", help="comma-separated explicit grid")
    p.add_argument("--closed-form-check", action="store_true",
                   help="append the 1 - H/2 column (ring5 preset only)")
    p.add_argument("--limit", type=int, default=10)
    p.add_argument("--output")
    p.set_defaults(func=_cmd_yield)

    p = sub.add_parser("partitions", help="list partitions with maximal n(M)")
    p.add_argument("--state", default="ring5")
    p.add_argument("--limit", type=int, default=10)
    p.add_argument("--force", action="store_true",
                   help="enumerate past the qubit limit")
    p.add_argument("--output")
    p.set_defaults(func=_cmd_partitions)

    p = sub.add_parser("orthogonal",
                       help="build an orthogonal breeding matrix from Q")
    p.add_argument("--q", help="measurement matrix file")
    p.add_argument("--k", type=int, help="rows of a random Q")
    p.add_argument("--c", type=int, help="columns of a random Q")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output")
    p.set_defaults(func=_cmd_orthogonal)

    p = sub.add_parser("simulate", help="Monte-Carlo the elimination protocol")
    p.add_argument("--state", default="ring5")
    p.add_argument("--noise", default="werner 0.9",
                   help="inline spec like 'werner 0.9' or a table file")
    p.add_argument("--partitions", default="auto")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--gamma", type=float)
    p.add_argument("--allocation", default="auto",
                   help="'auto' (from the LP) or a '<zxy> <count>' file")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--candidates", type=int, default=16)
    p.add_argument("--num-deltas", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--limit", type=int, default=10)
    p.add_argument("--output")
    p.set_defaults(func=_cmd_simulate)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except VerificationError as exc:
        print(f"stabbreed: verification failure: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError) as exc:
        print(f"stabbreed: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
