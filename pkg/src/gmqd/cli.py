"""Command-line front end.

Subcommands:

* ``gmqd``   -- evaluate the discord of one state with all routes.
* ``evolve`` -- sweep a dephasing channel and emit the trajectory.
* ``freeze`` -- freezing verdict, plateau endpoint, interval detection.
* ``scan``   -- classify a Bell-diagonal parameter grid.

Exit codes: 0 success, 2 input validation failure, 3 unphysical state,
4 unsupported subclass, 1 internal numerical disagreement (``--check``).

Trajectory and scan grids can be evaluated by a process pool
(``--workers``); chunks are concatenated in index order, so output bytes
do not depend on the worker count.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from functools import partial

import numpy as np

from .channels import (
    ColoredNoiseParams,
    Trajectory,
    colored_records,
    colored_trajectory,
    markov_records,
    markov_trajectory,
)
from .constants import FROZEN_ATOL
from .errors import (
    GmqdError,
    InputFormatError,
    StateValidationError,
    StructureError,
    UnsupportedSubclassError,
)
from .freezing import (
    check_freezing_bell,
    check_freezing_x,
    detect_frozen_intervals,
    freeze_endpoint_markov,
    region_membership,
)
from .measures import gmqd_k, gmqd_oracle, gmqd_svd, x_lambdas
from .numerics import herm_eigenvalues
from .qstate import (
    BellDiagonalParams,
    DensityMatrix,
    XState,
    bell_diagonal_dense,
    bell_diagonal_state,
    density_to_x,
    parse_state_json,
    x_state_to_json,
    x_to_density,
)

TRAJECTORY_HEADER = (
    "param,rho11,rho22,rho33,rho44,re14,im14,re23,im23,"
    "lam1sq,lam2sq,lam3sq,gmqd,frozen"
)

_CHECK_ATOL = 1e-10


def _fmt(value: float) -> str:
    """17 significant digits: decimal text that round-trips exactly."""
    return format(float(value), ".17g")


def _load_state(args) -> XState | BellDiagonalParams | DensityMatrix:
    if (args.input is None) == (args.state is None):
        raise InputFormatError("exactly one of --input or --state is required")
    if args.input is not None:
        try:
            with open(args.input, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise InputFormatError(f"cannot read {args.input}: {exc}") from exc
    else:
        text = args.state
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputFormatError(f"malformed JSON: {exc}") from exc
    return parse_state_json(obj)


def _as_x_state(state) -> XState:
    if isinstance(state, XState):
        return state
    if isinstance(state, BellDiagonalParams):
        return bell_diagonal_state(state)
    return density_to_x(state)


def _write_output(args, text: str) -> None:
    if args.output is not None:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _chunks(values: np.ndarray, workers: int) -> list[np.ndarray]:
    n = max(1, min(int(workers), len(values)))
    return [c for c in np.array_split(values, n) if len(c)]


def _pooled(fn, chunks, workers: int) -> list:
    if workers <= 1 or len(chunks) <= 1:
        results = [fn(chunk) for chunk in chunks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(fn, chunks))
    out = []
    for r in results:
        out.extend(r)
    return out


# ---------------------------------------------------------------------------
# gmqd
# ---------------------------------------------------------------------------

def cmd_gmqd(args) -> int:
    state = _load_state(args)
    if isinstance(state, DensityMatrix):
        dense = state
        try:
            xs = density_to_x(dense)
        except StructureError:
            xs = None  # generic dense state: no closed form
    else:
        xs = _as_x_state(state)
        dense = x_to_density(xs)

    k = gmqd_k(dense)
    svd = gmqd_svd(dense)
    closed = x_lambdas(xs) if xs is not None else None

    deltas = {"k_vs_svd": abs(k.value - svd.value)}
    if closed is not None:
        deltas["k_vs_closed"] = abs(k.value - closed.value)
        deltas["svd_vs_closed"] = abs(svd.value - closed.value)

    oracle = None
    if args.oracle:
        oracle = gmqd_oracle(dense, coarse_steps=args.coarse_steps)
        deltas["oracle_vs_svd"] = abs(oracle[0] - svd.value)

    if args.check:
        worst = max(v for k_, v in deltas.items() if k_ != "oracle_vs_svd")
        if worst > _CHECK_ATOL:
            print(f"check failed: evaluator disagreement {worst:.3e}", file=sys.stderr)
            return 1
        if oracle is not None and deltas["oracle_vs_svd"] > 1e-6:
            print(
                f"check failed: oracle disagreement {deltas['oracle_vs_svd']:.3e}",
                file=sys.stderr,
            )
            return 1

    shown = closed if closed is not None else svd
    if args.format == "json":
        payload = {
            "gmqd_k": k.value,
            "gmqd_svd": svd.value,
            "x_lambdas": closed.value if closed is not None else None,
            "lambda_sq": list(shown.lambda_sq),
            "deltas": deltas,
        }
        if oracle is not None:
            payload["oracle"] = {
                "value": oracle[0],
                "theta": oracle[1].theta,
                "phi": oracle[1].phi,
            }
        text = json.dumps(payload, indent=2) + "\n"
    else:
        lines = [
            f"gmqd_k    = {_fmt(k.value)}",
            f"gmqd_svd  = {_fmt(svd.value)}",
        ]
        if closed is not None:
            lines.append(f"x_lambdas = {_fmt(closed.value)}")
        lines.append(
            "lambda_sq = ("
            + ", ".join(_fmt(v) for v in shown.lambda_sq)
            + ")"
        )
        for name, v in deltas.items():
            lines.append(f"delta {name} = {v:.3e}")
        if oracle is not None:
            lines.append(
                f"oracle    = {_fmt(oracle[0])} at theta={oracle[1].theta:.9f},"
                f" phi={oracle[1].phi:.9f}"
            )
        text = "\n".join(lines) + "\n"
    _write_output(args, text)
    return 0


# ---------------------------------------------------------------------------
# evolve
# ---------------------------------------------------------------------------

def _trajectory_csv(traj: Trajectory) -> str:
    lines = [TRAJECTORY_HEADER]
    for rec in traj.records:
        s = rec.state
        lam = rec.gmqd.lambda_sq
        values = (
            rec.param,
            s.rho11, s.rho22, s.rho33, s.rho44,
            s.rho14.real, s.rho14.imag, s.rho23.real, s.rho23.imag,
            lam[0], lam[1], lam[2],
            rec.gmqd.value,
        )
        lines.append(",".join(_fmt(v) for v in values) + f",{int(rec.frozen)}")
    return "\n".join(lines) + "\n"


def _trajectory_json(traj: Trajectory) -> str:
    payload = {
        "metadata": traj.metadata,
        "records": [
            {
                "param": rec.param,
                "state": x_state_to_json(rec.state),
                "lambda_sq": list(rec.gmqd.lambda_sq),
                "gmqd": rec.gmqd.value,
                "frozen": rec.frozen,
            }
            for rec in traj.records
        ],
    }
    return json.dumps(payload, indent=2) + "\n"


def _parse_c_triple(text: str) -> tuple[float, float, float]:
    parts = text.split(",")
    if len(parts) != 3:
        raise InputFormatError("--c expects three comma-separated numbers")
    try:
        c1, c2, c3 = (float(p) for p in parts)
    except ValueError as exc:
        raise InputFormatError(f"--c expects numbers: {exc}") from exc
    return c1, c2, c3


def _bell_params_from_args(args) -> BellDiagonalParams:
    if args.c is not None:
        if args.state is not None or args.input is not None:
            raise InputFormatError("give either --c or a state source, not both")
        c1, c2, c3 = _parse_c_triple(args.c)
        return BellDiagonalParams(args.r, args.s, c1, c2, c3)
    state = _load_state(args)
    if not isinstance(state, BellDiagonalParams):
        raise UnsupportedSubclassError(
            "colored evolution needs Bell-diagonal parameters "
            "(use --c or a 'bell_diagonal' state)"
        )
    return state


def cmd_evolve(args) -> int:
    if args.channel == "markov":
        xs = _as_x_state(_load_state(args))
        traj = _markov_sweep(args, xs)
    else:
        params = _bell_params_from_args(args)
        traj = _colored_sweep(args, params)
    text = _trajectory_csv(traj) if args.format == "csv" else _trajectory_json(traj)
    _write_output(args, text)
    return 0


def _markov_sweep(args, xs: XState) -> Trajectory:
    if args.gamma is not None:
        # Time parameterization: p = 1 - exp(-gamma t), param column is t.
        times = np.linspace(0.0, args.t_max, args.steps)
        p_values = 1.0 - np.exp(-args.gamma * times)
        reference = _reference_of(xs)
        fn = partial(
            _markov_time_chunk,
            xs,
            args.gamma,
            reference,
            FROZEN_ATOL,
            args.check,
        )
        records = _pooled(fn, _chunks(times, args.workers), args.workers)
        metadata = {
            "channel": "markov",
            "parameters": {
                "gamma": args.gamma,
                "t_max": args.t_max,
                "steps": args.steps,
            },
            "seed": args.seed,
            "frozen_reference": reference,
        }
        return Trajectory(tuple(records), metadata)

    if args.workers <= 1:
        return markov_trajectory(
            xs, args.steps, args.p_max, check=args.check, seed=args.seed
        )
    reference = _reference_of(xs)
    p_values = np.linspace(0.0, args.p_max, args.steps)
    fn = partial(
        markov_records,
        xs,
        frozen_reference=reference,
        frozen_atol=FROZEN_ATOL,
        check=args.check,
    )
    records = _pooled(fn, _chunks(p_values, args.workers), args.workers)
    metadata = {
        "channel": "markov",
        "parameters": {"p_max": args.p_max, "steps": args.steps},
        "seed": args.seed,
        "frozen_reference": reference,
    }
    return Trajectory(tuple(records), metadata)


def _colored_sweep(args, params: BellDiagonalParams) -> Trajectory:
    cn = ColoredNoiseParams(args.a, args.tau, args.direction)
    if args.workers <= 1:
        return colored_trajectory(
            params, cn, args.nu_max, args.steps, check=args.check, seed=args.seed
        )
    if params.r != 0.0 or params.s != 0.0:
        raise UnsupportedSubclassError(
            f"colored evolution requires r = s = 0, got r={params.r!r}, s={params.s!r}"
        )
    reference = _reference_of(bell_diagonal_state(params))
    nu_values = np.linspace(0.0, args.nu_max, args.steps)
    fn = partial(
        colored_records,
        params,
        cn,
        frozen_reference=reference,
        frozen_atol=FROZEN_ATOL,
        check=args.check,
    )
    records = _pooled(fn, _chunks(nu_values, args.workers), args.workers)
    metadata = {
        "channel": "colored",
        "parameters": {
            "a": cn.a,
            "tau": cn.tau,
            "direction": cn.direction,
            "nu_max": args.nu_max,
            "steps": args.steps,
            "c": list(params.c),
            "r": params.r,
            "s": params.s,
        },
        "seed": args.seed,
        "frozen_reference": reference,
    }
    return Trajectory(tuple(records), metadata)


def _reference_of(xs: XState):
    verdict = check_freezing_x(xs)
    return verdict.frozen_value if verdict.holds else None


def _markov_time_chunk(xs, gamma, reference, atol, check, times):
    p_values = 1.0 - np.exp(-gamma * np.asarray(times))
    records = markov_records(
        xs, p_values, reference, frozen_atol=atol, check=check
    )
    return [
        dataclasses.replace(rec, param=float(t))
        for rec, t in zip(records, times)
    ]


# ---------------------------------------------------------------------------
# freeze
# ---------------------------------------------------------------------------

def cmd_freeze(args) -> int:
    state = _load_state(args)
    bell = state if isinstance(state, BellDiagonalParams) else None
    xs = _as_x_state(state)
    verdict = check_freezing_bell(bell) if bell is not None else check_freezing_x(xs)

    if args.check:
        other = check_freezing_x(xs)
        closed = x_lambdas(xs)
        audit = gmqd_svd(x_to_density(xs))
        if (
            other.holds != verdict.holds
            or abs(other.frozen_value - verdict.frozen_value) > _CHECK_ATOL
            or abs(closed.value - audit.value) > _CHECK_ATOL
        ):
            print("check failed: freezing routes disagree", file=sys.stderr)
            return 1

    discord_now = x_lambdas(xs).value
    payload = {
        "holds": verdict.holds,
        "equal_coherence_defect": verdict.equal_coherence_defect,
        "margin": verdict.margin,
        "frozen_value": verdict.frozen_value,
        "gmqd": discord_now,
    }
    if verdict.holds:
        payload["p_star"] = freeze_endpoint_markov(xs)
    if discord_now <= 1e-12:
        payload["note"] = "discord is zero; constancy under dephasing is trivial"

    intervals = None
    if args.colored:
        if bell is None:
            raise UnsupportedSubclassError(
                "interval detection needs a 'bell_diagonal' state"
            )
        cn = ColoredNoiseParams(args.a, args.tau, args.direction)
        traj = colored_trajectory(bell, cn, args.nu_max, args.steps, seed=args.seed)
        intervals = detect_frozen_intervals(traj, atol=args.atol)
        payload["intervals"] = [
            {
                "start": iv.start,
                "end": iv.end,
                "level": iv.level,
                "trivial": iv.trivial,
            }
            for iv in intervals
        ]

    if args.format == "json":
        text = json.dumps(payload, indent=2) + "\n"
    else:
        lines = [
            f"holds        = {str(verdict.holds).lower()}",
            f"defect       = {_fmt(verdict.equal_coherence_defect)}",
            f"margin       = {_fmt(verdict.margin)}",
            f"frozen_value = {_fmt(verdict.frozen_value)}",
            f"gmqd         = {_fmt(discord_now)}",
        ]
        if "p_star" in payload:
            lines.append(f"p_star       = {_fmt(payload['p_star'])}")
        if "note" in payload:
            lines.append(f"note: {payload['note']}")
        if intervals is not None:
            lines.append(f"intervals ({len(intervals)}):")
            for iv in intervals:
                tag = " [trivial]" if iv.trivial else ""
                lines.append(
                    f"  [{_fmt(iv.start)}, {_fmt(iv.end)}]"
                    f" level={_fmt(iv.level)}{tag}"
                )
        text = "\n".join(lines) + "\n"
    _write_output(args, text)
    return 0


# ---------------------------------------------------------------------------
# scan
# ---------------------------------------------------------------------------

def _scan_cells(r, s, axes, check, pairs):
    out = []
    for v1, v2 in pairs:
        if axes == "c2c3":
            c1, c2, c3 = 0.0, float(v1), float(v2)
        else:
            c1, c2, c3 = float(v1), 0.0, float(v2)
        member = region_membership(r, s, c1, c2, c3)
        if check:
            min_eig = herm_eigenvalues(bell_diagonal_dense(r, s, c1, c2, c3))[-1]
            if (min_eig >= -1e-12) != member.physical:
                raise ArithmeticError(
                    f"positivity disagreement at ({v1}, {v2}): "
                    f"min eigenvalue {min_eig:.3e} vs physical={member.physical}"
                )
        out.append((float(v1), float(v2), member.physical, member.freezing))
    return out


def cmd_scan(args) -> int:
    axis = np.linspace(-1.0, 1.0, args.grid)
    pairs = np.array([(v1, v2) for v1 in axis for v2 in axis])
    fn = partial(_scan_cells, args.r, args.s, args.axes, args.check)
    cells = _pooled(fn, _chunks(pairs, args.workers), args.workers)

    first, second = ("c2", "c3") if args.axes == "c2c3" else ("c1", "c3")
    if args.format == "json":
        payload = {
            "metadata": {
                "r": args.r,
                "s": args.s,
                "axes": [first, second],
                "grid": args.grid,
                "seed": args.seed,
            },
            "rows": [
                {first: v1, second: v2, "physical": phys, "freezing": frz}
                for v1, v2, phys, frz in cells
            ],
        }
        text = json.dumps(payload, indent=2) + "\n"
    else:
        lines = [f"{first},{second},physical,freezing"]
        for v1, v2, phys, frz in cells:
            lines.append(f"{_fmt(v1)},{_fmt(v2)},{int(phys)},{int(frz)}")
        text = "\n".join(lines) + "\n"
    _write_output(args, text)
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _add_common(sub, state_source=True):
    if state_source:
        sub.add_argument("--input", help="path to a JSON state file")
        sub.add_argument("--state", help="inline JSON state")
    sub.add_argument("--output", help="output path (default: stdout)")
    sub.add_argument("--format", choices=("csv", "json"), default=None)
    sub.add_argument("--seed", type=int, default=None)
    sub.add_argument("--workers", type=int, default=1)
    sub.add_argument(
        "--check",
        action="store_true",
        help="re-verify closed forms against the SVD route; abort on disagreement",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gmqd",
        description="Geometric discord of two-qubit X states under local dephasing",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("gmqd", help="evaluate the discord of one state")
    _add_common(p)
    p.add_argument("--oracle", action="store_true", help="also run the measurement search")
    p.add_argument("--coarse-steps", type=int, default=180, dest="coarse_steps")
    p.set_defaults(func=cmd_gmqd, default_format="text")

    p = subs.add_parser("evolve", help="sweep a dephasing channel")
    p.add_argument("channel", choices=("markov", "colored"))
    _add_common(p)
    p.add_argument("--steps", type=int, default=1001)
    p.add_argument("--p-max", type=float, default=1.0, dest="p_max")
    p.add_argument("--gamma", type=float, default=None,
                   help="markov only: sweep t with p = 1 - exp(-gamma t)")
    p.add_argument("--t-max", type=float, default=1.0, dest="t_max")
    p.add_argument("--c", help="colored only: Bell-diagonal c1,c2,c3")
    p.add_argument("--r", type=float, default=0.0)
    p.add_argument("--s", type=float, default=0.0)
    p.add_argument("--a", type=float, default=None, help="noise rate (1/s)")
    p.add_argument("--tau", type=float, default=None, help="memory time (s)")
    p.add_argument("--direction", type=int, choices=(1, 2, 3), default=3)
    p.add_argument("--nu-max", type=float, default=1.5, dest="nu_max")
    p.set_defaults(func=cmd_evolve, default_format="csv")

    p = subs.add_parser("freeze", help="freezing verdict and intervals")
    _add_common(p)
    p.add_argument("--colored", action="store_true",
                   help="also detect frozen intervals of the colored sweep")
    p.add_argument("--a", type=float, default=None)
    p.add_argument("--tau", type=float, default=None)
    p.add_argument("--direction", type=int, choices=(1, 2, 3), default=3)
    p.add_argument("--nu-max", type=float, default=1.5, dest="nu_max")
    p.add_argument("--steps", type=int, default=1501)
    p.add_argument("--atol", type=float, default=FROZEN_ATOL)
    p.set_defaults(func=cmd_freeze, default_format="text")

    p = subs.add_parser("scan", help="classify a Bell-diagonal parameter grid")
    _add_common(p, state_source=False)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--grid", type=int, default=201)
    p.add_argument("--axes", choices=("c2c3", "c1c3"), default="c2c3")
    p.set_defaults(func=cmd_scan, default_format="csv")

    return parser


def _validate_args(args) -> None:
    if getattr(args, "grid", 2) < 2:
        raise InputFormatError("--grid must be >= 2")
    if getattr(args, "steps", 2) < 2:
        raise InputFormatError("--steps must be >= 2")
    if getattr(args, "workers", 1) < 1:
        raise InputFormatError("--workers must be >= 1")
    if args.format is None:
        args.format = args.default_format
    if getattr(args, "command", "") == "evolve" and args.channel == "colored":
        if args.a is None or args.tau is None:
            raise InputFormatError("colored evolution requires --a and --tau")
        if not math.isfinite(args.nu_max) or args.nu_max < 0:
            raise InputFormatError("--nu-max must be a nonnegative number")
    if getattr(args, "colored", False) and (args.a is None or args.tau is None):
        raise InputFormatError("--colored requires --a and --tau")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _validate_args(args)
        return args.func(args)
    except InputFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except UnsupportedSubclassError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except StateValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except GmqdError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ArithmeticError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
