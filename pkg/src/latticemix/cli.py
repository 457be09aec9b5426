"""Command-line front end.

Every subcommand resolves its configuration from, in order of precedence,
command-line flags, an optional key=value config file, and built-in defaults;
writes its artifact plus a ``<out>.manifest.json`` sidecar echoing the
resolved configuration; and exits 0 on success, 2 when a checked bound is
violated (the report is still written), 1 on usage errors.

Long jobs (``theorem3`` and a ``conjecture`` sweep over every pair in range)
refuse to run without ``--tier slow``.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import __version__
from .classical import lazy_kernel, lazy_mixing_bound, mixing_curve
from .distances import distance_to_uniform, pairwise_column_distance
from .experiments import (
    coordinate_wise_run,
    repeated_measurement_run,
    return_probability_curves,
    uniformity_case_check,
)
from .kernels import (
    averaged_kernel_analytic,
    averaged_kernel_quadrature,
    instantaneous_kernel,
    kernel_power,
)
from .oscsums import (
    bound_sweep,
    coprime_odd_pairs,
    integrated_osc_bound,
    integrated_osc_sum,
    sample_coprime_odd_pairs,
)
from .output import write_csv, write_json, write_manifest, write_svg
from .spectral import LatticeSpec, eigenphases, spectral_gap

ENV_WORKERS = "LATTICEMIX_PARALLEL"


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on bad usage; this front end reserves 2 for violations."""

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(1)


def _parse_dims(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in str(text).split(","))
    except ValueError as exc:
        raise SystemExit(f"bad dims {text!r}: {exc}")


def _parse_pair(text: str) -> tuple[int, int]:
    parts = str(text).split(",")
    if len(parts) != 2:
        raise SystemExit(f"expected two comma-separated integers, got {text!r}")
    return int(parts[0]), int(parts[1])


def _load_config_file(path: str) -> dict:
    values = {}
    with open(path) as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise SystemExit(f"bad config line {line!r} (expected key=value)")
            key, _, value = line.partition("=")
            values[key.strip().replace("-", "_")] = value.strip()
    return values


def _resolve(args, spec: dict) -> dict:
    """Fill unset options from the config file, then from defaults."""
    file_values = _load_config_file(args.config) if args.config else {}
    resolved = {}
    for name, (cast, default) in spec.items():
        value = getattr(args, name, None)
        if value is None and name in file_values:
            value = cast(file_values[name])
        if value is None:
            value = default
        resolved[name] = value
    return resolved


def _workers(value) -> int:
    if value is not None:
        return max(1, int(value))
    env = os.environ.get(ENV_WORKERS)
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _decade_grid(t_max: float) -> list[float]:
    grid = []
    T = 10.0
    while T < t_max:
        grid.append(T)
        T *= 10.0
    grid.append(float(t_max))
    return grid


def _emit(resolved, command, payload_json, csv_header, csv_rows, svg_series=None):
    out = resolved["out"]
    fmt = resolved["format"]
    if fmt == "csv":
        write_csv(out, csv_header, csv_rows)
    elif fmt == "json":
        write_json(out, payload_json)
    elif fmt == "svg":
        if svg_series is None:
            raise SystemExit(f"{command} has no svg rendering")
        write_svg(out, *svg_series)
    else:
        raise SystemExit(f"unknown format {fmt!r}")
    manifest_config = {
        k: (list(v) if isinstance(v, tuple) else v) for k, v in resolved.items()
    }
    write_manifest(out, command, manifest_config, __version__)


# ---------------------------------------------------------------- subcommands

def _run_spectrum(args) -> int:
    resolved = _resolve(args, {
        "dims": (_parse_dims, None),
        "out": (str, None),
        "format": (str, "csv"),
    })
    if resolved["dims"] is None or resolved["out"] is None:
        raise SystemExit("spectrum requires --dims and --out")
    lattice = LatticeSpec(resolved["dims"])
    gap = spectral_gap(lattice)
    rows = []
    factors = []
    for axis, n in enumerate(lattice.dims):
        lambdas = eigenphases(n).lambdas
        factors.append({"n": n, "eigenvalues": lambdas})
        rows.extend(
            (axis, n, j, lambdas[j], gap) for j in range(n)
        )
    payload = {"dims": list(lattice.dims), "spectral_gap": gap, "factors": factors}
    _emit(resolved, "spectrum", payload,
          ["factor", "n", "j", "eigenvalue", "joint_gap"], rows)
    return 0


def _kernel_rows(lattice, column):
    for index in range(lattice.size):
        coords = np.unravel_index(index, lattice.dims)
        yield (index, *coords, column[index])


def _run_kernel(args) -> int:
    resolved = _resolve(args, {
        "dims": (_parse_dims, None),
        "kind": (str, "averaged"),
        "t": (float, None),
        "T": (float, None),
        "dt": (float, 0.02),
        "power": (int, 1),
        "out": (str, None),
        "format": (str, "csv"),
    })
    if resolved["dims"] is None or resolved["out"] is None:
        raise SystemExit("kernel requires --dims and --out")
    lattice = LatticeSpec(resolved["dims"])
    kind = resolved["kind"]
    if kind == "instant":
        if resolved["t"] is None:
            raise SystemExit("kernel --kind instant requires --t")
        kernel = instantaneous_kernel(lattice, resolved["t"])
    elif kind == "averaged":
        if resolved["T"] is None:
            raise SystemExit("kernel --kind averaged requires --T")
        kernel = averaged_kernel_analytic(lattice, resolved["T"])
    elif kind == "averaged-quad":
        if resolved["T"] is None:
            raise SystemExit("kernel --kind averaged-quad requires --T")
        kernel = averaged_kernel_quadrature(lattice, resolved["T"], resolved["dt"])
    elif kind == "lazy":
        kernel = lazy_kernel(lattice)
    else:
        raise SystemExit(f"unknown kernel kind {kind!r}")
    if resolved["power"] != 1:
        kernel = kernel_power(kernel, resolved["power"])

    column = kernel.first_column
    header = ["index"] + [f"l{axis + 1}" for axis in range(lattice.d)] + ["probability"]
    payload = {
        "dims": list(lattice.dims),
        "kind": kernel.kind,
        "first_column": column,
        "tv_to_uniform": distance_to_uniform(kernel),
        "column_distance": pairwise_column_distance(kernel),
    }
    svg = ([("probability", np.arange(lattice.size), column)], "vertex index",
           "probability")
    _emit(resolved, "kernel", payload, header, _kernel_rows(lattice, column), svg)
    return 0


def _run_mix_classical(args) -> int:
    resolved = _resolve(args, {
        "dims": (_parse_dims, None),
        "epsilon": (float, 0.1),
        "t_max": (int, None),
        "out": (str, None),
        "format": (str, "csv"),
    })
    if resolved["dims"] is None or resolved["out"] is None:
        raise SystemExit("mix-classical requires --dims and --out")
    lattice = LatticeSpec(resolved["dims"])
    bound = lazy_mixing_bound(lattice, resolved["epsilon"])
    t_max = resolved["t_max"] if resolved["t_max"] is not None else bound
    times, tvs = mixing_curve(lattice, max(t_max, bound))
    tv_at_bound = float(tvs[bound])
    satisfied = tv_at_bound <= resolved["epsilon"]
    payload = {
        "dims": list(lattice.dims),
        "epsilon": resolved["epsilon"],
        "bound_steps": bound,
        "tv_at_bound": tv_at_bound,
        "satisfied": satisfied,
        "curve": {"t": times[: t_max + 1], "tv": tvs[: t_max + 1]},
    }
    svg = ([("tv to uniform", times[: t_max + 1], tvs[: t_max + 1])], "step", "tv")
    _emit(resolved, "mix-classical", payload, ["t", "tv"],
          zip(times[: t_max + 1], tvs[: t_max + 1]), svg)
    return 0 if satisfied else 2


def _run_mix_coordinate(args) -> int:
    resolved = _resolve(args, {
        "dims": (_parse_dims, None),
        "epsilon": (float, 0.1),
        "rounds": (int, None),
        "out": (str, None),
        "format": (str, "json"),
    })
    if resolved["dims"] is None or resolved["out"] is None:
        raise SystemExit("mix-coordinate requires --dims and --out")
    lattice = LatticeSpec(resolved["dims"])
    record = coordinate_wise_run(
        lattice, epsilon=resolved["epsilon"], rounds=resolved["rounds"]
    )
    factor_tv = record.curves["factor_tv"]
    header = ["sweep"] + [f"tv_factor{axis + 1}" for axis in range(lattice.d)]
    rows = [(sweep, *factor_tv[sweep]) for sweep in range(factor_tv.shape[0])]
    payload = {
        "config": {**record.config, "dims": list(lattice.dims)},
        "scalars": record.scalars,
        "verdicts": record.verdicts,
        "warnings": record.warnings,
        "factor_tv": factor_tv,
    }
    svg = (
        [
            (f"factor {axis + 1}", np.arange(factor_tv.shape[0]), factor_tv[:, axis])
            for axis in range(lattice.d)
        ],
        "sweep",
        "tv",
    )
    _emit(resolved, "mix-coordinate", payload, header, rows, svg)
    return 0 if record.all_passed else 2


def _run_mix_repeated(args) -> int:
    resolved = _resolve(args, {
        "dims": (_parse_dims, None),
        "T": (float, None),
        "rounds": (int, 3),
        "mode": (str, "exact"),
        "trajectories": (int, 100_000),
        "seed": (int, 0),
        "out": (str, None),
        "format": (str, "csv"),
    })
    if resolved["dims"] is None or resolved["out"] is None or resolved["T"] is None:
        raise SystemExit("mix-repeated requires --dims, --T and --out")
    lattice = LatticeSpec(resolved["dims"])
    record = repeated_measurement_run(
        lattice, resolved["T"], resolved["rounds"], mode=resolved["mode"],
        trajectories=resolved["trajectories"], seed=resolved["seed"],
    )
    payload = {
        "config": {**record.config, "dims": list(lattice.dims)},
        "scalars": record.scalars,
        "verdicts": record.verdicts,
    }
    if resolved["mode"] == "exact":
        header = ["rounds", "tv_to_uniform", "column_distance", "submultiplicative_cap"]
        rows = zip(
            record.curves["rounds"],
            record.curves["tv_to_uniform"],
            record.curves["column_distance"],
            record.curves["submultiplicative_cap"],
        )
        payload["curves"] = {k: v for k, v in record.curves.items()}
        svg = (
            [
                ("tv to uniform", record.curves["rounds"], record.curves["tv_to_uniform"]),
                ("column distance", record.curves["rounds"], record.curves["column_distance"]),
            ],
            "rounds",
            "distance",
        )
    else:
        header = ["index", "empirical", "exact"]
        rows = (
            (i, record.curves["empirical"][i], record.curves["exact"][i])
            for i in range(lattice.size)
        )
        payload["curves"] = {k: v for k, v in record.curves.items()}
        svg = (
            [
                ("empirical", np.arange(lattice.size), record.curves["empirical"]),
                ("exact", np.arange(lattice.size), record.curves["exact"]),
            ],
            "vertex index",
            "probability",
        )
    _emit(resolved, "mix-repeated", payload, header, rows, svg)
    return 0 if record.all_passed else 2


def _run_lemma2(args) -> int:
    resolved = _resolve(args, {
        "n": (int, None),
        "T": (float, None),
        "offset": (int, 0),
        "out": (str, None),
        "format": (str, "json"),
    })
    if resolved["n"] is None or resolved["T"] is None or resolved["out"] is None:
        raise SystemExit("lemma2 requires --n, --T and --out")
    n, T, offset = resolved["n"], resolved["T"], resolved["offset"]
    lhs = abs(integrated_osc_sum(n, offset, T))
    rhs = integrated_osc_bound(n)
    satisfied = lhs <= rhs
    payload = {"n": n, "offset": offset, "T": T, "lhs": lhs, "rhs": rhs,
               "satisfied": satisfied}
    _emit(resolved, "lemma2", payload,
          ["n", "offset", "T", "lhs", "rhs", "satisfied"],
          [(n, offset, T, lhs, rhs, satisfied)])
    return 0 if satisfied else 2


def _run_conjecture(args) -> int:
    resolved = _resolve(args, {
        "range": (_parse_pair, (10, 100)),
        "pairs": (int, None),
        "seed": (int, 0),
        "T_max": (float, 10_000.0),
        "dt": (float, 0.02),
        "offset": (_parse_pair, (0, 0)),
        "halving": (lambda v: str(v).lower() == "true", False),
        "tier": (str, "fast"),
        "parallel": (int, None),
        "out": (str, None),
        "format": (str, "csv"),
    })
    if resolved["out"] is None:
        raise SystemExit("conjecture requires --out")
    lo, hi = resolved["range"]
    if resolved["pairs"] is None:
        if resolved["tier"] != "slow":
            raise SystemExit(
                "a sweep over every pair in range is a slow-tier job; "
                "pass --tier slow to acknowledge, or sample with --pairs"
            )
        pairs = coprime_odd_pairs(lo, hi)
    else:
        pairs = sample_coprime_odd_pairs(lo, hi, resolved["pairs"], resolved["seed"])
    grid = _decade_grid(resolved["T_max"])
    reports = bound_sweep(
        pairs, grid, dt=resolved["dt"], offsets=(resolved["offset"],),
        check_halving=resolved["halving"], workers=_workers(resolved["parallel"]),
    )
    header = ["n1", "n2", "T", "lhs", "rhs", "satisfied"]
    if resolved["halving"]:
        header.append("halving_rel")
    rows = []
    for rep in reports:
        row = [rep.params["n1"], rep.params["n2"], rep.params["T"], rep.lhs,
               rep.rhs, rep.satisfied]
        if resolved["halving"]:
            row.append(rep.params["halving_rel"])
        rows.append(tuple(row))
    payload = {
        "pair_count": len(pairs),
        "range": list(resolved["range"]),
        "T_grid": grid,
        "reports": [
            {**rep.params, "lhs": rep.lhs, "rhs": rep.rhs, "satisfied": rep.satisfied}
            for rep in reports
        ],
    }
    svg = (
        [
            ("lhs", np.arange(len(reports)), np.array([r.lhs for r in reports])),
            ("rhs", np.arange(len(reports)), np.array([r.rhs for r in reports])),
        ],
        "report index",
        "integral value",
    )
    _emit(resolved, "conjecture", payload, header, rows, svg)
    return 0 if all(rep.satisfied for rep in reports) else 2


def _run_theorem3(args) -> int:
    resolved = _resolve(args, {
        "n1": (int, 95),
        "n2": (int, 93),
        "T": (float, None),
        "relaxed": (lambda v: str(v).lower() == "true", False),
        "checkpoint": (str, None),
        "tier": (str, "fast"),
        "out": (str, None),
        "format": (str, "json"),
    })
    if resolved["out"] is None:
        raise SystemExit("theorem3 requires --out")
    if resolved["tier"] != "slow":
        raise SystemExit("theorem3 is a slow-tier job; pass --tier slow to acknowledge")
    strict = not resolved["relaxed"]
    reports = uniformity_case_check(
        resolved["n1"], resolved["n2"], T=resolved["T"], strict=strict,
        checkpoint=resolved["checkpoint"],
    )
    payload = {
        "n1": resolved["n1"],
        "n2": resolved["n2"],
        "mode": "strict" if strict else "relaxed",
        "reports": [
            {**rep.params, "lhs": rep.lhs, "rhs": rep.rhs, "satisfied": rep.satisfied}
            for rep in reports
        ],
    }
    rows = [
        (rep.params["case"], rep.lhs, rep.rhs, rep.satisfied) for rep in reports
    ]
    _emit(resolved, "theorem3", payload, ["case", "lhs", "rhs", "satisfied"], rows)
    if strict and not all(rep.satisfied for rep in reports):
        return 2
    return 0


def _run_fig1(args) -> int:
    resolved = _resolve(args, {
        "dims": (_parse_dims, (19, 5)),
        "t_max": (int, None),
        "out": (str, None),
        "format": (str, "csv"),
    })
    if resolved["out"] is None:
        raise SystemExit("fig1 requires --out")
    dims = resolved["dims"]
    if len(dims) != 2:
        raise SystemExit("fig1 requires exactly two cycle lengths")
    record = return_probability_curves(dims[0], dims[1], t_max=resolved["t_max"])
    u = record.scalars["uniform_level"]
    times = record.curves["T"]
    quantum = record.curves["quantum_return"]
    classical = record.curves["classical_return"]
    rows = zip(times, quantum, classical, [u] * len(times))
    payload = {
        "config": {**record.config, "dims": list(dims)},
        "scalars": record.scalars,
        "verdicts": record.verdicts,
        "curves": {"T": times, "quantum_return": quantum,
                   "classical_return": classical},
    }
    svg = (
        [
            ("quantum", times, quantum),
            ("classical", times, classical),
            ("uniform", times, np.full(len(times), u)),
        ],
        "averaging horizon T",
        "return probability",
    )
    _emit(resolved, "fig1", payload,
          ["T", "quantum_return", "classical_return", "uniform_level"], rows, svg)
    return 0 if record.all_passed else 2


_COMMANDS = {
    "spectrum": (_run_spectrum, "eigenvalue tables and the joint spectral gap"),
    "kernel": (_run_kernel, "instantaneous, averaged, quadrature or lazy kernel column"),
    "mix-classical": (_run_mix_classical, "lazy-walk mixing curve and its step bound"),
    "mix-coordinate": (_run_mix_coordinate, "coordinate-at-a-time measured walk"),
    "mix-repeated": (_run_mix_repeated, "repeated-measurement walk, exact or sampled"),
    "lemma2": (_run_lemma2, "integrated oscillatory sum against its analytic cap"),
    "conjecture": (_run_conjecture, "product-integral bound sweep over coprime odd pairs"),
    "theorem3": (_run_theorem3, "averaged-kernel uniformity case check (slow tier)"),
    "fig1": (_run_fig1, "quantum vs classical time-averaged return probability"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="latticemix", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", metavar="command")
    for name, (_, help_text) in _COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="key=value file merged under flags")
        p.add_argument("--out", help="output path")
        p.add_argument("--format", choices=("csv", "json", "svg"))
        if name in ("spectrum", "kernel", "mix-classical", "mix-coordinate",
                    "mix-repeated", "fig1"):
            p.add_argument("--dims", help="comma-separated cycle lengths, e.g. 19,5")
        if name == "kernel":
            p.add_argument("--kind", choices=("instant", "averaged", "averaged-quad", "lazy"))
            p.add_argument("--t", type=float, help="evolution time (instant kernel)")
            p.add_argument("--power", type=int, help="compose the kernel this many times")
        if name in ("kernel", "mix-repeated", "theorem3"):
            p.add_argument("--T", type=float, help="averaging horizon")
        if name in ("kernel", "conjecture"):
            p.add_argument("--dt", type=float, help="quadrature step")
        if name in ("mix-classical", "mix-coordinate"):
            p.add_argument("--epsilon", type=float)
        if name in ("mix-classical", "fig1"):
            p.add_argument("--t-max", dest="t_max", type=int)
        if name in ("mix-coordinate", "mix-repeated"):
            p.add_argument("--rounds", type=int)
        if name == "mix-repeated":
            p.add_argument("--mode", choices=("exact", "sampled"))
            p.add_argument("--trajectories", type=int)
        if name in ("mix-repeated", "conjecture"):
            p.add_argument("--seed", type=int)
        if name == "lemma2":
            p.add_argument("--n", type=int)
            p.add_argument("--T", type=float)
            p.add_argument("--offset", type=int)
        if name == "conjecture":
            p.add_argument("--range", help="lo,hi bounds for the cycle lengths")
            p.add_argument("--pairs", type=int, help="sample size; omit for every pair")
            p.add_argument("--T-max", dest="T_max", type=float)
            p.add_argument("--offset", help="per-factor offsets, e.g. 0,0")
            p.add_argument("--halving", action="store_const", const=True,
                           help="also integrate at dt/2 and report the relative step-halving gap")
            p.add_argument("--parallel", type=int,
                           help=f"worker processes (default: cores, env {ENV_WORKERS})")
        if name == "theorem3":
            p.add_argument("--n1", type=int)
            p.add_argument("--n2", type=int)
            p.add_argument("--relaxed", action="store_const", const=True,
                           help="report values without asserting the caps")
            p.add_argument("--checkpoint", help="resumable partial-sum file")
        if name in ("conjecture", "theorem3"):
            p.add_argument("--tier", choices=("fast", "slow"))
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help()
        return 1
    runner, _ = _COMMANDS[args.command]
    # string fields passed through argparse may still carry raw text when they
    # come from the config file; runners cast via their resolver specs
    if getattr(args, "dims", None) is not None:
        args.dims = _parse_dims(args.dims)
    if args.command == "conjecture":
        if getattr(args, "range", None) is not None:
            args.range = _parse_pair(args.range)
        if getattr(args, "offset", None) is not None:
            args.offset = _parse_pair(args.offset)
    try:
        return runner(args)
    except SystemExit as exc:
        if isinstance(exc.code, str):
            sys.stderr.write(exc.code + "\n")
            return 1
        return exc.code if exc.code is not None else 1
    except (ValueError, OSError) as exc:
        sys.stderr.write(f"latticemix {args.command}: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
