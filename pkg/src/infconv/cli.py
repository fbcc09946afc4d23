"""Command-line front end.

Subcommands: envelope (file-based transform), check (property reports),
extend (Lipschitz extension from samples), repro (the constructive
examples, with figures), bench (timing curves). Exit codes: 0 success,
1 failed checks/assertions, 2 parse error, 3 precondition violation,
4 unknown reproduction name.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import analysis, envelope, extension, repro
from .errors import InfConvError
from .grid import (
    Grid,
    GridFunction,
    NormKind,
    PointSet,
    grid_from_json_dict,
    grid_function_to_csv,
    load_grid_function,
    save_grid_function,
)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_PARSE = 2
EXIT_PRECONDITION = 3
EXIT_UNKNOWN_REPRO = 4

ORACLE_BENCH_CUTOFF = 2 ** 12


class ParseFailure(Exception):
    pass


def _load_function(path) -> GridFunction:
    try:
        return load_grid_function(path)
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        raise ParseFailure(f"cannot read grid function {path}: {exc}") from exc


def _int_list(text: str):
    return [int(x) for x in text.split(",") if x]


def _write_argmin_csv(result: envelope.EnvelopeResult, path) -> None:
    grid = result.envelope.grid
    coords = grid.coordinates()
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        header = [f"x{a + 1}" for a in range(grid.dim)]
        header += ["argmin_index"] + [f"y{a + 1}" for a in range(grid.dim)]
        writer.writerow(header)
        for i in range(grid.npoints):
            j = int(result.argmin[i])
            row = [repr(float(c)) for c in coords[i]] + [j]
            row += [repr(float(c)) for c in coords[j]] if j >= 0 else [""] * grid.dim
            writer.writerow(row)


def _compute_envelope(f: GridFunction, kind: str, k: float, norm: NormKind,
                      oracle: bool) -> envelope.EnvelopeResult:
    if oracle:
        kernel = (envelope.Kernel.conical(k, norm) if kind == "conical"
                  else envelope.Kernel.quadratic(k))
        return envelope.inf_conv_bruteforce(f, kernel)
    if kind == "conical":
        return envelope.pasch_hausdorff(f, k, norm)
    return envelope.moreau_yosida(f, k)


def run_envelope(args) -> int:
    f = _load_function(args.input)
    result = _compute_envelope(f, args.kernel, args.k, NormKind(args.norm),
                               args.oracle)
    save_grid_function(result.envelope, args.output)
    argmin_csv = args.argmin_csv or str(Path(args.output).with_suffix(".argmin.csv"))
    _write_argmin_csv(result, argmin_csv)
    if args.csv:
        grid_function_to_csv(result.envelope, args.csv)
    return EXIT_OK


def run_check(args) -> int:
    f = _load_function(args.input)
    norm = NormKind(args.norm)
    reports = []
    for name in args.checks.split(","):
        name = name.strip()
        if name in ("prop25", "infimum", "minimizers", "coercivity"):
            env = _compute_envelope(f, args.kernel, args.k, norm, args.oracle)
        if name == "prop25":
            reports.append(analysis.check_infimum_preservation(f, env))
            reports.append(analysis.check_minimizer_preservation(f, env))
        elif name == "infimum":
            reports.append(analysis.check_infimum_preservation(f, env))
        elif name == "minimizers":
            reports.append(analysis.check_minimizer_preservation(f, env))
        elif name == "monotone":
            seq = envelope.envelope_sequence(f, args.nmax, norm)
            reports.append(analysis.check_monotone_in_n(seq, f))
        elif name == "lipschitz":
            reports.append(analysis.check_lipschitz(f, args.k, norm, seed=args.seed))
        elif name == "convex":
            reports.append(analysis.check_midpoint_convex(f, seed=args.seed))
        elif name == "coercivity":
            H = PointSet(f.grid, np.isfinite(f.values))
            reports.append(
                analysis.check_coercivity_bound(env, f, H, args.k, norm)
            )
        else:
            raise ParseFailure(f"unknown check name: {name}")
    payload = [r.to_json_dict() for r in reports]
    text = json.dumps(payload, sort_keys=True, indent=2)
    if args.output:
        Path(args.output).write_text(text + "\n")
    else:
        print(text)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_CHECK_FAILED


def run_extend(args) -> int:
    try:
        samples = extension.load_sample_set(args.input, validate=False)
        grid = grid_from_json_dict(json.loads(Path(args.grid).read_text()))
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        raise ParseFailure(str(exc)) from exc
    result = extension.mcshane_extend(samples, grid)
    save_grid_function(result.envelope, args.output)
    location = None
    try:
        location = extension.verify_minimizer_location(samples, result)
    except extension.SamplesOffGrid:
        pass  # off-grid samples: the location check does not apply
    if location is not None:
        report_path = Path(args.output).with_suffix(".location.json")
        report_path.write_text(
            json.dumps(location.to_json_dict(), sort_keys=True, indent=2) + "\n"
        )
    return EXIT_OK


def _write_report(report: dict, outdir: Path, name: str) -> None:
    (outdir / f"{name}_report.json").write_text(
        json.dumps(report, sort_keys=True, indent=2) + "\n"
    )


def _write_rows_csv(rows, fieldnames, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fieldnames)
        writer.writeheader()
        for row in rows:
            writer.writerow({k: row[k] for k in fieldnames})


def run_repro(args) -> int:
    from . import figures

    name = args.name
    outdir = Path(args.output)
    outdir.mkdir(parents=True, exist_ok=True)
    if name == "example16":
        m_list = _int_list(args.m)
        report = repro.example16_report(m_list, seed=args.seed)
        _write_report(report, outdir, "example16")
        _write_rows_csv(report["minima"], ["m", "minimum", "expected", "ok"],
                        outdir / "example16_minima.csv")
        _write_rows_csv(
            report["sequence"],
            ["m", "n", "constraint", "sup_norm", "expected_sup_norm", "ok"],
            outdir / "example16_sequence.csv",
        )
        if not args.no_figures:
            figures.save_example16_figure(report, outdir / "example16.png")
    elif name == "weierstrass":
        grid = Grid((-1.0, -1.0), (0.02, 0.02), (101, 101))
        target = (0.013, -0.027)
        report = repro.weierstrass_report(grid, target, k_terms=8)
        region = PointSet(grid, np.ones(grid.npoints, dtype=bool))
        seq = np.asarray(report["sequence"])
        inst = repro.WeierstrassInstance(seq, 8, region)
        f = repro.weierstrass_function(inst, grid)
        _write_report(report, outdir, "weierstrass")
        _write_rows_csv(report["bounds"], ["k0", "value", "bound", "ok"],
                        outdir / "weierstrass_bounds.csv")
        if not args.no_figures:
            figures.save_weierstrass_figure(f, report, outdir / "weierstrass.png")
    elif name == "norm-attain":
        grid = Grid((-1.5, -1.5), (0.075, 0.075), (41, 41))
        report = repro.norm_attainment_demo((3.0, 4.0), 1.0, grid,
                                            NormKind.L2, n_max=args.nmax)
        _write_report(report, outdir, "norm_attain")
        _write_rows_csv(report["per_n"], ["n", "min", "argmin_preserved", "ok"],
                        outdir / "norm_attain_sequence.csv")
        if not args.no_figures:
            figures.save_norm_attainment_figure(report, outdir / "norm_attain.png")
    elif name == "remark26":
        grid = Grid.line(-1.0, 0.25, 17)
        report = repro.remark26_counterexample(grid, k=args.k)
        _write_report(report, outdir, "remark26")
        if not args.no_figures:
            nodes = grid.coordinates()[:, 0]
            values = np.full(nodes.size, np.inf)
            pos = nodes > 0
            values[pos] = np.log(nodes[pos])
            values[np.abs(nodes) <= 1e-12] = -np.inf
            f = GridFunction(grid, values, allow_neg_inf=True)
            figures.save_remark26_figure(f, outdir / "remark26.png")
    else:
        print(f"unknown repro name: {name}", file=sys.stderr)
        return EXIT_UNKNOWN_REPRO
    return EXIT_OK if report["passed"] else EXIT_CHECK_FAILED


def _bench_instance(n_points: int, dim: int, seed: int) -> GridFunction:
    rng = np.random.default_rng(seed)
    if dim == 1:
        grid = Grid.line(0.0, 1.0, n_points)
    else:
        side = max(2, int(round(n_points ** 0.5)))
        grid = Grid((0.0, 0.0), (1.0, 1.0), (side, side))
    values = rng.integers(-512, 512, size=grid.npoints) / 8.0
    values[rng.random(grid.npoints) < 0.2] = np.inf
    values[0] = 0.0  # keep it proper
    return GridFunction(grid, values)


def run_bench(args) -> int:
    sizes = _int_list(args.sizes)
    norm = NormKind(args.norm)
    rows = []
    for size in sizes:
        f = _bench_instance(size, args.dim, args.seed)
        _compute_envelope(f, args.kernel, args.k, norm, False)  # warm-up
        times = []
        for _ in range(args.repeats):
            t0 = time.perf_counter()
            _compute_envelope(f, args.kernel, args.k, norm, False)
            times.append(time.perf_counter() - t0)
        oracle_s = None
        if f.grid.npoints <= ORACLE_BENCH_CUTOFF:
            t0 = time.perf_counter()
            _compute_envelope(f, args.kernel, args.k, norm, True)
            oracle_s = time.perf_counter() - t0
        rows.append(
            {
                "size": f.grid.npoints,
                "fast_median_s": float(np.median(times)),
                "oracle_s": oracle_s,
            }
        )
    ok = True
    for prev, cur in zip(rows, rows[1:]):
        if cur["size"] == 2 * prev["size"]:
            ok = ok and cur["fast_median_s"] < 3.0 * prev["fast_median_s"]
    out = args.output or "bench.csv"
    _write_rows_csv(rows, ["size", "fast_median_s", "oracle_s"], out)
    if not args.no_figures:
        from . import figures

        figures.save_bench_figure(rows, str(Path(out).with_suffix(".png")))
    if not ok:
        print("bench: doubling the size more than tripled the median runtime",
              file=sys.stderr)
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="infconv",
        description="Inf-convolution envelopes on finite grids",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_kernel_flags(p):
        p.add_argument("--kernel", choices=["conical", "quadratic"],
                       default="conical")
        p.add_argument("--k", type=float, default=1.0)
        p.add_argument("--norm", choices=["l1", "l2", "linf"], default="l2")
        p.add_argument("--oracle", action="store_true",
                       help="force the brute-force path")

    p = sub.add_parser("envelope", help="transform a grid function file")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--argmin-csv")
    p.add_argument("--csv", help="also export the envelope as CSV")
    add_kernel_flags(p)
    p.set_defaults(func=run_envelope)

    p = sub.add_parser("check", help="run property checks")
    p.add_argument("--input", required=True)
    p.add_argument("--checks", required=True,
                   help="comma list: prop25,infimum,minimizers,monotone,"
                        "lipschitz,convex,coercivity")
    p.add_argument("--output")
    p.add_argument("--nmax", type=int, default=5)
    p.add_argument("--seed", type=int, default=42)
    add_kernel_flags(p)
    p.set_defaults(func=run_check)

    p = sub.add_parser("extend", help="Lipschitz extension from samples")
    p.add_argument("--input", required=True, help="SampleSet JSON")
    p.add_argument("--grid", required=True, help="grid JSON (no values)")
    p.add_argument("--output", required=True)
    p.set_defaults(func=run_extend)

    p = sub.add_parser("repro", help="reproduce a constructive example")
    p.add_argument("name")
    p.add_argument("--output", default="repro_out")
    p.add_argument("--m", default="4,10,100,1000")
    p.add_argument("--k", type=float, default=1.0)
    p.add_argument("--nmax", type=int, default=5)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--no-figures", action="store_true")
    p.set_defaults(func=run_repro)

    p = sub.add_parser("bench", help="time the fast paths")
    p.add_argument("--sizes", required=True, help="comma list of point counts")
    p.add_argument("--dim", type=int, choices=[1, 2], default=1)
    p.add_argument("--repeats", type=int, default=5)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--output")
    p.add_argument("--no-figures", action="store_true")
    add_kernel_flags(p)
    p.set_defaults(func=run_bench)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except InfConvError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
