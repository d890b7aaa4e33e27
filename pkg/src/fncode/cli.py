"""Command-line front end.

Exit codes: 0 on success, 2 for input problems, 3 when an enumeration
budget would be exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import BudgetError, DocumentError
from .harness import (
    fano,
    load_plan,
    report_regions,
    run_cell,
    run_sweep,
)
from .measures import full_report
from .region import FUNCTION, SLEPIAN_WOLF, RateRegion, boundary_points
from .source import induced_z_pmf, load_source_path, marginals
from .typicality import DEFAULT_BUDGET, LISTING_CAP, TypicalityParams, enumerate_typical


def _print_json(obj) -> None:
    print(json.dumps(obj, indent=2, sort_keys=True))


def cmd_entropy(args) -> int:
    src, fspec = load_source_path(args.source)
    _print_json(full_report(src, fspec).as_dict())
    return 0


def cmd_region(args) -> int:
    src, fspec = load_source_path(args.source)
    document = report_regions({
        "x_alphabet": list(src.x_names or map(str, range(src.x_size))),
        "y_alphabet": list(src.y_names or map(str, range(src.y_size))),
        "pmf": src.pmf.tolist(),
        "function": {
            "z_alphabet": list(fspec.z_names or map(str, range(fspec.z_size))),
            "table": fspec.table.tolist(),
        },
    })
    _print_json(document)
    if args.boundary_out:
        key = "function_region" if args.which == FUNCTION else "slepian_wolf_region"
        region = RateRegion(**document[key])
        lines = ["r1,r2"]
        lines.extend(f"{repr(r1)},{repr(r2)}"
                     for r1, r2 in boundary_points(region, args.resolution))
        Path(args.boundary_out).write_text("\n".join(lines) + "\n")
    return 0


def cmd_typical(args) -> int:
    src, fspec = load_source_path(args.source)
    if args.which == "x":
        pmf = marginals(src)[0]
    elif args.which == "y":
        pmf = marginals(src)[1]
    elif args.which == "z":
        pmf = induced_z_pmf(src, fspec)
    else:
        pmf = src.pmf.ravel()
    params = TypicalityParams(epsilon=args.eps, n=args.n)
    summary = enumerate_typical(
        pmf, params, budget=args.budget,
        max_listing=LISTING_CAP if args.listing_out else 0,
    )
    out = summary.as_dict()
    out.update({"which": args.which, "n": args.n, "epsilon": args.eps})
    _print_json(out)
    if args.listing_out:
        Path(args.listing_out).write_text("\n".join(summary.listing or ()) + "\n")
    return 0


def cmd_simulate(args) -> int:
    src, fspec = load_source_path(args.source)
    row = run_cell(
        src, fspec, n=args.n, r1=args.r1, r2=args.r2, epsilon=args.eps,
        trials=args.trials, master_seed=args.seed, budget=args.budget,
        full_z=args.full_z,
    )
    out = row.json_dict()
    out["fano"] = fano(row.pe_hat, row.n, fspec.z_size,
                       full_report(src, fspec)).as_dict()
    _print_json(out)
    return 0


def cmd_sweep(args) -> int:
    plan = load_plan(args.plan)
    out = args.out or plan.out
    if not out:
        raise DocumentError("no output path: pass --out or set 'out' in the plan")
    result = run_sweep(plan, workers=args.workers)
    csv_path = Path(out)
    json_path = csv_path.with_suffix(".json")
    if json_path == csv_path:
        json_path = csv_path.with_name(csv_path.name + ".json")
    result.write(csv_path, json_path)
    for failure in result.failures:
        print(f"warning: {failure}", file=sys.stderr)
    print(f"wrote {csv_path} and {json_path} ({len(result.rows)} rows)")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fncode",
        description="Distributed coding of a function of two correlated sources",
    )
    sub = parser.add_subparsers(required=True)

    p = sub.add_parser("entropy", help="entropy report for a source document")
    p.add_argument("--source", required=True)
    p.set_defaults(func=cmd_entropy)

    p = sub.add_parser("region", help="rate regions, corners, optional boundary CSV")
    p.add_argument("--source", required=True)
    p.add_argument("--boundary-out")
    p.add_argument("--resolution", type=int, default=64)
    p.add_argument("--which", choices=[FUNCTION, SLEPIAN_WOLF], default=FUNCTION)
    p.set_defaults(func=cmd_region)

    p = sub.add_parser("typical", help="enumerate a typical set exactly")
    p.add_argument("--source", required=True)
    p.add_argument("--which", choices=["x", "y", "z", "joint"], required=True)
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--listing-out")
    p.set_defaults(func=cmd_typical)

    p = sub.add_parser("simulate", help="Monte Carlo estimate for one cell")
    p.add_argument("--source", required=True)
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--r1", type=float, required=True)
    p.add_argument("--r2", type=float, required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--full-z", action="store_true")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="run a plan; write CSV plus JSON mirror")
    p.add_argument("--plan", required=True)
    p.add_argument("--out")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_sweep)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BudgetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (DocumentError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
