"""Command-line entry point: ``lotsizer <subcommand>``.

Exit status: 0 success, 1 domain error (bad data, infeasible instance,
write failure), 2 usage error.  Diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .cost_report import render_part_report, render_total_report
from .data_io import (
    RunConfig,
    _rows,
    case_study_dir,
    case_study_reference,
    load_instance,
    read_parts,
    read_plan,
    write_plan,
    write_safety_stock,
)
from .instance_model import validate
from .mip_builder import build, export_lp
from .plan import CostSemantics
from .safety_stock import ServicePolicy, safety_stock_grid
from .solvers import check_plan, solve


def _input_args(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("input")
    g.add_argument("--data-dir", type=Path, help="directory holding parts/demand/prices[/safety_stock].csv "
                   "(default: bundled case study)")
    g.add_argument("--parts", type=Path)
    g.add_argument("--demand", type=Path)
    g.add_argument("--prices", type=Path)
    g.add_argument("--safety-stock", type=Path, help="per-period safety stock; computed from sigma if absent")
    g.add_argument("--compute-safety-stock", action="store_true",
                   help="ignore any safety_stock.csv in --data-dir and compute it")
    g.add_argument("--service-level", type=float, default=0.95)
    g.add_argument("--z", type=float, help="override the normal quantile")
    g.add_argument("--strict-prices", action="store_true", help="fail on missing price cells instead of filling")
    p.add_argument("--out-dir", type=Path, default=Path("."))


def _config(args) -> RunConfig:
    base = args.data_dir or case_study_dir()
    cfg = RunConfig.from_dir(
        base,
        service_level=args.service_level,
        z=args.z,
        out_dir=args.out_dir,
        price_fill="strict" if args.strict_prices else "fill",
    )
    for name in ("parts", "demand", "prices", "safety_stock"):
        value = getattr(args, name, None)
        if value is not None:
            setattr(cfg, name, value)
    if args.compute_safety_stock and args.safety_stock is None:
        cfg.safety_stock = None
    if hasattr(args, "semantics"):
        cfg.semantics = CostSemantics(args.semantics)
    return cfg


def _out(args, name: str) -> Path:
    path = Path(args.out) if getattr(args, "out", None) else args.out_dir / name
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def cmd_validate(args) -> int:
    instance = load_instance(_config(args), check=False)
    report = validate(instance)
    print(f"{instance.n_parts} parts, horizon {instance.horizon}")
    print(report)
    return 0 if report.ok else 1


def cmd_safety_stock(args) -> int:
    cfg = _config(args)
    parts = read_parts(cfg.parts)
    horizon = args.horizon
    if horizon is None:
        horizon = max((int(r["period"]) for _, r in _rows(cfg.demand, ["part_id", "period", "demand"])), default=0)
    policy = ServicePolicy(service_level=args.service_level, z_value=args.z)
    grid = safety_stock_grid(parts, horizon, policy)
    path = _out(args, "safety_stock.csv")
    write_safety_stock(grid, parts, path)
    print(f"z = {policy.z_value:.4f}; wrote {len(parts)} parts x {horizon} periods to {path}")
    return 0


def cmd_export_lp(args) -> int:
    model = build(load_instance(_config(args)), per_part_big_m=args.per_part_big_m)
    path = _out(args, "model.lp")
    export_lp(model, path)
    print(f"{model.n_vars} variables, {model.n_rows} rows, big-M {model.big_m:g}; wrote {path}")
    return 0


def cmd_solve(args) -> int:
    cfg = _config(args)
    instance = load_instance(cfg)
    plan = solve(instance, cfg.semantics)
    report = check_plan(instance, plan, cfg.semantics)
    if not report.ok:
        print(report, file=sys.stderr)
        return 1
    path = _out(args, "plan.csv")
    write_plan(plan, path)
    c = report.cost
    print(f"{cfg.semantics.value}: {len(plan)} assignments, total {c.total:.2f} "
          f"(purchasing {c.purchasing:.2f}, ordering {c.ordering:.2f}, holding {c.holding:.2f}); wrote {path}")
    return 0


def _reference(source: str | None):
    if source is None:
        return None, None
    if source == "case-study":
        return case_study_reference()
    per_part, grand = {}, None
    for _, row in _rows(source, ["part_id", "total_cost"]):
        if row["part_id"] == "total":
            grand = float(row["total_cost"])
        else:
            per_part[int(row["part_id"])] = float(row["total_cost"])
    return per_part, grand


def cmd_report(args) -> int:
    cfg = _config(args)
    instance = load_instance(cfg)
    plan = read_plan(args.plan)
    check = check_plan(instance, plan, cfg.semantics)
    if not check.ok:
        print(check, file=sys.stderr)
        return 1
    chunks = []
    for pid in args.part or []:
        if pid not in instance.index_of:
            print(f"error: part {pid} is not in the instance", file=sys.stderr)
            return 1
        part = render_part_report(instance, plan, pid, cfg.semantics)
        chunks.append(part.to_csv() if args.format == "csv" else part.to_text())
    per_part, grand = _reference(args.reference)
    total = render_total_report(instance, plan, cfg.semantics, per_part, grand)
    chunks.append(total.to_csv() if args.format == "csv" else total.to_text())
    text = "\n".join(chunks)
    if args.out:
        _out(args, "report").write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lotsizer", description="Multi-item uncapacitated lot sizing.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check an instance for data and serviceability errors")
    _input_args(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("safety-stock", help="compute safety stock from sigma, lead time and service level")
    _input_args(p)
    p.add_argument("--horizon", type=int, help="number of periods (default: taken from demand.csv)")
    p.add_argument("--out", type=Path, help="output CSV (default: OUT_DIR/safety_stock.csv)")
    p.set_defaults(func=cmd_safety_stock)

    p = sub.add_parser("export-lp", help="write the MIP in LP format")
    _input_args(p)
    p.add_argument("--out", type=Path, help="output file (default: OUT_DIR/model.lp)")
    p.add_argument("--per-part-big-m", action="store_true", help="use each part's own big-M in linking rows")
    p.set_defaults(func=cmd_export_lp)

    p = sub.add_parser("solve", help="solve to optimality and write plan.csv")
    _input_args(p)
    p.add_argument("--semantics", choices=[s.value for s in CostSemantics], default="pairwise")
    p.add_argument("--out", type=Path, help="output plan (default: OUT_DIR/plan.csv)")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("report", help="render schedule and cost tables for a plan")
    _input_args(p)
    p.add_argument("--plan", type=Path, required=True)
    p.add_argument("--format", choices=["csv", "text"], default="text")
    p.add_argument("--semantics", choices=[s.value for s in CostSemantics], default="pairwise")
    p.add_argument("--part", type=int, action="append", help="also print the per-period schedule of this part")
    p.add_argument("--reference", help="CSV of part_id,total_cost to compare against, or 'case-study'")
    p.add_argument("--out", type=Path, help="write the report here instead of stdout")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
