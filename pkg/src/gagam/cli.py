"""Command line entry point: ``gagam evolve|reproduce|baseline|report|inspect|export-data``.

Exit codes: 0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import report
from .complexity import complexity_penalty
from .dataset import CALIFORNIA_FEATURES, CALIFORNIA_TARGET, DataError, load_csv, make_split
from .experiment import REFERENCE_SEEDS, fit_baselines, run_seed, write_seed_outputs
from .nsga2 import GaConfig

log = logging.getLogger("gagam")

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _positive_int(s: str) -> int:
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {s}")
    return v


def _fraction(s: str) -> float:
    v = float(s)
    if not 0.0 < v < 1.0:
        raise argparse.ArgumentTypeError(f"expected a value in (0, 1), got {s}")
    return v


def _default_out() -> str:
    return os.environ.get("GAGGAM_OUT", "out")


def _add_data_args(p):
    p.add_argument("--data", required=True, help="CSV file with a header row")
    p.add_argument("--target", default=CALIFORNIA_TARGET, help="target column name (default %(default)s)")
    p.add_argument("--test-frac", type=_fraction, default=0.2, help="held-out test fraction (default %(default)s)")
    p.add_argument("--out", default=None, help="output directory (default $GAGGAM_OUT or ./out)")


def _add_ga_args(p):
    p.add_argument("--pop", type=_positive_int, default=80, help="population size (default %(default)s)")
    p.add_argument("--gens", type=int, default=50, help="generations (default %(default)s)")
    p.add_argument("--kfolds", type=_positive_int, default=5, help="CV folds (default %(default)s)")
    p.add_argument("--crossover", type=float, default=0.3, help="crossover probability (default %(default)s)")
    p.add_argument("--workers", type=_positive_int, default=1, help="concurrent model fits")
    p.add_argument("--trace", default=None, help="write per-generation JSON lines to this file")
    p.add_argument("--include-covariance", action="store_true", help="store covariances in models.json")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gagam", description="Evolve GAM structures with NSGA-II.")
    parser.add_argument("-q", "--quiet", action="store_true", help="suppress progress output")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("evolve", help="run the full pipeline for one seed")
    _add_data_args(p)
    _add_ga_args(p)
    p.add_argument("--seed", type=int, required=True)

    p = sub.add_parser("reproduce", help="run every reference seed and write both tables")
    _add_data_args(p)
    _add_ga_args(p)
    p.add_argument("--seeds", type=int, nargs="+", default=list(REFERENCE_SEEDS))

    p = sub.add_parser("baseline", help="fit only the all-spline GAM and the regression tree")
    _add_data_args(p)
    p.add_argument("--seed", type=int, required=True)

    p = sub.add_parser("report", help="rebuild the tables from <out>/<seed>/results.json files")
    p.add_argument("--out", default=None)

    p = sub.add_parser("inspect", help="pretty-print a chromosome, model or results JSON file")
    p.add_argument("path")

    p = sub.add_parser("export-data", help="write California Housing to CSV (needs scikit-learn and network)")
    p.add_argument("path")
    return parser


def _config(args, seed: int) -> GaConfig:
    try:
        return GaConfig(
            population_size=args.pop,
            generations=args.gens,
            crossover_prob=args.crossover,
            k_folds=args.kfolds,
            seed=seed,
            workers=args.workers,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _banner(config: GaConfig, args) -> None:
    echo = {**config.to_dict(), "test_fraction": args.test_frac, "data": str(args.data), "target": args.target}
    print("config " + json.dumps(echo, sort_keys=True), file=sys.stderr)


def _out(args) -> Path:
    return Path(args.out or _default_out())


def cmd_evolve(args) -> int:
    config = _config(args, args.seed)
    _banner(config, args)
    data = load_csv(args.data, args.target)
    out = _out(args)
    out.mkdir(parents=True, exist_ok=True)
    result = run_seed(data, config, args.test_frac, trace_path=args.trace)
    d = write_seed_outputs(result, out, args.include_covariance)
    _print_selection(result.record)
    print(f"wrote {d}", file=sys.stderr)
    return EXIT_OK


def cmd_reproduce(args) -> int:
    configs = [_config(args, s) for s in args.seeds]
    data = load_csv(args.data, args.target)
    out = _out(args)
    out.mkdir(parents=True, exist_ok=True)
    records = []
    for config in configs:
        _banner(config, args)
        trace = None if args.trace is None else f"{args.trace}.{config.seed}"
        result = run_seed(data, config, args.test_frac, trace_path=trace)
        write_seed_outputs(result, out, args.include_covariance)
        _print_selection(result.record)
        records.append(result.record)
    report.emit_tables(records, out)
    print((out / "tables.md").read_text(), file=sys.stderr)
    return EXIT_OK


def cmd_baseline(args) -> int:
    data = load_csv(args.data, args.target)
    split = make_split(data.n_rows, args.test_frac, args.seed)
    gam, tree = fit_baselines(data, split)
    cx = complexity_penalty(gam)
    summary = {
        "seed": args.seed,
        "baseline_gam_test_rmse": report.score_on_test(gam, data, split),
        "baseline_gam_penalty": cx.penalty,
        "baseline_gam_uncertainty": cx.uncertainty,
        "cart_test_rmse": report.score_on_test(tree, data, split),
        "cart_depth": tree.depth(),
        "cart_leaves": tree.n_leaves(),
    }
    d = _out(args) / str(args.seed)
    d.mkdir(parents=True, exist_ok=True)
    report.write_json(d / "baseline.json", summary)
    print(json.dumps(summary, indent=2))
    return EXIT_OK


def cmd_report(args) -> int:
    out = _out(args)
    files = sorted(out.glob("*/results.json"))
    records = [r for f in files for r in report.read_records(f)]
    if not records:
        raise DataError(f"no <seed>/results.json files under {out}")
    order = {s: i for i, s in enumerate(REFERENCE_SEEDS)}
    records.sort(key=lambda r: (order.get(r.seed, len(order)), r.seed))
    report.emit_tables(records, out)
    print((out / "tables.md").read_text())
    return EXIT_OK


def _describe_terms(terms, names=None) -> list[str]:
    lines = []
    for j, t in enumerate(terms):
        name = names[j] if names and j < len(names) else f"x{j}"
        desc = t["kind"]
        if t["kind"] == "spline":
            desc += f"  n_splines={t['n_splines']}  lambda={t['lambda']:.6g}"
        lines.append(f"  {name:<12} {desc}{'  scaled' if t.get('scale') and t['kind'] != 'none' else ''}")
    return lines


def cmd_inspect(args) -> int:
    path = Path(args.path)
    if not path.is_file():
        raise DataError(f"no such file: {path}")
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise DataError(f"{path} is not JSON: {exc}") from None
    lines = []
    if isinstance(doc, list) and doc and "kind" in doc[0]:
        lines += ["chromosome"] + _describe_terms(doc)
    elif isinstance(doc, dict) and "spec" in doc:
        lines += [f"model  sigma2={doc['sigma2']:.6g}  edf={doc['edf']:.3f}"] + _describe_terms(doc["spec"])
    elif isinstance(doc, dict) and all(isinstance(v, dict) and "spec" in v for v in doc.values()):
        for name, m in doc.items():
            lines += [f"{name}  sigma2={m['sigma2']:.6g}  edf={m['edf']:.3f}"] + _describe_terms(m["spec"])
    elif isinstance(doc, (dict, list)):
        for rec in report.read_records(path):
            names = rec.config.get("feature_names")
            lines.append(f"seed {rec.seed}  baseline test rmse {rec.baseline_gam_test_rmse:.4f}  "
                         f"penalty {rec.baseline_gam_penalty:.4f}  tree test rmse {rec.cart_test_rmse:.4f}")
            for name, s in rec.selection.items():
                lines.append(f"{name}: cv rmse {s.cv_rmse:.4f}  penalty {s.penalty:.4f}  test rmse {s.test_rmse:.4f}")
                lines += _describe_terms(s.chromosome, names)
    else:
        raise DataError(f"unrecognized JSON document in {path}")
    print("\n".join(lines))
    return EXIT_OK


def cmd_export_data(args) -> int:
    try:
        from sklearn.datasets import fetch_california_housing

        bunch = fetch_california_housing(as_frame=True)
    except Exception as exc:  # sklearn missing or no network
        raise DataError(
            f"could not fetch California Housing ({exc}). On a machine with network access run:\n"
            "  python -c \"from sklearn.datasets import fetch_california_housing as f; "
            "f(as_frame=True).frame.to_csv('california.csv', index=False)\"\n"
            f"The CSV must have the columns {', '.join(CALIFORNIA_FEATURES)}, {CALIFORNIA_TARGET}."
        ) from None
    path = Path(args.path)
    path.parent.mkdir(parents=True, exist_ok=True)
    bunch.frame.to_csv(path, index=False)
    print(f"wrote {len(bunch.frame)} rows to {path}")
    return EXIT_OK


COMMANDS = {
    "evolve": cmd_evolve,
    "reproduce": cmd_reproduce,
    "baseline": cmd_baseline,
    "report": cmd_report,
    "inspect": cmd_inspect,
    "export-data": cmd_export_data,
}


def _print_selection(record: report.RunRecord) -> None:
    for name, s in record.selection.items():
        log.info("%-16s cv rmse %.4f  penalty %.4f  test rmse %.4f", name, s.cv_rmse, s.penalty, s.test_rmse)
    log.info("%-16s test rmse %.4f  penalty %.4f", "baseline_gam", record.baseline_gam_test_rmse,
             record.baseline_gam_penalty)
    log.info("%-16s test rmse %.4f", "cart", record.cart_test_rmse)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError(parser.format_usage().strip())
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(
        level=logging.WARNING if args.quiet else logging.INFO,
        format="%(message)s",
        stream=sys.stderr,
        force=True,
    )
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
