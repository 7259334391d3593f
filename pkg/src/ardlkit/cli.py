"""Command-line entry point.

Exit status: 0 on success, 1 on configuration/input errors, 2 when an
estimation step fails.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from .errors import (
    ArdlKitError,
    ConfigError,
    DomainError,
    IntegrityError,
    ParseError,
    SchemaError,
)
from .pipeline import (
    ModelDef,
    RunConfig,
    RunReport,
    bundled_config_path,
    emit_report,
    load_config,
    prepare_data,
    render_text,
    run_model,
    run_pipeline,
    unit_root_table,
    _provenance,
    _render_unit_roots,
)

EXIT_OK, EXIT_CONFIG, EXIT_ESTIMATION = 0, 1, 2
_CONFIG_ERRORS = (ConfigError, SchemaError, ParseError, IntegrityError, DomainError)


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # usage errors are configuration errors
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _global_flags() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("global options")
    g.add_argument("--input", type=Path, default=argparse.SUPPRESS, help="data file (CSV, first column year)")
    g.add_argument("--config", type=Path, default=argparse.SUPPRESS, help="run configuration (default: bundled replication config)")
    g.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="master seed recorded in the report")
    g.add_argument("--out", type=Path, default=argparse.SUPPRESS, help="output directory")
    g.add_argument("--plots", type=Path, default=argparse.SUPPRESS, help="directory for CUSUM/CUSUMSQ CSV files")
    g.add_argument("--workers", type=int, default=argparse.SUPPRESS, help="threads for concurrent models")
    return p


def _model_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--model", help="model id from the config (instead of --dep/--regs)")
    p.add_argument("--dep", help="dependent variable")
    p.add_argument("--regs", help="comma-separated regressors")
    p.add_argument("--pmax", type=int)
    p.add_argument("--qmax", type=int)
    p.add_argument("--criterion", choices=["aic", "sic", "bic"])
    p.add_argument("--case", choices=["I", "II", "III", "IV", "V"])


def build_parser() -> argparse.ArgumentParser:
    common = _global_flags()
    parser = _Parser(prog="ardlkit", description=__doc__.splitlines()[0], parents=[common])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("unitroot", parents=[common], help="ADF/PP table for selected variables")
    p.add_argument("--vars", help="comma-separated variables (default: all)")
    p.add_argument("--det", choices=["constant", "trend", "both"], default="both")
    p.add_argument("--tests", default="adf,pp")
    p.add_argument("--diff", default="0,1", help="difference orders to report, e.g. 0,1")

    p = sub.add_parser("bounds", parents=[common], help="lag selection and bounds F test")
    _model_flags(p)
    p = sub.add_parser("estimate", parents=[common], help="bounds test plus short/long-run tables")
    _model_flags(p)
    p = sub.add_parser("diagnose", parents=[common], help="diagnostic block for one configured model")
    p.add_argument("--fit", required=True, help="model id from the config")
    p = sub.add_parser("replicate", parents=[common], help="run configured models end to end")
    p.add_argument("--model", default="all", help="model id or 'all'")
    p = sub.add_parser("report", parents=[common], help="render a saved JSON report as text")
    p.add_argument("--from", dest="source", type=Path, required=True, help="report.json to render")
    return parser


def _config(args: argparse.Namespace) -> RunConfig:
    cfg = load_config(getattr(args, "config", None) or bundled_config_path())
    changes = {}
    if hasattr(args, "input"):
        changes["input"] = args.input
    if hasattr(args, "seed"):
        changes["master_seed"] = args.seed
    if hasattr(args, "workers"):
        changes["workers"] = args.workers
    if hasattr(args, "out"):
        changes["output"] = args.out
    if hasattr(args, "plots"):
        changes["plots"] = args.plots
    for key in ("pmax", "qmax", "criterion", "case"):
        v = getattr(args, key, None)
        if v is not None:
            changes[key] = v
    return dataclasses.replace(cfg, **changes)


def _adhoc_model(args: argparse.Namespace, cfg: RunConfig) -> ModelDef:
    if args.model:
        return cfg.model(args.model)
    if not args.dep or not args.regs:
        raise ConfigError("give --model or both --dep and --regs")
    regs = tuple(r.strip() for r in args.regs.split(",") if r.strip())
    return ModelDef("cli", args.dep, regs)


def _single_model_report(cfg: RunConfig, m: ModelDef) -> RunReport:
    cfg = dataclasses.replace(cfg, models=(m,))
    ds = prepare_data(cfg)
    names = [n for n in ds.names if n in (m.dep,) + m.regressors]
    ur = unit_root_table(ds, cfg, names)
    entry, paths = run_model(m, ds, cfg, ur)
    return RunReport(
        "", cfg.echo(), _provenance(cfg.input), ur, [entry], {m.id: paths} if paths else {}
    )


def _finish(report: RunReport, cfg: RunConfig, text: str) -> int:
    sys.stdout.write(text)
    if cfg.output is not None:
        emit_report(report, cfg.output, cfg.plots)
    elif cfg.plots is not None:
        emit_report(report, cfg.plots, cfg.plots)
    bad = [m for m in report.models if m.get("status") != "ok"]
    for m in bad:
        print(f"model {m['id']}: {m.get('error')}", file=sys.stderr)
    return EXIT_ESTIMATION if bad else EXIT_OK


def cmd_unitroot(args: argparse.Namespace) -> int:
    cfg = _config(args)
    dets = {"constant": ("constant",), "trend": ("constant_trend",), "both": ("constant", "constant_trend")}
    tests = tuple(t.strip().lower() for t in args.tests.split(",") if t.strip())
    cfg = dataclasses.replace(cfg, unitroot_det=dets[args.det], unitroot_tests=tests)
    names = [v.strip() for v in args.vars.split(",")] if args.vars else None
    if names:
        cfg = dataclasses.replace(cfg, models=(ModelDef("vars", names[0], tuple(names[1:])),))
    from .pipeline import validate_config

    validate_config(cfg)
    ds = prepare_data(cfg)
    try:
        diffs = {int(d) for d in args.diff.split(",")}
    except ValueError:
        raise ConfigError(f"--diff {args.diff!r} must list 0 and/or 1") from None
    if not diffs <= {0, 1}:
        raise ConfigError("--diff accepts 0 and/or 1")
    rows = [r for r in unit_root_table(ds, cfg, names) if r["diff"] in diffs]
    sys.stdout.write("\n".join(_render_unit_roots(rows)) + "\n")
    if cfg.output is not None:
        cfg.output.mkdir(parents=True, exist_ok=True)
        (cfg.output / "unitroot.json").write_text(
            json.dumps(rows, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )
    errors = [r for r in rows if "error" in r]
    return EXIT_ESTIMATION if errors else EXIT_OK


def cmd_bounds(args: argparse.Namespace, full: bool = False) -> int:
    cfg = _config(args)
    report = _single_model_report(cfg, _adhoc_model(args, cfg))
    text = render_text(report)
    if not full:
        m = report.models[0]
        if m.get("status") == "ok":
            b = m["bounds"]
            lines = [
                f"spec: ARDL({', '.join(map(str, m['order']))})  {m['dep']} on {', '.join(m['regressors'])}",
                f"F = {b['F']:.4f}{b['stars']}  (k = {b['k']}, case {b['case']}, {b['restrictions']} restrictions)",
            ]
            lines += [
                f"  {r['level'] * 100:g}%: I0 = {r['i0']:.2f}  I1 = {r['i1']:.2f}  -> {r['verdict']}"
                for r in b["rows"]
            ]
            text = "\n".join(lines) + "\n"
        else:
            text = ""
    return _finish(report, cfg, text)


def cmd_diagnose(args: argparse.Namespace) -> int:
    cfg = _config(args)
    report = _single_model_report(cfg, cfg.model(args.fit))
    m = report.models[0]
    lines = [f"Diagnostics for model {m['id']} (LM lags {cfg.lm_lags}, {cfg.heteroskedasticity.upper()})"]
    if m.get("status") == "ok":
        for key, d in m["diagnostics"].items():
            df = ",".join(map(str, d["df"]))
            lines.append(f"  {key:<20} stat = {d['statistic']:.4f}  df = ({df})  p = {d['p_value']:.4f}")
        for key, v in m["stability"].items():
            lines.append(f"  {key:<20} {v}")
        for key, err in m.get("diagnostic_errors", {}).items():
            lines.append(f"  {key:<20} not computed: {err}")
    return _finish(report, cfg, "\n".join(lines) + "\n")


def cmd_replicate(args: argparse.Namespace) -> int:
    cfg = _config(args)
    ids = None if args.model == "all" else [args.model]
    report = run_pipeline(cfg, ids)
    return _finish(report, cfg, render_text(report))


def cmd_report(args: argparse.Namespace) -> int:
    try:
        report = RunReport.from_json(args.source.read_text(encoding="utf-8"))
    except (OSError, ValueError, KeyError) as exc:
        raise ConfigError(f"cannot read report {args.source}: {exc}") from None
    text = render_text(report)
    out = getattr(args, "out", None)
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
        (out / "report.txt").write_text(text, encoding="utf-8")
    sys.stdout.write(text)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {
        "unitroot": cmd_unitroot,
        "bounds": cmd_bounds,
        "estimate": lambda a: cmd_bounds(a, full=True),
        "diagnose": cmd_diagnose,
        "replicate": cmd_replicate,
        "report": cmd_report,
    }
    try:
        return handlers[args.command](args)
    except _CONFIG_ERRORS as exc:
        print(f"ardlkit: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ArdlKitError as exc:
        print(f"ardlkit: estimation error: {exc}", file=sys.stderr)
        return EXIT_ESTIMATION


if __name__ == "__main__":
    sys.exit(main())
