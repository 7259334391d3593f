"""End-to-end driver: config -> unit roots -> lag selection -> bounds test ->
estimation -> diagnostics, plus report serialisation and rendering."""

from __future__ import annotations

import configparser
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any


from . import __version__
from .ardl import (
    CASES,
    bounds_f_test,
    case_deterministic,
    coef_stars,
    fit_ardl,
    long_run,
    select_lags,
    to_ecm,
)
from .diagnostics import run_diagnostics
from .errors import ArdlKitError, ConfigError, SchemaError
from .tsdata import Dataset, Deterministic, TransformSpec, load_dataset, transform
from .unitroot import adf_test, pp_test

__all__ = [
    "RunConfig",
    "ModelDef",
    "RunReport",
    "load_config",
    "bundled_config_path",
    "prepare_data",
    "unit_root_table",
    "run_model",
    "run_pipeline",
    "emit_report",
    "render_text",
]

_SCHEMA: dict[str, dict[str, str]] = {
    "run": {"input": "path", "master_seed": "int", "workers": "int", "output": "path", "plots": "path"},
    "unitroot": {"tests": "list", "det": "list", "adf_criterion": "str", "pp_bandwidth": "int"},
    "selection": {"pmax": "int", "qmax": "int", "criterion": "str"},
    "bounds": {"case": "str"},
    "diagnostics": {"lm_lags": "int", "heteroskedasticity": "str", "reset_power": "int"},
    "model": {"dep": "str", "regressors": "list"},
}


@dataclass(frozen=True)
class ModelDef:
    id: str
    dep: str
    regressors: tuple[str, ...]


@dataclass(frozen=True)
class RunConfig:
    input: Path
    transforms: dict[str, str] = field(default_factory=dict)
    models: tuple[ModelDef, ...] = ()
    pmax: int = 2
    qmax: int = 2
    criterion: str = "aic"
    case: str = "III"
    unitroot_tests: tuple[str, ...] = ("adf", "pp")
    unitroot_det: tuple[str, ...] = ("constant", "constant_trend")
    adf_criterion: str = "sic"
    pp_bandwidth: int | None = None
    lm_lags: int = 2
    heteroskedasticity: str = "bpg"
    reset_power: int = 2
    master_seed: int = 0
    workers: int = 1
    output: Path | None = None
    plots: Path | None = None

    def echo(self) -> dict[str, Any]:
        """Plain-data view for the report header."""
        return {
            "input": self.input.name,
            "transforms": dict(sorted(self.transforms.items())),
            "models": [
                {"id": m.id, "dep": m.dep, "regressors": list(m.regressors)} for m in self.models
            ],
            "pmax": self.pmax,
            "qmax": self.qmax,
            "criterion": self.criterion,
            "case": self.case,
            "unitroot_tests": list(self.unitroot_tests),
            "unitroot_det": list(self.unitroot_det),
            "adf_criterion": self.adf_criterion,
            "pp_bandwidth": self.pp_bandwidth,
            "lm_lags": self.lm_lags,
            "heteroskedasticity": self.heteroskedasticity,
            "reset_power": self.reset_power,
            "master_seed": self.master_seed,
        }

    def model(self, model_id: str) -> ModelDef:
        for m in self.models:
            if m.id == str(model_id):
                return m
        raise ConfigError(f"no model {model_id!r} in config (have {[m.id for m in self.models]})")


def bundled_config_path() -> Path:
    return Path(str(resources.files("ardlkit") / "data" / "replicate.ini"))


def _convert(section: str, key: str, kind: str, raw: str, base: Path) -> Any:
    raw = raw.strip()
    try:
        if kind == "int":
            return int(raw)
        if kind == "list":
            return tuple(x.strip() for x in raw.split(",") if x.strip())
        if kind == "path":
            p = Path(raw)
            return p if p.is_absolute() else base / p
        return raw
    except ValueError:
        raise ConfigError(f"[{section}] {key} = {raw!r} is not a valid {kind}") from None


def load_config(path: str | Path) -> RunConfig:
    """Parse an INI-style run configuration; unknown sections or keys are errors."""
    path = Path(path)
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=None)
    parser.optionxform = str  # variable names are case sensitive
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    except configparser.Error as exc:
        raise ConfigError(f"malformed config {path}: {exc}") from None
    base = path.parent
    values: dict[str, Any] = {}
    transforms: dict[str, str] = {}
    models: list[ModelDef] = []
    for section in parser.sections():
        items = dict(parser.items(section))
        if section == "transforms":
            for var, spec in items.items():
                try:
                    TransformSpec.parse(spec)
                except ArdlKitError as exc:
                    raise ConfigError(f"[transforms] {var}: {exc}") from None
                transforms[var] = spec.strip()
            continue
        kind = "model" if section.startswith("model.") else section
        if kind not in _SCHEMA:
            raise ConfigError(f"unknown config section [{section}]")
        schema = _SCHEMA[kind]
        for key in items:
            if key not in schema:
                raise ConfigError(f"unknown key {key!r} in [{section}]")
        conv = {k: _convert(section, k, schema[k], v, base) for k, v in items.items()}
        if kind == "model":
            mid = section.split(".", 1)[1]
            if "dep" not in conv or "regressors" not in conv:
                raise ConfigError(f"[{section}] needs exactly one dep and a regressors list")
            if not conv["regressors"]:
                raise ConfigError(f"[{section}] regressors list is empty")
            models.append(ModelDef(mid, conv["dep"], conv["regressors"]))
            continue
        for k, v in conv.items():
            values[f"{kind}.{k}"] = v
    if "run.input" not in values:
        raise ConfigError("[run] input is required")
    cfg = RunConfig(
        input=values["run.input"],
        transforms=transforms,
        models=tuple(models),
        pmax=values.get("selection.pmax", 2),
        qmax=values.get("selection.qmax", 2),
        criterion=values.get("selection.criterion", "aic").lower(),
        case=values.get("bounds.case", "III").upper(),
        unitroot_tests=tuple(t.lower() for t in values.get("unitroot.tests", ("adf", "pp"))),
        unitroot_det=values.get("unitroot.det", ("constant", "constant_trend")),
        adf_criterion=values.get("unitroot.adf_criterion", "sic").lower(),
        pp_bandwidth=values.get("unitroot.pp_bandwidth"),
        lm_lags=values.get("diagnostics.lm_lags", 2),
        heteroskedasticity=values.get("diagnostics.heteroskedasticity", "bpg").lower(),
        reset_power=values.get("diagnostics.reset_power", 2),
        master_seed=values.get("run.master_seed", 0),
        workers=values.get("run.workers", 1),
        output=values.get("run.output"),
        plots=values.get("run.plots"),
    )
    validate_config(cfg)
    return cfg


def validate_config(cfg: RunConfig) -> None:
    if cfg.pmax < 1:
        raise ConfigError("[selection] pmax must be >= 1")
    if cfg.qmax < 0:
        raise ConfigError("[selection] qmax must be >= 0")
    if cfg.criterion not in ("aic", "sic", "bic"):
        raise ConfigError(f"[selection] criterion {cfg.criterion!r} is not aic or sic")
    if cfg.case not in CASES:
        raise ConfigError(f"[bounds] case {cfg.case!r} is not one of {', '.join(CASES)}")
    for t in cfg.unitroot_tests:
        if t not in ("adf", "pp"):
            raise ConfigError(f"[unitroot] unknown test {t!r}")
    for d in cfg.unitroot_det:
        try:
            if Deterministic.parse(d) is Deterministic.NONE:
                raise ValueError
        except (ArdlKitError, ValueError):
            raise ConfigError(f"[unitroot] det {d!r} must be constant or constant_trend") from None
    if cfg.heteroskedasticity not in ("bpg", "arch"):
        raise ConfigError(f"[diagnostics] heteroskedasticity {cfg.heteroskedasticity!r} is not bpg or arch")
    if cfg.lm_lags < 1 or cfg.reset_power < 2:
        raise ConfigError("[diagnostics] need lm_lags >= 1 and reset_power >= 2")
    ids = [m.id for m in cfg.models]
    if len(set(ids)) != len(ids):
        raise ConfigError("duplicate model ids")
    for m in cfg.models:
        names = (m.dep,) + m.regressors
        if len(set(names)) != len(names):
            raise ConfigError(f"[model.{m.id}] repeats a variable")


def prepare_data(cfg: RunConfig) -> Dataset:
    """Load the input and apply the per-variable transforms."""
    needed = sorted({v for m in cfg.models for v in (m.dep,) + m.regressors})
    try:
        raw = load_dataset(cfg.input, needed)
    except SchemaError as exc:
        raise SchemaError(f"{exc} (referenced by the run config)") from None
    series = []
    for name in raw.names:
        s = raw[name]
        spec = cfg.transforms.get(name)
        series.append(transform(s, spec) if spec else s)
    return Dataset(tuple(series))


def _f(x: float) -> float | None:
    x = float(x)
    return x if math.isfinite(x) else None


def unit_root_table(ds: Dataset, cfg: RunConfig, names: list[str] | None = None) -> list[dict]:
    """One row per (variable, deterministic spec, test, difference order)."""
    rows = []
    for name in list(ds.names) if names is None else names:
        base = ds[name]
        for diff in (0, 1):
            s = base if diff == 0 else transform(base, "diff")
            for det in cfg.unitroot_det:
                det = Deterministic.parse(det)
                for test in cfg.unitroot_tests:
                    row: dict[str, Any] = {
                        "variable": name,
                        "diff": diff,
                        "det": det.value,
                        "test": test.upper(),
                    }
                    try:
                        r = (
                            adf_test(s, det, criterion=cfg.adf_criterion)
                            if test == "adf"
                            else pp_test(s, det, bandwidth=cfg.pp_bandwidth)
                        )
                    except ArdlKitError as exc:
                        row.update(error=f"{type(exc).__name__}: {exc}")
                    else:
                        row.update(
                            statistic=_f(r.statistic),
                            lags=r.lags,
                            effective_T=r.effective_T,
                            crit={f"{k:g}": _f(v) for k, v in sorted(r.crit.items())},
                            stars=r.stars,
                            reject_5pct=bool(r.rejects(0.05)),
                        )
                    rows.append(row)
    return rows


def integration_order(rows: list[dict], name: str) -> int | None:
    """0, 1 or 2 from the unit-root table; stationary means any test rejects at 5%."""
    def stationary(diff: int) -> bool:
        return any(
            r.get("reject_5pct", False) for r in rows if r["variable"] == name and r["diff"] == diff
        )

    if stationary(0):
        return 0
    if stationary(1):
        return 1
    return 2


def _coef_table(labels, coefs, ses, pvals) -> dict[str, dict]:
    return {
        l: {"coef": _f(b), "se": _f(s), "p_value": _f(p), "stars": coef_stars(p)}
        for l, b, s, p in zip(labels, coefs, ses, pvals)
    }


def run_model(m: ModelDef, ds: Dataset, cfg: RunConfig, ur_rows: list[dict]) -> tuple[dict, dict]:
    """Full sequence for one model.  Returns (report entry, stability paths)."""
    out: dict[str, Any] = {"id": m.id, "dep": m.dep, "regressors": list(m.regressors)}
    paths: dict[str, Any] = {}
    orders = {v: integration_order(ur_rows, v) for v in (m.dep,) + m.regressors}
    out["integration_order"] = orders
    i2 = [v for v, o in orders.items() if o == 2]
    if i2:
        out["status"] = "aborted"
        out["error"] = (
            f"I(2) variables not admissible in a bounds test: {', '.join(i2)} "
            "(level and first difference both nonstationary at 5%)"
        )
        return out, paths
    try:
        det = case_deterministic(cfg.case)
        spec = select_lags(ds, m.dep, m.regressors, cfg.pmax, cfg.qmax, cfg.criterion, det)
        out["order"] = list(spec.order)
        fit = fit_ardl(spec, ds)
        out["effective_span"] = list(fit.effective_span)
        out["nobs"] = fit.ols.nobs
        b = bounds_f_test(spec, ds, cfg.case)
        out["bounds"] = {
            "F": _f(b.F),
            "k": b.k,
            "case": b.case,
            "restrictions": b.num_restrictions,
            "stars": b.stars,
            "rows": [
                {"level": r.level, "i0": r.i0, "i1": r.i1, "verdict": r.verdict} for r in b.rows
            ],
        }
        lr = long_run(fit)
        out["long_run"] = _coef_table(lr.labels, lr.theta, lr.se, lr.pvalues)
        e = to_ecm(fit, cfg.case)
        o = e.ols
        out["short_run"] = _coef_table(o.column_labels, o.coefficients, o.bse, o.pvalues)
        out["ect"] = {
            "coef": _f(e.ect),
            "se": _f(e.ect_se),
            "p_value": _f(e.ect_pvalue),
            "stars": coef_stars(e.ect_pvalue),
            "stable_adjustment": e.stable_adjustment,
            "identity_gap": _f(e.identity_gap),
        }
        d = run_diagnostics(fit, cfg.lm_lags, cfg.heteroskedasticity, cfg.reset_power)
        out["diagnostics"] = {
            k: {"statistic": _f(t.statistic), "df": list(t.df), "p_value": _f(t.p_value)}
            for k, t in d.tests.items()
        }
        out["stability"] = {}
        for kind, path in (("cusum", d.cusum), ("cusumsq", d.cusumsq)):
            out["stability"][kind] = path.verdict if path is not None else None
            if path is not None:
                paths[kind] = [list(r) for r in path.rows()]
        if d.errors:
            out["diagnostic_errors"] = dict(sorted(d.errors.items()))
        out["status"] = "ok"
    except ArdlKitError as exc:
        out["status"] = "error"
        out["error"] = f"{type(exc).__name__}: {exc}"
    return out, paths


@dataclass
class RunReport:
    version: str
    config: dict[str, Any]
    provenance: dict[str, Any] | None
    unit_roots: list[dict]
    models: list[dict]
    plots: dict[str, dict[str, list]] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "toolkit": {"name": "ardlkit", "version": self.version},
            "config": self.config,
            "provenance": self.provenance,
            "unit_roots": self.unit_roots,
            "models": self.models,
            "plots": self.plots,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> RunReport:
        return cls(
            version=d["toolkit"]["version"],
            config=d["config"],
            provenance=d.get("provenance"),
            unit_roots=d["unit_roots"],
            models=d["models"],
            plots=d.get("plots", {}),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, allow_nan=False) + "\n"

    @classmethod
    def from_json(cls, text: str) -> RunReport:
        return cls.from_dict(json.loads(text))


def _provenance(path: Path) -> dict | None:
    side = path.with_name("provenance.json")
    if side.is_file():
        with open(side, encoding="utf-8") as fh:
            return json.load(fh)
    return None


def run_pipeline(cfg: RunConfig, model_ids: list[str] | None = None, workers: int | None = None) -> RunReport:
    """Run every (or the selected) model.  Output is independent of ``workers``."""
    models = [cfg.model(i) for i in model_ids] if model_ids else list(cfg.models)
    ds = prepare_data(cfg)
    used = sorted({v for m in models for v in (m.dep,) + m.regressors}, key=list(ds.names).index)
    ur = unit_root_table(ds, cfg, used)
    workers = cfg.workers if workers is None else workers

    def one(m: ModelDef) -> tuple[dict, dict]:
        return run_model(m, ds, cfg, ur)

    if workers and workers > 1 and len(models) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(one, models))
    else:
        results = [one(m) for m in models]
    plots = {m.id: p for m, (_, p) in zip(models, results) if p}
    return RunReport(
        version=__version__,
        config=cfg.echo(),
        provenance=_provenance(cfg.input),
        unit_roots=ur,
        models=[r for r, _ in results],
        plots=plots,
    )


def _num(x: float | None, nd: int = 3) -> str:
    return "n/a" if x is None else f"{x:.{nd}f}"


def render_text(report: RunReport) -> str:
    """Plain-text tables: unit roots, bounds tests, coefficients and diagnostics."""
    lines: list[str] = []
    cfg = report.config
    lines.append(f"ardlkit {report.version}")
    prov = report.provenance or {}
    lines.append(f"input: {cfg.get('input')}  vintage: {prov.get('vintage', 'unknown')}")
    lines.append(
        f"selection: {cfg.get('criterion', '').upper()} pmax={cfg.get('pmax')} qmax={cfg.get('qmax')}"
        f"  bounds case: {cfg.get('case')}  LM lags: {cfg.get('lm_lags')}"
        f"  heteroskedasticity: {cfg.get('heteroskedasticity')}"
    )
    lines.append("")
    lines += _render_unit_roots(report.unit_roots)
    if report.models:
        lines += _render_bounds(report.models)
        lines += _render_coefficients(report.models)
    lines.append("Stars: *** 1%, ** 5%, * 10%.")
    return "\n".join(lines) + "\n"


def _render_unit_roots(rows: list[dict]) -> list[str]:
    if not rows:
        return []
    cols = sorted({(r["det"], r["test"], r["diff"]) for r in rows}, key=lambda c: (c[0] != "constant", c[0], c[1], c[2]))
    head = ["Variable"] + [
        f"{'C' if d == 'constant' else 'C+T'} {t} {'level' if k == 0 else 'diff'}" for d, t, k in cols
    ]
    table = {}
    for r in rows:
        cell = "err" if "error" in r else f"{r['statistic']:.3f}{r['stars']}"
        table.setdefault(r["variable"], {})[(r["det"], r["test"], r["diff"])] = cell
    out = ["Unit root tests (ADF lags by SIC, PP Bartlett bandwidth)"]
    widths = [max(8, max(len(v) for v in table))] + [max(14, len(h)) for h in head[1:]]
    out.append("  ".join(h.ljust(w) for h, w in zip(head, widths)))
    for var, cells in table.items():
        out.append(
            "  ".join([var.ljust(widths[0])] + [cells.get(c, "").ljust(w) for c, w in zip(cols, widths[1:])])
        )
    out.append("")
    return out


def _render_bounds(models: list[dict]) -> list[str]:
    out = ["Bounds test for cointegration"]
    out.append(
        f"{'Model':<6} {'Order':<22} {'F':>10}  {'5% I0':>6} {'5% I1':>6}  {'1% I0':>6} {'1% I1':>6}  Verdict (5%)"
    )
    for m in models:
        if m.get("status") != "ok":
            out.append(f"{m['id']:<6} {m.get('status')}: {m.get('error')}")
            continue
        b = m["bounds"]
        rows = {r["level"]: r for r in b["rows"]}
        order = "(" + ", ".join(map(str, m["order"])) + ")"
        f = f"{_num(b['F'])}{b['stars']}"
        out.append(
            f"{m['id']:<6} {order:<22} {f:>10}  {rows[0.05]['i0']:>6.2f} {rows[0.05]['i1']:>6.2f}"
            f"  {rows[0.01]['i0']:>6.2f} {rows[0.01]['i1']:>6.2f}  {rows[0.05]['verdict']}"
        )
    out.append("")
    return out


def _cell(entry: dict | None) -> str:
    if not entry:
        return ""
    return f"{_num(entry['coef'])}{entry['stars']}"


def _render_coefficients(models: list[dict]) -> list[str]:
    ok = [m for m in models if m.get("status") == "ok"]
    if not ok:
        return []
    ids = [m["id"] for m in ok]
    regs: list[str] = []
    for pos in range(max(len(m["regressors"]) for m in ok)):
        for m in ok:
            if pos < len(m["regressors"]) and m["regressors"][pos] not in regs:
                regs.append(m["regressors"][pos])
    w = 14
    hdr = "Regressor".ljust(12) + "".join(f"Model {i}".rjust(w) for i in ids)
    out = [f"Short-run coefficients (dependent: D({ok[0]['dep']}))", hdr]
    for r in regs:
        out.append(r.ljust(12) + "".join(_cell(m["short_run"].get(f"D({r})")).rjust(w) for m in ok))
    out.append("ECT(-1)".ljust(12) + "".join(_cell(m["ect"]).rjust(w) for m in ok))
    out.append("")
    out.append(f"Long-run coefficients (dependent: {ok[0]['dep']})")
    out.append(hdr)
    det_labels = [l for l in ("const", "trend") if any(l in m["long_run"] for m in ok)]
    for r in regs + det_labels:
        name = {"const": "C", "trend": "Trend"}.get(r, r)
        out.append(name.ljust(12) + "".join(_cell(m["long_run"].get(r)).rjust(w) for m in ok))
    out.append("")
    out.append("Diagnostics (p-values)")
    out.append(hdr)
    for key, name in (
        ("serial_correlation", "Serial LM"),
        ("heteroskedasticity", "Heterosk."),
        ("normality", "Normality"),
        ("reset", "RESET"),
    ):
        out.append(
            name.ljust(12)
            + "".join(_num(m["diagnostics"].get(key, {}).get("p_value"), 2).rjust(w) for m in ok)
        )
    for key, name in (("cusum", "CUSUM"), ("cusumsq", "CUSUMSQ")):
        out.append(
            name.ljust(12)
            + "".join(str(m["stability"].get(key) or "n/a").capitalize().rjust(w) for m in ok)
        )
    out.append("")
    return out


def emit_report(report: RunReport, out_dir: str | Path, plots_dir: str | Path | None = None) -> list[Path]:
    """Write report.txt, report.json and (optionally) CUSUM/CUSUMSQ CSV files."""
    out_dir = Path(out_dir)
    written = []
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        txt = out_dir / "report.txt"
        txt.write_text(render_text(report), encoding="utf-8")
        js = out_dir / "report.json"
        js.write_text(report.to_json(), encoding="utf-8")
        written += [txt, js]
        if plots_dir is not None:
            pdir = Path(plots_dir)
            pdir.mkdir(parents=True, exist_ok=True)
            for mid in sorted(report.plots):
                for kind in sorted(report.plots[mid]):
                    f = pdir / f"model_{mid}_{kind}.csv"
                    body = ["year,path,lower,upper"]
                    body += [f"{int(y)},{p!r},{lo!r},{hi!r}" for y, p, lo, hi in report.plots[mid][kind]]
                    f.write_text("\n".join(body) + "\n", encoding="utf-8")
                    written.append(f)
    except OSError as exc:
        raise ArdlKitError(f"cannot write report to {out_dir}: {exc}") from None
    return written
