"""Command-line entry point.

One JSON config drives every command::

    dtaikit evaluate --config run.json --data designs.csv [--generated gen.csv] [--out DIR]
    dtaikit optimize --config run.json [--out DIR]
    dtaikit report DIR/report.json [--kde kde.csv]

``--set dotted.key=value`` overrides single config entries (values are parsed
as JSON when possible). Exit codes: 0 success, 1 data or runtime error,
2 configuration error. Errors go to stderr as one JSON line.
"""

from __future__ import annotations

import argparse
import copy
import csv
import json
import sys
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional, Sequence

import jsonschema
import numpy as np

from . import baselines, feasibility, metrics, optimize, synthetic
from .errors import ConfigError, DtaiError, NoPerformance
from .model import (
    ColumnSchema,
    DesignSet,
    ObjectiveSpec,
    TargetSpec,
    adjust_set,
    ingest_csv,
    percentile_reference,
    percentile_targets,
)

EVALUATORS = {"synthetic_frames": synthetic.evaluate_set}
PROBLEMS = {"gaussian_peaks": optimize.gaussian_peaks_problem}
GENERATORS = ("dataset", "interpolation", "external")


# ---------------------------------------------------------------------- config


def _set_dotted(doc: dict, dotted: str, raw: str) -> None:
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    keys = dotted.split(".")
    node = doc
    for k in keys[:-1]:
        nxt = node.get(k)
        if not isinstance(nxt, dict):
            nxt = node[k] = {}
        node = nxt
    node[keys[-1]] = value


def _directive(doc, what: str, needs_weights: bool) -> dict:
    if not isinstance(doc, dict):
        raise ConfigError(f"{what} must be an object")
    has_values, has_q = "values" in doc, "percentile" in doc
    if has_values == has_q:
        raise ConfigError(f"{what} needs exactly one of 'values' or 'percentile'")
    if has_q and not 0 <= float(doc["percentile"]) <= 100:
        raise ConfigError(f"{what}.percentile must lie in [0, 100]")
    if needs_weights:
        for key in ("alpha", "beta"):
            val = doc.get(key, 1.0 if key == "alpha" else None)
            if val is not None and np.any(np.asarray(val, dtype=float) <= 0):
                raise ConfigError(f"{what}.{key} must be positive")
    return doc


@dataclass
class RunConfig:
    raw: dict
    schema: tuple = ()
    objectives: tuple = ()
    targets: dict = field(default_factory=lambda: {"percentile": 75})
    reference: dict = field(default_factory=lambda: {"percentile": 1})
    rules: tuple = ()
    generator: dict = field(default_factory=lambda: {"kind": "dataset"})
    count: int = 250
    seed: int = 0
    hv: dict = field(default_factory=lambda: {"mode": "auto", "mc_samples": metrics.DEFAULT_MC_SAMPLES})
    standardize: bool = False
    evaluator: Optional[str] = None
    benchmark: Optional[dict] = None

    @classmethod
    def from_dict(cls, doc: dict) -> "RunConfig":
        try:
            return cls._parse(copy.deepcopy(doc))
        except ConfigError:
            raise
        except (DtaiError, KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"invalid config: {exc}") from None

    @classmethod
    def _parse(cls, doc: dict) -> "RunConfig":
        if not isinstance(doc, dict):
            raise ConfigError("config root must be an object")
        cfg = cls(raw=doc)
        cfg.schema = tuple(
            ColumnSchema(c["name"], c.get("kind", "continuous"), tuple(c.get("categories", ())))
            for c in doc.get("schema", ())
        )
        cfg.objectives = tuple(
            ObjectiveSpec(o["name"], o.get("direction", "maximize"), float(o.get("epsilon", 1e-9)))
            for o in doc.get("objectives", ())
        )
        cfg.targets = _directive(doc.get("targets", cfg.targets), "targets", True)
        cfg.reference = _directive(doc.get("reference", cfg.reference), "reference", False)
        cfg.rules = tuple(feasibility.load_rules(doc.get("rules", ())))
        gen = doc.get("generator", cfg.generator)
        gen = {"kind": gen} if isinstance(gen, str) else dict(gen)
        if gen.get("kind") not in GENERATORS:
            raise ConfigError(f"generator.kind must be one of {GENERATORS}")
        cfg.generator = gen
        cfg.count = int(doc.get("count", cfg.count))
        if cfg.count <= 0:
            raise ConfigError("count must be positive")
        cfg.seed = int(doc.get("seed", cfg.seed))
        cfg.hv = {**cfg.hv, **doc.get("hv", {})}
        if cfg.hv["mode"] not in ("auto", "exact", "mc"):
            raise ConfigError("hv.mode must be auto, exact or mc")
        cfg.standardize = bool(doc.get("standardize", False))
        cfg.evaluator = doc.get("evaluator")
        if cfg.evaluator is not None and cfg.evaluator not in EVALUATORS:
            raise ConfigError(f"unknown evaluator {cfg.evaluator!r}; known: {sorted(EVALUATORS)}")
        cfg.benchmark = doc.get("benchmark")
        if cfg.benchmark is not None:
            if cfg.benchmark.get("problem") not in PROBLEMS:
                raise ConfigError(f"unknown benchmark problem {cfg.benchmark.get('problem')!r}")
            optimize.OptimizerConfig(**cfg.benchmark.get("optimizer", {}))
        return cfg

    def require_dataset_sections(self) -> None:
        if not self.schema or not self.objectives:
            raise ConfigError("config needs 'schema' and 'objectives' sections")

    @property
    def objective_names(self) -> list[str]:
        return [o.name for o in self.objectives]


def load_config(path, overrides: Sequence[str] = ()) -> RunConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        key, value = item.split("=", 1)
        _set_dotted(doc, key.strip(), value)
    return RunConfig.from_dict(doc)


def _targets(directive: dict, dataset: Optional[DesignSet], n: int) -> TargetSpec:
    alpha, beta = directive.get("alpha"), directive.get("beta")
    if "values" in directive:
        t = np.asarray(directive["values"], dtype=float)
    else:
        t = percentile_targets(dataset, float(directive["percentile"]))
    if t.size != n:
        raise ConfigError(f"targets have {t.size} entries for {n} objectives")
    return TargetSpec(t, alpha, beta)


def _reference(directive: dict, dataset: DesignSet, n: int) -> np.ndarray:
    if "values" in directive:
        ref = np.asarray(directive["values"], dtype=float)
        if ref.size != n:
            raise ConfigError(f"reference has {ref.size} entries for {n} objectives")
        return ref
    return percentile_reference(dataset, float(directive["percentile"]))


def _resolved(cfg: RunConfig, targets: TargetSpec, reference) -> dict:
    doc = copy.deepcopy(cfg.raw)
    doc["resolved"] = {
        "targets": {"t": targets.t.tolist(), "alpha": targets.alpha.tolist(), "beta": targets.beta.tolist()},
        "reference": None if reference is None else np.asarray(reference).tolist(),
    }
    return doc


# -------------------------------------------------------------------- outputs


def write_scores(path, report: metrics.EvaluationReport, feasible) -> None:
    """One row per design; per-design metrics left blank where not computed."""
    pos = {int(i): k for k, i in enumerate(report.feasible_index)}
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["design", "feasible"] + list(metrics.PER_DESIGN_METRICS))
        for i, ok in enumerate(feasible):
            row = [i, int(bool(ok))]
            for name in metrics.PER_DESIGN_METRICS:
                vals = report.per_design.get(name)
                row.append(repr(float(vals[pos[i]])) if vals is not None and i in pos else "")
            w.writerow(row)


def report_schema() -> dict:
    return json.loads(resources.files("dtaikit").joinpath("report.schema.json").read_text("utf-8"))


def _write_report(out: Path, report: metrics.EvaluationReport, config_doc: dict) -> None:
    (out / "report.json").write_text(report.to_json(config=config_doc), encoding="utf-8")


# ------------------------------------------------------------------- commands


def _generate(cfg: RunConfig, dataset: DesignSet, generated_path) -> DesignSet:
    kind = "external" if generated_path else cfg.generator["kind"]
    if kind == "dataset":
        return baselines.sample_dataset(dataset, cfg.count, cfg.seed)
    if kind == "interpolation":
        gen = baselines.interpolate(dataset, cfg.count, cfg.seed)
    else:
        path = generated_path or cfg.generator.get("path")
        if not path:
            raise ConfigError("external generator needs a path (config or --generated)")
        columns = () if cfg.evaluator else cfg.objective_names
        gen = ingest_csv(path, cfg.schema, columns)
        if not cfg.evaluator:
            return gen
    if cfg.evaluator is None:
        raise NoPerformance("interpolated designs need an 'evaluator' to obtain performance")
    raw = EVALUATORS[cfg.evaluator](gen)
    return gen.with_performance(raw, adjusted=False, objective_names=cfg.objective_names)


def cmd_evaluate(config_path, data_path, generated_path=None, out_dir=".", overrides=(), threads=1) -> int:
    cfg = load_config(config_path, overrides)
    cfg.require_dataset_sections()
    n = len(cfg.objectives)

    dataset = adjust_set(ingest_csv(data_path, cfg.schema, cfg.objective_names), cfg.objectives)
    targets = _targets(cfg.targets, dataset, n)
    reference = _reference(cfg.reference, dataset, n)

    gen = _generate(cfg, dataset, generated_path)
    gen = adjust_set(gen, cfg.objectives)
    gen = feasibility.flag_set(gen, cfg.rules)

    report = metrics.evaluate_set(
        gen, targets, reference, dataset,
        standardize=cfg.standardize, hv_mode=cfg.hv["mode"], mc_samples=int(cfg.hv["mc_samples"]),
        seed=cfg.seed, threads=threads,
    )
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    _write_report(out, report, _resolved(cfg, targets, reference))
    write_scores(out / "scores.csv", report, gen.feasible)
    print(f"designs={report.n_designs} feasible={report.n_feasible} GFR={report.gfr:.6f} "
          f"mean_DTAI={_fmt(report.metric('DTAI'))} mean_TSR={_fmt(report.metric('TSR'))}")
    return 0


def cmd_optimize(config_path, out_dir=".", overrides=(), threads=1) -> int:
    cfg = load_config(config_path, overrides)
    bench = cfg.benchmark
    if bench is None:
        raise ConfigError("config has no 'benchmark' section")
    problem = PROBLEMS[bench["problem"]](int(bench.get("dim", 2)), int(bench.get("n_obj", 2)),
                                         int(bench.get("seed", 0)))
    opt = optimize.OptimizerConfig(**bench.get("optimizer", {}))
    tdoc = _directive(bench.get("targets", {"percentile": 75}), "benchmark.targets", True)
    if "values" in tdoc:
        targets = _targets(tdoc, None, problem.n_obj)
    else:
        targets = optimize.sample_targets(problem, float(tdoc["percentile"]), int(tdoc.get("samples", 10_000)),
                                          int(tdoc.get("seed", opt.seed)), tdoc.get("alpha"), tdoc.get("beta"))

    traj = optimize.ascend_dtai(problem, targets, opt)
    report = optimize.evaluate_trajectory(
        traj, problem, targets, hv_mode=cfg.hv["mode"], mc_samples=int(cfg.hv["mc_samples"]),
        seed=opt.seed, threads=threads,
    )
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    traj.to_csv(out / "trajectory.csv")
    _write_report(out, report, _resolved(cfg, targets, report.reference))
    print(f"iterations={traj.iterations} initial_mean_DTAI={traj.mean_dtai[0]:.6f} "
          f"final_mean_DTAI={traj.mean_dtai[-1]:.6f} final_mean_TSR={traj.mean_tsr[-1]:.6f}")
    return 0


def _fmt(value) -> str:
    return "n/a" if value is None else f"{value:.6f}"


TABLE_LABELS = {
    "DSD": "Mean Design Space Diversity (DSD)",
    "PSD": "Mean Performance Space Diversity (PSD)",
    "DN": "Mean Design Novelty (DN)",
    "GFR": "Geometric Feasibility Rate (GFR)",
    "HV": "Hypervolume (HV)",
    "DTAI": "Mean Design Target Achievement Index (DTAI)",
    "TSR": "Mean Target Success Rate (TSR)",
    "MTR": "Mean Minimum Target Ratio (MTR)",
}


def format_table(doc: dict) -> str:
    values = doc["metrics"]
    width = max(len(v) for v in TABLE_LABELS.values())
    return "\n".join(f"{TABLE_LABELS[m]:<{width}}  {_fmt(values.get(m))}" for m in metrics.TABLE_METRICS)


def cmd_report(report_path, kde_path=None) -> int:
    try:
        doc = json.loads(Path(report_path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise DtaiError(f"cannot read report {report_path}: {exc}") from None
    try:
        jsonschema.validate(doc, report_schema())
    except jsonschema.ValidationError as exc:
        raise DtaiError(f"malformed report: {exc.message}") from None

    print(format_table(doc))
    kde_path = Path(kde_path) if kde_path else Path(report_path).with_name("kde.csv")
    with open(kde_path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["metric", "grid", "density", "bandwidth"])
        for name in metrics.PER_DESIGN_METRICS:
            curve = doc.get("kde", {}).get(name)
            if not curve:
                continue
            for g, d in zip(curve["grid"], curve["density"]):
                w.writerow([name, repr(float(g)), repr(float(d)), repr(float(curve["bandwidth"]))])
    return 0


# ----------------------------------------------------------------------- main


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dtaikit", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", required=True, help="run configuration (JSON)")
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE")
        p.add_argument("--threads", type=int, default=1)

    ev = sub.add_parser("evaluate", help="generate or load designs and score them")
    common(ev)
    ev.add_argument("--data", required=True, help="source dataset CSV")
    ev.add_argument("--generated", help="externally generated designs CSV")

    op = sub.add_parser("optimize", help="run DTAI ascent on a benchmark problem")
    common(op)

    rp = sub.add_parser("report", help="print the metric table of a report.json")
    rp.add_argument("report")
    rp.add_argument("--kde", help="where to write KDE curves (default: next to the report)")
    return parser


def _fail(code: str, message: str, status: int) -> int:
    print(json.dumps({"code": code, "message": message}), file=sys.stderr)
    return status


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "evaluate":
            return cmd_evaluate(args.config, args.data, args.generated, args.out, args.overrides,
                                max(1, args.threads))
        if args.command == "optimize":
            return cmd_optimize(args.config, args.out, args.overrides, max(1, args.threads))
        return cmd_report(args.report, args.kde)
    except ConfigError as exc:
        return _fail(exc.code, str(exc), 2)
    except DtaiError as exc:
        return _fail(exc.code, str(exc), 1)
    except OSError as exc:
        return _fail(type(exc).__name__, str(exc), 1)


if __name__ == "__main__":
    sys.exit(main())
