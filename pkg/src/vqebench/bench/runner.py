"""Experiment runner: validation, execution, atomic persistence, plots.

Every output file is a pure function of (config, master seed, toolkit
version): floats are serialized with repr for exact round-trips, wall time
lives only in result.json under a key the determinism check ignores, and
writes go through a temp file + rename so a crash never leaves a torn file.
"""

import csv
import io
import json
import os
import tempfile
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .. import __version__
from .config import (ConfigError, config_hash, content_hash, load_config,
                     validate_config)
from .experiments import RUNNERS
from .svg import render_lines

WALL_TIME_KEYS = ("wall_time_s",)


@dataclass
class ResultRecord:
    experiment: str
    kind: str
    config_hash: str
    input_hash: str
    toolkit_version: str
    outputs: list
    metrics: dict
    wall_time_s: float
    config: dict = field(default_factory=dict)

    def to_json_dict(self):
        return {
            "experiment": self.experiment,
            "kind": self.kind,
            "config_hash": self.config_hash,
            "input_hash": self.input_hash,
            "toolkit_version": self.toolkit_version,
            "outputs": self.outputs,
            "metrics": self.metrics,
            "wall_time_s": self.wall_time_s,
            "config": self.config,
        }


def _atomic_write(path, data):
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _format_cell(v):
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, bool):
        return str(int(v))
    return v


def _table_csv(columns, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_format_cell(v) for v in row])
    return buf.getvalue()


def _table_jsonl(columns, rows):
    lines = [json.dumps(dict(zip(columns, row)), sort_keys=True)
             for row in rows]
    return "\n".join(lines) + ("\n" if lines else "")


def _json_default(o):
    import numpy as np
    if isinstance(o, (np.integer,)):
        return int(o)
    if isinstance(o, (np.floating,)):
        return float(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"not JSON serializable: {type(o)}")


def run(config, out_dir, fmt="csv", seeds_override=None) -> ResultRecord:
    """Validate and execute one experiment; persist tables + result.json."""
    cfg = validate_config(config)
    if seeds_override is not None:
        cfg["seeds"] = int(seeds_override)
    t0 = time.perf_counter()
    result = RUNNERS[cfg["kind"]](cfg)
    wall = time.perf_counter() - t0
    exp_dir = os.path.join(out_dir, cfg["name"])
    outputs = []
    ext = "csv" if fmt == "csv" else "jsonl"
    render = _table_csv if fmt == "csv" else _table_jsonl
    for stem in sorted(result["tables"]):
        columns, rows = result["tables"][stem]
        fname = f"{stem}.{ext}"
        _atomic_write(os.path.join(exp_dir, fname), render(columns, rows))
        outputs.append(fname)
    record = ResultRecord(
        experiment=cfg["name"],
        kind=cfg["kind"],
        config_hash=config_hash(cfg),
        input_hash=content_hash(cfg),
        toolkit_version=__version__,
        outputs=outputs,
        metrics=result["metrics"],
        wall_time_s=wall,
        config=cfg,
    )
    _atomic_write(os.path.join(exp_dir, "result.json"),
                  json.dumps(record.to_json_dict(), indent=2, sort_keys=True,
                             default=_json_default) + "\n")
    return record


def run_config_file(path, out_dir, fmt="csv", seeds_override=None):
    return run(load_config(path), out_dir, fmt, seeds_override)


def _run_one_suite_entry(args):
    config, out_dir, fmt = args
    return run(config, out_dir, fmt)


def run_suite(suite_name, out_dir, workers=1, fmt="csv"):
    """Run a named experiment collection and write an aggregate report."""
    from .suites import suite_configs
    configs = suite_configs(suite_name)
    t0 = time.perf_counter()
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_run_one_suite_entry,
                                    [(c, out_dir, fmt) for c in configs]))
    else:
        records = [run(c, out_dir, fmt) for c in configs]
    report = {
        "suite": suite_name,
        "toolkit_version": __version__,
        "experiments": [
            {"experiment": r.experiment, "kind": r.kind,
             "config_hash": r.config_hash, "metrics": r.metrics}
            for r in records
        ],
        "wall_time_s": time.perf_counter() - t0,
    }
    _atomic_write(os.path.join(out_dir, "suite_report.json"),
                  json.dumps(report, indent=2, sort_keys=True,
                             default=_json_default) + "\n")
    lines = [f"# Suite report: {suite_name}", "",
             "| experiment | kind | headline metrics |",
             "|---|---|---|"]
    for r in records:
        head = ", ".join(f"{k}={_short(v)}" for k, v in
                         sorted(r.metrics.items())[:4])
        lines.append(f"| {r.experiment} | {r.kind} | {head} |")
    _atomic_write(os.path.join(out_dir, "suite_report.md"),
                  "\n".join(lines) + "\n")
    return records


def _short(v):
    if isinstance(v, float):
        return f"{v:.4g}"
    return str(v)


def _read_table(exp_dir, stem):
    path = os.path.join(exp_dir, f"{stem}.csv")
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        columns = next(reader)
        rows = list(reader)
    return columns, rows


_PLOT_SPECS = {
    # kind: (table stem, x column, series column, y column, log_x, log_y)
    "gradvar": ("scan", "n", "family", "grad_var", False, True),
    "init_sweep": ("sweep", "sigma", None, "grad_var", True, True),
    "shots": ("mse", "shots", "family", "mse", True, True),
    "purity": ("purity", "n", "family", "mean_purity", False, False),
    "entanglement": ("entanglement", "n", "family", "entropy_nats",
                     False, False),
    "size_scaling": ("size_scaling", "n", "family", "mean_rel_error",
                     False, False),
    "param_efficiency": ("efficiency", "num_params", "family", "best_error",
                         False, True),
    "framepotential": ("framepotential", "n", "ensemble",
                       "frame_potential_t2", False, True),
}

_TRACE_KINDS = ("vqe", "shot_noise", "optimizer_robustness")


def emit_plot_data(record_dir, out_dir=None):
    """Tidy (x, series, y, yerr) CSV plus an SVG render for one record."""
    with open(os.path.join(record_dir, "result.json"), encoding="utf-8") as fh:
        record = json.load(fh)
    kind = record["kind"]
    out_dir = out_dir or os.path.join(record_dir, "plots")
    written = []
    if kind in _PLOT_SPECS:
        stem, xcol, scol, ycol, log_x, log_y = _PLOT_SPECS[kind]
        columns, rows = _read_table(record_dir, stem)
        xi, yi = columns.index(xcol), columns.index(ycol)
        si = columns.index(scol) if scol else None
        tidy = [["x", "series", "y", "yerr"]]
        series = {}
        for row in rows:
            name = row[si] if si is not None else ycol
            tidy.append([row[xi], name, row[yi], ""])
            series.setdefault(name, ([], []))
            series[name][0].append(float(row[xi]))
            series[name][1].append(float(row[yi]))
        if kind == "purity":  # include the Haar reference curve
            hi = columns.index("haar_limit")
            series["haar_limit"] = ([float(r[xi]) for r in rows],
                                    [float(r[hi]) for r in rows])
            for row in rows:
                tidy.append([row[xi], "haar_limit", row[hi], ""])
        written.extend(_write_plot(out_dir, kind, tidy, series, xcol, ycol,
                                   log_x, log_y))
    elif kind in _TRACE_KINDS:
        series = {}
        tidy = [["x", "series", "y", "yerr"]]
        for fname in record["outputs"]:
            if not fname.startswith("trace_"):
                continue
            stem = fname.rsplit(".", 1)[0]
            columns, rows = _read_table(record_dir, stem)
            label = stem[len("trace_"):]
            xs = [float(r[0]) for r in rows]
            ys = [float(r[1]) for r in rows]
            series[label] = (xs, ys)
            for r in rows:
                tidy.append([r[0], label, r[1], ""])
        written.extend(_write_plot(out_dir, kind, tidy, series, "step",
                                   "energy", False, False))
    else:
        raise ValueError(f"no plot mapping for experiment kind {kind!r}")
    return written


def _write_plot(out_dir, kind, tidy, series, xlabel, ylabel, log_x, log_y):
    os.makedirs(out_dir, exist_ok=True)
    tidy_path = os.path.join(out_dir, f"{kind}_tidy.csv")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for row in tidy:
        w.writerow(row)
    _atomic_write(tidy_path, buf.getvalue())
    svg_path = os.path.join(out_dir, f"{kind}.svg")
    _atomic_write(svg_path, render_lines(
        series, title=kind, xlabel=(f"log10 {xlabel}" if log_x else xlabel),
        ylabel=(f"log10 {ylabel}" if log_y else ylabel),
        log_x=log_x, log_y=log_y))
    return [tidy_path, svg_path]
