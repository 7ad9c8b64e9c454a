"""Rendering of comparison tables, descriptive statistics, and ratio data.

Human-facing tables are markdown; machine-facing output is CSV or JSON with
lossless float formatting (a reparse recovers the numbers exactly). p-values
are shown to four decimals, with values below 1e-4 rendered as the one-way
sentinel "<0.0001". Chart generation is out of scope: ratio and descriptive
files are plot-ready long-format data.
"""

from __future__ import annotations

import json
import os
import platform
from datetime import datetime, timezone

import numpy as np

from .harness import (ExperimentSpec, PairwiseComparison, group_records,
                      pairwise_bsa_comparison, success_ratio)
from .stats import describe

CONFIG_DIALECT = "bsalab-config-v1"


def format_p(p: float) -> str:
    return "<0.0001" if p < 1e-4 else f"{p:.4f}"


def _num(x) -> str:
    if isinstance(x, float):
        return repr(float(x))  # plain-float repr even for numpy scalars
    return str(x)


def _rank(x: float) -> str:
    return f"{x:g}"


def render_comparison(table: PairwiseComparison, fmt: str = "markdown") -> str:
    """One slice's pairwise table: per-problem (p, R+, R-, Win) columns per competitor,
    with the per-competitor plus/equal/minus tally as the footer row."""
    summary = table.summary()
    if fmt == "markdown":
        head = ["Problem"]
        for c in table.competitors:
            head += [f"vs {c} p-value", "R+", "R-", "Win"]
        lines = ["| " + " | ".join(head) + " |",
                 "|" + "---|" * len(head)]
        for prob in table.problems:
            row = [prob]
            for c in table.competitors:
                r = table.cells.get((prob, c))
                if r is None:
                    row += ["", "", "", ""]
                else:
                    row += [format_p(r.p_value), _rank(r.r_plus), _rank(r.r_minus),
                            r.win_symbol]
            lines.append("| " + " | ".join(row) + " |")
        footer = ["+/=/-"]
        for c in table.competitors:
            p, e, m = summary[c]
            footer += [f"{p}/{e}/{m}", "", "", ""]
        lines.append("| " + " | ".join(footer) + " |")
        return "\n".join(lines) + "\n"
    if fmt == "csv":
        lines = ["problem,competitor,p_value,r_plus,r_minus,win"]
        for prob in table.problems:
            for c in table.competitors:
                r = table.cells.get((prob, c))
                if r is not None:
                    lines.append(f"{prob},{c},{format_p(r.p_value)},"
                                 f"{_rank(r.r_plus)},{_rank(r.r_minus)},{r.win_symbol}")
        for c in table.competitors:
            p, e, m = summary[c]
            lines.append(f"+/=/-,{c},{p}/{e}/{m},,,")
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def render_success_ratio(rows, fmt: str = "csv") -> str:
    """Long-format ratio rows; success and failure ratios sum to one per row."""
    if not rows:
        raise ValueError("no ratio rows to render")
    if fmt == "csv":
        lines = ["algorithm,mode,config,function,success_ratio,failure_ratio"]
        for r in rows:
            lines.append(f"{r['algorithm']},{r['mode']},{r['config']},{r['function']},"
                         f"{_num(r['success_ratio'])},{_num(r['failure_ratio'])}")
        return "\n".join(lines) + "\n"
    if fmt == "json":
        return json.dumps(rows, indent=2, sort_keys=True) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


DESCRIPTIVE_COLUMNS = ("algorithm", "function", "mode", "config",
                       "mean", "std", "best", "worst", "avg_time_s",
                       "n_success", "n_fail")


def descriptives_rows(records) -> list[dict]:
    """The seven measures of each (algorithm, function, mode, config) cell,
    computed over per-run best values and measured wall times."""
    rows = []
    for key, recs in group_records(records).items():
        algorithm, function, mode, config = key
        stats = describe([r.best_value for r in recs],
                         [r.wall_time_s for r in recs],
                         [r.success for r in recs])
        rows.append({
            "algorithm": algorithm, "function": function, "mode": mode,
            "config": config, "mean": stats.mean, "std": stats.std_dev,
            "best": stats.best, "worst": stats.worst, "avg_time_s": stats.avg_time,
            "n_success": stats.n_success, "n_fail": stats.n_fail,
        })
    return rows


def render_descriptives(rows, fmt: str = "csv") -> str:
    if fmt == "csv":
        lines = [",".join(DESCRIPTIVE_COLUMNS)]
        for r in rows:
            lines.append(",".join(_num(r[c]) for c in DESCRIPTIVE_COLUMNS))
        return "\n".join(lines) + "\n"
    if fmt == "markdown":
        lines = ["| " + " | ".join(DESCRIPTIVE_COLUMNS) + " |",
                 "|" + "---|" * len(DESCRIPTIVE_COLUMNS)]
        for r in rows:
            lines.append("| " + " | ".join(_num(r[c]) for c in DESCRIPTIVE_COLUMNS) + " |")
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def write_manifest(out_dir, spec: ExperimentSpec, records) -> dict:
    overrides = sorted({(r.mode, r.config, r.function) for r in records
                        if r.domain_override})
    manifest = {
        "spec_hash": spec.spec_hash(),
        "master_seed": spec.master_seed,
        "runs": spec.runs,
        "iterations": spec.iterations,
        "pop_size": spec.pop_size,
        "success_epsilon": spec.success_epsilon,
        "metric": spec.metric,
        "timing": spec.timing,
        "config_dialect": CONFIG_DIALECT,
        "domain_overrides": [list(o) for o in overrides],
        "versions": {
            "python": platform.python_version(),
            "numpy": np.__version__,
        },
        "created_utc": datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }
    with open(os.path.join(out_dir, "manifest.json"), "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return manifest


def write_outputs(out_dir, spec: ExperimentSpec, records) -> list[PairwiseComparison]:
    """Write descriptives, ratio data, per-slice comparison tables, and the manifest.

    records.csv / timings.csv are written by the harness; this covers every
    derived artifact. Returns the pairwise comparisons for console summaries.
    """
    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, "descriptives.csv"), "w", encoding="utf-8") as fh:
        fh.write(render_descriptives(descriptives_rows(records)))
    ratios = success_ratio(records)
    with open(os.path.join(out_dir, "success_ratio.csv"), "w", encoding="utf-8") as fh:
        fh.write(render_success_ratio(ratios))
    comparisons = pairwise_bsa_comparison(records, metric=spec.metric,
                                          censor=spec.censor)
    for comp in comparisons:
        name = f"wilcoxon_{comp.mode}_{comp.config}.md"
        with open(os.path.join(out_dir, name), "w", encoding="utf-8") as fh:
            fh.write(render_comparison(comp))
    write_manifest(out_dir, spec, records)
    return comparisons
