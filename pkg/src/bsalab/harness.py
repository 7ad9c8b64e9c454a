"""Experiment orchestration: sweeps, seeded parallel runs, and persistence.

Two experiment modes mirror the comparison protocol: a dimension sweep runs
every function at its default box across several dimensionalities (fixed 2-D
functions run at D=2 in every cell), and a range sweep runs everything at
D=2 across several symmetric boxes that override the default spaces.

Every run owns an independent random stream derived from (master_seed, a
stable 64-bit hash of algorithm/function/mode/config/seed-index), so record
sets are invariant to worker count and completion order. Completed runs are
appended to ``records.jsonl`` as they finish; ``records.csv`` is a
deterministic fold written at the end. Reruns with an unchanged spec hash
skip completed cells.
"""

from __future__ import annotations

import hashlib
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, asdict

import numpy as np

from . import benchmarks
from .bsa import BsaConfig, bsa_minimize
from .competitors import MINIMIZERS, CompetitorConfig
from .core import ConfigurationError, RandomSource, RunRecord, SearchSpace
from .stats import WilcoxonResult, verdict_summary, wilcoxon_signed_rank

ALL_ALGORITHMS = ("BSA", "DE", "PSO", "ABC", "FF")
RECORD_COLUMNS = ("algorithm", "function", "mode", "config", "seed",
                  "best_value", "evaluations", "evals_to_target",
                  "wall_time_s", "success")


@dataclass
class ExperimentSpec:
    """Declarative description of one experiment.

    ranges are half-widths of symmetric 2-D boxes for the range sweep. The
    timing policy controls the wall_time_s column of records.csv: "none"
    (default) leaves it empty so the file is byte-reproducible across worker
    counts; "wall" embeds the measured time. Measured times are always
    written to timings.csv regardless.
    """

    algorithms: tuple = ALL_ALGORITHMS
    functions: tuple = tuple(f.id for f in benchmarks.registry())
    modes: tuple = ("dimension-sweep", "range-sweep")
    dims: tuple = (10, 30, 60)
    ranges: tuple = (5.0, 250.0, 500.0)
    runs: int = 30
    iterations: int = 2000
    pop_size: int = 30
    success_epsilon: float = 1e-6
    metric: str = "best"
    censor: str = "none"
    master_seed: int = 42
    parallelism: int = 1
    timing: str = "none"
    algo_params: dict = field(default_factory=dict)

    def __post_init__(self):
        for a in self.algorithms:
            if a not in ALL_ALGORITHMS:
                raise ConfigurationError(f"unknown algorithm {a!r}")
        for fid in self.functions:
            benchmarks.get(fid)
        for m in self.modes:
            if m not in ("dimension-sweep", "range-sweep"):
                raise ConfigurationError(f"unknown mode {m!r}")
        if self.runs < 1:
            raise ConfigurationError("runs must be >= 1")
        if self.metric not in ("best", "evals", "time"):
            raise ConfigurationError(f"unknown metric {self.metric!r}")
        if self.censor not in ("none", "budget"):
            raise ConfigurationError(f"unknown censor policy {self.censor!r}")
        if self.timing not in ("none", "wall"):
            raise ConfigurationError(f"unknown timing policy {self.timing!r}")

    def spec_hash(self) -> str:
        """Hash of everything that affects record contents (not parallelism or timing)."""
        payload = {
            "algorithms": list(self.algorithms), "functions": list(self.functions),
            "modes": list(self.modes), "dims": list(self.dims),
            "ranges": list(self.ranges), "runs": self.runs,
            "iterations": self.iterations, "pop_size": self.pop_size,
            "success_epsilon": self.success_epsilon, "master_seed": self.master_seed,
            "algo_params": self.algo_params,
        }
        blob = json.dumps(payload, sort_keys=True)
        return hashlib.sha256(blob.encode()).hexdigest()


@dataclass(frozen=True)
class Task:
    """One schedulable run; all fields are plain picklable values."""

    algorithm: str
    function: str
    mode: str
    config: str
    dims: int
    low: float
    up: float
    seed_index: int
    master_seed: int
    iterations: int
    pop_size: int
    success_epsilon: float
    algo_params_json: str
    domain_override: bool

    def key(self):
        return (self.algorithm, self.function, self.mode, self.config, self.seed_index)


def derive_stream(algorithm: str, function: str, mode: str, config: str,
                  seed_index: int) -> int:
    """Stable 64-bit stream id for one run cell."""
    key = f"{algorithm}|{function}|{mode}|{config}|{seed_index}"
    return int.from_bytes(hashlib.sha256(key.encode()).digest()[:8], "big")


def range_label(half_width: float) -> str:
    return f"r{half_width:g}"


def build_tasks(spec: ExperimentSpec) -> list[Task]:
    """Deterministic task list: mode, then config, function, algorithm, seed."""
    params_json = json.dumps(spec.algo_params, sort_keys=True)
    tasks = []
    for mode in spec.modes:
        if mode == "dimension-sweep":
            cells = [(f"d{d}", d, None) for d in spec.dims]
        else:
            cells = [(range_label(r), 2, float(r)) for r in spec.ranges]
        for config, dims, half in cells:
            for fid in spec.functions:
                fn = benchmarks.get(fid)
                if mode == "dimension-sweep":
                    d = dims if fn.scalable else 2
                    low, up, override = fn.low, fn.up, False
                else:
                    d = 2
                    low, up = -half, half
                    override = not (low == fn.low and up == fn.up)
                for algo in spec.algorithms:
                    for k in range(spec.runs):
                        tasks.append(Task(algo, fid, mode, config, d, low, up, k,
                                          spec.master_seed, spec.iterations,
                                          spec.pop_size, spec.success_epsilon,
                                          params_json, override))
    return tasks


def execute_task(task: Task) -> RunRecord:
    """Run one seeded optimization; pure function of the task tuple."""
    fn = benchmarks.get(task.function)
    space = SearchSpace(task.low, task.up, dims=task.dims)
    rng = RandomSource(task.master_seed,
                       derive_stream(task.algorithm, task.function, task.mode,
                                     task.config, task.seed_index))
    params = json.loads(task.algo_params_json).get(task.algorithm, {})
    if task.algorithm == "BSA":
        cfg = BsaConfig(pop_size=task.pop_size, max_iterations=task.iterations, **params)
        rec = bsa_minimize(fn, space, cfg, rng, success_epsilon=task.success_epsilon)
    else:
        cfg = CompetitorConfig(task.algorithm, pop_size=task.pop_size,
                               max_iterations=task.iterations, params=params)
        rec = MINIMIZERS[task.algorithm](fn, space, cfg, rng,
                                         success_epsilon=task.success_epsilon)
    rec.mode = task.mode
    rec.config = task.config
    rec.seed_index = task.seed_index
    rec.domain_override = task.domain_override
    return rec


def _record_to_json(rec: RunRecord) -> str:
    d = asdict(rec)
    d["best_coords"] = [float(v) for v in np.asarray(rec.best_coords).ravel()]
    d.pop("trace", None)
    return json.dumps(d, sort_keys=True)


def _record_from_json(line: str) -> RunRecord:
    d = json.loads(line)
    d["best_coords"] = np.asarray(d["best_coords"], dtype=float)
    d.setdefault("trace", [])
    return RunRecord(**d)


def load_records_jsonl(path) -> list[RunRecord]:
    records = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                records.append(_record_from_json(line))
    return records


def run_experiment(spec: ExperimentSpec, out_dir=None, progress=None) -> list[RunRecord]:
    """Execute every pending task and return the full, deterministically ordered record set.

    When out_dir is given, completed runs are appended to records.jsonl as
    they finish (resume skips keys already present when the stored spec hash
    matches) and records.csv / timings.csv are rewritten at the end.
    """
    tasks = build_tasks(spec)
    done: dict[tuple, RunRecord] = {}
    jsonl_path = None
    if out_dir is not None:
        os.makedirs(out_dir, exist_ok=True)
        jsonl_path = os.path.join(out_dir, "records.jsonl")
        if os.path.exists(jsonl_path) and _stored_hash_matches(out_dir, spec):
            for rec in load_records_jsonl(jsonl_path):
                done[rec.key()] = rec
        elif os.path.exists(jsonl_path):
            os.remove(jsonl_path)

    pending = [t for t in tasks if t.key() not in done]
    sink = open(jsonl_path, "a", encoding="utf-8") if jsonl_path else None

    def consume(results):
        for i, rec in enumerate(results, start=1):
            done[rec.key()] = rec
            if sink is not None:
                sink.write(_record_to_json(rec) + "\n")
                sink.flush()
            if progress is not None:
                progress(i, len(pending), rec)

    try:
        if spec.parallelism <= 1 or not pending:
            consume(map(execute_task, pending))
        else:
            with ProcessPoolExecutor(max_workers=spec.parallelism) as pool:
                consume(pool.map(execute_task, pending, chunksize=8))
    finally:
        if sink is not None:
            sink.close()

    records = [done[t.key()] for t in tasks]  # canonical task order
    if out_dir is not None:
        write_records_csv(os.path.join(out_dir, "records.csv"), records,
                          timing=spec.timing)
        write_timings_csv(os.path.join(out_dir, "timings.csv"), records)
        _store_hash(out_dir, spec)
    return records


def _hash_path(out_dir):
    return os.path.join(out_dir, ".spec_hash")


def _stored_hash_matches(out_dir, spec) -> bool:
    try:
        with open(_hash_path(out_dir), encoding="utf-8") as fh:
            return fh.read().strip() == spec.spec_hash()
    except FileNotFoundError:
        return False


def _store_hash(out_dir, spec):
    with open(_hash_path(out_dir), "w", encoding="utf-8") as fh:
        fh.write(spec.spec_hash() + "\n")


def run_dimension_sweep(spec: ExperimentSpec, out_dir=None, progress=None) -> list[RunRecord]:
    sub = _single_mode(spec, "dimension-sweep")
    return run_experiment(sub, out_dir=out_dir, progress=progress)


def run_range_sweep(spec: ExperimentSpec, out_dir=None, progress=None) -> list[RunRecord]:
    sub = _single_mode(spec, "range-sweep")
    return run_experiment(sub, out_dir=out_dir, progress=progress)


def _single_mode(spec, mode):
    d = asdict(spec)
    d["modes"] = (mode,)
    return ExperimentSpec(**d)


# ---------------------------------------------------------------------------
# csv persistence


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return repr(float(x))  # shortest round-trip form, even for numpy scalars
    return str(x)


def write_records_csv(path, records, timing="none"):
    """The deterministic record file: one row per run, fixed column order.

    Under the default timing="none" policy the wall_time_s field is left
    empty (measured wall time is not reproducible and lives in timings.csv);
    timing="wall" embeds the measured value.
    """
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(RECORD_COLUMNS) + "\n")
        for r in records:
            wall = r.wall_time_s if timing == "wall" else None
            row = (r.algorithm, r.function, r.mode, r.config, r.seed_index,
                   r.best_value, r.evaluations, r.evals_to_target, wall, r.success)
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def read_records_csv(path) -> list[dict]:
    import csv
    with open(path, encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def write_timings_csv(path, records):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("algorithm,function,mode,config,seed,wall_time_s\n")
        for r in records:
            fh.write(f"{r.algorithm},{r.function},{r.mode},{r.config},"
                     f"{r.seed_index},{r.wall_time_s!r}\n")


# ---------------------------------------------------------------------------
# analysis


def metric_value(rec: RunRecord, metric: str, censor: str = "none"):
    """Per-run comparison metric; None when undefined under the censor policy."""
    if metric == "best":
        return rec.best_value
    if metric == "evals":
        if rec.evals_to_target is not None:
            return float(rec.evals_to_target)
        return float(rec.evaluations) if censor == "budget" else None
    if metric == "time":
        if rec.time_to_target is not None:
            return rec.time_to_target
        return rec.wall_time_s if censor == "budget" else None
    raise ConfigurationError(f"unknown metric {metric!r}")


def group_records(records, keys=("algorithm", "function", "mode", "config")):
    """Group records by the named attributes, preserving record order within groups."""
    groups = {}
    for r in records:
        k = tuple(getattr(r, a if a != "seed" else "seed_index") for a in keys)
        groups.setdefault(k, []).append(r)
    return groups


def success_ratio(records, group_by=("algorithm", "mode", "config", "function")):
    """Fraction of successful runs per group, as a list of row dicts.

    Groups with no records are simply absent (no division by zero).
    """
    rows = []
    for key, recs in group_records(records, group_by).items():
        ratio = sum(1 for r in recs if r.success) / len(recs)
        row = dict(zip(group_by, key))
        row["success_ratio"] = ratio
        row["failure_ratio"] = 1.0 - ratio
        rows.append(row)
    return rows


@dataclass
class PairwiseCell:
    problem: str
    competitor: str
    result: WilcoxonResult


@dataclass
class PairwiseComparison:
    """BSA-versus-each-competitor Wilcoxon results for one (mode, config) slice."""

    mode: str
    config: str
    competitors: tuple
    problems: tuple                       # functions that entered the comparison
    cells: dict                           # (problem, competitor) -> WilcoxonResult
    warnings: list

    def summary(self) -> dict:
        """(plus, equal, minus) triple per competitor, column-wise over problems."""
        return {c: verdict_summary([self.cells[(p, c)] for p in self.problems
                                    if (p, c) in self.cells])
                for c in self.competitors}


def pairwise_bsa_comparison(records, alpha=0.05, metric="best", censor="none",
                            baseline="BSA") -> list[PairwiseComparison]:
    """Seed-aligned Wilcoxon comparison of the baseline against every other algorithm.

    A problem enters a slice only when every algorithm present has the metric
    defined for all of its runs there (lower metric = better; the test is
    oriented so a "plus" verdict means the baseline wins). Missing competitor
    data produces a warning entry, not an error.
    """
    by_cell = group_records(records, ("mode", "config", "function", "algorithm"))
    slices = {}
    algorithms = []
    for (mode, config, function, algo) in by_cell:
        slices.setdefault((mode, config), set()).add(function)
        if algo not in algorithms:
            algorithms.append(algo)
    if baseline not in algorithms:
        raise ConfigurationError(f"no {baseline} records present")
    competitors = tuple(a for a in algorithms if a != baseline)

    out = []
    for (mode, config), functions in sorted(slices.items()):
        cells = {}
        warnings = []
        eligible = []
        for function in sorted(functions, key=_function_order):
            series = {}
            defined = True
            for algo in algorithms:
                recs = by_cell.get((mode, config, function, algo))
                if not recs:
                    warnings.append(f"{mode}/{config}/{function}: no data for {algo}")
                    defined = False
                    continue
                recs = sorted(recs, key=lambda r: r.seed_index)
                vals = [metric_value(r, metric, censor) for r in recs]
                if any(v is None for v in vals):
                    defined = False
                series[algo] = np.asarray([v for v in vals if v is not None], dtype=float)
            if not defined:
                continue
            eligible.append(function)
            base = series[baseline]
            for comp in competitors:
                if comp not in series:
                    continue
                if series[comp].size != base.size:
                    warnings.append(f"{mode}/{config}/{function}: run-count mismatch for {comp}")
                    continue
                # lower is better: positive ranks accrue when the competitor is worse
                cells[(function, comp)] = wilcoxon_signed_rank(series[comp], base, alpha)
        out.append(PairwiseComparison(mode, config, competitors, tuple(eligible),
                                      cells, warnings))
    return out


def _function_order(fid: str):
    return (len(fid), fid)  # F1..F9 before F10..F16
