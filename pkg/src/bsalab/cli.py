"""Command-line entry point: run experiments, solve single problems, validate the build.

Exit codes: 0 success, 2 configuration error, 3 validation failure, 4 I/O
error. Option precedence is CLI flag > config file > profile default.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import benchmarks, report
from .bsa import BsaConfig, bsa_minimize
from .competitors import MINIMIZERS, CompetitorConfig
from .core import ConfigurationError, RandomSource
from .harness import ExperimentSpec, derive_stream, run_experiment
from .stats import wilcoxon_signed_rank

PROFILES = {
    "paper": {"runs": 30, "iterations": 2000, "pop_size": 30},
    "smoke": {"runs": 10, "iterations": 500, "pop_size": 30},
}

_SPEC_KEYS = {"algorithms", "functions", "modes", "dims", "ranges", "runs",
              "iterations", "pop_size", "epsilon", "seed", "jobs", "metric",
              "censor", "timing", "out", "algo_params", "profile"}

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_VALIDATION = 3
EXIT_IO = 4


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bsalab",
                                description="Population-search comparison lab")
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run the configured sweeps and write reports")
    run.add_argument("--config", help="JSON config file")
    run.add_argument("--profile", choices=sorted(PROFILES))
    run.add_argument("--seed", type=int, help="master seed")
    run.add_argument("--runs", type=int)
    run.add_argument("--iterations", type=int)
    run.add_argument("--pop-size", type=int, dest="pop_size")
    run.add_argument("--epsilon", type=float, help="success epsilon")
    run.add_argument("--jobs", type=int, help="parallel workers")
    run.add_argument("--out", help="output directory")
    run.add_argument("--metric", choices=["best", "evals", "time"])
    run.add_argument("--quiet", action="store_true")

    solve = sub.add_parser("solve", help="one seeded run of one algorithm on one function")
    solve.add_argument("algorithm")
    solve.add_argument("function")
    solve.add_argument("--dim", type=int, default=2)
    solve.add_argument("--seed", type=int, default=0)
    solve.add_argument("--iterations", type=int, default=2000)
    solve.add_argument("--pop-size", type=int, dest="pop_size", default=30)
    solve.add_argument("--epsilon", type=float, default=1e-6)
    solve.add_argument("--trace", help="write per-iteration best-fitness rows to this CSV")

    sub.add_parser("validate", help="self-checks: registry minima, exact test, determinism")

    lf = sub.add_parser("list-functions", help="show the benchmark registry")
    lf.add_argument("--json", action="store_true")
    return p


def load_config_file(path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            cfg = json.load(fh)
    except OSError as e:
        raise ConfigurationError(f"cannot read config {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise ConfigurationError(f"config {path} is not valid JSON: {e}") from e
    if not isinstance(cfg, dict):
        raise ConfigurationError(f"config {path} must hold a JSON object")
    unknown = set(cfg) - _SPEC_KEYS
    if unknown:
        raise ConfigurationError(f"unknown config keys: {sorted(unknown)}")
    return cfg


def resolve_run_settings(args) -> dict:
    """Three-layer merge: profile defaults, then config file, then CLI flags."""
    file_cfg = load_config_file(args.config) if args.config else {}
    profile = args.profile or file_cfg.get("profile") or "smoke"
    if profile not in PROFILES:
        raise ConfigurationError(f"unknown profile {profile!r}")
    settings = {"profile": profile, "epsilon": 1e-6, "seed": 42, "jobs": 1,
                "metric": "best", "censor": "none", "timing": "none",
                "out": "results", "algo_params": {}}
    settings.update(PROFILES[profile])
    settings.update({k: v for k, v in file_cfg.items() if k != "profile"})
    for key in ("seed", "runs", "iterations", "pop_size", "epsilon", "jobs",
                "out", "metric"):
        val = getattr(args, key, None)
        if val is not None:
            settings[key] = val
    return settings


def spec_from_settings(settings) -> ExperimentSpec:
    kwargs = {}
    for src, dst in (("algorithms", "algorithms"), ("functions", "functions"),
                     ("modes", "modes"), ("dims", "dims"), ("ranges", "ranges")):
        if src in settings:
            kwargs[dst] = tuple(settings[src])
    return ExperimentSpec(
        runs=settings["runs"], iterations=settings["iterations"],
        pop_size=settings["pop_size"], success_epsilon=settings["epsilon"],
        metric=settings["metric"], censor=settings["censor"],
        master_seed=settings["seed"], parallelism=settings["jobs"],
        timing=settings["timing"], algo_params=settings["algo_params"],
        **kwargs)


def cmd_run(args) -> int:
    settings = resolve_run_settings(args)
    spec = spec_from_settings(settings)
    out_dir = settings["out"]

    def progress(i, total, rec):
        if not args.quiet and (i % 200 == 0 or i == total):
            print(f"  {i}/{total} runs done", flush=True)

    try:
        records = run_experiment(spec, out_dir=out_dir, progress=progress)
        comparisons = report.write_outputs(out_dir, spec, records)
    except OSError as e:
        print(f"I/O error: {e}", file=sys.stderr)
        return EXIT_IO
    for comp in comparisons:
        print(f"== {comp.mode} {comp.config} ==")
        if not comp.problems:
            print("  no jointly comparable problems")
        for competitor, (p, e, m) in comp.summary().items():
            print(f"  BSA vs {competitor}: {p}/{e}/{m} (+/=/-)")
    print(f"outputs written to {out_dir}")
    return EXIT_OK


def cmd_solve(args) -> int:
    algorithm = args.algorithm.upper()
    fn = benchmarks.get(args.function)
    dims = fn.check_dims(args.dim)
    space = fn.default_space(dims)
    rng = RandomSource(args.seed, derive_stream(algorithm, fn.id, "solve", f"d{dims}", 0))
    if algorithm == "BSA":
        cfg = BsaConfig(pop_size=args.pop_size, max_iterations=args.iterations)
        rec = bsa_minimize(fn, space, cfg, rng, success_epsilon=args.epsilon,
                           trace=bool(args.trace))
    elif algorithm in MINIMIZERS:
        cfg = CompetitorConfig(algorithm, pop_size=args.pop_size,
                               max_iterations=args.iterations)
        rec = MINIMIZERS[algorithm](fn, space, cfg, rng,
                                    success_epsilon=args.epsilon,
                                    trace=bool(args.trace))
    else:
        raise ConfigurationError(
            f"unknown algorithm {args.algorithm!r}; choose from BSA, DE, PSO, ABC, FF")

    print(f"{algorithm} on {fn.id} ({fn.name}), D={dims}, seed={args.seed}")
    print(f"  best value    {rec.best_value:.10g}")
    print(f"  best point    {np.array2string(rec.best_coords, precision=6)}")
    print(f"  evaluations   {rec.evaluations}")
    print(f"  iterations    {rec.iterations}")
    print(f"  success       {str(rec.success).lower()} (epsilon {args.epsilon:g})")
    if rec.evals_to_target is not None:
        print(f"  evals to hit  {rec.evals_to_target}")
    print(f"  wall time     {rec.wall_time_s:.3f} s")
    if args.trace:
        try:
            with open(args.trace, "w", encoding="utf-8") as fh:
                fh.write("iteration,best_fitness,amplitude\n")
                for it, best, amp in rec.trace:
                    amp_s = "" if np.isnan(amp) else repr(amp)
                    fh.write(f"{it},{best!r},{amp_s}\n")
        except OSError as e:
            print(f"I/O error: {e}", file=sys.stderr)
            return EXIT_IO
        print(f"trace written to {args.trace}")
    return EXIT_OK


def _validate_registry(failures, lines):
    fns = benchmarks.registry()
    lines.append(f"registry: {len(fns)} functions")
    if len(fns) != 16:
        failures.append(f"registry should list 16 functions, found {len(fns)}")
    loose = {"F3", "F5", "F10"}  # published minima are rounded
    checked = 0
    for f in fns:
        tol = 1e-6 if f.id in loose else 1e-9
        ok = True
        for pt in f.min_points(2):
            err = abs(float(f(pt[None, :])[0]) - f.min_value(2))
            if err > tol:
                ok = False
                failures.append(f"{f.id} ({f.name}): minimum off by {err:.2e} (tol {tol:g})")
        if ok:
            checked += 1
    lines.append(f"minimum-point checks: {checked}/{len(fns)} functions validated")


def _validate_wilcoxon(failures, lines):
    import itertools
    worst = 0.0
    for n in range(1, 13):
        ranks = np.arange(1, n + 1, dtype=float)
        # null distribution by direct enumeration of all sign assignments
        sums = sorted(sum(c) for k in range(n + 1)
                      for c in itertools.combinations(ranks, k))
        total = n * (n + 1) / 2
        for bits in range(1 << n):
            signs = np.array([1.0 if bits >> i & 1 else -1.0 for i in range(n)])
            d = signs * ranks
            res = wilcoxon_signed_rank(d, np.zeros(n))
            lo = min(res.r_plus, res.r_minus)
            hi = max(res.r_plus, res.r_minus)
            count = sum(1 for s in sums if s <= lo) + sum(1 for s in sums if s >= hi)
            p_enum = min(1.0, count / (1 << n))
            worst = max(worst, abs(p_enum - res.p_value))
            if p_enum != res.p_value:
                failures.append(f"wilcoxon mismatch at n={n}, pattern={bits:b}: "
                                f"{res.p_value} vs {p_enum}")
                return
    lines.append(f"wilcoxon exactness: all sign patterns n<=12 agree "
                 f"(max deviation {worst:g})")


def _validate_determinism(failures, lines):
    fn = benchmarks.get("F14")
    space = fn.default_space(2)
    outcomes = []
    for _ in range(2):
        rng = RandomSource(7, 99)
        cfg = BsaConfig(pop_size=10, max_iterations=50)
        outcomes.append(bsa_minimize(fn, space, cfg, rng, success_epsilon=1e-6))
    a, b = outcomes
    if (a.best_value != b.best_value or a.evaluations != b.evaluations
            or not np.array_equal(a.best_coords, b.best_coords)):
        failures.append("determinism probe: identical seeds produced different runs")
    else:
        lines.append("determinism probe: replayed run is bit-identical")


def cmd_validate(args=None) -> int:
    failures, lines = [], []
    _validate_registry(failures, lines)
    _validate_wilcoxon(failures, lines)
    _validate_determinism(failures, lines)
    for line in lines:
        print(line)
    if failures:
        for f in failures:
            print(f"FAIL: {f}", file=sys.stderr)
        return EXIT_VALIDATION
    print("all checks passed")
    return EXIT_OK


def cmd_list_functions(args) -> int:
    if args.json:
        print(benchmarks.registry_json())
        return EXIT_OK
    print(f"{'id':<5}{'name':<16}{'space':<18}{'min':>14}  {'dim':<4}{'hardness %':>10}")
    for f in benchmarks.registry():
        dim = "n" if f.scalable else "2"
        print(f"{f.id:<5}{f.name:<16}[{f.low:g}, {f.up:g}]".ljust(39)
              + f"{f.min_value(2):>14.6g}  {dim:<4}{f.hardness_pct:>10.2f}")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {"run": cmd_run, "solve": cmd_solve, "validate": cmd_validate,
                "list-functions": cmd_list_functions}
    try:
        return handlers[args.command](args)
    except ConfigurationError as e:
        print(f"configuration error: {e}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
