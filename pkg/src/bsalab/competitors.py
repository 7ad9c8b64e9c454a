"""Reference competitor optimizers: DE, PSO, ABC, and the firefly algorithm.

All four share the core population/space/random-stream contracts so the
harness can compare five optimizers under identical budgets. Per-iteration
evaluation costs differ and are part of each algorithm's documented budget:

- DE, PSO: N trial evaluations per iteration
- ABC: N employed + N onlooker evaluations, plus at most one scout
- FF: up to N evaluations per sweep (unmoved fireflies keep cached fitness)

Every candidate position passes through boundary repair before evaluation,
so all evaluated individuals lie inside the search box.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .core import (ConfigurationError, CountingObjective, Population,
                   RandomSource, RunRecord, SearchSpace, boundary_control,
                   evaluate, initialize_population)

DEFAULT_PARAMS = {
    "DE": {"f_weight": 0.5, "crossover_rate": 0.9},
    "PSO": {"inertia": 0.729, "cognitive": 1.49445, "social": 1.49445,
            "velocity_clamp_fraction": 0.5},
    "ABC": {"trial_limit": None},  # None resolves to pop_size * dims
    "FF": {"beta0": 1.0, "gamma": 1.0, "alpha": 0.2, "alpha_decay": 0.97},
}


@dataclass
class CompetitorConfig:
    """Budget and hyperparameters for one competitor run.

    params overrides the per-algorithm defaults in DEFAULT_PARAMS; target is
    an optional (value, epsilon) early-stopping pair, as for BSA.
    """

    algorithm: str
    pop_size: int = 30
    max_iterations: int = 2000
    target: tuple | None = None
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.algorithm not in DEFAULT_PARAMS:
            raise ConfigurationError(f"unknown algorithm {self.algorithm!r}")
        if self.pop_size < 1 or self.max_iterations < 0:
            raise ConfigurationError("pop_size >= 1 and max_iterations >= 0 required")
        merged = dict(DEFAULT_PARAMS[self.algorithm])
        unknown = set(self.params) - set(merged)
        if unknown:
            raise ConfigurationError(f"unknown {self.algorithm} params: {sorted(unknown)}")
        merged.update(self.params)
        self.params = merged
        self._validate_params()

    def _validate_params(self):
        p = self.params
        if self.algorithm == "DE":
            if not 0.0 <= p["crossover_rate"] <= 1.0:
                raise ConfigurationError("crossover_rate must lie in [0, 1]")
            if p["f_weight"] < 0:
                raise ConfigurationError("f_weight must be >= 0")
        elif self.algorithm == "PSO":
            if not 0.0 <= p["inertia"] < 1.0:
                raise ConfigurationError("inertia must lie in [0, 1)")
            for k in ("cognitive", "social", "velocity_clamp_fraction"):
                if p[k] < 0:
                    raise ConfigurationError(f"{k} must be >= 0")
        elif self.algorithm == "ABC":
            lim = p["trial_limit"]
            if lim is not None and not (lim > 0):
                raise ConfigurationError("trial_limit must be positive (or None)")
        elif self.algorithm == "FF":
            for k in ("beta0", "gamma", "alpha", "alpha_decay"):
                if p[k] < 0:
                    raise ConfigurationError(f"{k} must be >= 0")


class _Run:
    """Shared bookkeeping: counting objective, stopping test, record assembly."""

    def __init__(self, algorithm, objective, space, cfg, success_epsilon, trace):
        self.algorithm = algorithm
        self.space = space
        self.cfg = cfg
        self.t0 = time.perf_counter()
        if cfg.target is not None:
            tv, te = float(cfg.target[0]), float(cfg.target[1])
        elif success_epsilon is not None and hasattr(objective, "min_value"):
            tv, te = float(objective.min_value(space.dims)), float(success_epsilon)
        else:
            tv, te = None, None
        self.counter = CountingObjective(objective, tv, te)
        self.function_id = getattr(objective, "id", "")
        self.rows = [] if trace else None
        self.best_coords = None
        self.best_fitness = math.inf
        self.iteration = 0
        self.iteration_to_target = None

    def update_best(self, coords, fitness):
        i = int(np.argmin(fitness))
        if fitness[i] < self.best_fitness:
            self.best_fitness = float(fitness[i])
            self.best_coords = coords[i].copy()

    def tick(self):
        if self.iteration_to_target is None and self.counter.target_reached:
            self.iteration_to_target = self.iteration
        if self.rows is not None:
            self.rows.append((self.iteration, self.best_fitness, math.nan))

    def should_stop(self):
        if self.iteration >= self.cfg.max_iterations:
            return True
        t = self.cfg.target
        return t is not None and abs(self.best_fitness - t[0]) <= t[1]

    def record(self):
        return RunRecord(
            algorithm=self.algorithm, function=self.function_id,
            best_value=self.best_fitness, best_coords=self.best_coords,
            evaluations=self.counter.calls, iterations=self.iteration,
            evals_to_target=self.counter.evals_to_target,
            iteration_to_target=self.iteration_to_target,
            time_to_target=self.counter.time_to_target,
            wall_time_s=time.perf_counter() - self.t0,
            success=self.counter.target_reached,
            anomalies=self.counter.anomalies, trace=self.rows or [])


def de_minimize(objective, space: SearchSpace, cfg: CompetitorConfig, rng: RandomSource,
                success_epsilon=None, trace=False) -> RunRecord:
    """DE/rand/1/bin with greedy selection.

    Per iteration and member: donor = x_r1 + F * (x_r2 - x_r3) over three
    distinct non-self indices, binomial crossover with a forced random
    dimension, boundary repair, then per-slot greedy replacement.
    """
    if cfg.pop_size < 4:
        raise ConfigurationError("DE/rand/1 needs pop_size >= 4")
    f_weight = cfg.params["f_weight"]
    cr = cfg.params["crossover_rate"]
    run = _Run("DE", objective, space, cfg, success_epsilon, trace)

    pop = initialize_population(cfg.pop_size, space, rng)
    pop, _ = evaluate(pop, run.counter)
    run.update_best(pop.coords, pop.fitness)
    run.tick()

    n, d = pop.coords.shape
    idx = np.arange(n)
    while not run.should_stop():
        keys = rng.uniform(size=(n, n))
        keys[idx, idx] = np.inf  # self never selected as donor
        donors = np.argsort(keys, axis=1)[:, :3]
        cross = rng.uniform(size=(n, d)) < cr
        cross[idx, rng.integers(0, d, size=n)] = True

        x = pop.coords
        donor = x[donors[:, 0]] + f_weight * (x[donors[:, 1]] - x[donors[:, 2]])
        trial = Population(np.where(cross, donor, x))
        trial = boundary_control(trial, space, rng)
        trial, _ = evaluate(trial, run.counter)

        better = trial.fitness < pop.fitness
        pop = Population(np.where(better[:, None], trial.coords, x),
                         np.where(better, trial.fitness, pop.fitness))
        run.update_best(pop.coords, pop.fitness)
        run.iteration += 1
        run.tick()
    return run.record()


def pso_minimize(objective, space: SearchSpace, cfg: CompetitorConfig, rng: RandomSource,
                 success_epsilon=None, trace=False) -> RunRecord:
    """Global-best PSO with inertia weight and velocity clamping.

    Velocities start at zero and are clamped per dimension to
    velocity_clamp_fraction * (up - low). Cognitive and social pulls use
    per-dimension uniform factors.
    """
    p = cfg.params
    w, c1, c2 = p["inertia"], p["cognitive"], p["social"]
    vmax = p["velocity_clamp_fraction"] * space.width
    run = _Run("PSO", objective, space, cfg, success_epsilon, trace)

    pop = initialize_population(cfg.pop_size, space, rng)
    pop, _ = evaluate(pop, run.counter)
    n, d = pop.coords.shape
    vel = np.zeros((n, d))
    pbest = pop.coords.copy()
    pbest_f = pop.fitness.copy()
    run.update_best(pop.coords, pop.fitness)
    run.tick()

    while not run.should_stop():
        r1 = rng.uniform(size=(n, d))
        r2 = rng.uniform(size=(n, d))
        vel = (w * vel + c1 * r1 * (pbest - pop.coords)
               + c2 * r2 * (run.best_coords - pop.coords))
        vel = np.clip(vel, -vmax, vmax)
        moved = Population(pop.coords + vel)
        moved = boundary_control(moved, space, rng)
        moved, _ = evaluate(moved, run.counter)
        pop = moved

        improved = pop.fitness < pbest_f
        pbest[improved] = pop.coords[improved]
        pbest_f[improved] = pop.fitness[improved]
        run.update_best(pop.coords, pop.fitness)
        run.iteration += 1
        run.tick()
    return run.record()


def _abc_neighbor_moves(coords, sources, partners, dims, phi):
    """Candidate positions, each differing from its source in exactly one dimension."""
    cand = coords[sources].copy()
    rows = np.arange(sources.size)
    cur = coords[sources[rows], dims]
    cand[rows, dims] = cur + phi * (cur - coords[partners[rows], dims])
    return cand


def _distinct_partner(rng, n):
    """n partner indices, each uniform over the n-1 non-self sources."""
    k = rng.integers(0, n - 1, size=n)
    k = k + (k >= np.arange(n))
    return k


def abc_minimize(objective, space: SearchSpace, cfg: CompetitorConfig, rng: RandomSource,
                 success_epsilon=None, trace=False) -> RunRecord:
    """Artificial bee colony: employed, onlooker, and scout phases.

    pop_size counts the food sources; one onlooker per source picks a food
    source fitness-proportionally and proposes a single-dimension neighbor
    move. Onlooker proposals are batched against the post-employed snapshot;
    when several target one source, only the best proposal is considered.
    A source whose trial counter exceeds the limit is re-seeded uniformly
    (at most one scout per iteration, the most exhausted source).
    """
    if cfg.pop_size < 2:
        raise ConfigurationError("ABC needs pop_size >= 2")
    limit = cfg.params["trial_limit"]
    if limit is None:
        limit = cfg.pop_size * space.dims
    run = _Run("ABC", objective, space, cfg, success_epsilon, trace)

    pop = initialize_population(cfg.pop_size, space, rng)
    pop, _ = evaluate(pop, run.counter)
    n = pop.size
    trials = np.zeros(n, dtype=int)
    run.update_best(pop.coords, pop.fitness)
    run.tick()

    while not run.should_stop():
        # employed phase: one neighbor move per source
        partners = _distinct_partner(rng, n)
        dims = rng.integers(0, space.dims, size=n)
        phi = rng.uniform(-1.0, 1.0, size=n)
        cand = _abc_neighbor_moves(pop.coords, np.arange(n), partners, dims, phi)
        cand_pop = boundary_control(Population(cand), space, rng)
        cand_pop, _ = evaluate(cand_pop, run.counter)
        accept = cand_pop.fitness < pop.fitness
        pop = Population(np.where(accept[:, None], cand_pop.coords, pop.coords),
                         np.where(accept, cand_pop.fitness, pop.fitness))
        trials = np.where(accept, 0, trials + 1)

        # onlooker phase: fitness-proportional source choice, same move rule
        f = pop.fitness
        quality = np.empty_like(f)
        nonneg = f >= 0
        quality[nonneg] = 1.0 / (1.0 + f[nonneg])
        quality[~nonneg] = 1.0 + np.abs(f[~nonneg])
        total = quality.sum()
        prob = quality / total if total > 0 else np.full(n, 1.0 / n)  # all-inf costs
        picks = np.searchsorted(np.cumsum(prob), rng.uniform(size=n), side="right")
        picks = np.minimum(picks, n - 1)
        partners = rng.integers(0, n - 1, size=n)
        partners = partners + (partners >= picks)  # uniform over non-picked sources
        dims = rng.integers(0, space.dims, size=n)
        phi = rng.uniform(-1.0, 1.0, size=n)
        cand = _abc_neighbor_moves(pop.coords, picks, partners, dims, phi)
        cand_pop = boundary_control(Population(cand), space, rng)
        cand_pop, _ = evaluate(cand_pop, run.counter)
        for src in np.unique(picks):
            prop = np.nonzero(picks == src)[0]
            j = prop[np.argmin(cand_pop.fitness[prop])]
            if cand_pop.fitness[j] < pop.fitness[src]:
                coords = pop.coords.copy()
                fit = pop.fitness.copy()
                coords[src] = cand_pop.coords[j]
                fit[src] = cand_pop.fitness[j]
                pop = Population(coords, fit)
                trials[src] = 0
            else:
                trials[src] += 1

        # scout phase: re-seed the most exhausted source past the limit
        worst = int(np.argmax(trials))
        if trials[worst] > limit:
            u = rng.uniform(size=space.dims)
            coords = pop.coords.copy()
            coords[worst] = space.low + u * space.width
            fit = pop.fitness.copy()
            fit[worst] = np.nan
            scout_pop, _ = evaluate(Population(coords, fit), run.counter)
            pop = scout_pop
            trials[worst] = 0

        run.update_best(pop.coords, pop.fitness)
        run.iteration += 1
        run.tick()
    return run.record()


def ff_minimize(objective, space: SearchSpace, cfg: CompetitorConfig, rng: RandomSource,
                success_epsilon=None, trace=False) -> RunRecord:
    """Firefly algorithm: brighter neighbors attract, with decaying randomization.

    Each sweep works from a snapshot of positions and intensities: a firefly
    with at least one strictly brighter neighbor moves by the sum of
    attractions beta0 * exp(-gamma * r^2) * (x_j - x_i) plus uniform noise of
    magnitude alpha scaled by the box width. alpha decays by alpha_decay per
    iteration. Fireflies that do not move keep their cached fitness, so a
    sweep costs at most N evaluations.
    """
    p = cfg.params
    beta0, gamma, alpha_decay = p["beta0"], p["gamma"], p["alpha_decay"]
    alpha = p["alpha"]
    run = _Run("FF", objective, space, cfg, success_epsilon, trace)

    pop = initialize_population(cfg.pop_size, space, rng)
    pop, _ = evaluate(pop, run.counter)
    n = pop.size
    run.update_best(pop.coords, pop.fitness)
    run.tick()

    while not run.should_stop():
        x = pop.coords
        fit = pop.fitness
        noise = (rng.uniform(size=x.shape) - 0.5) * alpha * space.width
        brighter = fit[None, :] < fit[:, None]
        moved = brighter.any(axis=1)
        diff = x[None, :, :] - x[:, None, :]
        if beta0 != 0.0:
            r2 = np.sum(diff * diff, axis=2)
            beta = beta0 * np.exp(-gamma * r2)
            attract = np.einsum("ij,ijk->ik", np.where(brighter, beta, 0.0), diff)
        else:
            attract = np.zeros_like(x)
        new_coords = np.where(moved[:, None], x + attract + noise, x)
        changed = (new_coords != x).any(axis=1)  # zero-force movers keep cached fitness
        fitness = np.where(changed, np.nan, fit)
        trial = boundary_control(Population(new_coords, fitness), space, rng)
        pop, _ = evaluate(trial, run.counter)

        run.update_best(pop.coords, pop.fitness)
        alpha *= alpha_decay
        run.iteration += 1
        run.tick()
    return run.record()


MINIMIZERS = {
    "DE": de_minimize,
    "PSO": pso_minimize,
    "ABC": abc_minimize,
    "FF": ff_minimize,
}
