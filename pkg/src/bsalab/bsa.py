"""Backtracking search optimizer.

A dual-population evolutionary search: a stochastically refreshed, permuted
historical population defines the search direction, an amplitude factor F
scales it, and a binary map decides which cells of the trial population take
mutant values. Greedy per-slot selection keeps the better of current and
trial.

RNG draw order is part of each operation's contract (documented per function)
so that a run is a pure function of (inputs, seed, stream) and can be replayed
or cross-checked against a straight-line reimplementation bit for bit.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .core import (AmplitudeStrategy, ConfigurationError, ContractViolation,
                   CountingObjective, Population, RandomSource, RunRecord,
                   SearchSpace, boundary_control, evaluate,
                   initialize_population, scaled_normal)


@dataclass
class BsaConfig:
    """Control parameters for one backtracking-search run.

    - pop_size: N individuals (N=1 tolerated for degenerate tests).
    - max_iterations: generation budget.
    - amplitude: how F is drawn each generation (default 3 * N(0,1)).
    - mix_rate: cap on the fraction of dimensions per row that may take
      mutant values, in (0, 1].
    - target: optional (value, epsilon) pair; the run stops early once the
      best value is within epsilon of value.
    - crossover_mode: "dual-strategy" (per row, coin flip between a
      mix-rate-capped random subset and a single random dimension) or
      "mixrate-only" (always the subset rule).
    """

    pop_size: int = 30
    max_iterations: int = 2000
    amplitude: AmplitudeStrategy = None
    mix_rate: float = 1.0
    target: tuple | None = None
    crossover_mode: str = "dual-strategy"

    def __post_init__(self):
        if self.amplitude is None:
            self.amplitude = scaled_normal(3.0)
        if self.pop_size < 1:
            raise ConfigurationError("pop_size must be >= 1")
        if self.max_iterations < 0:
            raise ConfigurationError("max_iterations must be >= 0")
        if not 0.0 < self.mix_rate <= 1.0:
            raise ConfigurationError("mix_rate must lie in (0, 1]")
        if self.crossover_mode not in ("dual-strategy", "mixrate-only"):
            raise ConfigurationError(f"unknown crossover_mode {self.crossover_mode!r}")


@dataclass
class BsaState:
    """Mutable per-run state: current and historical populations plus the running best."""

    current: Population
    historical: Population
    iteration: int
    best_coords: np.ndarray
    best_fitness: float
    evaluations: int


def selection_one(current: Population, historical: Population,
                  rng: RandomSource) -> Population:
    """Refresh-and-shuffle step producing this generation's historical population.

    With probability 1/2 (two uniforms a, b; replace when a < b) the
    historical population becomes a copy of the current one; either way its
    member order is then randomly permuted. The current population is never
    touched.

    RNG: one uniform batch of size 2, then one permutation of N.
    """
    a, b = rng.uniform(size=2)
    if a < b:
        historical = current.copy()
    perm = rng.permutation(historical.size)
    return Population(historical.coords[perm], historical.fitness[perm],
                      historical.generation)


def draw_amplitude(strategy: AmplitudeStrategy, iteration: int,
                   max_iterations: int, rng: RandomSource) -> float:
    """Amplitude factor F for this generation.

    scaled-normal consumes one standard-normal draw; the other kinds consume
    nothing. linear-schedule interpolates from f_min at the start to f_max at
    iteration == max_iterations.
    """
    if strategy.kind == "scaled-normal":
        return strategy.scale * float(rng.standard_normal())
    if strategy.kind == "constant":
        return strategy.value
    frac = iteration / max_iterations if max_iterations > 0 else 1.0
    return strategy.f_min + (strategy.f_max - strategy.f_min) * frac


def mutate(current: Population, historical: Population, amplitude: float) -> Population:
    """Mutant = current + F * (historical - current), elementwise; no draws."""
    if current.coords.shape != historical.coords.shape:
        raise ContractViolation("current/historical shape mismatch")
    coords = current.coords + amplitude * (historical.coords - current.coords)
    return Population(coords, generation=current.generation)


def make_crossover_map(n: int, d: int, mix_rate: float, crossover_mode: str,
                       rng: RandomSource) -> np.ndarray:
    """Boolean (n, d) map; True cells take the mutant value, False cells keep current.

    Per row, dual-strategy flips a fair coin between
      (a) marking ceil(mix_rate * u * d) random distinct columns (u ~ U(0,1),
          at least one column), and
      (b) marking exactly one random column.
    mixrate-only always applies (a).

    RNG, dual-strategy: uniform(n) coins, uniform(n) cardinalities, one
    uniform (n, d) batch whose per-row argsort yields random column orders,
    and integers(n) single columns. Rows draw from all four batches
    regardless of which strategy they use. mixrate-only skips the coin and
    single-column batches.
    """
    if n < 1 or d < 1:
        raise ConfigurationError("map needs n, d >= 1")
    dual = crossover_mode == "dual-strategy"
    coins = rng.uniform(size=n) if dual else None
    us = rng.uniform(size=n)
    order = np.argsort(rng.uniform(size=(n, d)), axis=1)
    singles = rng.integers(0, d, size=n) if dual else None

    k = np.maximum(1, np.ceil(mix_rate * us * d).astype(int))
    k = np.minimum(k, d)
    cols = np.arange(d)
    subset_mask = cols < k[:, None]            # first k[i] slots of each row's order
    mask = np.zeros((n, d), dtype=bool)
    np.put_along_axis(mask, order, subset_mask, axis=1)
    if dual:
        single_rows = coins >= 0.5
        mask[single_rows] = False
        mask[np.nonzero(single_rows)[0], singles[single_rows]] = True
    return mask


def crossover(current: Population, mutant: Population, mutant_mask: np.ndarray) -> Population:
    """Assemble the trial population cell by cell from the map; no draws."""
    if current.coords.shape != mutant.coords.shape or mutant_mask.shape != current.coords.shape:
        raise ContractViolation("crossover shape mismatch")
    coords = np.where(mutant_mask, mutant.coords, current.coords)
    return Population(coords, generation=current.generation)


def selection_two(current: Population, trial: Population) -> Population:
    """Greedy per-slot selection: a trial member replaces its slot only when strictly better."""
    if not (current.evaluated and trial.evaluated):
        raise ContractViolation("selection_two requires fully evaluated populations")
    better = trial.fitness < current.fitness
    coords = np.where(better[:, None], trial.coords, current.coords)
    fitness = np.where(better, trial.fitness, current.fitness)
    return Population(coords, fitness, current.generation + 1)


def bsa_generation(state: BsaState, objective, space: SearchSpace, cfg: BsaConfig,
                   rng: RandomSource) -> tuple[BsaState, float]:
    """Advance the state by one generation; returns (new state, F used)."""
    historical = selection_one(state.current, state.historical, rng)
    amplitude = draw_amplitude(cfg.amplitude, state.iteration + 1, cfg.max_iterations, rng)
    mutant = mutate(state.current, historical, amplitude)
    mutant = boundary_control(mutant, space, rng)
    mask = make_crossover_map(state.current.size, state.current.dims,
                              cfg.mix_rate, cfg.crossover_mode, rng)
    trial = crossover(state.current, mutant, mask)
    trial = boundary_control(trial, space, rng)
    trial, n_evals = evaluate(trial, objective)
    current = selection_two(state.current, trial)

    best_fitness = state.best_fitness
    best_coords = state.best_coords
    i = int(np.argmin(current.fitness))
    if current.fitness[i] < best_fitness:
        best_fitness = float(current.fitness[i])
        best_coords = current.coords[i].copy()
    new_state = BsaState(current, historical, state.iteration + 1,
                         best_coords, best_fitness, state.evaluations + n_evals)
    return new_state, amplitude


def bsa_minimize(objective, space: SearchSpace, cfg: BsaConfig, rng: RandomSource,
                 success_epsilon: float | None = None, trace: bool = False,
                 observer=None) -> RunRecord:
    """Run backtracking search to the iteration budget or the target.

    objective is an ObjectiveFunction (or any batch callable). When
    success_epsilon is given and the objective publishes its global minimum,
    the record carries a success flag and evaluations-to-target bookkeeping;
    cfg.target additionally stops the run early.

    observer, when given, is called as observer(iteration, current,
    historical) after each generation's historical refresh (test hook).
    """
    t0 = time.perf_counter()
    target_value, target_eps = _resolve_target(objective, cfg, space.dims, success_epsilon)
    counter = CountingObjective(objective, target_value, target_eps)

    pop = initialize_population(cfg.pop_size, space, rng)
    pop, _ = evaluate(pop, counter)
    historical = initialize_population(cfg.pop_size, space, rng)

    best = pop.best()
    state = BsaState(pop, historical, 0, best.coords, best.fitness, counter.calls)
    rows = [(0, state.best_fitness, math.nan)] if trace else None
    iter_hit = 0 if counter.target_reached else None

    stop_eps = cfg.target[1] if cfg.target is not None else None
    while state.iteration < cfg.max_iterations:
        if stop_eps is not None and abs(state.best_fitness - cfg.target[0]) <= stop_eps:
            break
        state, amplitude = bsa_generation(state, counter, space, cfg, rng)
        if iter_hit is None and counter.target_reached:
            iter_hit = state.iteration
        if observer is not None:
            observer(state.iteration, state.current, state.historical)
        if trace:
            rows.append((state.iteration, state.best_fitness, amplitude))

    return RunRecord(
        algorithm="BSA", function=getattr(objective, "id", ""),
        best_value=state.best_fitness, best_coords=state.best_coords,
        evaluations=counter.calls, iterations=state.iteration,
        evals_to_target=counter.evals_to_target, iteration_to_target=iter_hit,
        time_to_target=counter.time_to_target,
        wall_time_s=time.perf_counter() - t0, success=counter.target_reached,
        anomalies=counter.anomalies, trace=rows or [])


def _resolve_target(objective, cfg, dims, success_epsilon):
    if cfg.target is not None:
        return float(cfg.target[0]), float(cfg.target[1])
    if success_epsilon is not None and hasattr(objective, "min_value"):
        return float(objective.min_value(dims)), float(success_epsilon)
    return None, None
