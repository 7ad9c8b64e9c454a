"""Shared domain types: search spaces, populations, seeded random streams.

Everything downstream (the optimizers, the benchmark registry, the experiment
harness) builds on the types in this module. All randomness flows through
``RandomSource``, a counter-based generator keyed by ``(seed, stream)`` so that
any run can be replayed bit-for-bit regardless of thread or process schedule.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np


class ConfigurationError(ValueError):
    """Invalid user-supplied configuration (bad bounds, bad parameters)."""


class ContractViolation(RuntimeError):
    """An internal precondition was broken (e.g. selecting on unevaluated fitness)."""


# ---------------------------------------------------------------------------
# search space


class SearchSpace:
    """Axis-aligned box of feasible coordinates.

    Parameters:
    - low: per-dimension lower bounds (scalar is broadcast when dims given).
    - up: per-dimension upper bounds.
    - dims: dimensionality, required only when low/up are scalars.
    - allow_degenerate: permit low == up (test fixtures only).
    """

    def __init__(self, low, up, dims=None, allow_degenerate=False):
        low = np.asarray(low, dtype=float)
        up = np.asarray(up, dtype=float)
        if low.ndim == 0:
            if dims is None:
                raise ConfigurationError("scalar bounds need an explicit dims")
            low = np.full(dims, float(low))
            up = np.full(dims, float(up))
        if low.shape != up.shape or low.ndim != 1:
            raise ConfigurationError("low and up must be 1-d vectors of equal length")
        if dims is not None and dims != low.size:
            raise ConfigurationError(f"dims={dims} does not match bound length {low.size}")
        if low.size < 1:
            raise ConfigurationError("search space needs at least one dimension")
        if np.any(low > up) or (not allow_degenerate and np.any(low >= up)):
            raise ConfigurationError("require low < up in every dimension")
        self.low = low
        self.up = up
        self.low.setflags(write=False)
        self.up.setflags(write=False)
        self.degenerate = bool(np.any(low == up))

    @property
    def dims(self) -> int:
        return self.low.size

    @property
    def width(self) -> np.ndarray:
        return self.up - self.low

    def contains(self, coords) -> bool:
        coords = np.asarray(coords)
        return bool(np.all(coords >= self.low) and np.all(coords <= self.up))

    @classmethod
    def symmetric(cls, half_width: float, dims: int) -> "SearchSpace":
        return cls(-half_width, half_width, dims=dims)

    def __repr__(self):
        return f"SearchSpace(low={self.low!r}, up={self.up!r})"

    def __eq__(self, other):
        return (isinstance(other, SearchSpace)
                and np.array_equal(self.low, other.low)
                and np.array_equal(self.up, other.up))


# ---------------------------------------------------------------------------
# populations

UNEVALUATED = np.nan  # fitness sentinel; real anomalies map to +inf, never NaN


@dataclass
class Individual:
    """One candidate solution: a coordinate vector and its fitness (None = unevaluated)."""

    coords: np.ndarray
    fitness: float | None


class Population:
    """N individuals of shared dimensionality plus their fitness values.

    ``coords`` is an (N, D) float array; ``fitness`` an (N,) float array where
    NaN marks a member whose coordinates changed since the last evaluation.
    """

    def __init__(self, coords, fitness=None, generation=0):
        coords = np.atleast_2d(np.asarray(coords, dtype=float))
        if coords.shape[0] < 1:
            raise ConfigurationError("population needs at least one member")
        self.coords = coords
        if fitness is None:
            fitness = np.full(coords.shape[0], UNEVALUATED)
        self.fitness = np.asarray(fitness, dtype=float)
        if self.fitness.shape != (coords.shape[0],):
            raise ConfigurationError("fitness length must equal population size")
        self.generation = generation

    @property
    def size(self) -> int:
        return self.coords.shape[0]

    @property
    def dims(self) -> int:
        return self.coords.shape[1]

    @property
    def evaluated(self) -> bool:
        return not np.any(np.isnan(self.fitness))

    @property
    def members(self) -> list[Individual]:
        return [Individual(self.coords[i].copy(),
                           None if np.isnan(self.fitness[i]) else float(self.fitness[i]))
                for i in range(self.size)]

    def best(self) -> Individual:
        if not self.evaluated:
            raise ContractViolation("best() requires a fully evaluated population")
        i = int(np.argmin(self.fitness))
        return Individual(self.coords[i].copy(), float(self.fitness[i]))

    def copy(self) -> "Population":
        return Population(self.coords.copy(), self.fitness.copy(), self.generation)


# ---------------------------------------------------------------------------
# random source


class RandomSource:
    """Deterministic random stream keyed by (seed, stream).

    Built on a counter-based generator, so two sources constructed with the
    same key produce bit-identical draw sequences on any machine and under any
    thread schedule. Each run owns exactly one stream; streams are never
    shared.
    """

    def __init__(self, seed: int, stream: int = 0):
        self.seed = int(seed)
        self.stream = int(stream)
        key = np.array([self.seed % 2**64, self.stream % 2**64], dtype=np.uint64)
        self._gen = np.random.Generator(np.random.Philox(key=key))

    def uniform(self, low=0.0, high=1.0, size=None):
        return self._gen.uniform(low, high, size)

    def standard_normal(self, size=None):
        return self._gen.standard_normal(size)

    def integers(self, low, high, size=None):
        """Integer draw(s) in [low, high)."""
        return self._gen.integers(low, high, size=size)

    def permutation(self, n: int) -> np.ndarray:
        """Fisher-Yates random permutation of range(n)."""
        return self._gen.permutation(n)

    def __repr__(self):
        return f"RandomSource(seed={self.seed}, stream={self.stream})"


# ---------------------------------------------------------------------------
# amplitude strategies


@dataclass(frozen=True)
class AmplitudeStrategy:
    """How the per-generation amplitude factor F is produced.

    kind is one of:
    - "scaled-normal": F = scale * N(0, 1), one fresh draw per generation
    - "constant":      F = value
    - "linear-schedule": F interpolated from f_min to f_max over the run
    """

    kind: str
    scale: float = 3.0
    value: float = 0.5
    f_min: float = 0.0
    f_max: float = 1.0

    def __post_init__(self):
        if self.kind not in ("scaled-normal", "constant", "linear-schedule"):
            raise ConfigurationError(f"unknown amplitude kind {self.kind!r}")
        if self.kind == "scaled-normal" and not self.scale > 0:
            raise ConfigurationError("scaled-normal requires scale > 0")
        if self.kind == "linear-schedule" and not self.f_min <= self.f_max:
            raise ConfigurationError("linear-schedule requires f_min <= f_max")


def scaled_normal(scale: float = 3.0) -> AmplitudeStrategy:
    return AmplitudeStrategy("scaled-normal", scale=scale)


def constant_amplitude(value: float) -> AmplitudeStrategy:
    return AmplitudeStrategy("constant", value=value)


def linear_schedule(f_min: float, f_max: float) -> AmplitudeStrategy:
    return AmplitudeStrategy("linear-schedule", f_min=f_min, f_max=f_max)


# ---------------------------------------------------------------------------
# population operations


def initialize_population(n: int, space: SearchSpace, rng: RandomSource) -> Population:
    """Uniform random population inside the box; fitness left unevaluated.

    Consumes exactly one (n, D) uniform batch from rng.
    """
    if n < 1:
        raise ConfigurationError("population size must be >= 1")
    u = rng.uniform(size=(n, space.dims))
    coords = space.low + u * (space.up - space.low)
    return Population(coords, generation=0)


def boundary_control(pop: Population, space: SearchSpace, rng: RandomSource,
                     policy: str = "regenerate") -> Population:
    """Repair out-of-box coordinates; in-bounds coordinates are untouched.

    policy "regenerate" replaces each violating coordinate with a fresh
    uniform draw in [low_j, up_j]; "clip" snaps it to the nearer bound.
    Members that were repaired have their fitness reset to unevaluated.

    RNG contract: under "regenerate" one (N, D) uniform batch is consumed if
    and only if at least one coordinate violates; only the violating cells of
    the batch are used. "clip" consumes nothing.
    """
    if pop.dims != space.dims:
        raise ConfigurationError("population/space dimensionality mismatch")
    mask = (pop.coords < space.low) | (pop.coords > space.up)
    if not mask.any():
        return pop
    if policy == "regenerate":
        u = rng.uniform(size=pop.coords.shape)
        fresh = space.low + u * (space.up - space.low)
        coords = np.where(mask, fresh, pop.coords)
    elif policy == "clip":
        coords = np.clip(pop.coords, space.low, space.up)
    else:
        raise ConfigurationError(f"unknown boundary policy {policy!r}")
    fitness = pop.fitness.copy()
    fitness[mask.any(axis=1)] = UNEVALUATED
    return Population(coords, fitness, pop.generation)


def evaluate(pop: Population, f) -> tuple[Population, int]:
    """Fill in fitness for every unevaluated member.

    Returns the population and the number of members actually evaluated
    (cached fitness is never recomputed). Non-finite objective output is
    recorded as +inf and counted on f.anomalies when f supports it.
    """
    stale = np.isnan(pop.fitness)
    count = int(stale.sum())
    if count == 0:
        return pop, 0
    values = np.asarray(f(pop.coords[stale]), dtype=float).reshape(count)
    bad = ~np.isfinite(values)
    if bad.any():
        values = np.where(bad, np.inf, values)
        if hasattr(f, "note_anomalies"):
            f.note_anomalies(int(bad.sum()))
    fitness = pop.fitness.copy()
    fitness[stale] = values
    return Population(pop.coords, fitness, pop.generation), count


# ---------------------------------------------------------------------------
# run bookkeeping shared by every optimizer


class CountingObjective:
    """Wraps a batch objective, counting evaluations and tracking target hits.

    The wrapped callable maps an (m, D) array to m fitness values. When a
    target (value, epsilon) is supplied, the wrapper records the evaluation
    index and elapsed time at which some evaluation first landed within
    epsilon of the target value.
    """

    def __init__(self, fn, target_value=None, target_epsilon=None):
        self._fn = fn
        self.calls = 0
        self.anomalies = 0
        self.target_value = target_value
        self.target_epsilon = target_epsilon
        self.evals_to_target = None
        self.time_to_target = None
        self.best_seen = np.inf
        self._t0 = time.perf_counter()

    def __call__(self, batch):
        batch = np.atleast_2d(np.asarray(batch, dtype=float))
        values = np.asarray(self._fn(batch), dtype=float).reshape(batch.shape[0])
        m = batch.shape[0]
        finite = np.where(np.isfinite(values), values, np.inf)
        if self.target_value is not None and self.evals_to_target is None:
            hits = np.abs(finite - self.target_value) <= self.target_epsilon
            if hits.any():
                self.evals_to_target = self.calls + int(np.argmax(hits)) + 1
                self.time_to_target = time.perf_counter() - self._t0
        self.calls += m
        lo = float(finite.min())
        if lo < self.best_seen:
            self.best_seen = lo
        return values

    def note_anomalies(self, n):
        self.anomalies += n

    @property
    def target_reached(self) -> bool:
        return self.evals_to_target is not None


@dataclass
class RunRecord:
    """Outcome of one algorithm x function x configuration x seed execution."""

    algorithm: str
    function: str
    best_value: float
    best_coords: np.ndarray
    evaluations: int
    iterations: int
    evals_to_target: int | None = None
    iteration_to_target: int | None = None
    time_to_target: float | None = None
    wall_time_s: float = 0.0
    success: bool = False
    anomalies: int = 0
    mode: str = ""
    config: str = ""
    seed_index: int = -1
    domain_override: bool = False
    trace: list = field(default_factory=list, repr=False)

    def key(self):
        return (self.algorithm, self.function, self.mode, self.config, self.seed_index)
