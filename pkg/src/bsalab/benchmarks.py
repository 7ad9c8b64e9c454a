"""The 16-function benchmark suite.

Each entry carries the canonical formula (vectorized over a batch of points),
its default search box, the known global minimum (value and minimizer
coordinates where published), a scalability flag, and an opaque per-function
hardness percentage. Minimum values are stored at full double precision;
the coarser figures commonly quoted in benchmark tables are kept alongside
as ``table_min`` metadata.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .core import ConfigurationError, SearchSpace

# per-dimension constants, frozen from a high-precision numerical refinement
_STYBLINSKI_X = -2.9035340314007785
_STYBLINSKI_F = -39.16616570377141
_SCHWEFEL_X = 420.9687487856824
_SCHWEFEL_OFFSET = 418.9828872724336


def _ackley(x):
    d = x.shape[1]
    s1 = np.sum(x * x, axis=1) / d
    s2 = np.sum(np.cos(2 * np.pi * x), axis=1) / d
    return -20.0 * np.exp(-0.2 * np.sqrt(s1)) - np.exp(s2) + 20.0 + np.e


def _alpine01(x):
    return np.sum(np.abs(x * np.sin(x) + 0.1 * x), axis=1)


def _bird(x):
    a, b = x[:, 0], x[:, 1]
    return (np.sin(a) * np.exp((1 - np.cos(b)) ** 2)
            + np.cos(b) * np.exp((1 - np.sin(a)) ** 2) + (a - b) ** 2)


def _leon(x):
    a, b = x[:, 0], x[:, 1]
    return 100.0 * (b - a ** 3) ** 2 + (1 - a) ** 2


def _cross_in_tray(x):
    a, b = x[:, 0], x[:, 1]
    r = np.sqrt(a * a + b * b)
    inner = np.abs(np.sin(a) * np.sin(b) * np.exp(np.abs(100.0 - r / np.pi)))
    return -1e-4 * (inner + 1.0) ** 0.1


def _easom(x):
    a, b = x[:, 0], x[:, 1]
    return -np.cos(a) * np.cos(b) * np.exp(-((a - np.pi) ** 2) - (b - np.pi) ** 2)


def _whitley(x):
    # general n-dimensional double sum over (i, j) pairs
    xi = x[:, :, None]
    xj = x[:, None, :]
    t = 100.0 * (xi ** 2 - xj) ** 2 + (1.0 - xj) ** 2
    return np.sum(t * t / 4000.0 - np.cos(t) + 1.0, axis=(1, 2))


def _egg_crate(x):
    a, b = x[:, 0], x[:, 1]
    return a * a + b * b + 25.0 * (np.sin(a) ** 2 + np.sin(b) ** 2)


def _griewank(x):
    d = x.shape[1]
    idx = np.sqrt(np.arange(1, d + 1, dtype=float))
    return np.sum(x * x, axis=1) / 4000.0 - np.prod(np.cos(x / idx), axis=1) + 1.0


def _holder_table(x):
    a, b = x[:, 0], x[:, 1]
    r = np.sqrt(a * a + b * b)
    return -np.abs(np.sin(a) * np.cos(b) * np.exp(np.abs(1.0 - r / np.pi)))


def _rastrigin(x):
    d = x.shape[1]
    return 10.0 * d + np.sum(x * x - 10.0 * np.cos(2 * np.pi * x), axis=1)


def _rosenbrock(x):
    return np.sum(100.0 * (x[:, 1:] - x[:, :-1] ** 2) ** 2 + (1.0 - x[:, :-1]) ** 2, axis=1)


def _salomon(x):
    r = np.sqrt(np.sum(x * x, axis=1))
    return 1.0 - np.cos(2 * np.pi * r) + 0.1 * r


def _sphere(x):
    return np.sum(x * x, axis=1)


def _styblinski_tang(x):
    return 0.5 * np.sum(x ** 4 - 16.0 * x ** 2 + 5.0 * x, axis=1)


def _schwefel26(x):
    d = x.shape[1]
    return _SCHWEFEL_OFFSET * d - np.sum(x * np.sin(np.sqrt(np.abs(x))), axis=1)


@dataclass(frozen=True)
class ObjectiveFunction:
    """A named benchmark with its box, known minimum, and hardness metadata.

    - min_value(dims): global minimum value at the given dimensionality.
    - min_points(dims): known minimizer coordinates (may be empty).
    - table_min: the rounded minimum figure quoted in benchmark tables
      (per dimension when per_dim_min is set).
    """

    id: str
    name: str
    fn: callable
    low: float
    up: float
    scalable: bool
    hardness_pct: float
    table_min: float
    _min_value: float = 0.0
    _min_points: tuple = ()
    per_dim_min: bool = False

    def default_space(self, dims: int | None = None) -> SearchSpace:
        d = self.check_dims(dims if dims is not None else 2)
        return SearchSpace(self.low, self.up, dims=d)

    def check_dims(self, dims: int) -> int:
        if not self.scalable and dims != 2:
            raise ConfigurationError(f"{self.id} ({self.name}) is fixed at 2 dimensions")
        if dims < 1:
            raise ConfigurationError("dims must be >= 1")
        return dims

    def min_value(self, dims: int = 2) -> float:
        self.check_dims(dims)
        return self._min_value * dims if self.per_dim_min else self._min_value

    def min_points(self, dims: int = 2) -> list[np.ndarray]:
        self.check_dims(dims)
        pts = []
        for p in self._min_points:
            if np.isscalar(p):
                pts.append(np.full(dims, float(p)))
            else:
                pts.append(np.asarray(p, dtype=float))
        return pts

    def __call__(self, x) -> np.ndarray:
        x = np.atleast_2d(np.asarray(x, dtype=float))
        self.check_dims(x.shape[1])
        return self.fn(x)


_REGISTRY = [
    ObjectiveFunction("F1", "Ackley", _ackley, -32, 32, True, 48.25, 0.0,
                      _min_points=(0.0,)),
    ObjectiveFunction("F2", "Alpine01", _alpine01, 0, 10, False, 65.17, 0.0,
                      _min_points=(0.0,)),
    ObjectiveFunction("F3", "Bird", _bird, -2 * math.pi, 2 * math.pi, False, 59.00,
                      -106.76453, _min_value=-106.76453674926472,
                      _min_points=((4.701043132573484, 3.152938515188318),
                                   (-1.582142172055011, -3.130246799635430))),
    ObjectiveFunction("F4", "Leon", _leon, 0, 10, False, 41.17, 0.0,
                      _min_points=((1.0, 1.0),)),
    ObjectiveFunction("F5", "CrossInTray", _cross_in_tray, -10, 10, False, 74.08,
                      -2.062611, _min_value=-2.0626118708227397,
                      _min_points=((1.349406585087064, 1.349406608602084),
                                   (-1.349406585087064, 1.349406608602084),
                                   (1.349406585087064, -1.349406608602084),
                                   (-1.349406585087064, -1.349406608602084))),
    ObjectiveFunction("F6", "Easom", _easom, -100, 100, False, 26.08, -1.0,
                      _min_value=-1.0, _min_points=((math.pi, math.pi),)),
    ObjectiveFunction("F7", "Whitley", _whitley, -10.24, 10.24, False, 4.92, 0.0,
                      _min_points=(1.0,)),
    ObjectiveFunction("F8", "EggCrate", _egg_crate, -5, 5, False, 64.92, 0.0,
                      _min_points=(0.0,)),
    ObjectiveFunction("F9", "Griewank", _griewank, -600, 600, True, 6.08, 0.0,
                      _min_points=(0.0,)),
    ObjectiveFunction("F10", "HolderTable", _holder_table, -10, 10, False, 80.08,
                      -19.2085, _min_value=-19.20850256788675,
                      _min_points=((8.055023472141116, 9.664590028909654),
                                   (-8.055023472141116, 9.664590028909654),
                                   (8.055023472141116, -9.664590028909654),
                                   (-8.055023472141116, -9.664590028909654))),
    ObjectiveFunction("F11", "Rastrigin", _rastrigin, -5.12, 5.12, True, 39.50, 0.0,
                      _min_points=(0.0,)),
    ObjectiveFunction("F12", "Rosenbrock", _rosenbrock, -5, 10, True, 44.17, 0.0,
                      _min_points=(1.0,)),
    ObjectiveFunction("F13", "Salomon", _salomon, -100, 100, False, 10.33, 0.0,
                      _min_points=(0.0,)),
    ObjectiveFunction("F14", "Sphere", _sphere, -1, 1, False, 82.75, 0.0,
                      _min_points=(0.0,)),
    ObjectiveFunction("F15", "StyblinskiTang", _styblinski_tang, -5, 5, True, 70.50,
                      -39.1661, _min_value=_STYBLINSKI_F,
                      _min_points=(_STYBLINSKI_X,), per_dim_min=True),
    ObjectiveFunction("F16", "Schwefel26", _schwefel26, -500, 500, False, 62.67, 0.0,
                      _min_points=(_SCHWEFEL_X,)),
]

_BY_ID = {f.id: f for f in _REGISTRY}


def registry() -> list[ObjectiveFunction]:
    """All 16 benchmark functions, in id order."""
    return list(_REGISTRY)


def get(function_id: str) -> ObjectiveFunction:
    try:
        return _BY_ID[function_id]
    except KeyError:
        valid = ", ".join(f.id for f in _REGISTRY)
        raise ConfigurationError(f"unknown function {function_id!r}; valid ids: {valid}") from None


def evaluate_function(function_id: str, x) -> float | np.ndarray:
    """Evaluate one benchmark at a point (D,) or batch (m, D)."""
    f = get(function_id)
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    out = f(x)
    return float(out[0]) if single else out


def registry_json() -> str:
    """Registry metadata as JSON for external tooling."""
    rows = [{
        "id": f.id,
        "name": f.name,
        "low": f.low,
        "up": f.up,
        "min": f.min_value(2),
        "dim": "n" if f.scalable else 2,
        "hardness_pct": f.hardness_pct,
    } for f in _REGISTRY]
    return json.dumps(rows, indent=2)
