"""Straight-line, loop-by-loop reference of one backtracking-search generation.

This is the oracle for the modular pipeline: every update rule is applied
literally, cell by cell, in plain Python loops. It consumes the random stream
through the same documented batch draws as the pipeline, so a shared
(seed, stream) key must reproduce the pipeline's output bit for bit.
"""

import math

import numpy as np


def reference_generation(cur_coords, cur_fit, hist_coords, hist_fit,
                         low, up, mix_rate, crossover_mode, amplitude,
                         iteration, max_iterations, best_coords, best_fit,
                         objective_row, rng):
    """One generation, computed with explicit loops.

    objective_row maps a single coordinate vector to a float. amplitude is an
    AmplitudeStrategy. Returns (cur_coords, cur_fit, hist_coords, hist_fit,
    best_coords, best_fit, F).
    """
    n, d = cur_coords.shape

    # historical refresh: replace with probability 1/2, then permute rows
    u2 = rng.uniform(size=2)
    if u2[0] < u2[1]:
        hist_coords = cur_coords.copy()
        hist_fit = cur_fit.copy()
    perm = rng.permutation(n)
    hist_coords = np.stack([hist_coords[perm[i]] for i in range(n)])
    hist_fit = np.array([hist_fit[perm[i]] for i in range(n)])

    # amplitude factor
    if amplitude.kind == "scaled-normal":
        F = amplitude.scale * float(rng.standard_normal())
    elif amplitude.kind == "constant":
        F = amplitude.value
    else:
        frac = iteration / max_iterations if max_iterations > 0 else 1.0
        F = amplitude.f_min + (amplitude.f_max - amplitude.f_min) * frac

    # mutation, cell by cell
    mutant = np.empty((n, d))
    for i in range(n):
        for j in range(d):
            mutant[i, j] = cur_coords[i, j] + F * (hist_coords[i, j] - cur_coords[i, j])

    mutant = _repair(mutant, low, up, rng)

    # crossover map, row by row
    dual = crossover_mode == "dual-strategy"
    coins = rng.uniform(size=n) if dual else None
    us = rng.uniform(size=n)
    keys = rng.uniform(size=(n, d))
    singles = rng.integers(0, d, size=n) if dual else None
    mask = np.zeros((n, d), dtype=bool)
    for i in range(n):
        if dual and coins[i] >= 0.5:
            mask[i, singles[i]] = True
        else:
            k = max(1, math.ceil(mix_rate * us[i] * d))
            k = min(k, d)
            for col in np.argsort(keys[i])[:k]:
                mask[i, col] = True

    trial = np.empty((n, d))
    for i in range(n):
        for j in range(d):
            trial[i, j] = mutant[i, j] if mask[i, j] else cur_coords[i, j]

    trial = _repair(trial, low, up, rng)

    trial_fit = np.array([objective_row(trial[i]) for i in range(n)])

    # greedy per-slot selection, then running-best update
    new_coords = cur_coords.copy()
    new_fit = cur_fit.copy()
    for i in range(n):
        if trial_fit[i] < cur_fit[i]:
            new_coords[i] = trial[i]
            new_fit[i] = trial_fit[i]
    for i in range(n):
        if new_fit[i] < best_fit:
            best_fit = float(new_fit[i])
            best_coords = new_coords[i].copy()

    return new_coords, new_fit, hist_coords, hist_fit, best_coords, best_fit, F


def _repair(coords, low, up, rng):
    """Uniform regeneration of out-of-box cells; one (n, d) batch is drawn
    if and only if at least one cell violates."""
    n, d = coords.shape
    violating = any(coords[i, j] < low[j] or coords[i, j] > up[j]
                    for i in range(n) for j in range(d))
    if not violating:
        return coords
    batch = rng.uniform(size=(n, d))
    out = coords.copy()
    for i in range(n):
        for j in range(d):
            if coords[i, j] < low[j] or coords[i, j] > up[j]:
                out[i, j] = low[j] + batch[i, j] * (up[j] - low[j])
    return out
