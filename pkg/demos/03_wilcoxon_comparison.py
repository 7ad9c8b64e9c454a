#!/usr/bin/env python3
"""Paired statistical comparison of two optimizers.

Runs the backtracking optimizer and DE on the EggCrate function from 15
paired seeds, then applies the two-sided Wilcoxon signed-rank test to the
per-seed results. The test is oriented so a "plus" verdict means the first
algorithm (here the backtracking optimizer) wins.
"""

import numpy as np

from bsalab import (BsaConfig, CompetitorConfig, RandomSource, bsa_minimize,
                    de_minimize, describe, get, wilcoxon_signed_rank)

fn = get("F8")
space = fn.default_space(2)
runs = 15

bsa_vals, de_vals = [], []
for seed in range(runs):
    cfg = BsaConfig(pop_size=30, max_iterations=300)
    bsa_vals.append(bsa_minimize(fn, space, cfg, RandomSource(seed, 1)).best_value)
    dcfg = CompetitorConfig("DE", pop_size=30, max_iterations=300)
    de_vals.append(de_minimize(fn, space, dcfg, RandomSource(seed, 2)).best_value)

for name, vals in (("backtracking", bsa_vals), ("DE", de_vals)):
    s = describe(vals)
    print(f"{name:>13}: mean {s.mean:.3e}  std {s.std_dev:.3e}  "
          f"best {s.best:.3e}  worst {s.worst:.3e}")

# lower is better, so pass the competitor first: positive ranks accumulate
# on pairs where DE's value is larger (worse)
r = wilcoxon_signed_rank(np.array(de_vals), np.array(bsa_vals), alpha=0.05)
print(f"\nR+ = {r.r_plus:g}, R- = {r.r_minus:g}, n_eff = {r.n_effective}, "
      f"p = {r.p_value:.4f} ({r.method})")
print(f"verdict: {r.win_symbol}  "
      "(+ first algorithm better, - worse, = no significant difference)")
