#!/usr/bin/env python3
"""A miniature end-to-end experiment.

Three algorithms, four functions, both sweep modes, five seeded runs each,
executed through the harness. Writes the full report bundle (records,
descriptives, success ratios, pairwise signed-rank tables, manifest) into
demo_results/ and prints the plus/equal/minus summaries.

The same experiment is also available through the command line:
    bsalab run --config <json> --out demo_results
"""

from bsalab import ExperimentSpec, run_experiment, success_ratio
from bsalab.report import write_outputs

spec = ExperimentSpec(
    algorithms=("BSA", "DE", "PSO"),
    functions=("F3", "F8", "F11", "F14"),
    modes=("dimension-sweep", "range-sweep"),
    dims=(10,),
    ranges=(5.0, 250.0),
    runs=5,
    iterations=400,
    pop_size=30,
    success_epsilon=1e-6,
    master_seed=2024,
    parallelism=2,
)

records = run_experiment(spec, out_dir="demo_results")
print(f"{len(records)} runs complete")

comparisons = write_outputs("demo_results", spec, records)
for comp in comparisons:
    print(f"\n{comp.mode} / {comp.config}: problems compared: {', '.join(comp.problems)}")
    for competitor, (p, e, m) in comp.summary().items():
        print(f"  BSA vs {competitor}: {p}/{e}/{m} (+/=/-)")

ratios = [r for r in success_ratio(records) if r["config"] == "d10"][:6]
print("\nsample success ratios (dimension sweep):")
for row in ratios:
    print(f"  {row['algorithm']:<4} {row['function']:<4} "
          f"success {row['success_ratio']:.2f}")
print("\nreport files are in demo_results/")
