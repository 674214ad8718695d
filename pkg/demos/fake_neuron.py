"""
Weight of a disconnected neuron
===============================

A column of pure noise is appended to the hidden output matrix. Its
fitted output weight is large only near M = N, where the system is
close to square and the noise column gets used to interpolate.
"""

from elmprune import ExperimentConfig, run_experiment

report = run_experiment(ExperimentConfig(kind="fake-neuron", seeds=range(20), n_samples=300, junk=100,
                                         split=(1 / 3, 0.0, 2 / 3)))
peak = max(r["mean_abs_weight"] for r in report.rows)
for r in report.rows:
    bar = "#" * int(round(40 * r["mean_abs_weight"] / peak))
    print(f"M={r['M']:>4}  {r['mean_abs_weight']:.3f}  {bar}")
