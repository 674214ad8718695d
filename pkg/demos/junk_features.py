"""
Junk features move the best network size
========================================

Without junk features a small network is enough. With 100 uniform junk
features the smallest test error is only reached far beyond M = N.
"""

from elmprune import ExperimentConfig, run_experiment

cfg = ExperimentConfig(kind="junk-sweep", seeds=range(20), n_samples=300, junk_counts=(0, 100),
                       split=(1 / 3, 0.0, 2 / 3), grid=[5, 25, 50, 100, 200, 400, 1000])
report = run_experiment(cfg)

for j in (0, 100):
    sizes = report.column("M", junk_count=j)
    acc = report.column("mean_acc", junk_count=j)
    best = sizes[max(range(len(acc)), key=acc.__getitem__)]
    print(f"junk={j:>3}: " + "  ".join(f"M={m}:{a:.3f}" for m, a in zip(sizes, acc)) + f"  (best M={best})")
