"""
Relevance-based pruning against random pruning
==============================================

One network with M* = 1000 nodes is trained per seed. Nodes are then
removed one at a time, either smallest |beta| first or in random order,
without retraining. Both curves are scored on the test split.
"""

import numpy as np

from elmprune import ExperimentConfig, run_experiment

cfg = ExperimentConfig(kind="prune-compare", seeds=range(20), n_samples=300, junk=100,
                       split=(1 / 3, 0.0, 2 / 3), m_star=1000, grid={"kind": "step", "step": 1},
                       methods=("rnd", "rbp"))
report = run_experiment(cfg)

sizes = np.array(report.column("size", method="rbp"))
rbp = np.array(report.column("mean_metric", method="rbp"))
rnd = np.array(report.column("mean_metric", method="rnd"))
for m in (1000, 800, 600, 400, 200, 100, 50, 20, 5):
    i = int(np.flatnonzero(sizes == m)[0])
    print(f"size {m:>4}: RBP {rbp[i]:.3f}  RND {rnd[i]:.3f}")
