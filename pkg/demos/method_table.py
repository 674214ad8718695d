"""
Size selection: STD, FWD and RBP
================================

70/20/10 splits, 20 seeds and 5 splits each. STD searches sizes below N,
FWD grows fresh networks until the validation accuracy levels off, RBP
trains one large network and prunes it.
"""

from elmprune import ExperimentConfig, format_table, run_experiment

report = run_experiment(ExperimentConfig(kind="method-table", seeds=range(20), cv_splits=5,
                                         n_samples=300, junk=100))
print(format_table(report))
