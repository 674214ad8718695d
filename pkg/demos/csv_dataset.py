"""
Running the protocol on your own CSV
====================================

Any pre-featurized table works: one sample per row, numeric features,
and a label column holding -1/+1 or 0/1. Here a synthetic table is
written first so the script is self-contained.

With only 20 junk features a small network is already good, so STD and
FWD tend to beat pruning here. Try 100 junk features to see the
ordering flip.
"""

import tempfile
from pathlib import Path

from elmprune import ExperimentConfig, add_junk_features, format_table, gen_two_moons, load_csv, run_experiment, write_csv

tmp = Path(tempfile.mkdtemp())
data = add_junk_features(gen_two_moons(250, seed=3), 20, seed=4)
path = write_csv(data, tmp / "moons.csv")

loaded = load_csv(path, label_column="label")
print(f"{path.name}: {loaded.n_samples} samples, {loaded.n_features} features")

cfg = ExperimentConfig(kind="method-table", csv_path=str(path), label_column="label",
                       seeds=range(5), metric="auc", m_star=500)
print(format_table(run_experiment(cfg)))
