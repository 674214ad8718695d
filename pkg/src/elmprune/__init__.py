"""Extreme Learning Machines trained by minimal-norm least squares, with
relevance-based pruning and baseline size-selection schemes."""

from .data import CvPlan, Dataset, SplitSpec, add_junk_features, gen_two_moons, load_csv, make_cv_splits, split, write_csv
from .elm import (
    ActivationKind,
    ElmModel,
    HiddenLayer,
    append_fake_neuron,
    hidden_output,
    init_hidden,
    predict_labels,
    predict_scores,
    train,
    train_elm,
)
from .experiments import ExperimentConfig, RunReport, format_table, run_experiment, write_report
from .linalg import NumericalFailure, min_norm_lsq, pseudoinverse, smallest_nonzero_singular_value, svd
from .metrics import MetricSummary, accuracy, auc, summarize
from .pruning import (
    PruneTrace,
    SelectionResult,
    forward_grow,
    random_prune,
    rbp,
    std_select,
    train_and_prune,
)

__version__ = "0.1.0"
