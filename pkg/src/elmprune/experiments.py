"""Batch experiments: size and junk-feature sweeps, the fake-neuron probe,
pruning curves and the STD / FWD / RBP method table.

Each ``run_*`` function takes an :class:`ExperimentConfig` and returns a
:class:`RunReport` whose ``rows`` form the experiment's CSV. Every random
draw is derived from the configured seeds, so reports are reproducible
apart from wall-time fields.

Runs are indexed by ``(seed, repeat)`` with ``repeat`` in
``range(cv_splits)``. For synthetic data the seed also fixes the dataset;
each repeat re-splits it.
"""

import csv
import dataclasses
import json
import logging
import math
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path

import numpy as np

from . import pruning
from .data import SplitSpec, add_junk_features, derive_seed, gen_two_moons, load_csv, split, standardize
from .elm import ActivationKind, append_fake_neuron, hidden_output, init_hidden, labels_from_scores, train_elm
from .linalg import DEFAULT_RCOND, min_norm_lsq, svd
from .metrics import accuracy, score_model, summarize

log = logging.getLogger(__name__)

KINDS = ("junk-sweep", "size-sweep", "fake-neuron", "prune-compare", "method-table")

# seed stream tags
_DATA, _JUNK, _SPLIT, _INIT, _FAKE, _RND = range(6)

COLUMNS = {
    "junk-sweep": ["junk_count", "M", "mean_acc", "sd_acc", "n_runs"],
    "size-sweep": ["M", "mean_train_acc", "sd_train_acc", "mean_test_acc", "sd_test_acc", "n_runs"],
    "fake-neuron": ["M", "mean_abs_weight", "sd_abs_weight", "n_runs"],
    "prune-compare": ["method", "size", "mean_metric", "sd_metric", "n_runs"],
    "method-table": ["method", "mean_metric", "sd_metric", "mean_time_s", "sd_time_s",
                     "mean_size", "sd_size", "n_runs"],
}
TIMING_COLUMNS = ("mean_time_s", "sd_time_s")

SWEEP_FACTORS = (0.05, 0.1, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 4.0, 10.0)
FAKE_FACTORS = (0.1, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 4.0)

_KIND_DEFAULTS = {
    "junk-sweep": dict(split=(1 / 3, 0.0, 2 / 3), grid={"kind": "relative", "factors": SWEEP_FACTORS}),
    "size-sweep": dict(split=(1 / 3, 0.0, 2 / 3), grid={"kind": "relative", "factors": SWEEP_FACTORS}),
    "fake-neuron": dict(split=(1 / 3, 0.0, 2 / 3), grid={"kind": "relative", "factors": FAKE_FACTORS}),
    "prune-compare": dict(split=(1 / 3, 0.0, 2 / 3), grid={"kind": "geometric", "points": 40},
                          delta=math.inf),
    "method-table": dict(split=(0.7, 0.2, 0.1), grid={"kind": "geometric", "points": 15}, delta=0.02),
}


class ConfigError(ValueError):
    """Invalid experiment configuration; ``field`` names the offending entry."""

    def __init__(self, field_name, message):
        self.field = field_name
        super().__init__(f"{field_name}: {message}")


@dataclass
class ExperimentConfig:
    """Declarative description of one experiment run.

    ``split``, ``grid`` and ``delta`` left as None take per-kind defaults.
    ``m_star`` None means ten times the training-set size. ``grid`` is a
    list of sizes or a dict with ``kind`` one of ``geometric`` (``points``
    log-spaced sizes in [1, m_star]), ``step`` (every ``step``-th size
    down from m_star), ``relative`` (``factors`` times the training-set
    size) or ``list`` (``sizes``).
    """

    kind: str
    seeds: tuple = tuple(range(20))
    cv_splits: int = 1
    # data source: a CSV path, or synthetic two-moons with junk features
    csv_path: str | None = None
    label_column: str | int = -1
    n_samples: int = 300
    noise_sd: float = 0.1
    junk: int = 100
    junk_counts: tuple = (0, 100)
    junk_distribution: str = "uniform"
    standardize: bool = False
    # model and selection
    activation: str = "tanh"
    rcond: float = DEFAULT_RCOND
    m_star: int | None = None
    delta: float | None = None
    metric: str = "accuracy"
    patience: int | None = None
    refit: bool = False
    methods: tuple = ("fwd", "rnd", "rbp")
    split: tuple | None = None
    stratified: bool = True
    grid: object = None
    output_dir: str = "results"

    def __post_init__(self):
        self.seeds = tuple(int(s) for s in self.seeds)
        self.junk_counts = tuple(int(j) for j in self.junk_counts)
        self.methods = tuple(self.methods)
        defaults = _KIND_DEFAULTS.get(self.kind, {})
        if self.split is None:
            self.split = defaults.get("split", (0.7, 0.2, 0.1))
        self.split = tuple(float(f) for f in self.split)
        if self.grid is None:
            self.grid = defaults.get("grid")
        if self.delta is None:
            self.delta = defaults.get("delta", 0.02)
        self.delta = float(self.delta)
        self.validate()

    def validate(self):
        if self.kind not in KINDS:
            raise ConfigError("kind", f"must be one of {', '.join(KINDS)}")
        if not self.seeds:
            raise ConfigError("seeds", "must not be empty")
        if len(set(self.seeds)) != len(self.seeds):
            raise ConfigError("seeds", "must be distinct")
        if self.cv_splits < 1:
            raise ConfigError("cv_splits", "must be >= 1")
        if self.m_star is not None and self.m_star < 1:
            raise ConfigError("m_star", "must be >= 1")
        if not self.delta >= 0:
            raise ConfigError("delta", "must be non-negative")
        if self.metric not in ("accuracy", "auc"):
            raise ConfigError("metric", "must be 'accuracy' or 'auc'")
        try:
            ActivationKind(self.activation)
        except ValueError:
            raise ConfigError("activation", f"unknown activation {self.activation!r}") from None
        if self.csv_path is None:
            if self.n_samples < 4:
                raise ConfigError("n_samples", "must be >= 4")
            if self.junk < 0 or any(j < 0 for j in self.junk_counts):
                raise ConfigError("junk", "junk feature counts must be >= 0")
        if len(self.split) != 3:
            raise ConfigError("split", "must have three fractions (train, val, test)")
        try:
            SplitSpec(*self.split, stratified=self.stratified)
        except ValueError as exc:
            raise ConfigError("split", str(exc)) from None
        if self.kind == "method-table" and self.split[1] == 0:
            raise ConfigError("split", "method-table needs a validation fraction")
        bad = set(self.methods) - {"fwd", "rnd", "rbp"}
        if bad or not self.methods:
            raise ConfigError("methods", f"must be a non-empty subset of fwd, rnd, rbp (got {sorted(bad)})")
        if self.patience is not None and self.patience < 1:
            raise ConfigError("patience", "must be >= 1")
        if not isinstance(self.grid, (list, tuple, dict)):
            raise ConfigError("grid", "must be a list of sizes or a grid spec dict")

    @classmethod
    def from_dict(cls, d):
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = set(d) - names
        if unknown:
            raise ConfigError(sorted(unknown)[0], "unknown configuration field")
        try:
            return cls(**d)
        except TypeError as exc:
            raise ConfigError("kind", str(exc)) from None

    @classmethod
    def from_file(cls, path, **overrides):
        with open(path) as fh:
            d = json.load(fh)
        d.update({k: v for k, v in overrides.items() if v is not None})
        return cls.from_dict(d)

    def to_dict(self):
        d = dataclasses.asdict(self)
        d["delta"] = "inf" if math.isinf(self.delta) else self.delta
        return d

    def resolve_m_star(self, n_train):
        return self.m_star if self.m_star is not None else 10 * n_train

    def resolve_grid(self, n_train):
        """Sorted integer sizes in [1, m_star]."""
        m_star = self.resolve_m_star(n_train)
        g = self.grid
        if isinstance(g, (list, tuple)):
            sizes = g
        else:
            kind = g.get("kind")
            if kind == "geometric":
                sizes = pruning.geometric_grid(1, m_star, int(g.get("points", 15)))
            elif kind == "step":
                step = int(g.get("step", 1))
                if step < 1:
                    raise ConfigError("grid", "step must be >= 1")
                sizes = range(m_star, 0, -step)
            elif kind == "relative":
                sizes = [max(1, int(round(f * n_train))) for f in g.get("factors", SWEEP_FACTORS)]
            elif kind == "list":
                sizes = g.get("sizes", [])
            else:
                raise ConfigError("grid", f"unknown grid kind {kind!r}")
        sizes = sorted({int(s) for s in sizes})
        if not sizes:
            raise ConfigError("grid", "resolves to an empty grid")
        if sizes[0] < 1 or sizes[-1] > m_star:
            raise ConfigError("grid", f"sizes must lie in [1, m_star={m_star}]")
        return sizes


@dataclass
class RunReport:
    kind: str
    config: dict
    columns: list
    rows: list
    records: list = field(default_factory=list)
    summaries: dict = field(default_factory=dict)

    def column(self, name, **where):
        """Values of ``name`` over rows matching all ``where`` conditions."""
        return [r[name] for r in self.rows if all(r[k] == v for k, v in where.items())]


# -- run setup -------------------------------------------------------------


@dataclass
class _Run:
    seed: int
    repeat: int
    train: object
    val: object
    test: object
    init_seed: int

    def hashes(self):
        return {
            "train": self.train.fingerprint(),
            "val": self.val.fingerprint() if self.val is not None else None,
            "test": self.test.fingerprint(),
        }

    def record(self, **extra):
        return {"seed": self.seed, "repeat": self.repeat, "split_hash": self.hashes(), **extra}


def _runs(cfg, junk=None):
    """Yield the ``(seed, repeat)`` runs.

    ``junk`` overrides the junk-feature count; CSV data only gets junk
    features when it is given.
    """
    csv_data = load_csv(cfg.csv_path, cfg.label_column) if cfg.csv_path is not None else None
    for seed in cfg.seeds:
        if csv_data is not None:
            data = add_junk_features(csv_data, junk or 0, derive_seed(seed, _JUNK), cfg.junk_distribution)
        else:
            data = gen_two_moons(cfg.n_samples // 2, cfg.noise_sd, derive_seed(seed, _DATA))
            j = cfg.junk if junk is None else junk
            data = add_junk_features(data, j, derive_seed(seed, _JUNK), cfg.junk_distribution)
        for r in range(cfg.cv_splits):
            spec = SplitSpec(*cfg.split, seed=derive_seed(seed, _SPLIT, r), stratified=cfg.stratified)
            tr, va, te = split(data, spec)
            if cfg.standardize:
                parts = standardize(tr, *(d for d in (va, te) if d is not None))
                tr, te = parts[0], parts[-1]
                va = parts[1] if va is not None else None
            run = _Run(seed, r, tr, va, te, derive_seed(seed, _INIT, r))
            log.debug("seed=%d repeat=%d split=%s", seed, r, run.hashes())
            yield run


def _fmt(v):
    if isinstance(v, float):
        return repr(v)
    return str(v)


# -- experiments -----------------------------------------------------------


def run_junk_sweep(cfg):
    """Mean test accuracy against hidden size, for each junk-feature count."""
    act = ActivationKind(cfg.activation)
    rows, records = [], []
    for j in cfg.junk_counts:
        acc = {}
        for run in _runs(cfg, junk=j):
            grid = cfg.resolve_grid(run.train.n_samples)
            per_m = {}
            for M in grid:
                model = train_elm(run.train, M, pruning.size_seed(run.init_seed, M), act, cfg.rcond)
                z = hidden_output(model.hidden, run.test.X) @ model.beta
                per_m[M] = accuracy(labels_from_scores(z), run.test.y)
                acc.setdefault(M, []).append(per_m[M])
            records.append(run.record(junk_count=j, test_acc=per_m))
        for M in sorted(acc):
            s = summarize(acc[M])
            rows.append({"junk_count": j, "M": M, "mean_acc": s.mean, "sd_acc": s.sd, "n_runs": s.n_runs})
    return RunReport(cfg.kind, cfg.to_dict(), COLUMNS["junk-sweep"], rows, records)


def run_size_sweep(cfg):
    """Train and test accuracy against hidden size."""
    act = ActivationKind(cfg.activation)
    tr_acc, te_acc, records = {}, {}, []
    for run in _runs(cfg):
        n = run.train.n_samples
        grid = cfg.resolve_grid(n)
        rec = {"train_acc": {}, "test_acc": {}}
        for M in grid:
            model = train_elm(run.train, M, pruning.size_seed(run.init_seed, M), act, cfg.rcond)
            H = hidden_output(model.hidden, run.train.X)
            a_tr = accuracy(labels_from_scores(H @ model.beta), run.train.y)
            a_te = accuracy(labels_from_scores(hidden_output(model.hidden, run.test.X) @ model.beta), run.test.y)
            tr_acc.setdefault(M, []).append(a_tr)
            te_acc.setdefault(M, []).append(a_te)
            rec["train_acc"][M] = a_tr
            rec["test_acc"][M] = a_te
            if M == n:
                _, s, _ = svd(H)
                rec["full_rank_at_n"] = bool(s[-1] > 1e-8 * s[0])
        records.append(run.record(n_train=n, **rec))
    rows = []
    for M in sorted(tr_acc):
        a, b = summarize(tr_acc[M]), summarize(te_acc[M])
        rows.append({"M": M, "mean_train_acc": a.mean, "sd_train_acc": a.sd,
                     "mean_test_acc": b.mean, "sd_test_acc": b.sd, "n_runs": a.n_runs})
    return RunReport(cfg.kind, cfg.to_dict(), COLUMNS["size-sweep"], rows, records)


def run_fake_neuron(cfg):
    """Weight given to a disconnected random node, against hidden size.

    For each size ``M`` the training hidden-layer output gets one extra
    U[-1, 1] column and the ``M + 1`` output weights are solved jointly.
    """
    act = ActivationKind(cfg.activation)
    weights, records = {}, []
    for run in _runs(cfg):
        grid = cfg.resolve_grid(run.train.n_samples)
        per_m = {}
        for M in grid:
            layer = init_hidden(M, run.train.n_features, act, pruning.size_seed(run.init_seed, M))
            H = append_fake_neuron(hidden_output(layer, run.train.X), derive_seed(run.init_seed, _FAKE, M))
            beta = min_norm_lsq(H, run.train.y, cfg.rcond)
            per_m[M] = abs(float(beta[-1]))
            weights.setdefault(M, []).append(per_m[M])
        records.append(run.record(n_train=run.train.n_samples, abs_fake_weight=per_m))
    rows = []
    for M in sorted(weights):
        s = summarize(weights[M])
        rows.append({"M": M, "mean_abs_weight": s.mean, "sd_abs_weight": s.sd, "n_runs": s.n_runs})
    return RunReport(cfg.kind, cfg.to_dict(), COLUMNS["fake-neuron"], rows, records)


def run_prune_compare(cfg):
    """Metric-vs-size curves for FWD, RND and RBP.

    RBP and RND prune the same ``m_star`` model along the grid (largest
    size first); FWD retrains at every grid size. Curves are measured on
    the test split. With the default ``delta = inf`` pruning never stops
    early, so the full curves are produced.
    """
    act = ActivationKind(cfg.activation)
    curves = {m: {} for m in cfg.methods}
    records = []
    for run in _runs(cfg):
        n = run.train.n_samples
        m_star = cfg.resolve_m_star(n)
        grid = cfg.resolve_grid(n)
        schedule = grid[::-1]
        rec = {}
        if "fwd" in cfg.methods:
            res = pruning.forward_grow(run.train, run.test, grid, cfg.delta, run.init_seed, act,
                                       patience=len(grid) + 1, metric=cfg.metric, rcond=cfg.rcond)
            rec["fwd"] = dict(res.trace.steps)
        if "rnd" in cfg.methods or "rbp" in cfg.methods:
            big = train_elm(run.train, m_star, pruning.size_seed(run.init_seed, m_star), act, cfg.rcond)
            if "rnd" in cfg.methods:
                res = pruning.random_prune(big, run.test, cfg.delta, schedule, derive_seed(run.init_seed, _RND),
                                           cfg.metric)
                rec["rnd"] = dict(res.trace.steps)
            if "rbp" in cfg.methods:
                res = pruning.rbp(big, run.test, cfg.delta, schedule, metric=cfg.metric)
                rec["rbp"] = dict(res.trace.steps)
        for method, steps in rec.items():
            for size, v in steps.items():
                curves[method].setdefault(size, []).append(v)
        records.append(run.record(n_train=n, m_star=m_star, curves=rec))
    rows = []
    for method in ("fwd", "rnd", "rbp"):
        if method not in curves:
            continue
        for size in sorted(curves[method]):
            s = summarize(curves[method][size])
            rows.append({"method": method, "size": size, "mean_metric": s.mean, "sd_metric": s.sd,
                         "n_runs": s.n_runs})
    return RunReport(cfg.kind, cfg.to_dict(), COLUMNS["prune-compare"], rows, records)


def run_method_table(cfg):
    """STD, FWD and RBP end to end on identical splits and seeds.

    Each method selects a size on the validation split and is scored on
    the test split. Wall time covers training plus size selection.
    """
    act = ActivationKind(cfg.activation)
    out = {m: {"metric": [], "time": [], "size": []} for m in ("std", "fwd", "rbp")}
    records = []
    for run in _runs(cfg):
        n = run.train.n_samples
        m_star = cfg.resolve_m_star(n)
        grid = cfg.resolve_grid(n)
        results = {
            "std": pruning.std_select(run.train, run.val, run.init_seed, act, metric=cfg.metric, rcond=cfg.rcond),
            "fwd": pruning.forward_grow(run.train, run.val, grid, cfg.delta, run.init_seed, act,
                                        patience=cfg.patience, metric=cfg.metric, rcond=cfg.rcond),
            "rbp": pruning.train_and_prune(run.train, run.val, m_star, cfg.delta, grid[::-1], run.init_seed, act,
                                           refit=cfg.refit, metric=cfg.metric, rcond=cfg.rcond),
        }
        rec = {}
        for method, res in results.items():
            z = hidden_output(res.model.hidden, run.test.X) @ res.model.beta
            test_metric = score_model(z, run.test.y, cfg.metric)
            out[method]["metric"].append(test_metric)
            out[method]["time"].append(res.wall_time)
            out[method]["size"].append(res.model.size)
            rec[method] = {"test_metric": test_metric, "size": res.model.size, "wall_time": res.wall_time,
                           "val_metric": res.trace.chosen_metric}
        records.append(run.record(n_train=n, m_star=m_star, methods=rec))
    rows, summaries = [], {}
    for method in ("std", "fwd", "rbp"):
        m, t, s = (summarize(out[method][k]) for k in ("metric", "time", "size"))
        summaries[method] = {"metric": dataclasses.asdict(m), "time_s": dataclasses.asdict(t),
                             "size": dataclasses.asdict(s)}
        rows.append({"method": method, "mean_metric": m.mean, "sd_metric": m.sd, "mean_time_s": t.mean,
                     "sd_time_s": t.sd, "mean_size": s.mean, "sd_size": s.sd, "n_runs": m.n_runs})
    return RunReport(cfg.kind, cfg.to_dict(), COLUMNS["method-table"], rows, records, summaries)


RUNNERS = {
    "junk-sweep": run_junk_sweep,
    "size-sweep": run_size_sweep,
    "fake-neuron": run_fake_neuron,
    "prune-compare": run_prune_compare,
    "method-table": run_method_table,
}


def run_experiment(cfg):
    return RUNNERS[cfg.kind](cfg)


# -- output ----------------------------------------------------------------


def write_rows_csv(report, path, exclude=()):
    cols = [c for c in report.columns if c not in exclude]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(cols)
        for row in report.rows:
            w.writerow([_fmt(row[c]) for c in cols])
    return Path(path)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj) if math.isfinite(obj) else str(float(obj))
    return obj


def write_report(report, output_dir, timestamp=None):
    """Write ``<kind>_<timestamp>.csv`` and ``summary.json``; return both paths."""
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    stamp = timestamp or datetime.now().strftime("%Y%m%dT%H%M%S")
    csv_path = write_rows_csv(report, out / f"{report.kind}_{stamp}.csv")
    summary = {
        "kind": report.kind,
        "config": report.config,
        "csv": csv_path.name,
        "rows": report.rows,
        "summaries": report.summaries,
        "records": report.records,
    }
    json_path = out / "summary.json"
    json_path.write_text(json.dumps(_jsonable(summary), indent=2, sort_keys=True) + "\n")
    return csv_path, json_path


def format_table(report):
    """Plain-text rendering of the report rows."""
    if report.kind == "method-table":
        label = "AUC" if report.config.get("metric") == "auc" else "Accuracy"
        lines = [f"{'Method':<8}{label:>18}{'time [ms]':>20}{'M':>18}"]
        for r in report.rows:
            lines.append(
                f"{r['method'].upper():<8}"
                f"{r['mean_metric']:>10.3f} ± {r['sd_metric']:.3f}"
                f"{r['mean_time_s'] * 1e3:>12.1f} ± {r['sd_time_s'] * 1e3:<6.1f}"
                f"{r['mean_size']:>9.0f} ± {r['sd_size']:<6.0f}"
            )
        return "\n".join(lines)
    cols = report.columns
    lines = ["  ".join(f"{c:>14}" for c in cols)]
    for r in report.rows:
        lines.append("  ".join(f"{r[c]:>14.4f}" if isinstance(r[c], float) else f"{r[c]!s:>14}" for c in cols))
    return "\n".join(lines)
