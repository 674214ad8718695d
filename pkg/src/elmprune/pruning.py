"""Network-size selection: relevance-based pruning and its baselines.

All strategies score candidate sizes on a held-out set with a
higher-is-better metric (accuracy by default, or AUC). ``delta`` is in
the metric's own units, so with accuracy it is an error-rate tolerance.

* :func:`rbp` trains nothing: it sorts the hidden nodes of one large
  model by ``|beta|`` and drops them from the small end.
* :func:`random_prune` is the same loop with a random removal order.
* :func:`forward_grow` retrains a fresh model at every grid size.
* :func:`std_select` keeps to sizes below the number of training samples.
"""

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .data import derive_seed
from .elm import ActivationKind, hidden_output, train, train_elm
from .linalg import DEFAULT_RCOND
from .metrics import score_model

STEP_SCHEDULE_LIMIT = 2000
GEOMETRIC_RATIO = 0.9


@dataclass(frozen=True)
class PruneTrace:
    """Sizes visited, in order, with the held-out metric at each."""

    steps: tuple
    chosen_size: int
    chosen_metric: float
    stopped_early: bool = False

    def __post_init__(self):
        steps = tuple((int(s), float(m)) for s, m in self.steps)
        object.__setattr__(self, "steps", steps)
        sizes = [s for s, _ in steps]
        if len(sizes) > 1:
            d = np.diff(sizes)
            if not (np.all(d > 0) or np.all(d < 0)):
                raise ValueError("trace sizes must be strictly monotone")
        if self.chosen_size not in sizes:
            raise ValueError(f"chosen size {self.chosen_size} not among visited sizes")

    @property
    def sizes(self):
        return [s for s, _ in self.steps]

    @property
    def metrics(self):
        return [m for _, m in self.steps]

    @property
    def best_so_far(self):
        return np.maximum.accumulate(self.metrics).tolist()


@dataclass(frozen=True)
class SelectionResult:
    model: object
    trace: PruneTrace
    wall_time: float = field(default=0.0, compare=False)

    def __post_init__(self):
        if self.model.size != self.trace.chosen_size:
            raise ValueError("model size does not match the chosen trace size")


# -- grids -----------------------------------------------------------------


def geometric_grid(lo, hi, n_points):
    """Increasing integer sizes roughly evenly spaced in log scale, endpoints included."""
    if lo < 1 or hi < lo:
        raise ValueError(f"invalid grid bounds [{lo}, {hi}]")
    if n_points < 1:
        raise ValueError("n_points must be >= 1")
    if n_points == 1 or lo == hi:
        return [int(hi)]
    pts = np.rint(np.geomspace(lo, hi, n_points)).astype(int)
    return sorted(set(pts.tolist()))


def default_schedule(m_star):
    """Decreasing removal schedule from ``m_star`` down to 1.

    One node at a time up to ``STEP_SCHEDULE_LIMIT`` nodes; beyond that,
    sizes shrink geometrically by ``GEOMETRIC_RATIO`` per step.
    """
    if m_star < 1:
        raise ValueError("m_star must be >= 1")
    if m_star <= STEP_SCHEDULE_LIMIT:
        return list(range(m_star, 0, -1))
    sizes = []
    s = float(m_star)
    while s >= 1.0:
        sizes.append(int(round(s)))
        s *= GEOMETRIC_RATIO
    sizes.append(1)
    return sorted(set(sizes), reverse=True)


def _check_schedule(schedule, model_size):
    schedule = [int(s) for s in schedule]
    if not schedule:
        raise ValueError("schedule must not be empty")
    if any(s < 1 for s in schedule):
        raise ValueError("schedule sizes must be >= 1")
    if schedule[0] > model_size:
        raise ValueError(f"schedule starts at {schedule[0]} but the model has {model_size} nodes")
    if any(a <= b for a, b in zip(schedule, schedule[1:])):
        raise ValueError("schedule must be strictly decreasing")
    return schedule


# -- pruning ---------------------------------------------------------------


def relevance_order(beta):
    """Node indices by decreasing ``|beta|``; ties keep their original order."""
    return np.argsort(-np.abs(np.asarray(beta)), kind="stable")


def prune_in_order(model, order, val_data, delta, schedule=None, metric="accuracy"):
    """Drop nodes from the tail of ``order`` following ``schedule``.

    Output weights are never re-solved, so removing a set of nodes changes
    the held-out scores by exactly minus their contributions. The loop
    stops the first time the metric falls more than ``delta`` below the
    best value seen so far, and returns the last size that did not.
    """
    if not delta >= 0:
        raise ValueError("delta must be non-negative")
    schedule = _check_schedule(default_schedule(model.size) if schedule is None else schedule, model.size)
    order = np.asarray(order, dtype=np.intp)
    H = hidden_output(model.hidden, val_data.X)[:, order]
    contrib_beta = model.beta[order]
    scores = H @ contrib_beta

    steps = []
    best = -math.inf
    chosen = None
    stopped = False
    kept = model.size
    for size in schedule:
        if size < kept:
            scores = scores - H[:, size:kept] @ contrib_beta[size:kept]
            kept = size
        value = score_model(scores, val_data.y, metric)
        steps.append((size, value))
        best = max(best, value)
        if value < best - delta:
            stopped = True
            break
        chosen = (size, value)

    size, value = chosen
    pruned = model.select(order[:size])
    return pruned, PruneTrace(tuple(steps), size, value, stopped)


def rbp(model, val_data, delta, schedule=None, refit=False, train_data=None, metric="accuracy"):
    """Relevance-based pruning of a trained model.

    Nodes are ranked by ``|beta|`` and removed from the least relevant end.
    With ``refit`` the output weights of the chosen sub-network are solved
    again on ``train_data``; the trace keeps the un-refitted metrics.
    """
    if refit and train_data is None:
        raise ValueError("refit=True needs train_data")
    t0 = time.perf_counter()
    pruned, trace = prune_in_order(model, relevance_order(model.beta), val_data, delta, schedule, metric)
    if refit:
        pruned = train(pruned.hidden, train_data)
    return SelectionResult(pruned, trace, time.perf_counter() - t0)


def random_prune(model, val_data, delta, schedule=None, seed=0, metric="accuracy"):
    """Control for :func:`rbp`: identical loop, uniformly random removal order."""
    t0 = time.perf_counter()
    order = np.random.default_rng(seed).permutation(model.size)
    pruned, trace = prune_in_order(model, order, val_data, delta, schedule, metric)
    return SelectionResult(pruned, trace, time.perf_counter() - t0)


def train_and_prune(train_data, val_data, m_star, delta, schedule=None, seed=0,
                    activation=ActivationKind.TANH, refit=False, metric="accuracy",
                    rcond=DEFAULT_RCOND):
    """Fit one ELM with ``m_star`` nodes, then :func:`rbp` it.

    The layer is drawn from ``size_seed(seed, m_star)``, the same layer
    :func:`forward_grow` would draw at that size. The reported wall time
    covers both the fit and the pruning.
    """
    t0 = time.perf_counter()
    model = train_elm(train_data, m_star, size_seed(seed, m_star), activation, rcond)
    res = rbp(model, val_data, delta, schedule, refit, train_data, metric)
    return SelectionResult(res.model, res.trace, time.perf_counter() - t0)


# -- growing baselines -----------------------------------------------------


def size_seed(seed, M):
    """Seed of the fresh hidden layer drawn for size ``M``."""
    return derive_seed(seed, M)


def default_patience(n_grid):
    return max(1, math.ceil(2 * n_grid / 3))


def forward_grow(train_data, val_data, grid, delta, seed=0, activation=ActivationKind.TANH,
                 patience=None, metric="accuracy", rcond=DEFAULT_RCOND):
    """Retrain a fresh ELM at each increasing grid size until the metric levels off.

    Growth stops once ``patience`` consecutive grid points have passed
    without the metric rising by at least ``delta`` above the level of the
    last such rise, or when the grid runs out. The best-scoring model seen
    is returned. ``patience`` defaults to two thirds of the grid length.
    """
    grid = [int(m) for m in grid]
    if not grid:
        raise ValueError("grid must not be empty")
    if any(a >= b for a, b in zip(grid, grid[1:])) or grid[0] < 1:
        raise ValueError("grid must be strictly increasing positive sizes")
    if not delta >= 0:
        raise ValueError("delta must be non-negative")
    if patience is None:
        patience = default_patience(len(grid))

    t0 = time.perf_counter()
    steps = []
    best = None
    level = None
    stall = 0
    stopped = False
    for M in grid:
        model = train_elm(train_data, M, size_seed(seed, M), activation, rcond)
        value = score_model(hidden_output(model.hidden, val_data.X) @ model.beta, val_data.y, metric)
        steps.append((M, value))
        if best is None or value > best[1]:
            best = (model, value)
        if level is None or value >= level + delta:
            level = value
            stall = 0
        else:
            stall += 1
            if stall >= patience:
                stopped = M != grid[-1]
                break
    model, value = best
    trace = PruneTrace(tuple(steps), model.size, value, stopped)
    return SelectionResult(model, trace, time.perf_counter() - t0)


def std_grid(n_train, n_sizes=12):
    return geometric_grid(1, n_train - 1, n_sizes)


def std_select(train_data, val_data, seed=0, activation=ActivationKind.TANH, n_sizes=12,
               metric="accuracy", rcond=DEFAULT_RCOND):
    """Best validation model among sizes strictly below the training-set size."""
    n = train_data.n_samples
    if n < 3:
        raise ValueError("std_select needs at least 3 training samples")
    t0 = time.perf_counter()
    steps = []
    best = None
    for M in std_grid(n, n_sizes):
        model = train_elm(train_data, M, size_seed(seed, M), activation, rcond)
        value = score_model(hidden_output(model.hidden, val_data.X) @ model.beta, val_data.y, metric)
        steps.append((M, value))
        if best is None or value > best[1]:
            best = (model, value)
    model, value = best
    trace = PruneTrace(tuple(steps), model.size, value)
    return SelectionResult(model, trace, time.perf_counter() - t0)
