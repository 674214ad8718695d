"""Datasets: synthetic two-moons generator, junk features, CSV I/O and splits.

Feature matrices use the column-per-sample layout ``X.shape == (D, N)``.
Labels are ``float64`` vectors with entries in ``{-1, +1}``.
"""

import csv
import hashlib
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .linalg import as_matrix, as_vector


def derive_seed(*keys):
    """Deterministically mix integer keys into a single 64-bit seed."""
    ss = np.random.SeedSequence([int(k) for k in keys])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


@dataclass(frozen=True)
class Dataset:
    """Feature matrix ``X`` (D x N) with labels ``y`` in {-1, +1}."""

    X: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        X = as_matrix(self.X, "X")
        y = as_vector(self.y, "y")
        if X.shape[1] != y.shape[0]:
            raise ValueError(f"X has {X.shape[1]} samples (columns) but y has {y.shape[0]} labels")
        if y.shape[0] < 2:
            raise ValueError("a dataset needs at least 2 samples")
        if not np.all((y == 1.0) | (y == -1.0)):
            raise ValueError("labels must be -1 or +1")
        if not (np.any(y == 1.0) and np.any(y == -1.0)):
            raise ValueError("both classes (-1 and +1) must be present")
        X = X.copy()
        y = y.copy()
        X.flags.writeable = False
        y.flags.writeable = False
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)

    @property
    def n_features(self):
        return self.X.shape[0]

    @property
    def n_samples(self):
        return self.X.shape[1]

    def subset(self, idx):
        idx = np.asarray(idx, dtype=np.intp)
        return Dataset(self.X[:, idx], self.y[idx])

    def fingerprint(self):
        """Short content hash, used to log that methods saw the same data."""
        h = hashlib.sha256()
        h.update(np.ascontiguousarray(self.X).tobytes())
        h.update(np.ascontiguousarray(self.y).tobytes())
        return h.hexdigest()[:16]


def gen_two_moons(n_per_class, noise_sd=0.1, seed=0):
    """Two interleaved half-circles.

    Class +1 lies on the upper unit half-circle centred at the origin,
    class -1 on the lower unit half-circle centred at (1, 0.5). Arc
    positions are uniform in angle; isotropic Gaussian noise with standard
    deviation ``noise_sd`` is added to every point. Columns are shuffled.
    """
    if n_per_class < 1:
        raise ValueError("n_per_class must be >= 1")
    if noise_sd < 0:
        raise ValueError("noise_sd must be non-negative")
    rng = np.random.default_rng(seed)
    t_pos = rng.uniform(0.0, np.pi, n_per_class)
    t_neg = rng.uniform(0.0, np.pi, n_per_class)
    pos = np.stack([np.cos(t_pos), np.sin(t_pos)])
    neg = np.stack([1.0 - np.cos(t_neg), 0.5 - np.sin(t_neg)])
    X = np.concatenate([pos, neg], axis=1)
    y = np.concatenate([np.ones(n_per_class), -np.ones(n_per_class)])
    if noise_sd > 0:
        X = X + noise_sd * rng.standard_normal(X.shape)
    perm = rng.permutation(2 * n_per_class)
    return Dataset(X[:, perm], y[perm])


def add_junk_features(data, j, seed=0, distribution="uniform"):
    """Append ``j`` label-independent feature rows to ``data.X``.

    ``distribution`` is ``"uniform"`` (U[-1, 1]) or ``"gaussian"`` (N(0, 1)).
    The original rows are kept bit-identical.
    """
    if j < 0:
        raise ValueError("number of junk features must be >= 0")
    if j == 0:
        return data
    rng = np.random.default_rng(seed)
    shape = (j, data.n_samples)
    if distribution == "uniform":
        junk = rng.uniform(-1.0, 1.0, shape)
    elif distribution == "gaussian":
        junk = rng.standard_normal(shape)
    else:
        raise ValueError(f"unknown junk distribution {distribution!r}")
    return Dataset(np.concatenate([data.X, junk], axis=0), data.y)


def standardize(train, *others):
    """Scale features to zero mean / unit variance using ``train`` statistics.

    Constant features are centred but not scaled.
    """
    mu = train.X.mean(axis=1, keepdims=True)
    sd = train.X.std(axis=1, keepdims=True)
    sd[sd == 0] = 1.0
    out = [Dataset((d.X - mu) / sd, d.y) for d in (train, *others)]
    return tuple(out)


# -- splitting -------------------------------------------------------------


@dataclass(frozen=True)
class SplitSpec:
    """Train/validation/test fractions.

    ``val_frac`` may be 0, in which case :func:`split` returns ``None`` for
    the validation part (used by the train/test sweeps).
    """

    train_frac: float = 0.7
    val_frac: float = 0.2
    test_frac: float = 0.1
    seed: int = 0
    stratified: bool = True

    def __post_init__(self):
        fracs = self.fractions
        if abs(sum(fracs) - 1.0) > 1e-9:
            raise ValueError(f"split fractions must sum to 1, got {sum(fracs)}")
        if not (0 < self.train_frac < 1 and 0 < self.test_frac < 1 and 0 <= self.val_frac < 1):
            raise ValueError("train/test fractions must lie in (0, 1) and val_frac in [0, 1)")

    @property
    def fractions(self):
        return (self.train_frac, self.val_frac, self.test_frac)

    def with_seed(self, seed):
        return SplitSpec(self.train_frac, self.val_frac, self.test_frac, seed, self.stratified)


@dataclass(frozen=True)
class CvPlan:
    """Repeated random sub-sampling: one independent split per seed."""

    seeds: tuple = field(default_factory=lambda: tuple(range(20)))

    def __post_init__(self):
        seeds = tuple(int(s) for s in self.seeds)
        if not seeds:
            raise ValueError("CvPlan needs at least one seed")
        if len(set(seeds)) != len(seeds):
            raise ValueError("CvPlan seeds must be distinct")
        object.__setattr__(self, "seeds", seeds)

    @property
    def folds(self):
        return len(self.seeds)


def largest_remainder(n, fractions):
    """Integer counts summing to ``n`` proportional to ``fractions``.

    Each count is the floor or ceiling of its quota; leftover units go to
    the largest remainders, ties broken by position.
    """
    quotas = [n * f for f in fractions]
    counts = [math.floor(q + 1e-9) for q in quotas]
    rest = n - sum(counts)
    order = sorted(range(len(quotas)), key=lambda i: (-(quotas[i] - counts[i]), i))
    for i in order[:rest]:
        counts[i] += 1
    return counts


def split_indices(y, spec):
    """Index arrays ``(train, val, test)`` partitioning ``range(len(y))``."""
    y = np.asarray(y)
    n = y.shape[0]
    rng = np.random.default_rng(spec.seed)
    parts = [[], [], []]
    if spec.stratified:
        for label in (1.0, -1.0):
            idx = np.flatnonzero(y == label)
            idx = idx[rng.permutation(idx.shape[0])]
            counts = largest_remainder(idx.shape[0], spec.fractions)
            for k, c in enumerate(counts):
                if spec.fractions[k] > 0 and c < 1:
                    raise ValueError(
                        f"dataset too small for a stratified split: class {int(label):+d} has "
                        f"{idx.shape[0]} samples, which leaves split {k} empty"
                    )
            bounds = np.cumsum([0] + counts)
            for k in range(3):
                parts[k].append(idx[bounds[k]:bounds[k + 1]])
        parts = [np.sort(np.concatenate(p)) for p in parts]
    else:
        counts = largest_remainder(n, spec.fractions)
        for k, c in enumerate(counts):
            if spec.fractions[k] > 0 and c < 1:
                raise ValueError(f"dataset of {n} samples is too small: split {k} gets {c} samples")
        perm = rng.permutation(n)
        bounds = np.cumsum([0] + counts)
        parts = [np.sort(perm[bounds[k]:bounds[k + 1]]) for k in range(3)]
    return tuple(parts)


def split(data, spec):
    """Split a dataset into ``(train, val, test)``; ``val`` is None if ``val_frac == 0``."""
    tr, va, te = split_indices(data.y, spec)
    val = data.subset(va) if spec.val_frac > 0 else None
    return data.subset(tr), val, data.subset(te)


def make_cv_splits(data, plan, spec):
    """One stratified (if requested) split of ``data`` per seed in ``plan``."""
    return [split(data, spec.with_seed(s)) for s in plan.seeds]


# -- CSV -------------------------------------------------------------------


class CsvError(ValueError):
    """Base class for CSV ingestion errors; carries file position context."""

    def __init__(self, message, row=None, column=None):
        self.row = row
        self.column = column
        where = []
        if row is not None:
            where.append(f"row {row}")
        if column is not None:
            where.append(f"column {column!r}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)


class MalformedRowError(CsvError):
    """A row has the wrong number of cells."""


class NonNumericCellError(CsvError):
    """A cell could not be parsed as a finite number."""


class MissingLabelColumnError(CsvError):
    """The requested label column does not exist."""


class LabelValueError(CsvError):
    """A label is not in {-1, +1} (or {0, 1})."""


class SingleClassError(CsvError):
    """All rows carry the same label."""


def _is_number(cell):
    try:
        float(cell)
    except ValueError:
        return False
    return True


def load_csv(path, label_column=-1, header=None):
    """Read a comma-separated file into a :class:`Dataset`.

    One sample per row. ``label_column`` is a column name (requires a
    header) or an integer index (negative counts from the end). ``header``
    is auto-detected when None: the first row is a header if any of its
    cells is non-numeric. Labels in {0, 1} are mapped to {-1, +1}. Row
    numbers in errors are 1-based file lines.
    """
    path = Path(path)
    with path.open(newline="") as fh:
        rows = [(i + 1, r) for i, r in enumerate(csv.reader(fh)) if r and any(c.strip() for c in r)]
    if not rows:
        raise CsvError(f"{path} contains no data")

    names = None
    if header is None:
        header = not all(_is_number(c) for c in rows[0][1])
    if header:
        names = [c.strip() for c in rows[0][1]]
        rows = rows[1:]
        if not rows:
            raise CsvError(f"{path} has a header but no data rows")
    width = len(names) if names is not None else len(rows[0][1])

    if isinstance(label_column, str):
        if names is None or label_column not in names:
            raise MissingLabelColumnError(f"label column {label_column!r} not found", column=label_column)
        label_idx = names.index(label_column)
    else:
        label_idx = int(label_column)
        if not -width <= label_idx < width:
            raise MissingLabelColumnError(f"label column index {label_idx} out of range for {width} columns",
                                          column=label_idx)
        label_idx %= width

    values = np.empty((len(rows), width))
    for r, (lineno, cells) in enumerate(rows):
        if len(cells) != width:
            raise MalformedRowError(f"expected {width} cells, found {len(cells)}", row=lineno)
        for c, cell in enumerate(cells):
            try:
                v = float(cell)
            except ValueError:
                v = math.nan
            if not math.isfinite(v):
                col = names[c] if names is not None else c
                raise NonNumericCellError(f"cannot parse {cell!r} as a finite number", row=lineno, column=col)
            values[r, c] = v

    labels = values[:, label_idx]
    features = np.delete(values, label_idx, axis=1)
    label_set = set(np.unique(labels).tolist())
    if label_set <= {0.0, 1.0}:
        labels = np.where(labels == 1.0, 1.0, -1.0)
    elif not label_set <= {-1.0, 1.0}:
        bad = next(i for i, v in enumerate(labels) if v not in (-1.0, 1.0))
        raise LabelValueError(f"label {labels[bad]:g} is not in {{-1, +1}} or {{0, 1}}",
                              row=rows[bad][0], column=label_column)
    if len(np.unique(labels)) < 2:
        raise SingleClassError("file contains a single class", column=label_column)
    if features.shape[1] == 0:
        raise CsvError(f"{path} has no feature columns")
    return Dataset(features.T, labels)


def write_csv(data, path, label_name="label"):
    """Write a dataset as CSV with a header ``f0,...,f{D-1},label``."""
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow([f"f{i}" for i in range(data.n_features)] + [label_name])
        for n in range(data.n_samples):
            w.writerow([repr(float(v)) for v in data.X[:, n]] + [str(int(data.y[n]))])
    return path
