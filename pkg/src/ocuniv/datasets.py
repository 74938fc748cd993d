"""Synthetic data generation and CSV interchange.

All randomness goes through numpy's PCG64 generator (``np.random.default_rng``),
which is seedable and portable across platforms; seeds are recorded in reports
so runs reproduce. CSV is the single interchange format: one header row,
comma-separated 64-bit floats, optional trailing ``label`` column in {-1, +1}.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class DatasetError(ValueError):
    """Invalid generation specs, malformed CSV files, or dimension mismatches."""


def _as_matrix(arr, name):
    arr = np.asarray(arr, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2 or arr.size == 0:
        raise DatasetError(f"{name} must be a non-empty 2-d array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DatasetError(f"{name} contains non-finite entries")
    return arr


@dataclass(frozen=True)
class Dataset:
    """Unlabeled training sample; one row per observation."""

    x: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "x", _as_matrix(self.x, "Dataset.x"))

    @property
    def n(self) -> int:
        return self.x.shape[0]

    @property
    def d(self) -> int:
        return self.x.shape[1]


@dataclass(frozen=True)
class UniversumSet:
    """Contradiction sample: points belonging to neither class."""

    x: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "x", _as_matrix(self.x, "UniversumSet.x"))

    @property
    def m(self) -> int:
        return self.x.shape[0]

    @property
    def d(self) -> int:
        return self.x.shape[1]


@dataclass(frozen=True)
class LabeledTestSet:
    """Test points with labels: +1 normal, -1 anomalous."""

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "x", _as_matrix(self.x, "LabeledTestSet.x"))
        y = np.asarray(self.y, dtype=np.float64).ravel()
        if y.shape[0] != self.x.shape[0]:
            raise DatasetError(f"label count {y.shape[0]} != row count {self.x.shape[0]}")
        if not np.all(np.isin(y, (-1.0, 1.0))):
            raise DatasetError("labels must be -1 or +1")
        object.__setattr__(self, "y", y)


@dataclass(frozen=True)
class GaussianSpec:
    """Axis-aligned Gaussian: per-dimension mean and standard deviation."""

    mu: np.ndarray
    sigma: np.ndarray
    count: int
    seed: int

    def __post_init__(self):
        mu = np.asarray(self.mu, dtype=np.float64).ravel()
        sigma = np.asarray(self.sigma, dtype=np.float64).ravel()
        if mu.shape != sigma.shape or mu.size == 0:
            raise DatasetError("mu and sigma must be non-empty vectors of equal length")
        if not (np.all(np.isfinite(mu)) and np.all(np.isfinite(sigma))):
            raise DatasetError("mu and sigma must be finite")
        if np.any(sigma <= 0):
            raise DatasetError("sigma entries must be strictly positive")
        if self.count < 1:
            raise DatasetError(f"count must be positive, got {self.count}")
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "sigma", sigma)


def generate_gaussian(spec: GaussianSpec) -> Dataset:
    """Draw ``spec.count`` rows with independent Normal(mu[j], sigma[j]) columns."""
    rng = np.random.default_rng(spec.seed)
    x = rng.normal(spec.mu, spec.sigma, size=(spec.count, spec.mu.size))
    return Dataset(x)


def synthetic_preset(seed: int) -> tuple[Dataset, LabeledTestSet, UniversumSet]:
    """Built-in 2-D benchmark: two overlapping normal populations plus an
    off-axis contradiction cloud.

    Ten training normals at mean (1, 1), 1000 test points per class (anomalies
    shifted to mean (0.25, 1)), and 1000 contradiction points at mean
    (0.75, 6), all with per-axis spread (0.25, 1).  The four blocks come from
    one generator stream in the order train, test positives, test negatives,
    contradictions, so a single seed pins the whole draw.
    """
    rng = np.random.default_rng(seed)
    spread = np.array([0.25, 1.0])
    train = rng.normal([1.0, 1.0], spread, size=(10, 2))
    test_pos = rng.normal([1.0, 1.0], spread, size=(1000, 2))
    test_neg = rng.normal([0.25, 1.0], spread, size=(1000, 2))
    univ = rng.normal([0.75, 6.0], spread, size=(1000, 2))
    x = np.vstack([test_pos, test_neg])
    y = np.concatenate([np.ones(1000), -np.ones(1000)])
    return Dataset(train), LabeledTestSet(x, y), UniversumSet(univ)


def generate_noise_universum(count: int, d: int, kind: str, seed: int) -> UniversumSet:
    """Structureless noise universum: ``gaussian01`` N(0,1) or ``uniform01`` U[0,1] entries."""
    if count < 1 or d < 1:
        raise DatasetError(f"count and d must be positive, got count={count}, d={d}")
    rng = np.random.default_rng(seed)
    if kind == "gaussian01":
        x = rng.standard_normal((count, d))
    elif kind == "uniform01":
        x = rng.uniform(0.0, 1.0, size=(count, d))
    else:
        raise DatasetError(f"unknown noise kind {kind!r}, expected gaussian01 or uniform01")
    return UniversumSet(x)


@dataclass(frozen=True)
class ScaleParams:
    """Per-column affine map fitted by scale_to_range, reusable on held-out data."""

    col_min: np.ndarray
    col_max: np.ndarray
    lo: float
    hi: float

    def apply(self, data: np.ndarray) -> np.ndarray:
        data = _as_matrix(data, "data")
        if data.shape[1] != self.col_min.size:
            raise DatasetError(f"expected {self.col_min.size} columns, got {data.shape[1]}")
        span = self.col_max - self.col_min
        out = np.full(data.shape, 0.5 * (self.lo + self.hi))
        live = span > 0
        out[:, live] = self.lo + (data[:, live] - self.col_min[live]) * (
            (self.hi - self.lo) / span[live]
        )
        return out

    def invert(self, scaled: np.ndarray) -> np.ndarray:
        scaled = _as_matrix(scaled, "scaled")
        span = self.col_max - self.col_min
        out = np.tile(self.col_min, (scaled.shape[0], 1))
        live = span > 0
        out[:, live] = self.col_min[live] + (scaled[:, live] - self.lo) * (
            span[live] / (self.hi - self.lo)
        )
        return out


def scale_to_range(data: np.ndarray, lo: float, hi: float) -> tuple[np.ndarray, ScaleParams]:
    """Fit a per-column affine map sending observed min->lo and max->hi.

    Constant columns map to the range midpoint. Returns the scaled matrix and
    the fitted parameters for reuse on test or universum data.
    """
    if lo >= hi:
        raise DatasetError(f"invalid range: lo={lo} must be < hi={hi}")
    data = _as_matrix(data, "data")
    params = ScaleParams(data.min(axis=0), data.max(axis=0), float(lo), float(hi))
    return params.apply(data), params


def save_csv(path, x, labels=None) -> None:
    """Write a matrix (optionally with a trailing label column) in the interchange format."""
    x = _as_matrix(x, "x")
    cols = [f"x{j}" for j in range(x.shape[1])]
    if labels is not None:
        labels = np.asarray(labels, dtype=np.float64).ravel()
        if labels.shape[0] != x.shape[0]:
            raise DatasetError("label count does not match row count")
        cols.append("label")
    with open(path, "w") as fh:
        fh.write(",".join(cols) + "\n")
        for i in range(x.shape[0]):
            cells = [repr(float(v)) for v in x[i]]
            if labels is not None:
                cells.append("%d" % int(labels[i]))
            fh.write(",".join(cells) + "\n")


def load_csv(path):
    """Read an interchange CSV; a trailing ``label`` column selects LabeledTestSet."""
    with open(path) as fh:
        lines = [ln.rstrip("\n") for ln in fh]
    lines = [ln for ln in lines if ln.strip()]
    if len(lines) < 2:
        raise DatasetError(f"{path}: need a header row and at least one data row")
    header = [c.strip() for c in lines[0].split(",")]
    labeled = header[-1] == "label"
    width = len(header)
    rows, labels = [], []
    for idx, ln in enumerate(lines[1:], start=1):
        cells = ln.split(",")
        if len(cells) != width:
            raise DatasetError(f"{path}: row {idx} has {len(cells)} cells, expected {width}")
        try:
            vals = [float(c) for c in cells]
        except ValueError as exc:
            raise DatasetError(f"{path}: row {idx}: {exc}") from exc
        if labeled:
            if vals[-1] not in (-1.0, 1.0):
                raise DatasetError(f"{path}: row {idx}: label {vals[-1]} not in {{-1, +1}}")
            labels.append(vals[-1])
            vals = vals[:-1]
        rows.append(vals)
    x = np.asarray(rows, dtype=np.float64)
    if labeled:
        return LabeledTestSet(x, np.asarray(labels))
    return Dataset(x)
