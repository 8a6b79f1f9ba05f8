"""Tabular regression data: CSV loading, seeded train/test splits, z-scoring.

The California Housing table is the reference dataset, but anything with a
header row and numeric cells works.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

CALIFORNIA_FEATURES = (
    "MedInc",
    "HouseAge",
    "AveRooms",
    "AveBedrms",
    "Population",
    "AveOccup",
    "Latitude",
    "Longitude",
)
CALIFORNIA_TARGET = "MedHouseVal"


class DataError(ValueError):
    """Raised for malformed, missing or degenerate input data."""


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Dataset:
    features: np.ndarray
    target: np.ndarray
    feature_names: tuple[str, ...]

    def __post_init__(self):
        X = _readonly(self.features)
        y = _readonly(self.target).ravel()
        if X.ndim != 2:
            raise DataError(f"features must be 2-D, got shape {X.shape}")
        if X.shape[0] != y.shape[0]:
            raise DataError(f"{X.shape[0]} feature rows but {y.shape[0]} targets")
        if len(self.feature_names) != X.shape[1]:
            raise DataError("feature_names length does not match feature count")
        if X.shape[0] < 2:
            raise DataError(f"need at least 2 rows, got {X.shape[0]}")
        if not (np.all(np.isfinite(X)) and np.all(np.isfinite(y))):
            raise DataError("features and target must be finite")
        object.__setattr__(self, "features", X)
        object.__setattr__(self, "target", y)
        object.__setattr__(self, "feature_names", tuple(self.feature_names))

    @property
    def n_rows(self) -> int:
        return self.features.shape[0]

    @property
    def n_features(self) -> int:
        return self.features.shape[1]

    def subset(self, indices) -> "Dataset":
        idx = np.asarray(indices, dtype=int)
        return Dataset(self.features[idx], self.target[idx], self.feature_names)


def load_csv(path, target_column: str = CALIFORNIA_TARGET) -> Dataset:
    """Read a headered numeric CSV; ``target_column`` becomes the target.

    Cell errors report the 1-based data row and the column name.
    """
    path = Path(path)
    if not path.is_file():
        raise DataError(f"data file not found: {path}")
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise DataError(f"{path} is empty") from None
        if target_column not in header:
            raise DataError(f"target column {target_column!r} not in header {header}")
        rows = []
        for lineno, row in enumerate(reader, start=1):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != len(header):
                raise DataError(f"row {lineno}: expected {len(header)} cells, got {len(row)}")
            values = []
            for name, cell in zip(header, row):
                try:
                    v = float(cell)
                except ValueError:
                    raise DataError(
                        f"row {lineno}, column {name!r}: non-numeric cell {cell!r}"
                    ) from None
                if not math.isfinite(v):
                    raise DataError(f"row {lineno}, column {name!r}: non-finite value {cell!r}")
                values.append(v)
            rows.append(values)
    if not rows:
        raise DataError(f"{path} has a header but no data rows")
    table = np.asarray(rows, dtype=float)
    t = header.index(target_column)
    keep = [i for i in range(len(header)) if i != t]
    return Dataset(table[:, keep], table[:, t], tuple(header[i] for i in keep))


def save_csv(data: Dataset, path, target_column: str = CALIFORNIA_TARGET) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow([*data.feature_names, target_column])
        for x, y in zip(data.features, data.target):
            w.writerow([repr(float(v)) for v in x] + [repr(float(y))])


@dataclass(frozen=True)
class Split:
    train_val_indices: np.ndarray
    test_indices: np.ndarray
    seed: int


def make_split(n_rows: int, test_fraction: float, seed: int) -> Split:
    """Shuffle-split row indices into a train+validation part and a test part."""
    if not 0.0 < test_fraction < 1.0:
        raise DataError(f"test_fraction must lie in (0, 1), got {test_fraction}")
    n_test = int(round(test_fraction * n_rows))
    if n_test == 0 or n_test == n_rows:
        raise DataError(f"split of {n_rows} rows at {test_fraction} leaves an empty partition")
    perm = np.random.default_rng(seed).permutation(n_rows)
    return Split(
        train_val_indices=_readonly(np.sort(perm[n_test:])).astype(int),
        test_indices=_readonly(np.sort(perm[:n_test])).astype(int),
        seed=seed,
    )


@dataclass(frozen=True)
class ScalerState:
    """Per-column mean and population standard deviation."""

    columns: tuple[int, ...]
    mean: np.ndarray = field(repr=False)
    std: np.ndarray = field(repr=False)

    def to_dict(self) -> dict:
        return {
            "columns": list(self.columns),
            "mean": [float(v) for v in self.mean],
            "std": [float(v) for v in self.std],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ScalerState":
        return cls(tuple(d["columns"]), np.asarray(d["mean"], float), np.asarray(d["std"], float))


def fit_scaler(features, columns) -> ScalerState:
    X = np.asarray(features, dtype=float)
    columns = tuple(int(c) for c in columns)
    for c in columns:
        if not 0 <= c < X.shape[1]:
            raise DataError(f"column {c} out of range for {X.shape[1]} features")
    sub = X[:, list(columns)]
    mean = sub.mean(axis=0)
    std = sub.std(axis=0)
    # a column that is constant to rounding error has no usable scale
    tiny = std <= 1e-12 * np.maximum(np.abs(mean), 1.0)
    if np.any(tiny):
        bad = [columns[i] for i in np.flatnonzero(tiny)]
        raise DataError(f"zero-variance column(s) {bad} cannot be standardized")
    return ScalerState(columns, _readonly(mean), _readonly(std))


def apply_scaler(state: ScalerState, features) -> np.ndarray:
    out = np.array(features, dtype=float)
    if state.columns:
        cols = list(state.columns)
        out[:, cols] = (out[:, cols] - state.mean) / state.std
    return out


def invert_scaler(state: ScalerState, features) -> np.ndarray:
    out = np.array(features, dtype=float)
    if state.columns:
        cols = list(state.columns)
        out[:, cols] = out[:, cols] * state.std + state.mean
    return out


def make_synthetic(n_rows: int = 600, noise: float = 0.3, n_decoys: int = 4, seed: int = 0) -> Dataset:
    """y = sin(4 x1) + 0.5 x2 + noise, with ``n_decoys`` irrelevant features.

    All features are uniform on [-1, 1].
    """
    rng = np.random.default_rng(seed)
    X = rng.uniform(-1.0, 1.0, size=(n_rows, 2 + n_decoys))
    y = np.sin(4.0 * X[:, 0]) + 0.5 * X[:, 1] + noise * rng.standard_normal(n_rows)
    names = ("x1", "x2") + tuple(f"decoy{i + 1}" for i in range(n_decoys))
    return Dataset(X, y, names)
