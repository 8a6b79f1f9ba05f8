"""Two-objective fitness: k-fold CV RMSE and the complexity penalty of a full refit."""

from __future__ import annotations

import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .complexity import complexity_penalty
from .dataset import DataError, Dataset
from .gam import FitError, fit, predict
from .genome import Chromosome


@dataclass(frozen=True)
class Objectives:
    rmse: float
    penalty: float
    valid: bool = True
    uncertainty: float = float("nan")
    sparsity: float = float("nan")

    def as_tuple(self) -> tuple[float, float]:
        return (self.rmse, self.penalty)


def sentinel_objectives(target) -> Objectives:
    """Worst-case objectives: dominated by every valid fit on the same data."""
    spread = float(np.ptp(np.asarray(target, dtype=float)))
    return Objectives(10.0 * max(spread, 1.0), 1.0, False, 1.0, 1.0)


@dataclass(frozen=True)
class CvPlan:
    k: int
    folds: tuple[np.ndarray, ...]
    seed: int

    @property
    def n_rows(self) -> int:
        return sum(len(f) for f in self.folds)

    def train_indices(self, i: int) -> np.ndarray:
        return np.sort(np.concatenate([f for j, f in enumerate(self.folds) if j != i]))


def make_cv_plan(n_rows: int, k: int, seed: int) -> CvPlan:
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    if n_rows < k:
        raise DataError(f"cannot make {k} folds from {n_rows} rows")
    perm = np.random.default_rng(seed).permutation(n_rows)
    folds = []
    for f in np.array_split(perm, k):
        f = np.sort(f)
        f.setflags(write=False)
        folds.append(f)
    return CvPlan(k, tuple(folds), seed)


def rmse(pred, truth) -> float:
    pred = np.asarray(pred, dtype=float).ravel()
    truth = np.asarray(truth, dtype=float).ravel()
    if pred.shape != truth.shape or pred.size == 0:
        raise ValueError(f"rmse needs equal non-empty lengths, got {pred.size} and {truth.size}")
    return float(np.sqrt(np.mean((pred - truth) ** 2)))


def evaluate(c: Chromosome, data: Dataset, plan: CvPlan) -> Objectives:
    """Score one chromosome on the train+validation rows only.

    Any fold fit or refit failure yields the sentinel objectives.
    """
    if plan.n_rows != data.n_rows:
        raise ValueError(f"CV plan covers {plan.n_rows} rows, data has {data.n_rows}")
    spec = c.to_model_spec()
    X, y = data.features, data.target
    try:
        scores = []
        for i, test in enumerate(plan.folds):
            train = plan.train_indices(i)
            model = fit(spec, X[train], y[train])
            scores.append(rmse(predict(model, X[test]), y[test]))
        full = fit(spec, X, y)
        cx = complexity_penalty(full)
    except (FitError, DataError, np.linalg.LinAlgError):
        return sentinel_objectives(y)
    cv = float(np.mean(scores))
    if not np.isfinite(cv):
        return sentinel_objectives(y)
    return Objectives(cv, cx.penalty, True, cx.uncertainty, cx.sparsity)


class Evaluator:
    """Memoized, optionally threaded :func:`evaluate` over a fixed dataset and plan.

    Results depend only on (canonical key, data, plan), so the worker
    count never changes them.
    """

    def __init__(self, data: Dataset, plan: CvPlan, workers: int = 1):
        self.data = data
        self.plan = plan
        self.workers = max(int(workers), 1)
        self.cache: dict[str, Objectives] = {}
        self._lock = threading.Lock()
        self.n_fits = 0

    def _evaluate_key(self, c: Chromosome) -> Objectives:
        obj = evaluate(c, self.data, self.plan)
        with self._lock:
            self.cache[c.canonical_key] = obj
            self.n_fits += 1
        return obj

    def __call__(self, pop: list[Chromosome]) -> list[Objectives]:
        todo: dict[str, Chromosome] = {}
        for c in pop:
            key = c.canonical_key
            if key not in self.cache and key not in todo:
                todo[key] = c
        pending = list(todo.values())
        if self.workers > 1 and len(pending) > 1:
            with ThreadPoolExecutor(max_workers=self.workers) as ex:
                list(ex.map(self._evaluate_key, pending))
        else:
            for c in pending:
                self._evaluate_key(c)
        return [self.cache[c.canonical_key] for c in pop]


def evaluate_population(pop: list[Chromosome], data: Dataset, plan: CvPlan, workers: int = 1) -> list[Objectives]:
    return Evaluator(data, plan, workers)(pop)
