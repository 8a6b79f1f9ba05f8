"""Pick the knee, lowest-RMSE and lowest-penalty members of a Pareto front."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .nsga2 import Individual, dominates


@dataclass(frozen=True)
class FrontSelection:
    knee: Individual
    best_by_rmse: Individual
    best_by_penalty: Individual

    def items(self):
        return (("knee", self.knee), ("best_by_rmse", self.best_by_rmse), ("best_by_penalty", self.best_by_penalty))


def knee_index(points) -> int:
    """Index of the point nearest (0, 0) after min-max scaling each objective.

    Equal distances resolve to the lower first objective, then input order.
    """
    P = np.asarray(points, dtype=float).reshape(-1, 2)
    if len(P) == 0:
        raise ValueError("empty front")
    lo, hi = P.min(axis=0), P.max(axis=0)
    span = hi - lo
    N = np.where(span > 0, (P - lo) / np.where(span > 0, span, 1.0), 0.0)
    d = np.hypot(N[:, 0], N[:, 1])
    return int(np.lexsort((np.arange(len(P)), P[:, 0], d))[0])


def select_representatives(front: list[Individual]) -> FrontSelection:
    if not front:
        raise ValueError("cannot select from an empty front")
    for a in front:
        for b in front:
            if dominates(a, b):
                raise ValueError(f"front is not mutually non-dominated: {a.point} dominates {b.point}")
    pts = [ind.point for ind in front]
    by_rmse = min(range(len(front)), key=lambda i: (pts[i][0], pts[i][1], i))
    by_pen = min(range(len(front)), key=lambda i: (pts[i][1], pts[i][0], i))
    return FrontSelection(front[knee_index(pts)], front[by_rmse], front[by_pen])
