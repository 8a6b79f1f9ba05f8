"""Comparison models: an all-spline GAM and an unpruned regression tree."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gam import ModelSpec, TermSpec

BASELINE_SPLINES = 25
BASELINE_LAM = 0.6


def baseline_gam_spec(n_features: int) -> ModelSpec:
    if n_features < 1:
        raise ValueError("n_features must be >= 1")
    return ModelSpec(tuple(TermSpec.spline(BASELINE_SPLINES, BASELINE_LAM, False) for _ in range(n_features)))


@dataclass
class CartNode:
    value: float
    n_samples: int
    feature: int | None = None
    threshold: float | None = None
    left: "CartNode | None" = None
    right: "CartNode | None" = None

    @property
    def is_leaf(self) -> bool:
        return self.feature is None

    def depth(self) -> int:
        if self.is_leaf:
            return 0
        return 1 + max(self.left.depth(), self.right.depth())

    def n_leaves(self) -> int:
        if self.is_leaf:
            return 1
        return self.left.n_leaves() + self.right.n_leaves()


def _best_split(X: np.ndarray, y: np.ndarray, mean: float, min_leaf: int):
    """Lowest child SSE over all features and midpoints.

    Ties keep the earlier feature and then the lower threshold. Rows are
    ordered by (value, target) so the result ignores input row order.
    """
    n = len(y)
    best = (np.inf, None, None)
    yc = y - mean
    for f in range(X.shape[1]):
        order = np.lexsort((yc, X[:, f]))
        xs, ys = X[order, f], yc[order]
        c, q = np.cumsum(ys), np.cumsum(ys * ys)
        cs, cq, tot, totq = c[:-1], q[:-1], c[-1], q[-1]
        nl = np.arange(1, n)
        nr = n - nl
        ok = (xs[:-1] < xs[1:]) & (nl >= min_leaf) & (nr >= min_leaf)
        if not ok.any():
            continue
        sse = (cq - cs * cs / nl) + ((totq - cq) - (tot - cs) ** 2 / nr)
        sse = np.where(ok, sse, np.inf)
        i = int(np.argmin(sse))
        if sse[i] < best[0]:
            lo, hi = xs[i], xs[i + 1]
            thr = 0.5 * (lo + hi)
            if not lo <= thr < hi:
                thr = lo
            best = (float(sse[i]), f, float(thr))
    return best


def fit_cart(features, target, min_samples_split: int = 2, min_samples_leaf: int = 1) -> CartNode:
    """Grow a variance-reduction regression tree without a depth limit."""
    X = np.asarray(features, dtype=float)
    y = np.asarray(target, dtype=float).ravel()
    if X.shape[0] < 1 or X.shape[0] != y.shape[0]:
        raise ValueError("fit_cart needs matching, non-empty features and target")

    def leaf(idx):
        ys = np.sort(y[idx])
        return CartNode(float(ys.mean()), len(idx))

    root = leaf(np.arange(len(y)))
    stack = [(root, np.arange(len(y)))]
    while stack:
        node, idx = stack.pop()
        ys = y[idx]
        if len(idx) < min_samples_split or np.all(ys == ys[0]):
            continue
        parent_sse = float(np.sum((np.sort(ys) - node.value) ** 2))
        sse, f, thr = _best_split(X[idx], ys, node.value, min_samples_leaf)
        if f is None or not sse < parent_sse - 1e-12 * max(parent_sse, 1.0):
            continue
        go_left = X[idx, f] <= thr
        li, ri = idx[go_left], idx[~go_left]
        node.feature, node.threshold = f, thr
        node.left, node.right = leaf(li), leaf(ri)
        stack.append((node.right, ri))
        stack.append((node.left, li))
    return root


def predict_cart(tree: CartNode, features) -> np.ndarray:
    X = np.asarray(features, dtype=float)
    if X.ndim == 1:
        X = X[None, :]
    out = np.empty(X.shape[0])
    stack = [(tree, np.arange(X.shape[0]))]
    while stack:
        node, idx = stack.pop()
        if node.is_leaf or len(idx) == 0:
            out[idx] = node.value
            continue
        go_left = X[idx, node.feature] <= node.threshold
        stack.append((node.left, idx[go_left]))
        stack.append((node.right, idx[~go_left]))
    return out
