"""Cubic B-spline bases with quantile knots, and second-difference penalties."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DEGREE = 3


@dataclass(frozen=True)
class SplineBasis:
    """A clamped cubic B-spline basis on ``domain``.

    ``knots`` holds ``n_basis + degree + 1`` non-decreasing values with the
    boundary knots repeated ``degree + 1`` times.
    """

    n_basis: int
    knots: np.ndarray
    domain: tuple[float, float]
    degree: int = DEGREE

    def to_dict(self) -> dict:
        return {
            "n_basis": self.n_basis,
            "degree": self.degree,
            "domain": [float(v) for v in self.domain],
            "knots": [float(v) for v in self.knots],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SplineBasis":
        knots = np.asarray(d["knots"], dtype=float)
        knots.setflags(write=False)
        return cls(int(d["n_basis"]), knots, tuple(d["domain"]), int(d.get("degree", DEGREE)))


def build_basis(values, n_basis: int) -> SplineBasis:
    """Place ``n_basis - 4`` interior knots at evenly spaced quantiles of ``values``.

    When the quantiles collide (heavily tied data) the interior knots fall
    back to a uniform grid over the domain.
    """
    values = np.asarray(values, dtype=float).ravel()
    if n_basis < DEGREE + 1:
        raise ValueError(f"cubic basis needs n_basis >= {DEGREE + 1}, got {n_basis}")
    lo, hi = float(values.min()), float(values.max())
    if not hi > lo:
        raise ValueError("cannot build a spline basis on a constant feature")
    n_interior = n_basis - DEGREE - 1
    probs = np.arange(1, n_interior + 1) / (n_interior + 1)
    interior = np.quantile(values, probs)
    ok = np.all(np.diff(np.concatenate([[lo], interior, [hi]])) > 0)
    if not ok:
        interior = lo + (hi - lo) * probs
    knots = np.concatenate([np.full(DEGREE + 1, lo), interior, np.full(DEGREE + 1, hi)])
    knots.setflags(write=False)
    return SplineBasis(n_basis, knots, (lo, hi))


def evaluate_basis(basis: SplineBasis, x) -> np.ndarray:
    """Cox-de Boor evaluation; returns an ``(len(x), n_basis)`` matrix.

    Points outside the domain are clamped to the nearest endpoint.
    """
    t = basis.knots
    lo, hi = basis.domain
    x = np.clip(np.asarray(x, dtype=float).ravel(), lo, hi)
    n_int = len(t) - 1
    # degree 0: half-open spans, with the right endpoint folded into the last real span
    B = ((t[:-1] <= x[:, None]) & (x[:, None] < t[1:])).astype(float)
    last = np.flatnonzero(t[:-1] < t[1:])[-1]
    B[x == hi, :] = 0.0
    B[x == hi, last] = 1.0
    for k in range(1, basis.degree + 1):
        m = n_int - k
        left_den = t[k : k + m] - t[:m]
        right_den = t[k + 1 : k + 1 + m] - t[1 : 1 + m]
        with np.errstate(divide="ignore", invalid="ignore"):
            left = np.where(left_den > 0, (x[:, None] - t[:m]) / left_den, 0.0)
            right = np.where(right_den > 0, (t[k + 1 : k + 1 + m] - x[:, None]) / right_den, 0.0)
        B = left * B[:, :m] + right * B[:, 1 : m + 1]
    return B


def difference_matrix(n_basis: int, order: int = 2) -> np.ndarray:
    return np.diff(np.eye(n_basis), order, axis=0)


def second_difference_penalty(n_basis: int) -> np.ndarray:
    """P = D'D with D the second-order difference operator."""
    if n_basis < 3:
        raise ValueError(f"second-difference penalty needs n_basis >= 3, got {n_basis}")
    D = difference_matrix(n_basis, 2)
    return D.T @ D


def greville_abscissae(basis: SplineBasis) -> np.ndarray:
    """Knot averages; sum_i xi_i B_i(x) == x on the domain."""
    t, k = basis.knots, basis.degree
    return np.array([t[i + 1 : i + k + 1].mean() for i in range(basis.n_basis)])


def penalty_matrix(basis: SplineBasis) -> np.ndarray:
    """Second-difference penalty weighted by the Greville spacing of ``basis``.

    Row i is [w_a, -(w_a + w_b), w_b] with w the reciprocal abscissa gaps,
    rescaled so the middle entry is -2. Evenly spaced abscissae give exactly
    :func:`second_difference_penalty`; in general the null space is the
    coefficient vectors of straight lines in x, so a large lambda pulls the
    term toward a line even with clamped, uneven knots.
    """
    n = basis.n_basis
    if n < 3:
        raise ValueError(f"second-difference penalty needs n_basis >= 3, got {n}")
    gaps = np.diff(greville_abscissae(basis))
    if np.any(gaps <= 0):
        return second_difference_penalty(n)
    w = 1.0 / gaps
    D = np.zeros((n - 2, n))
    for i in range(n - 2):
        wa, wb = w[i], w[i + 1]
        D[i, i : i + 3] = np.array([wa, -(wa + wb), wb]) * (2.0 / (wa + wb))
    return D.T @ D
