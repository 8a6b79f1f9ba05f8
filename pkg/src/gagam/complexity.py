"""Interpretability penalty: weighted mix of CI-width uncertainty and sparsity."""

from __future__ import annotations

from dataclasses import dataclass

from .gam import FittedGam, term_ci_width

UNCERTAINTY_WEIGHT = 0.70
SPARSITY_WEIGHT = 0.30
EPS = 1e-8


@dataclass(frozen=True)
class ComplexityScore:
    penalty: float
    uncertainty: float
    sparsity: float
    n_active: int


def combine(uncertainty: float, sparsity: float) -> float:
    return UNCERTAINTY_WEIGHT * uncertainty + SPARSITY_WEIGHT * sparsity


def normalized_widths(model: FittedGam) -> list[float]:
    """Per active term: CI width over the target range, capped at 1.

    Terms whose band cannot be computed count as 1.
    """
    denom = max(model.train_target_range, EPS)
    out = []
    for j in model.spec.active_features:
        w = term_ci_width(model, j)
        out.append(1.0 if w is None else min(w / denom, 1.0))
    return out


def uncertainty_score(model: FittedGam) -> float:
    widths = normalized_widths(model)
    if not widths:
        return 0.0
    return sum(widths) / len(widths)


def sparsity_score(n_active: int, n_features: int) -> float:
    if n_features < 1:
        raise ValueError("n_features must be >= 1")
    return min(n_active, n_features) / n_features


def complexity_penalty(model: FittedGam) -> ComplexityScore:
    u = uncertainty_score(model)
    s = sparsity_score(model.n_active, model.n_features)
    return ComplexityScore(combine(u, s), u, s, model.n_active)
