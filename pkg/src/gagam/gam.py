"""Additive models y = b0 + sum_j f_j(x_j) fitted by penalized least squares.

Each feature contributes nothing, a single linear column, or a block of
cubic B-spline columns whose coefficients carry a second-difference
penalty scaled by the term's lambda.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy import linalg

from .dataset import DataError, ScalerState, apply_scaler, fit_scaler
from .splines import SplineBasis, build_basis, evaluate_basis, penalty_matrix

RIDGE = 1e-8
CI_Z = 1.96
GRID_SIZE = 100
# relative Cholesky pivot below which the system is treated as singular
PIVOT_TOL = 1e-12


class FitError(RuntimeError):
    """The penalized normal equations could not be solved."""


class TermKind(str, enum.Enum):
    NONE = "none"
    LINEAR = "linear"
    SPLINE = "spline"


@dataclass(frozen=True)
class TermSpec:
    kind: TermKind
    n_splines: int | None = None
    lam: float | None = None
    scale: bool = False

    def __post_init__(self):
        kind = TermKind(self.kind)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "scale", bool(self.scale))
        if kind is TermKind.SPLINE:
            if self.n_splines is None or self.lam is None:
                raise ValueError("spline terms need n_splines and lam")
            if int(self.n_splines) != self.n_splines or self.n_splines < 4:
                raise ValueError(f"n_splines must be an integer >= 4, got {self.n_splines}")
            if not self.lam > 0:
                raise ValueError(f"lam must be positive, got {self.lam}")
            object.__setattr__(self, "n_splines", int(self.n_splines))
            object.__setattr__(self, "lam", float(self.lam))
        elif self.n_splines is not None or self.lam is not None:
            raise ValueError(f"{kind.value} terms take no n_splines/lam")

    @classmethod
    def none(cls, scale: bool = False) -> "TermSpec":
        return cls(TermKind.NONE, scale=scale)

    @classmethod
    def linear(cls, scale: bool = False) -> "TermSpec":
        return cls(TermKind.LINEAR, scale=scale)

    @classmethod
    def spline(cls, n_splines: int, lam: float, scale: bool = False) -> "TermSpec":
        return cls(TermKind.SPLINE, n_splines, lam, scale)

    @property
    def active(self) -> bool:
        return self.kind is not TermKind.NONE

    @property
    def n_columns(self) -> int:
        return {TermKind.NONE: 0, TermKind.LINEAR: 1, TermKind.SPLINE: self.n_splines}[self.kind]

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "n_splines": self.n_splines, "lambda": self.lam, "scale": self.scale}

    @classmethod
    def from_dict(cls, d: dict) -> "TermSpec":
        return cls(TermKind(d["kind"]), d.get("n_splines"), d.get("lambda"), d.get("scale", False))


@dataclass(frozen=True)
class ModelSpec:
    terms: tuple[TermSpec, ...]

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))

    @property
    def n_features(self) -> int:
        return len(self.terms)

    @property
    def active_features(self) -> list[int]:
        return [j for j, t in enumerate(self.terms) if t.active]

    @property
    def scaled_features(self) -> list[int]:
        return [j for j, t in enumerate(self.terms) if t.active and t.scale]

    def to_list(self) -> list[dict]:
        return [t.to_dict() for t in self.terms]

    @classmethod
    def from_list(cls, items) -> "ModelSpec":
        return cls(tuple(TermSpec.from_dict(d) for d in items))


class Design(NamedTuple):
    matrix: np.ndarray
    blocks: dict[int, slice]
    scaler: ScalerState
    bases: dict[int, SplineBasis]
    domains: dict[int, tuple[float, float]]


def _term_columns(term: TermSpec, x: np.ndarray, basis: SplineBasis | None) -> np.ndarray:
    if term.kind is TermKind.LINEAR:
        return x[:, None]
    return evaluate_basis(basis, x)


def assemble_design(spec: ModelSpec, features, fitted: "FittedGam | None" = None) -> Design:
    """Build the design matrix; column 0 is the intercept.

    Without ``fitted`` this is fit mode: scalers, spline bases and domains
    are derived from ``features``. Otherwise those of ``fitted`` are reused.
    """
    X = np.asarray(features, dtype=float)
    if X.ndim != 2 or X.shape[1] != spec.n_features:
        raise ValueError(f"expected {spec.n_features} feature columns, got shape {X.shape}")
    if fitted is None:
        scaler = fit_scaler(X, spec.scaled_features)
        Z = apply_scaler(scaler, X)
        domains = {j: (float(X[:, j].min()), float(X[:, j].max())) for j in spec.active_features}
        bases = {}
        for j, t in enumerate(spec.terms):
            if t.kind is TermKind.SPLINE:
                try:
                    bases[j] = build_basis(Z[:, j], t.n_splines)
                except ValueError as exc:
                    raise DataError(f"feature {j}: {exc}") from None
    else:
        scaler, bases, domains = fitted.scaler, fitted.bases, fitted.domains
        Z = apply_scaler(scaler, X)

    cols = [np.ones((X.shape[0], 1))]
    blocks = {}
    start = 1
    for j, t in enumerate(spec.terms):
        if not t.active:
            continue
        cols.append(_term_columns(t, Z[:, j], bases.get(j)))
        blocks[j] = slice(start, start + t.n_columns)
        start += t.n_columns
    return Design(np.hstack(cols), blocks, scaler, bases, domains)


@dataclass(frozen=True, eq=False)
class FittedGam:
    spec: ModelSpec
    beta: np.ndarray
    covariance: np.ndarray | None
    sigma2: float
    edf: float
    blocks: dict[int, slice]
    scaler: ScalerState
    bases: dict[int, SplineBasis]
    domains: dict[int, tuple[float, float]]
    train_target_range: float
    n_train: int = field(default=0)

    @property
    def n_features(self) -> int:
        return self.spec.n_features

    @property
    def n_active(self) -> int:
        return len(self.spec.active_features)

    def to_dict(self, include_covariance: bool = False) -> dict:
        d = {
            "spec": self.spec.to_list(),
            "beta": [float(v) for v in self.beta],
            "blocks": {str(j): [s.start, s.stop] for j, s in self.blocks.items()},
            "sigma2": float(self.sigma2),
            "edf": float(self.edf),
            "scaler": self.scaler.to_dict(),
            "bases": {str(j): b.to_dict() for j, b in self.bases.items()},
            "domains": {str(j): list(v) for j, v in self.domains.items()},
            "train_target_range": float(self.train_target_range),
            "n_train": int(self.n_train),
        }
        if include_covariance and self.covariance is not None:
            d["covariance"] = [[float(v) for v in row] for row in self.covariance]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "FittedGam":
        cov = d.get("covariance")
        return cls(
            spec=ModelSpec.from_list(d["spec"]),
            beta=np.asarray(d["beta"], dtype=float),
            covariance=None if cov is None else np.asarray(cov, dtype=float),
            sigma2=float(d["sigma2"]),
            edf=float(d["edf"]),
            blocks={int(j): slice(*v) for j, v in d["blocks"].items()},
            scaler=ScalerState.from_dict(d["scaler"]),
            bases={int(j): SplineBasis.from_dict(b) for j, b in d["bases"].items()},
            domains={int(j): tuple(v) for j, v in d["domains"].items()},
            train_target_range=float(d["train_target_range"]),
            n_train=int(d.get("n_train", 0)),
        )


def _centering_map(B: np.ndarray) -> np.ndarray:
    """Columns spanning {c : sum over rows of B c = 0}."""
    q, _ = np.linalg.qr(B.sum(axis=0)[:, None], mode="complete")
    return q[:, 1:]


def fit(spec: ModelSpec, features, target) -> FittedGam:
    """Minimize ||y - X b||^2 + sum_j lam_j b_j' P_j b_j.

    P_j is the Greville-weighted second-difference penalty of the term's basis.

    Spline blocks are constrained to sum to zero over the fitting rows so
    they cannot trade their constant part with the intercept. Intercept and
    linear columns get a ``RIDGE`` diagonal for conditioning.
    """
    y = np.asarray(target, dtype=float).ravel()
    if y.shape[0] < 2:
        raise DataError("fit needs at least 2 rows")
    design = assemble_design(spec, features)
    X = design.matrix
    n, p = X.shape

    # T maps reduced coefficients g to full coefficients b = T g
    tcols = [np.eye(p, 1)]
    pen_blocks = [np.array([[RIDGE]])]
    for j, t in enumerate(spec.terms):
        if not t.active:
            continue
        blk = design.blocks[j]
        if t.kind is TermKind.LINEAR:
            tcols.append(np.eye(p, 1, -blk.start))
            pen_blocks.append(np.array([[RIDGE]]))
        else:
            Zc = _centering_map(X[:, blk])
            Tj = np.zeros((p, Zc.shape[1]))
            Tj[blk] = Zc
            tcols.append(Tj)
            pen_blocks.append(t.lam * Zc.T @ penalty_matrix(design.bases[j]) @ Zc)
    T = np.hstack(tcols)
    Xr = X @ T
    XtX = Xr.T @ Xr
    A = XtX + linalg.block_diag(*pen_blocks)
    A = 0.5 * (A + A.T)
    if not np.all(np.isfinite(A)):
        raise FitError("non-finite normal equations")
    try:
        L = linalg.cholesky(A, lower=True)
    except linalg.LinAlgError as exc:
        raise FitError(f"normal equations not positive definite: {exc}") from None
    if np.any(np.diag(L) ** 2 < PIVOT_TOL * np.diag(A)):
        raise FitError("normal equations numerically singular")

    cho = (L, True)
    g = linalg.cho_solve(cho, Xr.T @ y)
    Ainv = linalg.cho_solve(cho, np.eye(A.shape[0]))
    beta = T @ g
    resid = y - X @ beta
    rss = float(resid @ resid)
    edf = float(np.sum(Ainv * XtX))
    sigma2 = rss / max(n - edf, 1.0)
    cov = T @ Ainv @ T.T * sigma2
    cov = 0.5 * (cov + cov.T)
    return FittedGam(
        spec=spec,
        beta=beta,
        covariance=cov,
        sigma2=sigma2,
        edf=edf,
        blocks=design.blocks,
        scaler=design.scaler,
        bases=design.bases,
        domains=design.domains,
        train_target_range=float(np.ptp(y)),
        n_train=n,
    )


def predict(model: FittedGam, features) -> np.ndarray:
    X = np.asarray(features, dtype=float)
    if X.ndim == 1:
        X = X[None, :]
    return assemble_design(model.spec, X, model).matrix @ model.beta


def _term_grid(model: FittedGam, feature_index: int, grid_size: int):
    term = model.spec.terms[feature_index]
    if not term.active:
        raise ValueError(f"feature {feature_index} has no active term")
    lo, hi = model.domains[feature_index]
    grid = np.linspace(lo, hi, grid_size)
    x = grid
    if feature_index in model.scaler.columns:
        k = model.scaler.columns.index(feature_index)
        x = (grid - model.scaler.mean[k]) / model.scaler.std[k]
    return grid, _term_columns(term, x, model.bases.get(feature_index))


def partial_dependence(model: FittedGam, feature_index: int, grid_size: int = GRID_SIZE):
    """Term effect and 95% pointwise band over the feature's training range.

    Returns ``(grid, effect, lower, upper)`` with ``grid`` in raw units.
    """
    grid, B = _term_grid(model, feature_index, grid_size)
    blk = model.blocks[feature_index]
    effect = B @ model.beta[blk]
    if model.covariance is None:
        raise ValueError("model was stored without a covariance matrix")
    cov = model.covariance[blk, blk]
    var = np.einsum("ij,jk,ik->i", B, cov, B)
    half = CI_Z * np.sqrt(np.clip(var, 0.0, None))
    return grid, effect, effect - half, effect + half


def term_ci_width(model: FittedGam, feature_index: int, grid_size: int = GRID_SIZE) -> float | None:
    """Mean 95% band width of one term, or None when the band is unusable."""
    if model.covariance is None:
        return None
    cov = model.covariance[model.blocks[feature_index], model.blocks[feature_index]]
    if not np.all(np.isfinite(cov)):
        return None
    eig = np.linalg.eigvalsh(0.5 * (cov + cov.T))
    if eig.min() < -1e-8 * np.abs(eig).max():
        return None
    _, _, lower, upper = partial_dependence(model, feature_index, grid_size)
    width = float(np.mean(upper - lower))
    return width if np.isfinite(width) else None
