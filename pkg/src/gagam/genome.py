"""GAM-structure chromosomes and their variation operators.

A chromosome holds one gene per feature. A gene is a :class:`TermSpec`
restricted to the search ranges below.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .gam import ModelSpec, TermKind, TermSpec

KIND_ORDER = (TermKind.NONE, TermKind.LINEAR, TermKind.SPLINE)
KIND_PROBS = (0.2, 0.3, 0.5)
MIN_SPLINES, MAX_SPLINES = 8, 20
MIN_LAM, MAX_LAM = 0.1, 10.0
KNOT_STEPS = (-3, -2, -1, 1, 2, 3)
LOG_LAM_SIGMA = 0.5
# genes carry lambda at key precision so equal keys mean equal fits
LAM_DECIMALS = 6

Gene = TermSpec


def check_gene(gene: Gene) -> None:
    if gene.kind is TermKind.SPLINE:
        if not MIN_SPLINES <= gene.n_splines <= MAX_SPLINES:
            raise ValueError(f"n_splines {gene.n_splines} outside [{MIN_SPLINES}, {MAX_SPLINES}]")
        if not MIN_LAM <= gene.lam <= MAX_LAM:
            raise ValueError(f"lambda {gene.lam} outside [{MIN_LAM}, {MAX_LAM}]")


def gene_key(gene: Gene) -> str:
    if gene.kind is TermKind.SPLINE:
        body = f"S{gene.n_splines}:{gene.lam:.{LAM_DECIMALS}f}"
    else:
        body = "N" if gene.kind is TermKind.NONE else "L"
    return f"{body}{'+' if gene.scale else '-'}"


@dataclass(frozen=True)
class Chromosome:
    genes: tuple[Gene, ...]

    def __post_init__(self):
        genes = tuple(self.genes)
        for g in genes:
            check_gene(g)
        object.__setattr__(self, "genes", genes)

    def __len__(self) -> int:
        return len(self.genes)

    @property
    def canonical_key(self) -> str:
        return "|".join(gene_key(g) for g in self.genes)

    def to_model_spec(self) -> ModelSpec:
        return ModelSpec(self.genes)

    @classmethod
    def from_model_spec(cls, spec: ModelSpec) -> "Chromosome":
        return cls(spec.terms)

    def to_list(self) -> list[dict]:
        return [g.to_dict() for g in self.genes]

    @classmethod
    def from_list(cls, items) -> "Chromosome":
        return cls(tuple(TermSpec.from_dict(d) for d in items))


def to_model_spec(c: Chromosome) -> ModelSpec:
    return c.to_model_spec()


def _random_gene(rng: np.random.Generator, scale: bool | None = None) -> Gene:
    kind = KIND_ORDER[rng.choice(3, p=KIND_PROBS)]
    if kind is TermKind.SPLINE:
        n = int(rng.integers(MIN_SPLINES, MAX_SPLINES + 1))
        lam = round(float(rng.uniform(MIN_LAM, MAX_LAM)), LAM_DECIMALS)
    else:
        n = lam = None
    if scale is None:
        scale = bool(rng.integers(2))
    return TermSpec(kind, n, lam, scale)


def smart_init(n_features: int, rng: np.random.Generator) -> Chromosome:
    """Draw a chromosome gene by gene: kind, then spline settings, then scale."""
    if n_features < 1:
        raise ValueError("n_features must be >= 1")
    return Chromosome(tuple(_random_gene(rng) for _ in range(n_features)))


def uniform_crossover(
    a: Chromosome,
    b: Chromosome,
    rng: np.random.Generator,
    prob: float = 0.3,
    swap_prob: float = 0.5,
) -> tuple[Chromosome, Chromosome]:
    """Swap whole genes position by position, gated once per pair by ``prob``."""
    if len(a) != len(b):
        raise ValueError(f"parent lengths differ: {len(a)} vs {len(b)}")
    if rng.random() >= prob:
        return a, b
    swap = rng.random(len(a)) < swap_prob
    c1 = tuple(gb if s else ga for ga, gb, s in zip(a.genes, b.genes, swap))
    c2 = tuple(ga if s else gb for ga, gb, s in zip(a.genes, b.genes, swap))
    return Chromosome(c1), Chromosome(c2)


def _perturb(gene: Gene, action: int, rng: np.random.Generator) -> Gene:
    if action in (1, 2) and gene.kind is not TermKind.SPLINE:
        action = 0
    if action == 0:
        return _random_gene(rng, scale=gene.scale)
    if action == 1:
        step = int(rng.choice(KNOT_STEPS))
        n = min(max(gene.n_splines + step, MIN_SPLINES), MAX_SPLINES)
        return TermSpec(gene.kind, n, gene.lam, gene.scale)
    if action == 2:
        lam = gene.lam * math.exp(rng.normal(0.0, LOG_LAM_SIGMA))
        lam = round(min(max(lam, MIN_LAM), MAX_LAM), LAM_DECIMALS)
        return TermSpec(gene.kind, gene.n_splines, lam, gene.scale)
    if action == 3:
        return TermSpec(gene.kind, gene.n_splines, gene.lam, not gene.scale)
    raise ValueError(f"unknown mutation action {action}")


def mutate(c: Chromosome, rate: float, rng: np.random.Generator, action: int | None = None) -> Chromosome:
    """Per-gene perturbation with probability ``rate``.

    Actions: 0 resample the whole term, 1 shift the spline count,
    2 scale lambda log-normally, 3 flip the scale flag. ``action`` forces
    one of them (for testing); otherwise each is equally likely.
    """
    if not 0.0 <= rate <= 1.0:
        raise ValueError(f"rate must be in [0, 1], got {rate}")
    genes = []
    for g in c.genes:
        if rng.random() < rate:
            a = int(rng.integers(4)) if action is None else action
            g = _perturb(g, a, rng)
        genes.append(g)
    return Chromosome(tuple(genes))


def adaptive_rate(generation: int, start: float = 0.15, horizon: int = 100, floor: float = 0.015) -> float:
    if generation < 0:
        raise ValueError("generation must be >= 0")
    return max(start * (1.0 - generation / horizon), floor)
