"""NSGA-II over GAM-structure chromosomes.

Minimizes (CV RMSE, complexity penalty) with binary crowded tournaments,
gated uniform crossover, adaptive per-gene mutation and (mu + lambda)
elitist survival.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from .dataset import Dataset
from .evaluation import CvPlan, Evaluator, Objectives, make_cv_plan
from .genome import Chromosome, adaptive_rate, mutate, smart_init, uniform_crossover

log = logging.getLogger(__name__)

INF = math.inf


@dataclass
class Individual:
    chromosome: Chromosome
    objectives: Objectives
    rank: int = -1
    crowding: float = 0.0

    @property
    def point(self) -> tuple[float, float]:
        return self.objectives.as_tuple()


@dataclass(frozen=True)
class GaConfig:
    population_size: int = 80
    generations: int = 50
    crossover_prob: float = 0.3
    mutation_start: float = 0.15
    mutation_horizon: int = 100
    mutation_floor: float = 0.015
    k_folds: int = 5
    seed: int = 42
    workers: int = 1

    def __post_init__(self):
        if self.population_size < 4 or self.population_size % 2:
            raise ValueError(f"population_size must be even and >= 4, got {self.population_size}")
        if self.generations < 0:
            raise ValueError("generations must be >= 0")
        if not 0.0 <= self.crossover_prob <= 1.0:
            raise ValueError("crossover_prob must be in [0, 1]")
        if self.k_folds < 2:
            raise ValueError("k_folds must be >= 2")

    def mutation_rate(self, generation: int) -> float:
        return adaptive_rate(generation, self.mutation_start, self.mutation_horizon, self.mutation_floor)

    def to_dict(self) -> dict:
        d = asdict(self)
        # worker count never changes results, so it is not part of the echo
        d.pop("workers")
        return d


def _pt(x) -> tuple[float, float]:
    if isinstance(x, Individual):
        return x.point
    if isinstance(x, Objectives):
        return x.as_tuple()
    return (float(x[0]), float(x[1]))


def dominates(a, b) -> bool:
    (a0, a1), (b0, b1) = _pt(a), _pt(b)
    return a0 <= b0 and a1 <= b1 and (a0 < b0 or a1 < b1)


def fast_nondominated_sort(pop) -> list[list[int]]:
    """Deb's O(M N^2) sort. Accepts Individuals, Objectives or (f1, f2) pairs.

    Ranks are written back onto Individuals.
    """
    pts = [_pt(p) for p in pop]
    n = len(pts)
    dominated_by = [[] for _ in range(n)]
    counts = [0] * n
    fronts: list[list[int]] = [[]]
    for p in range(n):
        for q in range(p + 1, n):
            if dominates(pts[p], pts[q]):
                dominated_by[p].append(q)
                counts[q] += 1
            elif dominates(pts[q], pts[p]):
                dominated_by[q].append(p)
                counts[p] += 1
    for p in range(n):
        if counts[p] == 0:
            fronts[0].append(p)
    i = 0
    while fronts[i]:
        nxt = []
        for p in fronts[i]:
            for q in dominated_by[p]:
                counts[q] -= 1
                if counts[q] == 0:
                    nxt.append(q)
        i += 1
        fronts.append(sorted(nxt))
    fronts.pop()
    for r, front in enumerate(fronts):
        for idx in front:
            if isinstance(pop[idx], Individual):
                pop[idx].rank = r
    return fronts


def crowding_distance(front) -> np.ndarray:
    """Crowding distance within one front; boundary points get infinity."""
    pts = np.array([_pt(p) for p in front], dtype=float).reshape(-1, 2)
    n = len(pts)
    dist = np.zeros(n)
    if n <= 2:
        dist[:] = INF
        return dist
    for m in range(pts.shape[1]):
        order = np.argsort(pts[:, m], kind="stable")
        vals = pts[order, m]
        dist[order[0]] = dist[order[-1]] = INF
        span = vals[-1] - vals[0]
        if span <= 0:
            continue
        gaps = (vals[2:] - vals[:-2]) / span
        dist[order[1:-1]] += gaps
    return dist


def assign_crowding(pop: list[Individual], fronts: list[list[int]]) -> None:
    for front in fronts:
        d = crowding_distance([pop[i] for i in front])
        for i, v in zip(front, d):
            pop[i].crowding = float(v)


def crowded_better(a: Individual, b: Individual) -> bool | None:
    """True if a wins, False if b wins, None on a full tie."""
    if a.rank != b.rank:
        return a.rank < b.rank
    if a.crowding != b.crowding:
        return a.crowding > b.crowding
    return None


def tournament_select(pop: list[Individual], rng: np.random.Generator) -> Individual:
    i, j = rng.integers(len(pop), size=2)
    a, b = pop[i], pop[j]
    win = crowded_better(a, b)
    if win is None:
        win = bool(rng.random() < 0.5)
    return a if win else b


def environmental_selection(combined: list[Individual], size: int) -> list[Individual]:
    """Keep whole fronts in rank order, then the most crowded-apart of the cut front."""
    fronts = fast_nondominated_sort(combined)
    assign_crowding(combined, fronts)
    survivors: list[Individual] = []
    for front in fronts:
        if len(survivors) + len(front) <= size:
            survivors.extend(combined[i] for i in front)
            continue
        need = size - len(survivors)
        # stable on input order for equal crowding
        cut = sorted(front, key=lambda i: -combined[i].crowding)
        survivors.extend(combined[i] for i in cut[:need])
        break
    return survivors


def make_offspring(
    parents: list[Individual], config: GaConfig, generation: int, rng: np.random.Generator
) -> list[Chromosome]:
    rate = config.mutation_rate(generation)
    children: list[Chromosome] = []
    while len(children) < config.population_size:
        a = tournament_select(parents, rng).chromosome
        b = tournament_select(parents, rng).chromosome
        c1, c2 = uniform_crossover(a, b, rng, config.crossover_prob)
        children.append(mutate(c1, rate, rng))
        children.append(mutate(c2, rate, rng))
    return children[: config.population_size]


def first_front(pop: list[Individual]) -> list[Individual]:
    """Rank-0 members, deduplicated by canonical key and ordered by RMSE."""
    fronts = fast_nondominated_sort(pop)
    seen = set()
    out = []
    for i in fronts[0]:
        key = pop[i].chromosome.canonical_key
        if key not in seen:
            seen.add(key)
            out.append(pop[i])
    return sorted(out, key=lambda ind: (ind.objectives.rmse, ind.objectives.penalty, ind.chromosome.canonical_key))


@dataclass
class GenerationStats:
    generation: int
    best_rmse: float
    best_penalty: float
    front_size: int
    mutation_rate: float
    front: list[tuple[float, float]] = field(repr=False)

    def to_dict(self) -> dict:
        return {
            "generation": self.generation,
            "best_rmse": self.best_rmse,
            "best_penalty": self.best_penalty,
            "front_size": self.front_size,
            "mutation_rate": self.mutation_rate,
            "front": [list(p) for p in self.front],
        }


@dataclass
class GaResult:
    population: list[Individual]
    front: list[Individual]
    history: list[GenerationStats]
    n_fits: int


def _stats(pop: list[Individual], generation: int, rate: float) -> GenerationStats:
    front = first_front(pop)
    valid = [p for p in pop if p.objectives.valid] or pop
    return GenerationStats(
        generation=generation,
        best_rmse=min(p.objectives.rmse for p in valid),
        best_penalty=min(p.objectives.penalty for p in valid),
        front_size=len(front),
        mutation_rate=rate,
        front=sorted({p.point for p in front}),
    )


def run(
    config: GaConfig,
    data: Dataset,
    plan: CvPlan | None = None,
    progress: Callable[[GenerationStats], None] | None = None,
    trace_path=None,
    cv_seed: int | None = None,
) -> GaResult:
    """Evolve GAM structures on ``data`` (the train+validation rows)."""
    if plan is None:
        plan = make_cv_plan(data.n_rows, config.k_folds, config.seed if cv_seed is None else cv_seed)
    evaluator = Evaluator(data, plan, config.workers)
    rng = np.random.default_rng(config.seed)

    chroms = [smart_init(data.n_features, rng) for _ in range(config.population_size)]
    pop = [Individual(c, o) for c, o in zip(chroms, evaluator(chroms))]
    fronts = fast_nondominated_sort(pop)
    assign_crowding(pop, fronts)

    history = [_stats(pop, 0, config.mutation_rate(0))]
    trace = open(trace_path, "w") if trace_path else None
    try:
        for g in range(1, config.generations + 1):
            if progress:
                progress(history[-1])
            if trace:
                trace.write(json.dumps(history[-1].to_dict()) + "\n")
            kids = make_offspring(pop, config, g - 1, rng)
            offspring = [Individual(c, o) for c, o in zip(kids, evaluator(kids))]
            pop = environmental_selection(pop + offspring, config.population_size)
            fronts = fast_nondominated_sort(pop)
            assign_crowding(pop, fronts)
            history.append(_stats(pop, g, config.mutation_rate(g)))
        if progress:
            progress(history[-1])
        if trace:
            trace.write(json.dumps(history[-1].to_dict()) + "\n")
    finally:
        if trace:
            trace.close()
    return GaResult(pop, first_front(pop), history, evaluator.n_fits)
