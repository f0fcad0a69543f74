"""Minimum-SDC configuration search over predicted counts."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .campaign import CampaignResult
from .configuration import Configuration
from .predictor import EXHAUSTIVE_LIMIT, Counts, Predictor


class Method(str, enum.Enum):
    EXHAUSTIVE = "exhaustive"
    GREEDY = "greedy"
    GA = "ga"


@dataclass(frozen=True)
class SearchOutcome:
    best: Configuration
    best_counts: Counts
    evaluations: int
    method: Method
    trace: tuple[int, ...] = ()
    seed: Optional[int] = None

    def report(self) -> dict:
        out = {
            "method": self.method.value,
            "best_config": str(self.best),
            "counts": self.best_counts.report(self.best)["counts"],
            "runtime": self.best_counts.runtime,
            "evaluations": self.evaluations,
        }
        if self.seed is not None:
            out["seed"] = self.seed
        return out


@dataclass(frozen=True)
class GAParams:
    population: int = 32
    generations: int = 100
    mutation_rate: Optional[float] = None  # None means 1/N
    crossover_rate: float = 0.9
    seed: int = 1
    tournament: int = 2

    def validate(self) -> None:
        if self.population < 2:
            raise ValueError("population must be >= 2")
        if self.generations < 0:
            raise ValueError("generations must be >= 0")
        if self.tournament < 1:
            raise ValueError("tournament size must be >= 1")
        for name in ("mutation_rate", "crossover_rate"):
            v = getattr(self, name)
            if v is not None and not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {v}")


class _Evaluator:
    """Memoized predictions; counts distinct configurations evaluated."""

    def __init__(self, campaign: CampaignResult):
        self.predictor = Predictor(campaign)
        self.cache: dict[Configuration, Counts] = {}

    def __call__(self, c: Configuration) -> Counts:
        counts = self.cache.get(c)
        if counts is None:
            counts = self.cache[c] = self.predictor.predict(c)
        return counts

    def key(self, c: Configuration):
        # lower SDC first, then fewer enabled assertions, then bit string
        return (self(c).sdc, c.n_enabled, str(c))


def exhaustive(campaign: CampaignResult, limit: int = EXHAUSTIVE_LIMIT) -> SearchOutcome:
    n = campaign.n_assertions
    if n > limit:
        raise ValueError(f"{n} assertions exceed the exhaustive limit of {limit}")
    ev = _Evaluator(campaign)
    best = min(Configuration.enumerate(n), key=ev.key)
    return SearchOutcome(best, ev(best), len(ev.cache), Method.EXHAUSTIVE)


def greedy(campaign: CampaignResult) -> SearchOutcome:
    """Single-bit-flip descent from the all-enabled configuration."""
    n = campaign.n_assertions
    ev = _Evaluator(campaign)
    current = Configuration.all_enabled(n)
    trace = [ev(current).sdc]
    while True:
        neighbours = [current.flip(i) for i in range(n)]
        if not neighbours:
            break
        cand = min(neighbours, key=ev.key)
        if ev.key(cand)[:2] >= ev.key(current)[:2]:
            break
        current = cand
        trace.append(ev(current).sdc)
    return SearchOutcome(current, ev(current), len(ev.cache), Method.GREEDY, tuple(trace))


def ga(campaign: CampaignResult, params: GAParams = GAParams()) -> SearchOutcome:
    """Genetic search over assertion bitmasks.

    Tournament selection, uniform crossover, per-bit mutation and an elite of
    one. The all-enabled and all-disabled genomes seed the initial population,
    so the result is never worse than either.
    """
    params.validate()
    n = campaign.n_assertions
    ev = _Evaluator(campaign)
    rng = np.random.default_rng(params.seed)
    if n == 0:
        c = Configuration(())
        return SearchOutcome(c, ev(c), 1, Method.GA, (ev(c).sdc,), params.seed)
    mutation = 1.0 / n if params.mutation_rate is None else params.mutation_rate

    def as_config(genome) -> Configuration:
        return Configuration(tuple(bool(b) for b in genome))

    pop = rng.random((params.population, n)) < 0.5
    pop[0] = True
    pop[1] = False
    configs = [as_config(g) for g in pop]
    best = min(configs, key=ev.key)
    trace = [ev(best).sdc]

    def tournament() -> np.ndarray:
        picks = rng.integers(params.population, size=params.tournament)
        return pop[min(picks, key=lambda i: ev.key(configs[i]))]

    for _ in range(params.generations):
        children = [np.array(best.bits, dtype=bool)]
        while len(children) < params.population:
            a, b = tournament(), tournament()
            if rng.random() < params.crossover_rate:
                child = np.where(rng.random(n) < 0.5, a, b)
            else:
                child = a.copy()
            child ^= rng.random(n) < mutation
            children.append(child)
        pop = np.array(children)
        configs = [as_config(g) for g in pop]
        best = min(configs, key=ev.key)
        trace.append(ev(best).sdc)

    return SearchOutcome(best, ev(best), len(ev.cache), Method.GA, tuple(trace), params.seed)
