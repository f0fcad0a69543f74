"""Per-configuration outcome counts computed from one discovery campaign.

Disabling an assertion deletes its execution windows from the timeline:
cells injected inside them cease to exist, and everything after shifts
left. A remaining cell counts as DETECTED when any enabled assertion is
among its recorded detectors; otherwise it falls back to the final outcome
the discovery run observed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .campaign import CampaignResult
from .configuration import Configuration, as_configuration
from .interp import Outcome

EXHAUSTIVE_LIMIT = 20

_CODES = {Outcome.SDC: 0, Outcome.DETECTED: 1, Outcome.BENIGN: 2, Outcome.TRAP: 3,
          Outcome.TIMEOUT: 4}


@dataclass(frozen=True)
class Counts:
    sdc: int
    detected: int
    benign: int
    trap: int
    timeout: int
    runtime: int
    total_bits: int

    @property
    def area(self) -> int:
        return self.runtime * self.total_bits

    def by_outcome(self) -> dict[Outcome, int]:
        return {Outcome.SDC: self.sdc, Outcome.DETECTED: self.detected,
                Outcome.BENIGN: self.benign, Outcome.TRAP: self.trap,
                Outcome.TIMEOUT: self.timeout}

    def report(self, config, **extra) -> dict:
        out = {
            "config": str(config),
            "counts": {"sdc": self.sdc, "detected": self.detected, "benign": self.benign,
                       "trap": self.trap, "timeout": self.timeout},
            "runtime": self.runtime,
            "area": self.area,
        }
        out.update(extra)
        return out


PredictedCounts = Counts


def excluded_times(campaign: CampaignResult, c) -> list[tuple[int, int]]:
    """Sorted, disjoint [start, end) windows of every disabled assertion instance."""
    c = as_configuration(c, campaign.n_assertions)
    off = set(c.disabled)
    return sorted((w.t_start, w.t_end) for w in campaign.windows if w.assertion_index in off)


def removed_before(excluded: list[tuple[int, int]], x) -> np.ndarray:
    """Total excluded length inside [0, x), elementwise over ``x``."""
    x = np.asarray(x, dtype=np.int64)
    if not excluded:
        return np.zeros_like(x)
    ex = np.asarray(excluded, dtype=np.int64)
    starts, ends = ex[:, 0], ex[:, 1]
    cum = np.concatenate(([0], np.cumsum(ends - starts)))
    k = np.searchsorted(starts, x, side="right")  # intervals starting at or before x
    partial = np.clip(x - starts[np.maximum(k - 1, 0)], 0, (ends - starts)[np.maximum(k - 1, 0)])
    return np.where(k > 0, cum[np.maximum(k - 1, 0)] + partial, 0)


class Predictor:
    """Vectorized predictions over one campaign; reuse it for many configurations."""

    def __init__(self, campaign: CampaignResult):
        self.campaign = campaign
        recs = campaign.records
        self.lo = np.fromiter((r.lo for r in recs), np.int64, len(recs))
        self.hi = np.fromiter((r.hi for r in recs), np.int64, len(recs))
        self.codes = np.fromiter((_CODES[r.outcome] for r in recs), np.int64, len(recs))
        self.detectors = np.zeros((len(recs), campaign.n_assertions), dtype=bool)
        for i, r in enumerate(recs):
            for a, _ in r.detectors:
                self.detectors[i, a] = True

    def effective_weights(self, excluded) -> np.ndarray:
        if not excluded:
            return self.hi - self.lo
        return (self.hi - removed_before(excluded, self.hi)) - (
            self.lo - removed_before(excluded, self.lo))

    def classify(self, c: Configuration) -> np.ndarray:
        """Outcome code per record under ``c`` (see ``_CODES``)."""
        enabled = np.asarray(c.bits, dtype=bool)
        if enabled.any():
            hit = self.detectors[:, enabled].any(axis=1)
            return np.where(hit, _CODES[Outcome.DETECTED], self.codes)
        return self.codes

    def predict(self, c) -> Counts:
        c = as_configuration(c, self.campaign.n_assertions)
        excluded = excluded_times(self.campaign, c)
        w = self.effective_weights(excluded)
        totals = np.bincount(self.classify(c), weights=w, minlength=5).astype(np.int64)
        runtime = self.campaign.T - sum(e - s for s, e in excluded)
        return Counts(
            sdc=int(totals[0]), detected=int(totals[1]), benign=int(totals[2]),
            trap=int(totals[3]), timeout=int(totals[4]),
            runtime=runtime, total_bits=self.campaign.total_bits,
        )


def predict(campaign: CampaignResult, c) -> Counts:
    return Predictor(campaign).predict(c)


def predict_all(campaign: CampaignResult, limit: int = EXHAUSTIVE_LIMIT) -> dict[Configuration, Counts]:
    n = campaign.n_assertions
    if n > limit:
        raise ValueError(f"{n} assertions exceed the exhaustive limit of {limit}")
    pred = Predictor(campaign)
    return {c: pred.predict(c) for c in Configuration.enumerate(n)}
