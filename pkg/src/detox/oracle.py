"""Ground truth by brute force: build the variant, run its own full campaign."""

from __future__ import annotations

from dataclasses import replace

from .campaign import run_discovery, run_experiments
from .configuration import Configuration, as_configuration
from .faultspace import ClassKind, build_classes
from .interp import DEFAULT_TIMEOUT_FACTOR, Interpreter, Outcome
from .lang import Assert, If, Program, While, render_source
from .predictor import Counts, Predictor

TrueCounts = Counts


def _strip_block(stmts, keep: set[str]):
    out = []
    for s in stmts:
        if isinstance(s, Assert):
            if s.decl.id in keep:
                out.append(s)
        elif isinstance(s, If):
            out.append(replace(s, then=_strip_block(s.then, keep), orelse=_strip_block(s.orelse, keep)))
        elif isinstance(s, While):
            out.append(replace(s, body=_strip_block(s.body, keep)))
        else:
            out.append(s)
    return tuple(out)


def strip(p: Program, c) -> Program:
    """The workload variant with every disabled ``assert`` statement removed.

    Declarations and all other statements are untouched, so the memory layout
    is identical. Kept assertions retain their ids and relative order; see
    :func:`variant_indices` for the index mapping.
    """
    c = as_configuration(c, p.n_assertions)
    if all(c.bits):
        return p
    keep = {p.assertions[i].id for i in c.enabled}
    variant = Program(
        vars=p.vars,
        body=_strip_block(p.body, keep),
        assertions=tuple(a for a in p.assertions if a.id in keep),
    )
    return replace(variant, source=render_source(variant))


def variant_indices(p: Program, c) -> tuple[int, ...]:
    """Original assertion index for each assertion index of ``strip(p, c)``."""
    return as_configuration(c, p.n_assertions).enabled


def ground_truth(
    p: Program,
    c,
    timeout_factor: float = DEFAULT_TIMEOUT_FACTOR,
    jobs: int = 1,
) -> Counts:
    """Deployment-mode campaign on ``strip(p, c)``, aggregated by class weight.

    The first failing assertion ends an experiment and classifies its cells
    DETECTED.
    """
    variant = strip(p, c)
    trace = Interpreter(variant).golden_run()
    classes = build_classes(trace)
    todo = [(k.rep_t, k.bit) for k in classes if k.kind is ClassKind.EXPERIMENT]
    results = iter(run_experiments(variant, todo, deployment=True,
                                   timeout_factor=timeout_factor, jobs=jobs))
    totals = dict.fromkeys(Outcome, 0)
    for k in classes:
        outcome = next(results).outcome if k.kind is ClassKind.EXPERIMENT else Outcome.BENIGN
        totals[outcome] += k.weight
    return Counts(
        sdc=totals[Outcome.SDC], detected=totals[Outcome.DETECTED],
        benign=totals[Outcome.BENIGN], trap=totals[Outcome.TRAP],
        timeout=totals[Outcome.TIMEOUT],
        runtime=trace.T, total_bits=trace.memory_map.total_bits,
    )


def verify(p: Program, campaign=None, timeout_factor: float = DEFAULT_TIMEOUT_FACTOR,
           jobs: int = 1, max_n: int = 20):
    """Compare prediction and ground truth for every configuration.

    Returns a list of (configuration, predicted, true) triples.
    """
    if p.n_assertions > max_n:
        raise ValueError(f"{p.n_assertions} assertions exceed --max-n {max_n}")
    if campaign is None:
        campaign = run_discovery(p, timeout_factor, jobs)
    pred = Predictor(campaign)
    rows = []
    for c in Configuration.enumerate(p.n_assertions):
        rows.append((c, pred.predict(c), ground_truth(p, c, timeout_factor, jobs)))
    return rows
