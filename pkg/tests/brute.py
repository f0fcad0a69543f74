"""Unpruned reference campaigns: one experiment per fault-space cell."""

from collections import Counter

from detox.interp import Interpreter, Outcome
from detox.oracle import strip


def discovery_cells(p, timeout_factor=10.0):
    """{(t, bit): ExperimentResult} over the whole all-enabled fault space."""
    interp = Interpreter(p)
    g = interp.golden_run()
    return {
        (t, b): interp.run_experiment(t, b, False, timeout_factor)
        for t in range(g.T)
        for b in range(g.memory_map.total_bits)
    }


def discovery_totals(p, timeout_factor=10.0) -> Counter:
    return Counter(r.outcome for r in discovery_cells(p, timeout_factor).values())


def variant_totals(p, config, timeout_factor=10.0):
    """(Counter of outcomes, runtime) from deployment runs on every cell of the variant."""
    variant = strip(p, config)
    interp = Interpreter(variant)
    g = interp.golden_run()
    counts = Counter({o: 0 for o in Outcome})
    for t in range(g.T):
        for b in range(g.memory_map.total_bits):
            counts[interp.run_experiment(t, b, True, timeout_factor).outcome] += 1
    return counts, g.T
