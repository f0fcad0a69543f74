"""
Searching eight assertions
==========================

With N assertions there are 2**N configurations. Eight is still small
enough to enumerate, which lets us see how the greedy descent and the
genetic search compare with the true optimum.
"""

import numpy as np

from detox import Configuration, GAParams, run_discovery, workloads
from detox.predictor import Predictor
from detox.search import exhaustive, ga, greedy

p = workloads.load("synth8")
result = run_discovery(p)
pred = Predictor(result)

sdc = np.array([pred.predict(c).sdc for c in Configuration.enumerate(8)])
print(f"sdc over all 256 configurations: min {sdc.min()}, median {np.median(sdc):.0f}, max {sdc.max()}")
print("all enabled:", pred.predict(Configuration.all_enabled(8)).sdc)
print("all disabled:", pred.predict(Configuration.all_disabled(8)).sdc)

for out in (exhaustive(result), greedy(result), ga(result, GAParams(seed=1))):
    print(f"{out.method.value:>10}: {out.best}  sdc={out.best_counts.sdc}  "
          f"evaluations={out.evaluations}")

# per-generation best of the GA
trace = ga(result).trace
print("GA best sdc by generation:", trace[:10], "...")

for i, aid in enumerate(result.assertion_ids):
    on = Configuration.all_disabled(8).flip(i)
    print(f"only {aid:>10} enabled: sdc {pred.predict(on).sdc}")
