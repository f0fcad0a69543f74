"""
Two assertions, one long-lived variable
=======================================

`a` is checked twice after being incremented; `b` just sits in memory
until it is printed. Each check protects `a` but keeps `b` exposed for
longer. Which checks are worth keeping?
"""

from detox import Configuration, ground_truth, predict_all, render_svg, run_discovery, workloads
from detox.search import exhaustive

p = workloads.load("p1")
print(workloads.source("p1"))

# One campaign with both assertions compiled in. Detections are recorded
# but the run continues, so every cell also knows its would-be outcome.
result = run_discovery(p)
print("fault space:", result.T, "steps x", result.total_bits, "bits")

# Every other configuration is computed from that single dataset ...
table = predict_all(result)

# ... and, because this workload is tiny, checked against a campaign per variant.
print(f"{'config':>6} {'sdc pred':>9} {'sdc true':>9} {'runtime':>8}")
for config, counts in table.items():
    truth = ground_truth(p, config)
    print(f"{str(config):>6} {counts.sdc:>9} {truth.sdc:>9} {counts.runtime:>8}")

# Dropping the cost-2 assertion A2 wins: it loses a few detections in `a`
# but shortens the run enough to save more SDC cells in `b`.
best = exhaustive(result)
print("best:", best.best, "with", best.best_counts.sdc, "SDC cells")

for bits in ("11", "10"):
    with open(f"p1_{bits}.svg", "w") as fh:
        fh.write(render_svg(result, Configuration.parse(bits)))
print("wrote p1_11.svg and p1_10.svg")
