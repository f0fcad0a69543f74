"""
Bubble sort with a swap check and a final check
===============================================

Ten bytes are bubble-sorted. `swap_order` re-checks each swapped pair,
`final_sorted` scans the whole array at the end. The table compares the
predicted SDC count of every configuration with a separate campaign on
that configuration's own stripped variant.
"""

import time

from detox import Configuration, ground_truth, run_discovery, workloads
from detox.predictor import Predictor

p = workloads.load("sort10")

t0 = time.perf_counter()
result = run_discovery(p)
print(f"all-enabled campaign: {len(result.records)} classes, "
      f"{result.T * result.total_bits} cells, {time.perf_counter() - t0:.1f}s")

pred = Predictor(result)
rows = []
for config in Configuration.enumerate(p.n_assertions):
    predicted = pred.predict(config)
    true = ground_truth(p, config)
    err = 100.0 * (predicted.sdc - true.sdc) / true.sdc
    rows.append((str(config), predicted.sdc, true.sdc, err))

print(f"{'':>12}" + "".join(f"{c:>10}" for c, *_ in rows))
print(f"{'predicted':>12}" + "".join(f"{s:>10}" for _, s, _, _ in rows))
print(f"{'measured':>12}" + "".join(f"{s:>10}" for _, _, s, _ in rows))
print(f"{'error %':>12}" + "".join(f"{e:>+10.3f}" for *_, e in rows))

best = min(rows, key=lambda r: r[1])
print("lowest predicted SDC:", best[0])
