"""Def/use equivalence classes over the (time step x memory bit) fault space.

Between two consecutive accesses to a bit, every injection time leads to the
same execution: the flipped value sits untouched until the next access. A
class ending in a read is injected once, at that read; a class ending in a
write (or running off the end of the program) is benign by construction.
"""

from __future__ import annotations

import enum
from collections import defaultdict
from dataclasses import dataclass
from typing import Optional

from .interp import GoldenTrace


class ClassKind(str, enum.Enum):
    EXPERIMENT = "E"
    PRUNED_BENIGN = "P"


@dataclass(frozen=True, order=True)
class FaultClass:
    bit: int
    lo: int
    hi: int
    kind: ClassKind

    @property
    def weight(self) -> int:
        return self.hi - self.lo

    @property
    def rep_t(self) -> Optional[int]:
        return self.hi - 1 if self.kind is ClassKind.EXPERIMENT else None


def build_classes(trace: GoldenTrace) -> list[FaultClass]:
    """Partition every bit's timeline [0, T) into def/use classes.

    Sorted by (bit, lo). Read-write accesses end a class as a read.
    """
    per_bit: dict[int, dict[int, str]] = defaultdict(dict)
    for t, bit, mode in trace.accesses:
        per_bit[bit][t] = mode

    classes = []
    T = trace.T
    for bit in range(trace.memory_map.total_bits):
        lo = 0
        for t, mode in sorted(per_bit.get(bit, {}).items()):
            kind = ClassKind.PRUNED_BENIGN if mode == "W" else ClassKind.EXPERIMENT
            classes.append(FaultClass(bit, lo, t + 1, kind))
            lo = t + 1
        if lo < T:
            classes.append(FaultClass(bit, lo, T, ClassKind.PRUNED_BENIGN))
    return classes


def total_area(trace: GoldenTrace) -> int:
    return trace.T * trace.memory_map.total_bits
