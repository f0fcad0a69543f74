from collections import defaultdict

from hypothesis import given, settings

from detox.faultspace import ClassKind, FaultClass, build_classes, total_area
from detox.interp import Outcome, golden_run
from detox.lang import parse
from brute import discovery_cells
from programs import programs

E, P = ClassKind.EXPERIMENT, ClassKind.PRUNED_BENIGN


def classes_for(p, bit):
    return [(c.lo, c.hi, c.kind, c.rep_t) for c in build_classes(golden_run(p)) if c.bit == bit]


def test_p0_classes(p0):
    for bit in range(8):
        assert classes_for(p0, bit) == [(0, 1, P, None), (1, 2, E, 1), (2, 3, E, 2)]


def test_p1_classes_for_a(p1):
    for bit in range(8):
        assert classes_for(p1, bit) == [
            (0, 1, P, None), (1, 3, E, 2), (3, 4, E, 3), (4, 6, E, 5), (6, 7, E, 6), (7, 8, P, None)]


def test_p1_classes_for_b(p1):
    for bit in range(8, 16):
        assert classes_for(p1, bit) == [(0, 2, P, None), (2, 8, E, 7)]


def test_total_area(p0, p1):
    assert total_area(golden_run(p0)) == 24
    assert total_area(golden_run(p1)) == 128
    assert total_area(golden_run(parse("var x : 8 = 0"))) == 8
    assert total_area(golden_run(parse(""))) == 0


def test_weight():
    assert FaultClass(0, 3, 7, E).weight == 4


def check_partition(trace):
    per_bit = defaultdict(list)
    for c in build_classes(trace):
        assert c.weight >= 1
        per_bit[c.bit].append(c)
    assert set(per_bit) == set(range(trace.memory_map.total_bits))
    for cs in per_bit.values():
        assert cs[0].lo == 0 and cs[-1].hi == trace.T
        assert all(a.hi == b.lo for a, b in zip(cs, cs[1:]))
        assert sum(c.weight for c in cs) == trace.T


def test_partition_corpus(programs):
    for p in programs.values():
        check_partition(golden_run(p))


def test_experiment_classes_end_in_reads(programs):
    for p in programs.values():
        g = golden_run(p)
        modes = {(t, b): m for t, b, m in g.accesses}
        for c in build_classes(g):
            if c.kind is E:
                assert modes[(c.rep_t, c.bit)] in ("R", "RW")


def check_pruning_sound(p):
    cells = discovery_cells(p)
    for c in build_classes(golden_run(p)):
        results = {cells[(t, c.bit)] for t in range(c.lo, c.hi)}
        if c.kind is E:
            assert results == {cells[(c.rep_t, c.bit)]}
        else:
            assert {(r.detectors, r.outcome) for r in results} == {((), Outcome.BENIGN)}


def test_pruning_sound_small_corpus(programs):
    for name in ("p0", "p1", "synth8"):
        check_pruning_sound(programs[name])


@settings(max_examples=40, deadline=None)
@given(programs(max_area=700))
def test_pruning_sound_generated(p):
    check_partition(golden_run(p))
    check_pruning_sound(p)
