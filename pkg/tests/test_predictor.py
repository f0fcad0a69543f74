import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from detox.configuration import Configuration, ConfigurationError
from detox.interp import Outcome
from detox.lang import parse
from detox.campaign import run_discovery
from detox.predictor import Predictor, excluded_times, predict, predict_all, removed_before
from brute import variant_totals
from programs import programs

P1_SDC = {"11": 56, "01": 48, "10": 40, "00": 48}
P1_RUNTIME = {"11": 8, "01": 7, "10": 6, "00": 5}


def test_excluded_times(p1_campaign):
    assert excluded_times(p1_campaign, "11") == []
    assert excluded_times(p1_campaign, "01") == [(3, 4)]
    assert excluded_times(p1_campaign, "00") == [(3, 4), (4, 6)]
    with pytest.raises(ConfigurationError):
        excluded_times(p1_campaign, "1")


@pytest.mark.parametrize("config", sorted(P1_SDC))
def test_p1_table(p1_campaign, config):
    counts = predict(p1_campaign, config)
    assert counts.sdc == P1_SDC[config]
    assert counts.runtime == P1_RUNTIME[config]


@pytest.mark.parametrize("config", sorted(P1_SDC))
def test_p1_against_unpruned_brute_force(p1, p1_campaign, config):
    truth, runtime = variant_totals(p1, config)
    counts = predict(p1_campaign, config)
    assert counts.by_outcome() == {o: truth[o] for o in counts.by_outcome()}
    assert counts.runtime == runtime


def test_p0(campaigns):
    c = campaigns["p0"]
    on, off = predict(c, "1"), predict(c, "0")
    assert (on.sdc, on.detected, on.benign, on.runtime) == (8, 8, 8, 3)
    # 2 steps x 8 bits: the write at t=0 masks, the output read at t=1 corrupts
    assert (off.sdc, off.detected, off.benign, off.runtime) == (8, 0, 8, 2)
    truth, runtime = variant_totals(parse("var x : 8 = 5\noutput x"), "")
    assert (truth[Outcome.SDC], truth[Outcome.BENIGN], runtime) == (8, 8, 2)


def test_identity_configuration_matches_recorded_sdc(campaigns):
    for c in campaigns.values():
        counts = predict(c, Configuration.all_enabled(c.n_assertions))
        measured = sum(r.weight for r in c.records if r.outcome is Outcome.SDC and not r.detectors)
        assert counts.sdc == measured
        assert counts.runtime == c.T


def test_predict_all(campaigns, p1_campaign):
    table = predict_all(p1_campaign)
    assert {str(k): v.sdc for k, v in table.items()} == P1_SDC
    assert len(predict_all(campaigns["p0"])) == 2
    with pytest.raises(ValueError):
        predict_all(campaigns["synth8"], limit=4)


def test_no_assertions():
    c = run_discovery(parse("var x : 8 = 3\nx = x + 1\noutput x"))
    table = predict_all(c)
    assert list(map(str, table)) == [""]
    counts = table[Configuration(())]
    assert counts.sdc == c.totals()[Outcome.SDC]
    assert counts.area == c.T * c.total_bits


def test_removed_before_matches_enumeration():
    excluded = [(2, 4), (7, 8), (8, 11), (20, 21)]
    cells = {t for s, e in excluded for t in range(s, e)}
    xs = np.arange(0, 25)
    expected = [sum(1 for t in cells if t < x) for x in xs]
    assert removed_before(excluded, xs).tolist() == expected
    assert removed_before([], xs).tolist() == [0] * 25


def test_area_and_monotone_runtime(campaigns):
    for c in campaigns.values():
        if c.n_assertions > 8:
            continue
        pred = Predictor(c)
        table = {k: pred.predict(k) for k in Configuration.enumerate(c.n_assertions)}
        for k, counts in table.items():
            total = counts.sdc + counts.detected + counts.benign + counts.trap + counts.timeout
            assert total == counts.area == counts.runtime * c.total_bits
            for i in k.enabled:
                assert table[k.flip(i)].runtime <= counts.runtime


def test_redye_reverts_to_recorded_outcome(campaigns):
    c = campaigns["synth8"]
    pred = Predictor(c)
    for k in [Configuration.parse("10101010"), Configuration.all_disabled(8)]:
        codes = pred.classify(k)
        for r, code in zip(c.records, codes):
            if not any(k.bits[i] for i, _ in r.detectors):
                assert code == pred.codes[c.records.index(r)]


def test_report_shape(p1_campaign):
    rep = predict(p1_campaign, "10").report("10")
    assert rep == {"config": "10",
                   "counts": {"sdc": 40, "detected": 24, "benign": 32, "trap": 0, "timeout": 0},
                   "runtime": 6, "area": 96}


@settings(max_examples=25, deadline=None)
@given(programs(max_area=500), st.data())
def test_exact_against_unpruned_brute_force(p, data):
    c = run_discovery(p)
    config = Configuration(tuple(data.draw(st.lists(st.booleans(), min_size=p.n_assertions,
                                                    max_size=p.n_assertions))))
    truth, runtime = variant_totals(p, config)
    counts = predict(c, config)
    assert counts.runtime == runtime
    assert counts.by_outcome() == {o: truth[o] for o in counts.by_outcome()}
