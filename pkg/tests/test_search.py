import pytest
from hypothesis import given, settings

from detox.campaign import run_discovery
from detox.configuration import Configuration
from detox.lang import parse
from detox.predictor import predict, predict_all
from detox.search import GAParams, Method, exhaustive, ga, greedy
from programs import programs


def test_exhaustive_p1(p1_campaign):
    out = exhaustive(p1_campaign)
    assert (str(out.best), out.best_counts.sdc, out.evaluations) == ("10", 40, 4)
    assert out.method is Method.EXHAUSTIVE


def test_exhaustive_p0(campaigns):
    # "1" and "0" both leave 8 SDC cells; the cheaper configuration wins the tie
    out = exhaustive(campaigns["p0"])
    assert (str(out.best), out.best_counts.sdc) == ("0", 8)


def test_exhaustive_no_assertions():
    out = exhaustive(run_discovery(parse("var x : 8 = 1\noutput x")))
    assert (str(out.best), out.evaluations) == ("", 1)


def test_exhaustive_limit(campaigns):
    with pytest.raises(ValueError):
        exhaustive(campaigns["synth8"], limit=7)


def test_exhaustive_is_global_minimum(campaigns):
    for c in campaigns.values():
        out = exhaustive(c)
        table = predict_all(c)
        assert out.best_counts.sdc == min(v.sdc for v in table.values())
        assert out.best_counts == predict(c, out.best)


def test_tie_break_prefers_fewer_enabled():
    # the assertion never fires and `x` is dead while it runs: disabling costs nothing
    c = run_discovery(parse("var x : 8 = 1\noutput x\nassert idle cost 3 : 1 == 1\noutput 0"))
    assert predict(c, "1").sdc == predict(c, "0").sdc
    assert str(exhaustive(c).best) == "0"
    assert str(greedy(c).best) == "0"


def test_greedy_p1(p1_campaign, campaigns):
    out = greedy(p1_campaign)
    assert str(out.best) == "10" and out.trace == (56, 40)
    assert str(greedy(campaigns["p0"]).best) == "0"


def test_greedy_useless_assertions_all_disabled():
    c = run_discovery(parse("""
var x : 8 = 1
var y : 8 = 2
assert u1 : 1 == 1
x = x + y
assert u2 cost 2 : 2 == 2
assert u3 : 3 > 1
output x
"""))
    assert str(greedy(c).best) == "000"


def test_ga_p1(p1_campaign):
    out = ga(p1_campaign)
    assert (str(out.best), out.best_counts.sdc) == ("10", 40)
    assert out.seed == 1 and out.method is Method.GA


def test_ga_single_assertion(campaigns):
    c = campaigns["p0"]
    assert ga(c).best == exhaustive(c).best


def test_ga_reproducible(campaigns):
    c = campaigns["synth8"]
    params = GAParams(seed=7, generations=20)
    assert ga(c, params) == ga(c, params)


def test_ga_params_validated(p1_campaign):
    for bad in (GAParams(population=1), GAParams(mutation_rate=1.5), GAParams(generations=-1)):
        with pytest.raises(ValueError):
            ga(p1_campaign, bad)


def test_ga_zero_generations_not_worse_than_extremes(campaigns):
    c = campaigns["synth8"]
    out = ga(c, GAParams(generations=0))
    assert out.best_counts.sdc <= predict(c, Configuration.all_enabled(8)).sdc
    assert out.best_counts.sdc <= predict(c, Configuration.all_disabled(8)).sdc


def test_search_report(p1_campaign):
    rep = ga(p1_campaign).report()
    assert rep["method"] == "ga" and rep["best_config"] == "10" and rep["seed"] == 1
    assert "seed" not in exhaustive(p1_campaign).report()


@settings(max_examples=20, deadline=None)
@given(programs(max_area=600))
def test_heuristics_never_worse_than_all_enabled(p):
    c = run_discovery(p)
    base = predict(c, Configuration.all_enabled(p.n_assertions)).sdc
    best = exhaustive(c).best_counts.sdc
    for out in (greedy(c), ga(c, GAParams(generations=15))):
        assert best <= out.best_counts.sdc <= base
        assert out.best_counts == predict(c, out.best)
