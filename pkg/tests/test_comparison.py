import pytest

from dgkit.bar import ComparisonMap, check_comparison, XI_TERMS, nilpotency_degree, BarBimodule
from dgkit.envelopes import TwixCategory, singleton
from dgkit.homotopy import default_sample
from conftest import load

# fast instances for each envelope kind
INSTANCES = {"sb": "kx2", "add": "quiver2", "pretr": "quiver2", "tw": "m2x2"}


def instance(kind, fixture=None):
    P = load(fixture or INSTANCES[kind])
    E = TwixCategory(P, kind)
    sample = [P.twix["T"]] if kind == "tw" else default_sample(E, P)
    for o in sample:
        E.add_object(o)
    return E, sample


def run(kind, fixture=None, r=2, **kw):
    E, sample = instance(kind, fixture)
    xi = ComparisonMap(E, sample, r, **kw)
    return check_comparison(xi, [(a, b) for a in sample for b in sample])


@pytest.mark.parametrize("kind", ["sb", "add", "pretr"])
def test_comparison_certified(kind):
    assert run(kind).passed


@pytest.mark.parametrize("fixture", ["bigraded", "m2x2"])
def test_sb_on_other_gradings(fixture):
    assert run("sb", fixture, r=1).passed


def test_add_on_finite_field():
    assert run("add", "additive3", r=1).passed


def test_tw_order_by_order():
    assert run("tw", r=1).passed


@pytest.mark.parametrize("kind,term", [(k, t) for k, ts in XI_TERMS.items() for t in ts])
def test_each_sign_term_is_load_bearing(kind, term):
    rep = run(kind, r=1 if kind == "tw" else 2, drop=[term])
    assert not rep.ok, "dropping %s from Xi_%s went unnoticed" % (term, kind)


def test_sb_unscaled_prefactor_breaks_counit():
    rep = run("sb", "bigraded", r=2, form="unscaled")
    assert not rep.ok


def test_pretr_cross_sum_start_irrelevant():
    assert run("pretr", form="from-zero").passed


def test_tw_primed_form_agrees():
    E, sample = instance("tw")
    a = ComparisonMap(E, sample, 1)
    b = ComparisonMap(E, sample, 1, form="primed")
    for y in sample:
        for w in a.source.basis(y, y):
            assert a.apply(y, y, w) == b.apply(y, y, w)


def test_nilpotency_of_fixture_twist(m2x2):
    assert nilpotency_degree(m2x2, "X", {"e21": -1}) == 2


def test_tw_default_bound():
    E, sample = instance("tw")
    assert ComparisonMap(E, sample, 2).max_twists == 3


def test_xi_preserves_degree_and_length_for_sb():
    E, sample = instance("sb")
    xi = ComparisonMap(E, sample, 2)
    for y in sample:
        for w in xi.source.basis(y, y):
            for v in xi.apply(y, y, w):
                assert len(v[0]) == len(w[0])
                assert xi.target.word_degree(v) == xi.source.word_degree(w)
