import pytest
from hypothesis import given, settings, strategies as st

from dgkit.core import check_axioms, check_functor
from dgkit.envelopes import (TwixCategory, TwixObject, singleton, shift_object, shift_functor,
                             direct_sum, cone, eta, check_mc, check_structure_maps,
                             MaurerCartanError, ContractError, is_one_sided)
from dgkit.duality import envelope_op_iso, double_op_defect, star_functor
from conftest import load
from dgkit.homotopy import gaussian_eliminate, check_elimination, eliminate_all, hom_ranks


def m2x2_envelope(load_m2x2, kind="twix"):
    g = load_m2x2.grading
    T = load_m2x2.twix["T"]
    E = TwixCategory(load_m2x2, kind)
    for o in (singleton(g, "X"), singleton(g, "X", (1,)), T, shift_object(g, (1,), T)):
        if E.admits(o) is None:
            E.add_object(o)
    return E


def test_fixture_twisted_objects_satisfy_mc(any_fixture):
    for obj in any_fixture.twix.values():
        assert not check_mc(any_fixture, obj)


def test_non_mc_twist_rejected(m2x2):
    bad = TwixObject.build([((0,), "X")], {(0, 0): {"e21": 1, "e12": 1}})
    E = TwixCategory(m2x2, "tw")
    with pytest.raises((MaurerCartanError, ContractError)):
        E.add_object(bad)


def test_kind_restrictions(m2x2):
    g = m2x2.grading
    assert TwixCategory(m2x2, "sb").admits(m2x2.twix["T"]) is not None
    assert TwixCategory(m2x2, "add").admits(singleton(g, "X", (1,))) is not None
    assert TwixCategory(m2x2, "tw").admits(m2x2.twix["T"]) is None


def test_cone_matches_fixture(quiver2):
    made = cone(quiver2, quiver2.basis_morphism("A", "B", "a"))
    assert made.summands == quiver2.twix["ConeA"].summands
    assert made.twist_dict() == quiver2.twix["ConeA"].twist_dict()
    assert is_one_sided(made) is not None


@pytest.mark.parametrize("kind", ["sb", "add", "tw", "twix", "pretr"])
def test_envelope_is_dg_category(m2x2, kind):
    E = m2x2_envelope(m2x2, kind)
    assert check_axioms(E, E.objects()).passed


def test_structure_maps(quiver2):
    E = TwixCategory(quiver2, "pretr", [quiver2.twix["ConeA"]])
    assert check_structure_maps(E, quiver2.twix["ConeA"]).passed


def test_eta_fully_faithful(quiver2):
    E = TwixCategory(quiver2, "twix")
    rep = check_functor(eta(quiver2, E), list(quiver2.objects()), fully_faithful=True)
    assert rep.passed


def test_shift_functor(m2x2):
    E = m2x2_envelope(m2x2)
    assert check_functor(shift_functor(E, (1,)), E.objects()).passed


def test_literal_op_rule_not_a_functor(m2x2):
    # frozen witness: e12 between X and tw(q^1 X) picks up -2 e11
    E = m2x2_envelope(m2x2)
    fails = check_functor(envelope_op_iso(E, "literal"), E.objects()).failures()
    assert fails and fails[0].witness["defect"] == {(0, 0, "e11"): -2}


@pytest.mark.parametrize("convention", ["derived", "involutive"])
def test_op_iso_is_functor(m2x2, convention):
    E = m2x2_envelope(m2x2)
    assert check_functor(envelope_op_iso(E, convention), E.objects()).passed


def test_derived_op_squares_to_sign_conjugation(m2x2):
    # twice the derived op iso multiplies hom(q^1 X, X) by (-1)^<1,1>
    E = m2x2_envelope(m2x2)
    bad = double_op_defect(E, E.objects(), "derived")
    assert bad["image"] == {"(0, 0, 'e11')": "-1"}


def test_involutive_op_squares_to_identity(any_fixture):
    for kind in ("sb", "add", "twix"):
        E = TwixCategory(any_fixture, kind)
        g = any_fixture.grading
        for x in any_fixture.objects():
            for o in (singleton(g, x), singleton(g, x, g.iota)):
                if E.admits(o) is None:
                    E.add_object(o)
        assert double_op_defect(E, E.objects(), "involutive") is None


def test_star_functor_fully_faithful(kx2, quiver2):
    g = kx2.grading
    EL = TwixCategory(kx2, "sb", [singleton(g, "O"), singleton(g, "O", (1,))])
    ER = TwixCategory(quiver2, "pretr", [quiver2.twix["ConeA"]])
    F, source, _ = star_functor(EL, ER)
    assert check_functor(F, list(source.objects()), fully_faithful=True).passed


def test_elimination_of_contractible_cone(m2x2):
    E = TwixCategory(m2x2, "twix")
    c = cone(m2x2, m2x2.id("X"))
    E.add_object(c)
    elim = gaussian_eliminate(E, c, (1, 0))
    assert len(elim.result) == 0
    assert check_elimination(E, c, elim).passed


def nonzero_ranks(E, x, y):
    return {d: r for d, r in hom_ranks(E, x, y).items() if r}


@settings(max_examples=25, deadline=None)
@given(st.lists(st.tuples(st.integers(-1, 1), st.sampled_from([1, -2, 3])), min_size=1, max_size=2),
       st.booleans())
def test_elimination_preserves_homology(parts, with_cone):
    # sums of Cone(c id_B) and ConeA: eliminating every invertible entry is a
    # homotopy equivalence, so Hom into any test object keeps its homology
    quiver2 = load("quiver2")
    g = quiver2.grading
    E = TwixCategory(quiver2, "twix")
    pieces = [shift_object(g, (s,), cone(quiver2, quiver2.morphism("B", "B", {"idB": c}, (0,))))
              for s, c in parts]
    if with_cone:
        pieces.append(quiver2.twix["ConeA"])
    obj = E.add_object(direct_sum(*pieces))
    small, steps = eliminate_all(E, obj)
    E.add_object(small)
    for step, before in zip(steps, [obj] + [s.result for s in steps]):
        assert check_elimination(E, before, step).passed
    for probe in (singleton(g, "A"), singleton(g, "B")):
        E.add_object(probe)
        assert nonzero_ranks(E, obj, probe) == nonzero_ranks(E, small, probe)
        assert nonzero_ranks(E, probe, obj) == nonzero_ranks(E, probe, small)
