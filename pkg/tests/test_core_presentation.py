import pytest

from dgkit.core import check_axioms, compose, differential, is_closed, is_exact, is_isomorphism
from dgkit.presentation import parses, export, ParseError
from dgkit.cli import fixture_path
from conftest import FIXTURES

with open(fixture_path("m2x2")) as _fh:
    M2X2_TEXT = _fh.read()


def test_all_fixtures_bundled():
    assert FIXTURES == ["additive3", "bigraded", "kx2", "m2x2", "quiver2"]


def test_axioms_hold_on_fixture(any_fixture):
    rep = check_axioms(any_fixture)
    assert rep.passed, [c.name for c in rep.failures()]


def test_export_round_trip(any_fixture):
    again = parses(export(any_fixture))
    assert again.structurally_equal(any_fixture)
    assert export(again) == export(any_fixture)


def test_broken_differential_detected():
    # d(e12) should be e11 + e22; dropping e22 breaks Leibniz and d^2
    text = M2X2_TEXT.replace("e12 = e11 + e22", "e12 = e11")
    rep = check_axioms(parses(text))
    assert not rep.ok
    assert any("leibniz" in c.name.lower() or "d^2" in c.name.lower() or "d2" in c.name.lower()
               for c in rep.failures())


def test_broken_composition_detected():
    text = M2X2_TEXT.replace("e12 e21 = e11", "e12 e21 = e22")
    assert not check_axioms(parses(text)).ok


def test_unknown_label_is_parse_error():
    text = M2X2_TEXT.replace("e21 e12 = e22", "e21 e12 = e99")
    with pytest.raises(ParseError):
        parses(text)


def test_bad_degree_is_parse_error():
    with pytest.raises(ParseError) as exc:
        parses(M2X2_TEXT.replace("e21 [1]", "e21 [1,2]"))
    assert exc.value.line is not None


def test_composition_and_units(m2x2):
    e12 = m2x2.basis_morphism("X", "X", "e12")
    e21 = m2x2.basis_morphism("X", "X", "e21")
    assert compose(e12, e21) == m2x2.basis_morphism("X", "X", "e11")
    assert compose(m2x2.id("X"), e12) == e12


def test_closed_and_exact(m2x2):
    e21 = m2x2.basis_morphism("X", "X", "e21")
    assert is_closed(e21)
    assert is_exact(e21) is not None
    assert differential(m2x2.id("X")).is_zero()


def test_isomorphism_inverse(quiver2):
    assert is_isomorphism(quiver2.id("A")) == quiver2.id("A")
    assert is_isomorphism(quiver2.basis_morphism("A", "B", "a")) is None
