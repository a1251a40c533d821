from fractions import Fraction

import sympy
from hypothesis import given, settings, strategies as st

from dgkit.grading import classical_spec
from dgkit.bar import BarBimodule, counit_map
from dgkit.bimodules import IdentityBimodule, YonedaBra, YonedaKet, TensorOver, cone_bimodule
from dgkit.homotopy import (FiniteComplex, homology_report, is_contractible, hom_ranks,
                            is_acyclic, is_quasi_iso, quasi_iso_verdict, exactness_checks,
                            yoneda_product, semiorthogonality, morita_witness,
                            counterexample_report, component_complex)
from dgkit.report import PASS, FAIL, UNRELIABLE

G = classical_spec()


def two_term(rows):
    """C^0 -> C^1 with the given matrix; basis labels (deg, index)."""
    n1, n0 = len(rows), len(rows[0])
    basis = {("a", j): (0,) for j in range(n0)}
    basis.update({("b", i): (1,) for i in range(n1)})

    def d(label):
        if label[0] == "b":
            return {}
        j = label[1]
        return {("b", i): Fraction(rows[i][j]) for i in range(n1) if rows[i][j]}

    return FiniteComplex(G, basis, d)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 4).flatmap(lambda r: st.integers(1, 4).flatmap(
    lambda c: st.lists(st.lists(st.integers(-2, 2), min_size=c, max_size=c), min_size=r, max_size=r))))
def test_homology_of_two_term_complex(rows):
    cx = two_term(rows)
    rk = sympy.Matrix(rows).rank()
    h = cx.homology()
    assert h[(0,)][0] == len(rows[0]) - rk
    assert h[(1,)][0] == len(rows) - rk
    assert cx.check_d2() is None


def test_truncated_degrees_unreliable():
    cx = two_term([[1]])
    cx.complete_from = 1
    h = cx.homology()
    assert h[(0,)][1] is False and h[(1,)][1] is False
    cx.complete_from = 0
    assert cx.homology()[(1,)][1] is True


def test_empty_window_statuses():
    cx = two_term([[1]])
    assert homology_report(cx, (5, 6)).checks[0].status == PASS
    cx.complete_from = 10
    assert homology_report(cx, (5, 6)).checks[0].status == UNRELIABLE


def test_contractible_witness(m2x2):
    assert is_contractible(m2x2, "X").vec == {"e12": 1}
    assert is_contractible(m2x2, "X").degree == (-1,)


def test_not_contractible(kx2):
    assert is_contractible(kx2, "O") is None
    assert {d: r for d, r in hom_ranks(kx2, "O", "O").items() if r} == {(0,): 1, (-1,): 1}


def test_counterexample_report(m2x2):
    rep = counterexample_report(m2x2)
    assert rep.passed
    ranks = [c for c in rep.checks if c.name == "End(T) homology"][0].witness["ranks"]
    assert ranks == {"[-1]": 1, "[0]": 2, "[1]": 1}


def test_identity_not_acyclic(kx2):
    rep = is_acyclic(IdentityBimodule(kx2), [("O", "O")], (-2, 1))
    assert quasi_iso_verdict(rep) is False


def test_cone_of_identity_map_acyclic(quiver2):
    B = BarBimodule(quiver2, ["A", "B"], 1)
    from dgkit.bimodules import BimoduleMap
    ident = BimoduleMap(B, B, (0,), lambda x, y, m: {m: 1}, "id")
    pairs = [(x, y) for x in "AB" for y in "AB"]
    assert quasi_iso_verdict(is_quasi_iso(ident, pairs, (-3, 1))) is True


def test_zero_map_not_quasi_iso(kx2):
    from dgkit.bimodules import BimoduleMap
    B = BarBimodule(kx2, ["O"], 3)
    zero = BimoduleMap(B, IdentityBimodule(kx2), (0,), lambda x, y, m: {}, "0")
    assert quasi_iso_verdict(is_quasi_iso(zero, [("O", "O")], (-2, 0))) is False


def test_cone_bimodule_d_squares_to_zero(m2x2):
    B = BarBimodule(m2x2, ["X"], 1)
    cx = component_complex(cone_bimodule(counit_map(B)), "X", "X")
    assert cx.check_d2() is None


def test_identity_bimodule_projective_not_acyclic(kx2):
    rep = exactness_checks(IdentityBimodule(kx2), 1, (-3, 0))
    assert rep.status_of("projective") == PASS
    assert rep.status_of("acyclic") == FAIL
    assert rep.status_of("acyclic<=>bar-acyclic") == PASS


def test_yoneda_product_exact(quiver2):
    rep = exactness_checks(yoneda_product(quiver2, "A", "B"), 1, (-2, 1))
    assert rep.status_of("exact") == PASS


def test_semiorthogonality(quiver2):
    assert semiorthogonality(quiver2, 2, (-2, 0)).passed


def test_morita_small(quiver2):
    rep = morita_witness(quiver2, "sb", 1, (-1, 1))
    assert rep.passed
