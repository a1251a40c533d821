from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from dgkit.scalars import GF, QQ
from dgkit.linalg import Echelon, rank, solve, vadd
from dgkit.grading import GradingSpec, classical_spec


def test_prime_field_arithmetic():
    F = GF(7)
    assert F(3) * F(5) == F(1)
    assert F(3) + F(4) == F.zero
    assert F(3) * (F(1) / F(3)) == F.one


def test_composite_modulus_rejected():
    with pytest.raises(ValueError):
        GF(6)


def test_rationals_are_fractions():
    assert QQ(3) == Fraction(3)
    assert QQ.parse("1/2") == Fraction(1, 2)


small_matrix = st.integers(1, 4).flatmap(
    lambda rows: st.integers(1, 4).flatmap(
        lambda cols: st.lists(st.lists(st.integers(-3, 3), min_size=cols, max_size=cols),
                              min_size=rows, max_size=rows)))


@settings(max_examples=150, deadline=None)
@given(small_matrix)
def test_rank_matches_sympy(rows):
    vecs = [{j: Fraction(c) for j, c in enumerate(r) if c} for r in rows]
    assert rank(vecs) == sympy.Matrix(rows).rank()


@settings(max_examples=150, deadline=None)
@given(small_matrix, st.lists(st.integers(-3, 3), min_size=4, max_size=4))
def test_solve_reconstructs_target(rows, coeffs):
    cols = {i: {j: Fraction(c) for j, c in enumerate(r) if c} for i, r in enumerate(rows)}
    target = {}
    for i, c in zip(cols, coeffs):
        vadd(target, cols[i], Fraction(c))
    x = solve(cols, target)
    assert x is not None
    back = {}
    for t, c in x.items():
        vadd(back, cols[t], c)
    assert back == target


def test_solve_reports_inconsistent_system():
    assert solve({"a": {0: Fraction(1)}}, {1: Fraction(1)}) is None


def test_echelon_contains():
    e = Echelon()
    e.add({0: Fraction(1), 1: Fraction(1)})
    assert e.contains({0: Fraction(2), 1: Fraction(2)})
    assert not e.contains({0: Fraction(1)})


degree = st.tuples(st.integers(-5, 5), st.integers(-5, 5))


@given(degree, degree)
def test_pairing_symmetric(a, b):
    g = GradingSpec(rank=2, pairing=((1, 1), (1, 0)), iota=(1, 0))
    assert g.pair(a, b) == g.pair(b, a)


@given(degree, degree, degree)
def test_pairing_bilinear(a, b, c):
    g = GradingSpec(rank=2, pairing=((1, 1), (1, 0)), iota=(1, 0))
    assert g.pair(g.add(a, b), c) == (g.pair(a, c) + g.pair(b, c)) % 2


def test_classical_grading():
    g = classical_spec()
    assert g.ip(g.iota) == 1
    assert g.pair((3,), (5,)) == 1 and g.pair((2,), (5,)) == 0
