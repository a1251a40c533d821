import pytest

import dgkit.idempotents as idem
from dgkit.idempotents import (RelativeCoalgebra, HypothesisError, CounitalObject, TensorWords,
                               build_AC, build_PC, check_twist, check_cocone_identity,
                               verify_H_contraction, bar_equals_PC, counit_order,
                               twist_sign, check_alternating, fold_star_sign)
from dgkit.bar import BarBimodule, counit_map
from dgkit.bimodules import IdentityBimodule, BimoduleMap, check_bimodule, DiscreteCategory
from dgkit.grading import GradingSpec, classical_spec
from dgkit.report import FAIL, PASS

CASES = [("kx2", ["O"]), ("quiver2", ["A", "B"]), ("quiver2", ["A"])]


@pytest.fixture
def make():
    from conftest import load
    return lambda name, middle: RelativeCoalgebra(load(name), middle)


def all_pairs(co):
    objs = list(co.D.objects())
    return [(x, y) for x in objs for y in objs]


@pytest.mark.parametrize("grading", [classical_spec(),
                                     GradingSpec(rank=2, pairing=((1, 1), (1, 0)), iota=(1, 0))])
def test_unpacked_twist_alternates(grading):
    assert check_alternating(grading, 5).passed
    assert [twist_sign(grading, m, 3) for m in range(3)] == [1, -1, 1]


def test_fold_sign_single_factor():
    g = classical_spec()
    assert fold_star_sign(g, [((1,), (0,), (0,))]) == 1


def test_tensor_words_bimodule(kx2):
    W = TensorWords(kx2, ["O"], 2)
    assert check_bimodule(W, ["O"], ["O"]).passed
    # three factors of End(O), each of dimension 2, joined at the single middle object
    assert len(W.basis("O", "O")) == 8


@pytest.mark.parametrize("name,middle", CASES)
def test_truncations_satisfy_mc(make, name, middle):
    co = make(name, middle)
    assert check_twist(build_AC(co, 3), all_pairs(co)).passed
    assert check_twist(build_PC(co, 3), all_pairs(co)).passed


@pytest.mark.parametrize("name,middle", CASES)
def test_cocone_identity(make, name, middle):
    co = make(name, middle)
    assert check_cocone_identity(co, 2, all_pairs(co)).passed


@pytest.mark.parametrize("name,middle", CASES)
def test_contraction(make, name, middle):
    co = make(name, middle)
    assert verify_H_contraction(co, 3, all_pairs(co)).passed


@pytest.mark.parametrize("name,middle", CASES)
def test_bar_is_PC(name, middle):
    from conftest import load
    assert bar_equals_PC(load(name), middle, 2).passed


def test_bar_is_PC_with_counit(kx2):
    rep = bar_equals_PC(kx2, ["O"], 0)
    assert rep.passed and any("counit" in c.name for c in rep.checks)


def test_unsigned_twist_breaks_mc(make, monkeypatch):
    co = make("kx2", ["O"])
    monkeypatch.setattr(idem, "twist_sign", lambda g, m, n: 1)
    rep = check_twist(build_AC(co, 3), [("O", "O")])
    assert rep.status_of("d^2=0") == FAIL


def test_wrong_homotopy_caught(make):
    # on a fixture with nonzero differential a spurious h is visible
    co = make("m2x2", ["X"])
    rep = verify_H_contraction(co, 2, [("X", "X")], homotopy=lambda w: co.power(1).insert_identity(w, 0))
    assert rep.status_of("counitality-homotopy") == FAIL


def test_wrong_coproduct_sign_caught(make):
    co = make("m2x2", ["X"])
    rep = verify_H_contraction(co, 2, [("X", "X")], coproduct=lambda w: co.power(1).insert_identity(w, 0))
    assert rep.status_of("d(H)+delta.H+H.delta=id") == FAIL


def test_non_discrete_middle_rejected(kx2):
    with pytest.raises(HypothesisError):
        RelativeCoalgebra(kx2, kx2)


def test_discrete_middle_accepted(quiver2):
    co = RelativeCoalgebra(quiver2, DiscreteCategory(quiver2.grading, quiver2.field, ["A", "B"]))
    assert co.middle == ["A", "B"]


def test_unknown_middle_rejected(quiver2):
    with pytest.raises(HypothesisError):
        RelativeCoalgebra(quiver2, ["Z"])


def test_counit_order_bar_below_identity(kx2):
    B = BarBimodule(kx2, ["O"], 2)
    bar = CounitalObject(B, counit_map(B))
    U = IdentityBimodule(kx2)
    one = CounitalObject(U, BimoduleMap(U, U, (0,), lambda x, y, m: {m: 1}, "id"))
    assert counit_order(bar, one, [("O", "O")]) is not None
    assert counit_order(one, bar, [("O", "O")]) is None
