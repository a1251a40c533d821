import pytest

from dgkit.bar import (BarBimodule, counit_map, check_counit, check_primed, relative_bar,
                       relative_bar_iso, export_bar, primed_exponent)
from dgkit.bimodules import check_bimodule
from dgkit.homotopy import is_quasi_iso, quasi_iso_verdict, cone_complex
from dgkit.report import PASS, UNRELIABLE


def pairs_of(P):
    objs = list(P.objects())
    return [(x, y) for x in objs for y in objs]


def test_word_counts_kx2(kx2):
    # words of r interior objects in End(O) of k[x]/x^2: 2^(r+2) of them
    B = BarBimodule(kx2, ["O"], 2)
    assert len(B.basis("O", "O")) == 4 + 8 + 16


def test_word_degree(kx2):
    B = BarBimodule(kx2, ["O"], 1)
    w = (("O", "O", "O", "O"), ("x", "x", "one"))
    assert B.word_degree(w) == (-3,)


def test_bar_is_bimodule(any_fixture):
    objs = list(any_fixture.objects())
    B = BarBimodule(any_fixture, objs, 2)
    assert check_bimodule(B, objs, objs).passed


def test_counit_closed_and_primed(any_fixture):
    B = BarBimodule(any_fixture, list(any_fixture.objects()), 2)
    assert check_counit(B, pairs_of(any_fixture)).passed
    assert check_primed(B, pairs_of(any_fixture)).passed


def test_primed_exponent_values():
    assert primed_exponent([1, 0]) == 1
    assert primed_exponent([1, 1, 0]) == 1
    assert primed_exponent([0, 1, 1, 1]) == 1


def test_counit_cone_acyclic_kx2(kx2):
    B = BarBimodule(kx2, ["O"], 3)
    rep = is_quasi_iso(counit_map(B), [("O", "O")], (-6, 0))
    assert quasi_iso_verdict(rep) is True


def test_low_degrees_flagged_unreliable(kx2):
    B = BarBimodule(kx2, ["O"], 1)
    rep = is_quasi_iso(counit_map(B), [("O", "O")], (-6, 0))
    statuses = {c.status for c in rep.checks}
    assert UNRELIABLE in statuses and PASS in statuses


class NoLeftmostInternal(BarBimodule):
    """Bar with the differential of the leftmost entry removed."""

    def _d(self, y, y2, word):
        out = super()._d(y, y2, word)
        objs, keys = word
        dk = self.D._d(objs[1], objs[0], keys[0])
        if dk:
            vecs = [{k: 1} for k in keys]
            vecs[0] = dk
            for w, c in self.expand(objs, vecs).items():
                out[w] = out.get(w, 0) - (-1 if (len(objs) - 3) % 2 else 1) * c
                if not out[w]:
                    del out[w]
        return out


class UnsignedLeftAction(BarBimodule):
    def _act(self, x2, x, y, y2, f, word, g):
        out = super()._act(x2, x, y, y2, f, word, g)
        if f is not None and (len(word[0]) - 3) % 2 and self.grading.ip(self.D.key_degree(x, x2, f)):
            out = {w: -c for w, c in out.items()}
        return out


def test_dropping_leftmost_internal_term_breaks_counit(m2x2):
    B = NoLeftmostInternal(m2x2, ["X"], 1)
    assert not check_counit(B, [("X", "X")]).ok


def test_unsigned_left_action_breaks_leibniz(kx2):
    B = UnsignedLeftAction(kx2, ["O"], 2)
    rep = check_bimodule(B, ["O"], ["O"])
    assert rep.status_of("leibniz") == "fail"


def test_relative_bar_iso(quiver2):
    assert relative_bar_iso(quiver2, ["A"], ["A", "B"], 2).passed


def test_relative_bar_rejects_unknown(quiver2):
    with pytest.raises(ValueError):
        relative_bar(quiver2, ["Z"], 1)


def test_export_bar_deterministic(kx2):
    B = BarBimodule(kx2, ["O"], 2)
    assert export_bar(B, "O", "O") == export_bar(BarBimodule(kx2, ["O"], 2), "O", "O")
    assert export_bar(B, "O", "O", (-1, 0)).count("\n") < export_bar(B, "O", "O").count("\n")
