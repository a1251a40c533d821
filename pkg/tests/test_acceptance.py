"""Acceptance suite: one or more tests per criterion, summarised as one line
per criterion at the end of the run (see conftest.py)."""

import json
import subprocess
import sys
import time

import pytest

from conftest import FIXTURES, load
from dgkit.bar import (BarBimodule, ComparisonMap, check_comparison, check_counit, counit_map,
                       sign_expansion_check, XI_TERMS)
from dgkit.bimodules import check_bimodule
from dgkit.cli import sample_envelope
from dgkit.core import check_axioms
from dgkit.duality import double_op_defect, sign_oracle_sweep
from dgkit.envelopes import TwixCategory
from dgkit.grading import classical_spec
from dgkit.homotopy import (default_sample, hom_ranks, is_contractible, is_quasi_iso,
                            morita_witness)
from dgkit.idempotents import (RelativeCoalgebra, bar_equals_PC, build_AC, build_PC,
                               check_twist, verify_H_contraction)
from dgkit.presentation import export, parses
from dgkit.report import PASS, UNRELIABLE


def criterion(n, title):
    return pytest.mark.criterion(n, title)


# 1 -------------------------------------------------------------------------

@criterion(1, "dg axioms on all bundled fixtures, < 10 s")
def test_c1_axioms():
    start = time.perf_counter()
    for name in FIXTURES:
        rep = check_axioms(load(name))
        assert rep.passed, (name, [c.name for c in rep.failures()])
    assert time.perf_counter() - start < 10


# 2 -------------------------------------------------------------------------

@criterion(2, "Tw counterexample: witness e12, End(T) ranks (1,2,1) with zero differential")
def test_c2_counterexample():
    P = load("m2x2")
    h = is_contractible(P, "X")
    assert h is not None and h.vec == {"e12": 1}
    tw = TwixCategory(P, "tw")
    T = tw.add_object(P.twix["T"])
    assert all(not tw._d(T, T, k) for k in tw.basis(T, T))
    ranks = {d: r for d, r in hom_ranks(tw, T, T).items() if r}
    assert ranks == {(-1,): 1, (0,): 2, (1,): 1}


# 3 -------------------------------------------------------------------------

@criterion(3, "closed-form signs equal transposition oracles, < 60 s")
def test_c3_sign_sweep():
    start = time.perf_counter()
    rep = sign_oracle_sweep(classical_spec(), values=range(-2, 3))
    # rank one: 5^6 star tuples, all enumerated
    assert rep.checks[0].witness["cases"] == 5 ** 6
    rep.extend(sign_expansion_check(rmax=3, nmax=3))
    rep.extend(sign_oracle_sweep(load("bigraded").grading, samples=20000, seed=0), "rank 2 ")
    assert rep.passed, [c.name for c in rep.failures()]
    assert time.perf_counter() - start < 60


# 4 -------------------------------------------------------------------------

def _all_envelopes():
    for name in FIXTURES:
        P = load(name)
        for kind in ("sb", "add", "tw", "twix", "pretr"):
            E = sample_envelope(P, kind)
            yield name, kind, E


@criterion(4, "op isomorphism applied twice is the identity")
@pytest.mark.xfail(strict=True, reason="the literal op rule squares to a sign conjugation")
def test_c4_involution_literal_rule():
    for name, kind, E in _all_envelopes():
        assert double_op_defect(E, E.objects(), "literal") is None, (name, kind)


@criterion(4, "op isomorphism applied twice is the identity")
def test_c4_involution_involutive_convention():
    for name, kind, E in _all_envelopes():
        assert double_op_defect(E, E.objects(), "involutive") is None, (name, kind)


# 5 -------------------------------------------------------------------------

@criterion(5, "Bar_4(kx2): d^2 = 0, counit a chain map, Cone(counit) acyclic, < 60 s")
def test_c5_bar_integrity():
    start = time.perf_counter()
    P = load("kx2")
    B = BarBimodule(P, ["O"], 4)
    assert check_bimodule(B, ["O"], ["O"]).status_of("d^2=0") == PASS
    assert check_counit(B, [("O", "O")]).passed
    rep = is_quasi_iso(counit_map(B), [("O", "O")], P.window)
    reliable = [c for c in rep.checks if c.status != UNRELIABLE]
    assert reliable and all(c.status == PASS for c in reliable)
    assert time.perf_counter() - start < 60


# 6 -------------------------------------------------------------------------

# word length 3 where the sample is small enough, length 2 elsewhere
XI_CASES = [
    ("sb", "kx2", 3), ("sb", "bigraded", 3), ("sb", "quiver2", 3), ("sb", "additive3", 3), ("sb", "m2x2", 2),
    ("add", "quiver2", 3), ("add", "kx2", 3), ("add", "m2x2", 3), ("add", "additive3", 2), ("add", "bigraded", 2),
    ("pretr", "quiver2", 3), ("pretr", "kx2", 3), ("pretr", "bigraded", 3), ("pretr", "m2x2", 3), ("pretr", "additive3", 2),
]


def _xi(kind, name, r, **kw):
    P = load(name)
    E = TwixCategory(P, kind)
    sample = [o for o in default_sample(E, P) if E.admits(o) is None]
    for o in sample:
        E.add_object(o)
    xi = ComparisonMap(E, sample, r, **kw)
    return xi, sample


@criterion(6, "Xi certification for SB, A, pretr; Tw order by order; sign flips caught")
@pytest.mark.parametrize("kind,name,r", XI_CASES)
def test_c6_xi_certified(kind, name, r):
    xi, sample = _xi(kind, name, r)
    rep = check_comparison(xi, [(a, b) for a in sample for b in sample])
    assert rep.passed, [c.name for c in rep.failures()]


@criterion(6, "Xi certification for SB, A, pretr; Tw order by order; sign flips caught")
@pytest.mark.parametrize("kind,term", [(k, t) for k, ts in XI_TERMS.items() for t in ts])
def test_c6_sign_flips_caught(kind, term):
    if kind == "tw":
        P = load("m2x2")
        E = TwixCategory(P, "tw", [P.twix["T"]])
        xi, sample = ComparisonMap(E, [P.twix["T"]], 1, drop=[term]), [P.twix["T"]]
    else:
        xi, sample = _xi(kind, {"sb": "kx2", "add": "quiver2", "pretr": "quiver2"}[kind], 2, drop=[term])
    assert not check_comparison(xi, [(a, b) for a in sample for b in sample]).ok


def _tw_instance(r, bound):
    P = load("m2x2")
    E = TwixCategory(P, "tw", [P.twix["T"]])
    return ComparisonMap(E, [P.twix["T"]], r, max_twists=bound)


@criterion(6, "Xi certification for SB, A, pretr; Tw order by order; sign flips caught")
def test_c6_tw_order_by_order():
    xi = _tw_instance(2, None)
    T = xi.E.objects()[0]
    assert check_comparison(xi, [(T, T)]).passed


@criterion(6, "Xi certification for SB, A, pretr; Tw order by order; sign flips caught")
@pytest.mark.xfail(strict=True, reason="inserted twists are tensor factors, so the sum never stops")
def test_c6_tw_termination_bound():
    # the sum over twist counts must be exhausted at (nilpotency - 1)(r + 1)
    low = _tw_instance(1, None)
    high = _tw_instance(1, low.max_twists + 1)
    T = low.E.objects()[0]
    for w in low.source.basis(T, T):
        assert low.apply(T, T, w) == high.apply(T, T, w)


# 7 -------------------------------------------------------------------------

@criterion(7, "Cone(Xi_pretr) acyclic for a cone-generated instance at R = 2")
@pytest.mark.xfail(strict=True, reason="End(ConeA) has a degree-iota element; no degree is reliable")
def test_c7_pretr_quasi_iso():
    P = load("quiver2")
    rep = morita_witness(P, "pretr", 2, (-2, 2), presentation=P)
    assert rep.status_of("M(x)N=Bar") == PASS
    assert rep.status_of("Xi-quasi-iso") == PASS


# 8 -------------------------------------------------------------------------

@criterion(8, "A_C / P_C truncations MC, H contraction at N = 3, Bar = P_C at R = 2")
@pytest.mark.parametrize("name,middle", [("kx2", ["O"]), ("quiver2", ["A", "B"])])
def test_c8_idempotent_machinery(name, middle):
    P = load(name)
    co = RelativeCoalgebra(P, middle)
    objs = list(P.objects())
    pairs = [(x, y) for x in objs for y in objs]
    for N in (1, 2, 3):
        assert check_twist(build_AC(co, N), pairs).passed
        assert check_twist(build_PC(co, N), pairs).passed
    assert verify_H_contraction(co, 3, pairs).passed
    assert bar_equals_PC(P, middle, 2).passed


# 9 -------------------------------------------------------------------------

@criterion(9, "Morita witnesses for SB and Add on quiver2 at R = 2, < 120 s")
def test_c9_morita():
    start = time.perf_counter()
    P = load("quiver2")
    for kind in ("sb", "add"):
        rep = morita_witness(P, kind, 2, (-1, 1))
        assert rep.passed, (kind, [(c.name, c.status) for c in rep.checks])
    assert time.perf_counter() - start < 120


# 10 ------------------------------------------------------------------------

@criterion(10, "CLI exit codes, byte-identical reports, parse/export round trip")
def test_c10_cli(tmp_path):
    def run(*args):
        return subprocess.run([sys.executable, "-m", "dgkit.cli", *args], capture_output=True)

    assert run("check", "no-such.dgc").returncode == 2
    broken = tmp_path / "broken.dgc"
    broken.write_text(export(load("m2x2")).replace("e12 e21 = e11", "e12 e21 = e22"))
    assert run("check", str(broken), "--quiet").returncode == 1
    for name in FIXTURES:
        outs = []
        for k in range(2):
            out = tmp_path / ("%s-%d.json" % (name, k))
            proc = run("check", name, "--suite", "axioms", "--suite", "signs", "--suite", "counterexample",
                       "--seed", "11", "--quiet", "--out", str(out))
            assert proc.returncode == 0
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]
        assert json.loads(outs[0])[0]["seed"] == 11
        text = export(load(name))
        assert export(parses(text)) == text
        assert parses(text).structurally_equal(load(name))
