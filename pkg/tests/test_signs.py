from math import comb

from hypothesis import given, settings, strategies as st

from dgkit.grading import GradingSpec, classical_spec
from dgkit.duality import (star_sb_exponent, op_sb_exponent, op_composition_exponent,
                           sign_oracle_sweep, SignTrace, oracle_star_sb)
from dgkit.bar import expansion_sign_closed, sign_expansion_check

BIGRADED = GradingSpec(rank=2, pairing=((1, 1), (1, 0)), iota=(1, 0))


def inversion_sign(grading, legs, target):
    """Koszul sign of a rearrangement, summed over inverted pairs."""
    pos = {name: k for k, name in enumerate(target)}
    e = 0
    for a in range(len(legs)):
        for b in range(a + 1, len(legs)):
            if pos[legs[a][0]] > pos[legs[b][0]]:
                e += grading.pair(legs[a][1], legs[b][1])
    return e % 2


def star_oracle(g, k, l, i, ip, j, jp):
    legs = [("phi'", ip), ("f", k), ("phi-", g.neg(i)), ("psi'", jp), ("g", l), ("psi-", g.neg(j))]
    e = inversion_sign(g, legs, ["phi'", "psi'", "f", "g", "phi-", "psi-"])
    return (e + g.pair(i, j)) % 2


def sigma(ks):
    r = len(ks) - 2
    return sum((r + 1 - u) * ks[u] for u in range(r + 1))


def expansion_oracle(ks, ns):
    ls = []
    for u, n in enumerate(ns):
        ls += [ks[u]] + [1] * n
    ls.append(ks[-1])
    return (sigma(ls) - sigma(ks)) % 2


deg2 = st.tuples(st.integers(-2, 2), st.integers(-2, 2))


@settings(max_examples=300)
@given(st.tuples(*[deg2] * 6))
def test_star_sb_closed_form_bigraded(t):
    assert star_sb_exponent(BIGRADED, *t) == star_oracle(BIGRADED, *t)


@settings(max_examples=300)
@given(st.tuples(*[deg2] * 3))
def test_op_sb_closed_form(t):
    i, j, k = t
    g = BIGRADED
    # reverse (phi_i, f, phi_j^-1), then identify (phi_i)^op with an inverse shift
    legs = [("phi", i), ("f", k), ("phi-", g.neg(j))]
    e = (inversion_sign(g, legs, ["phi-", "f", "phi"]) + g.pair(i, i)) % 2
    assert op_sb_exponent(g, i, j, k) == e


@given(deg2, deg2)
def test_op_composition_closed_form(kf, kg):
    assert op_composition_exponent(BIGRADED, kf, kg) == BIGRADED.pair(kf, kg)


def test_sign_trace_logs_transpositions():
    g = classical_spec()
    t = SignTrace(g, [("a", (1,)), ("b", (1,)), ("c", (2,))])
    assert t.arrange(["c", "b", "a"]) == 1
    assert len([x for x in t.log if x[0] != "rule"]) == 3


def test_star_sb_value():
    # [DERIVED] k=1,l=1 with trivial shifts: moving g past nothing odd except f
    g = classical_spec()
    assert oracle_star_sb(g, (1,), (1,), (0,), (0,), (0,), (0,)) == 0
    assert star_sb_exponent(g, (1,), (1,), (0,), (0,), (0,), (1,)) == star_oracle(
        g, (1,), (1,), (0,), (0,), (0,), (1,))


@settings(max_examples=300)
@given(st.integers(0, 3).flatmap(lambda r: st.tuples(
    st.lists(st.integers(0, 1), min_size=r + 2, max_size=r + 2),
    st.lists(st.integers(0, 3), min_size=r + 1, max_size=r + 1))))
def test_expansion_sign(case):
    ks, ns = case
    assert expansion_sign_closed(ks, ns) == expansion_oracle(ks, ns)


def test_expansion_sign_frozen():
    # C(3,2) + 1 + 2 with k = (1,0,1), n = (1,1)
    assert comb(3, 2) + 1 + 2 == 6
    assert expansion_sign_closed((1, 0, 1), (1, 1)) == 0
    assert expansion_sign_closed((0, 0), (1,)) == 1


def test_sweeps_clean():
    assert sign_oracle_sweep(classical_spec()).passed
    assert sign_oracle_sweep(BIGRADED, samples=3000, seed=3).passed
    assert sign_expansion_check(3, 3).passed


def test_sweep_catches_wrong_closed_form(monkeypatch):
    import dgkit.duality as duality
    monkeypatch.setattr(duality, "op_sb_exponent",
                        lambda g, i, j, k: g.pair(duality.deg_add(i, j), k))
    rep = duality.sign_oracle_sweep(classical_spec())
    assert rep.status_of("op-sb") == "fail"
