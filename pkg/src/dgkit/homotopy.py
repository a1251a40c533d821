"""Exact homology with truncation-aware reliability, contractibility,
quasi-isomorphisms, Gaussian elimination and exactness checks.

Heights are the integer linear functional ``grading.height``; a degree window
``(lo, hi)`` bounds heights.  Truncated objects report, per component, a
height from which they agree with the untruncated object; homology at a
degree is *reliable* when the complex is complete there and one iota-step
below.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .bimodules import Bimodule, BimoduleMap, INF, TensorOver, cone_bimodule
from .core import is_exact, is_isomorphism, Morphism
from .envelopes import TwixObject, check_mc, is_one_sided, ContractError
from .grading import deg_add, deg_sub, deg_neg
from .linalg import Echelon, vadd, vscale, solve
from .report import VerificationReport, PASS, FAIL, INAPPLICABLE, UNRELIABLE


# ---------------------------------------------------------------------------
# finite complexes


@dataclass
class FiniteComplex:
    """Basis elements with degrees and a differential of degree iota.

    ``complete_from``: heights at or above this are complete; below it the
    complex is a truncation and homology is flagged unreliable.
    """

    grading: object
    basis: dict                 # label -> degree
    d: object                   # label -> vector
    complete_from: float = -INF
    name: str = "complex"

    def degrees(self):
        return sorted(set(self.basis.values()), key=lambda a: (self.grading.height(a), a))

    def of_degree(self, deg):
        return [b for b, dd in self.basis.items() if dd == deg]

    def rank_d(self, deg):
        e = Echelon()
        for b in self.of_degree(deg):
            e.add(self.d(b))
        return e.rank

    def check_d2(self):
        for b in self.basis:
            out = {}
            for t, c in self.d(b).items():
                if t in self.basis:
                    vadd(out, self.d(t), c)
            if out:
                return b
        return None

    def homology(self, window=None):
        """{degree: (rank, reliable)} for every degree whose height lies in
        ``window`` (default: all degrees present)."""
        g = self.grading
        hi = g.height(g.iota)
        degs = set(self.basis.values())
        if window is not None:
            lo, top = window
            degs = {a for a in degs if lo <= g.height(a) <= top}
        out = {}
        for deg in sorted(degs, key=lambda a: (g.height(a), a)):
            dim = len(self.of_degree(deg))
            below = deg_sub(deg, g.iota)
            rk = dim - self.rank_d(deg) - self.rank_d(below)
            h = g.height(deg)
            out[deg] = (rk, h >= self.complete_from and h - hi >= self.complete_from)
        return out


def _empty_check(cx, window, rep, prefix):
    """A complex with nothing in the window has vanishing homology there,
    provided the window lies in its complete range."""
    g = cx.grading
    lo = window[0] if window is not None else -INF
    if not cx.homology(window):
        ok = lo - g.height(g.iota) >= cx.complete_from
        rep.add(prefix + "empty", PASS if ok else UNRELIABLE)


def homology_report(cx, window, name="homology", expect_zero=True):
    """One check per degree: pass when the rank is zero (or not required to
    be), unreliable when the degree touches the truncation boundary."""
    rep = VerificationReport(name)
    _empty_check(cx, window, rep, "")
    for deg, (rk, ok) in cx.homology(window).items():
        if not ok:
            rep.add("H%s" % (list(deg),), UNRELIABLE, {"rank": rk})
        else:
            rep.add("H%s" % (list(deg),), PASS if (rk == 0 or not expect_zero) else FAIL, {"rank": rk})
    return rep


def _in_window(g, deg, window, margin):
    if window is None:
        return True
    lo, hi = window
    h = g.height(deg)
    return lo - margin <= h <= hi + margin


def component_complex(M, x, y, window=None):
    """<x|M|y> as a FiniteComplex, keeping elements within one iota-step of
    the window."""
    g = M.grading
    hi = g.height(g.iota)
    basis = {m: M.degree(x, y, m) for m in M.basis(x, y) if _in_window(g, M.degree(x, y, m), window, hi)}
    start, _ = M.height_bounds(x, y)
    return FiniteComplex(g, basis, lambda m: M._d(x, y, m), start, "<%s|%s|%s>" % (x, M.name, y))


def cone_complex(phi, x, y, window=None):
    """<x|Cone(phi)|y>: the source sits one iota-step down, d(m) = -d m + phi(m)."""
    return component_complex(cone_bimodule(phi), x, y, window)


def is_acyclic(M, pairs, window):
    """Homology of every listed component vanishes at every reliable degree."""
    rep = VerificationReport("acyclic:" + M.name)
    for x, y in pairs:
        sub = homology_report(component_complex(M, x, y, window), window)
        for c in sub.checks:
            rep.add("%s|%s %s" % (x, y, c.name), c.status, c.witness)
    return rep


def is_quasi_iso(phi, pairs, window, report=None):
    """Cone(phi) acyclic at every reliable degree of every listed component."""
    rep = report or VerificationReport("quasi-iso:" + phi.name)
    for x, y in pairs:
        cx = cone_complex(phi, x, y, window)
        bad = cx.check_d2()
        if bad is not None:
            rep.add("%r|%r cone d^2" % (x, y), FAIL, {"element": repr(bad)})
            continue
        _empty_check(cx, window, rep, "%s|%s " % (_short(x), _short(y)))
        for deg, (rk, ok) in cx.homology(window).items():
            name = "%s|%s H%s" % (_short(x), _short(y), list(deg))
            rep.add(name, (PASS if rk == 0 else FAIL) if ok else UNRELIABLE, {"rank": rk})
    return rep


def quasi_iso_verdict(rep):
    """True / False from the reliable checks; None when nothing was reliable."""
    reliable = [c for c in rep.checks if c.status != UNRELIABLE]
    if not reliable:
        return None
    return all(c.status == PASS for c in reliable)


def _short(x):
    return getattr(x, "label", None) or (x if isinstance(x, str) else repr(x))


# ---------------------------------------------------------------------------
# hom complexes of a dg category


def hom_complex(C, x, y):
    keys, degs = C.hom(x, y)
    return FiniteComplex(C.grading, dict(degs), lambda k: C._d(x, y, k), name="hom(%s,%s)" % (_short(x), _short(y)))


def is_contractible(C, x):
    """A morphism h of degree -iota with d(h) = id_x, or None."""
    return is_exact(C.id(x))


def hom_ranks(C, x, y):
    """Homology ranks of hom(x, y), keyed by degree."""
    return {deg: rk for deg, (rk, _) in hom_complex(C, x, y).homology().items()}


# ---------------------------------------------------------------------------
# Gaussian elimination


@dataclass
class Elimination:
    result: TwixObject
    forward: Morphism     # obj -> result
    backward: Morphism    # result -> obj
    homotopy: Morphism    # obj -> obj, degree -iota
    kept: list = field(default_factory=list)


def gaussian_eliminate(E, obj, entry):
    """Remove summands a, b of ``obj`` using an invertible twist component
    alpha_{a,b} : X_b -> X_a.  The new twist on the kept summands is
    alpha_{c,e} - alpha_{c,b} beta alpha_{a,e} with beta the inverse."""
    C, g = E.base, E.grading
    a, b = entry
    if a == b:
        raise ContractError("elimination needs two distinct summands")
    xa, xb = obj.base(a), obj.base(b)
    alpha = obj.twist_entry(a, b)
    if not alpha:
        raise ContractError("twist entry (%d, %d) is zero" % (a, b))
    deg = deg_add(deg_sub(g.iota, obj.shift(a)), obj.shift(b))
    inv = is_isomorphism(Morphism.make(C, xb, xa, alpha, deg))
    if inv is None:
        raise ContractError("twist entry (%d, %d) is not invertible" % (a, b))
    beta = inv.vec
    kept = [c for c in range(len(obj)) if c not in (a, b)]
    pos = {c: n for n, c in enumerate(kept)}
    tw = {}
    for c in kept:
        col_b = obj.twist_entry(c, b)
        for e in kept:
            v = dict(obj.twist_entry(c, e))
            row_a = obj.twist_entry(a, e)
            if col_b and row_a:
                corr = C.mul_vec(obj.base(e), xb, obj.base(c), col_b,
                                 C.mul_vec(obj.base(e), xa, xb, beta, row_a))
                vadd(v, corr, -1)
            if v:
                tw[(pos[c], pos[e])] = v
    result = TwixObject.build([obj.summands[c] for c in kept], tw)
    if check_mc(C, result):
        raise ContractError("eliminated twist fails the Maurer-Cartan equation")
    # maps: forward kills b, corrects from a; backward corrects into b
    fwd, bwd = {}, {}
    for c in kept:
        idc = C.identity_vec(obj.base(c))
        fwd[(pos[c], c)] = idc
        bwd[(c, pos[c])] = idc
        col_b = obj.twist_entry(c, b)
        if col_b:
            fwd[(pos[c], a)] = vscale(C.mul_vec(xa, xb, obj.base(c), col_b, beta), -1)
        row_a = obj.twist_entry(a, c)
        if row_a:
            bwd[(b, pos[c])] = vscale(C.mul_vec(obj.base(c), xa, xb, beta, row_a), -1)
    F = E.from_components(obj, result, fwd, g.zero)
    G = E.from_components(result, obj, bwd, g.zero)
    H = E.from_components(obj, obj, {(b, a): beta}, deg_neg(g.iota))
    return Elimination(result, F, G, H, kept)


def check_elimination(E, obj, elim, report=None):
    """F, G closed of degree 0; F G = id; id - G F = d(H) up to sign."""
    rep = report or VerificationReport("gaussian-elimination")
    F, G, H = elim.forward, elim.backward, elim.homotopy
    from .core import differential
    rep.add("result-mc", PASS if not check_mc(E.base, elim.result) else FAIL)
    rep.add("forward-closed", PASS if differential(F).is_zero() else FAIL)
    rep.add("backward-closed", PASS if differential(G).is_zero() else FAIL)
    rep.add("forward-backward", PASS if (F @ G) == E.id(elim.result) else FAIL)
    diff = E.id(obj) - (G @ F)
    dH = differential(H)
    ok = diff == dH or diff == -dH
    rep.add("backward-forward~id", PASS if ok else FAIL,
            None if ok else {"defect": repr((diff - dH).vec)})
    return rep


def eliminate_all(E, obj):
    """Repeatedly eliminate the first invertible twist entry in index order."""
    steps = []
    while True:
        for (a, b), _ in obj.twist:
            try:
                elim = gaussian_eliminate(E, obj, (a, b))
            except ContractError:
                continue
            steps.append(elim)
            obj = elim.result
            break
        else:
            return obj, steps


# ---------------------------------------------------------------------------
# exactness of bimodules at truncation scale


def _verdict_status(rep):
    v = quasi_iso_verdict(rep)
    return UNRELIABLE if v is None else (PASS if v else FAIL)


def _first_fail(rep):
    for c in rep.checks:
        if c.status == FAIL:
            return {"check": c.name, "witness": c.witness}
    return None


def _counit_tensor_maps(BB, B, barL, barR):
    """The maps out of Bar (x) B (x) Bar that apply the counit on the left
    bar factor, the right one, or both."""
    g = B.grading
    left_only = TensorOver(B, barR, BB.middle, "B(x)Bar")
    right_only = TensorOver(barL, B, BB.M.middle, "Bar(x)B")

    def both(x, z, key):
        y2, (y1, w1, b), w2 = key
        return B.act_vec(x, y1, y2, z, barL.counit(w1), {b: 1}, barR.counit(w2))

    def drop_left(x, z, key):
        y2, (y1, w1, b), w2 = key
        bb = B.act_vec(x, y1, y2, y2, barL.counit(w1), {b: 1}, None)
        return left_only.normal(x, z, {(y2, k, w2): c for k, c in bb.items()})

    def drop_right(x, z, key):
        y2, (y1, w1, b), w2 = key
        bb = B.act_vec(y1, y1, y2, z, None, {b: 1}, barR.counit(w2))
        return right_only.normal(x, z, {(y1, w1, k): c for k, c in bb.items()})

    return (BimoduleMap(BB, B, g.zero, both, "eps(x)id(x)eps"),
            BimoduleMap(BB, left_only, g.zero, drop_left, "eps(x)id(x)id"),
            BimoduleMap(BB, right_only, g.zero, drop_right, "id(x)id(x)eps"))


def exactness_checks(B, R, window, pairs=None):
    """Acyclic, projective, left exact, right exact and exact, each decided by
    truncated-bar homology in ``window``.  A check passes when the property
    holds, fails when it does not, and is boundary-unreliable when no degree
    in the window can decide it."""
    from .bar import BarBimodule
    C, D = B.left, B.right
    xs, ys = list(C.objects()), list(D.objects())
    pairs = pairs or [(x, y) for x in xs for y in ys]
    barL = BarBimodule(C, xs, R, "Bar(C)")
    barR = barL if D is C else BarBimodule(D, ys, R, "Bar(D)")
    BB = TensorOver(TensorOver(barL, B, xs), barR, ys, "Bar(x)B(x)Bar")
    rep = VerificationReport("exactness:" + B.name)
    rep.params = {"R": R, "window": list(window)}

    plain = is_acyclic(B, pairs, window)
    barred = is_acyclic(BB, pairs, window)
    a, b = _verdict_status(plain), _verdict_status(barred)
    rep.add("acyclic", a, _first_fail(plain))
    rep.add("acyclic<=>bar-acyclic", PASS if UNRELIABLE in (a, b) or a == b else FAIL, {"direct": a, "via-bar": b})

    both, left, right = _counit_tensor_maps(BB, B, barL, barR)
    statuses = {}
    for name, phi in (("projective", both), ("left-exact", left), ("right-exact", right)):
        sub = is_quasi_iso(phi, pairs, window)
        statuses[name] = _verdict_status(sub)
        rep.add(name, statuses[name], _first_fail(sub))
    le, ri = statuses["left-exact"], statuses["right-exact"]
    exact = UNRELIABLE if UNRELIABLE in (le, ri) else (PASS if le == ri == PASS else FAIL)
    rep.add("exact", exact)
    return rep


def yoneda_product(C, x, y):
    """|x><y| as a (C, C)-bimodule: <a| |x><y| |b> = hom(x, a) (x) hom(b, y)."""
    from .bimodules import YonedaKet, YonedaBra
    return TensorOver(YonedaKet(C, x), YonedaBra(C, y), ["*"], "|%s><%s|" % (x, y))


# ---------------------------------------------------------------------------
# semiorthogonality of the bar idempotent and its complement


def semiorthogonality(C, R, window):
    """With P = Bar_R(C) and Q = Cone(counit): representables <x| are P-local
    (<x| (x) Bar -> <x| is a quasi-isomorphism), and Hom(<x|, <y| (x) Q),
    which is <y|Q|x> by Yoneda, has vanishing homology."""
    from .bar import BarBimodule, counit_map
    from .bimodules import YonedaBra
    objs = list(C.objects())
    bar = BarBimodule(C, objs, R, "Bar(C)")
    rep = VerificationReport("semiorthogonality")
    rep.params = {"R": R, "window": list(window)}
    Q = cone_bimodule(counit_map(bar))
    for y in objs:
        for x in objs:
            sub = homology_report(component_complex(Q, y, x, window), window)
            rep.add("Hom(<%s|,<%s|Q)" % (_short(x), _short(y)), _verdict_status(sub), _first_fail(sub))
    for x in objs:
        bra = YonedaBra(C, x)
        tens = TensorOver(bra, bar, objs, "<x|(x)Bar")

        def act(s, z, key, bra=bra):
            y, m, w = key
            return bra.act_vec(s, s, y, z, None, {m: 1}, bar.counit(w))

        phi = BimoduleMap(tens, bra, C.grading.zero, act, "id(x)eps")
        sub = is_quasi_iso(phi, [("*", z) for z in objs], window)
        rep.add("<%s|(x)P=<%s|" % (_short(x), _short(x)), _verdict_status(sub), _first_fail(sub))
    return rep


# ---------------------------------------------------------------------------
# Morita witnesses


def default_sample(E, P=None):
    """Objects on which an envelope is instantiated for Morita checks."""
    from .envelopes import singleton, direct_sum
    g = E.grading
    base = list(E.base.objects())
    if E.kind == "sb":
        return [singleton(g, base[0]), singleton(g, base[-1], g.iota)]
    if E.kind == "add":
        sample = [direct_sum(*[singleton(g, x) for x in base])] if len(base) > 1 else []
        return sample + [singleton(g, base[0])]
    if E.kind == "pretr":
        twisted = [o for o in (P.twix.values() if P is not None else []) if is_one_sided(o) is not None]
        return twisted + [singleton(g, base[-1], g.iota)]
    raise ValueError("no default sample for %s" % E.kind)


def morita_witness(C, kind, R, window, sample=None, presentation=None):
    """M = Bar_R(C) (x)_C E and N = E restricted to C.  Checks M (x)_E N = Bar_R(C)
    exactly (C realised as its image under eta), the identification
    E (x)_C Bar(C) (x)_C E = Bar(E, eta Obj C), and that Xi is a
    quasi-isomorphism in the reliable part of ``window``."""
    from .bar import BarBimodule, ComparisonMap, FullSubcategory, relative_bar_iso
    from .bimodules import IdentityBimodule, Restriction, check_bimodule_map, map_rank
    from .envelopes import TwixCategory, singleton
    E = TwixCategory(C, kind)
    g = C.grading
    sample = list(sample) if sample is not None else default_sample(E, presentation)
    for o in sample:
        E.add_object(o)
    etas = [singleton(g, x) for x in C.objects()]
    for o in etas:
        if E.admits(o) is None:
            E.add_object(o)
    rep = VerificationReport("morita:" + kind)
    rep.params = {"R": R, "window": list(window), "sample": [repr(o) for o in sample]}

    # first isomorphism, exact at truncation
    Ceta = FullSubcategory(E, etas, "eta(C)")
    bar = BarBimodule(Ceta, etas, R, "Bar(C)")
    EC = Restriction(IdentityBimodule(E), left=Ceta, name="E|")
    CE = Restriction(IdentityBimodule(E), right=Ceta, name="|E")
    M = TensorOver(bar, EC, etas, "M")
    MN = TensorOver(M, CE, E.objects(), "M(x)N")

    def collapse(x, y2, key):
        t, (y, w, e), n = key
        en = E.mul_vec(y2, t, y, {e: 1}, {n: 1})
        return bar.act_vec(x, x, y, y2, None, {w: 1}, en)

    iso = BimoduleMap(MN, bar, g.zero, collapse, "M(x)N->Bar")
    sub = check_bimodule_map(iso, etas, etas)
    bad = None
    for x in etas:
        for y in etas:
            n_src, n_tgt, rk = len(MN.basis(x, y)), len(bar.basis(x, y)), map_rank(iso, x, y)
            if not n_src == n_tgt == rk:
                bad = bad or {"component": [repr(x), repr(y)], "source": n_src, "target": n_tgt, "rank": rk}
    ok = sub.ok and bad is None
    rep.add("M(x)N=Bar", PASS if ok else FAIL, None if ok else (bad or [c.name for c in sub.failures()]))

    # second: E (x) Bar(C) (x) E is Bar(E, eta Obj C), then Xi
    sub = relative_bar_iso(E, etas, sample, R)
    rep.add("E(x)Bar(x)E=Bar(E,C)", PASS if sub.ok else FAIL, None if sub.ok else [c.name for c in sub.failures()])
    xi = ComparisonMap(E, sample, R)
    extra = 0 if kind in ("sb", "add") else xi.max_twists
    target = BarBimodule(E, etas, R + extra, "Bar(E,C)")
    trunc = BimoduleMap(xi.source, target, g.zero, xi.apply, xi.name)
    pairs = [(a, b) for a in sample for b in sample]
    sub = is_quasi_iso(trunc, pairs, window)
    status = _verdict_status(sub)
    rep.add("Xi-quasi-iso", status, _first_fail(sub) or {"reliable": sum(c.status != UNRELIABLE for c in sub.checks)})
    return rep


# ---------------------------------------------------------------------------
# the Tw counterexample


def counterexample_report(P):
    """Every hom complex of the base is acyclic (so the base is quasi-equivalent
    to zero) while some twisted object has nonzero End-homology, showing that
    Tw does not respect quasi-equivalence.  Witnesses are the contracting
    homotopies and the homology ranks."""
    from .envelopes import TwixCategory
    rep = VerificationReport("counterexample")
    objs = list(P.objects())
    witnesses = {}
    for x in objs:
        h = is_contractible(P, x)
        witnesses[x] = None if h is None else h.vec
        if h is None:
            rep.add("contractible %s" % x, INAPPLICABLE, None,
                    "identity is not exact, so the base is not quasi-equivalent to zero")
        else:
            rep.add("contractible %s" % x, PASS, {"homotopy": h.vec})
    acyclic = all(v is not None for v in witnesses.values())
    tw = TwixCategory(P, "tw")
    found = False
    for name, obj in sorted(getattr(P, "twix", {}).items()):
        if tw.admits(obj) is not None:
            rep.add("End(%s)" % name, INAPPLICABLE, None, "not a single twisted object")
            continue
        zero_d = all(not tw._d(obj, obj, k) for k in tw.basis(obj, obj))
        ranks = hom_ranks(tw, obj, obj)
        nonzero = {repr(list(d)): r for d, r in ranks.items() if r}
        h = is_contractible(tw, obj)
        rep.add("End(%s) homology" % name, PASS if nonzero and h is None else FAIL,
                {"ranks": nonzero, "zero-differential": zero_d})
        found = found or (nonzero and h is None)
    if not getattr(P, "twix", None):
        rep.add("twisted witness", INAPPLICABLE, None, "no twisted objects in the presentation")
    elif acyclic:
        rep.add("not-quasi-invariant", PASS if found else FAIL)
    return rep
