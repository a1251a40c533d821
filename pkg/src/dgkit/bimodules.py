"""Bimodules over dg categories with finite components.

A (C, D)-bimodule M assigns to objects X of C and Y of D a graded module
<X|M|Y> with a differential and actions

    <X'|C|X> (x) <X|M|Y> (x) <Y|D|Y'>  ->  <X'|M|Y'>,

where <X'|C|X> = hom_C(X, X').  Action arguments of ``None`` stand for the
identity, which need not be a basis element.
"""

from __future__ import annotations

import itertools

from .core import DgCategory, Presentation, LinearMap, GradedModule
from .grading import deg_add
from .linalg import vadd, Quotient, Echelon
from .report import VerificationReport, PASS, FAIL

INF = float("inf")


class Bimodule:
    """Protocol: implement ``_basis``, ``_d`` and ``_act``."""

    def __init__(self, left, right, name="M"):
        self.left = left
        self.right = right
        self.grading = left.grading
        self.field = left.field
        self.name = name
        self._cache = {}

    def _basis(self, x, y):
        raise NotImplementedError

    def _d(self, x, y, m):
        raise NotImplementedError

    def _act(self, x2, x, y, y2, f, m, g):
        """f . m . g with f a basis key of left.hom(x, x2) (or None) and g a
        basis key of right.hom(y2, y) (or None)."""
        raise NotImplementedError

    # cached basis
    def component(self, x, y):
        try:
            return self._cache[(x, y)]
        except KeyError:
            entries = list(self._basis(x, y))
            self._cache[(x, y)] = (tuple(k for k, _ in entries), dict(entries))
            return self._cache[(x, y)]

    def basis(self, x, y):
        return self.component(x, y)[0]

    def degree(self, x, y, m):
        return self.component(x, y)[1][m]

    def height_bounds(self, x, y):
        """(complete_from, top): every element of the untruncated component
        with height >= complete_from is present, and no element exceeds
        height ``top``.  A finite component is complete everywhere."""
        hs = [self.grading.height(d) for d in self.component(x, y)[1].values()]
        return -INF, max(hs, default=-INF)

    def module(self, x, y):
        keys, degs = self.component(x, y)
        return GradedModule(tuple((k, degs[k]) for k in keys))

    # linear extensions
    def d_vec(self, x, y, vec):
        out = {}
        for m, c in vec.items():
            vadd(out, self._d(x, y, m), c)
        return out

    def act_vec(self, x2, x, y, y2, fvec, mvec, gvec):
        """Linear extension; fvec/gvec may be None for identities."""
        out = {}
        fs = [(None, 1)] if fvec is None else list(fvec.items())
        gs = [(None, 1)] if gvec is None else list(gvec.items())
        for f, a in fs:
            for m, b in mvec.items():
                for g, c in gs:
                    vadd(out, self._act(x2, x, y, y2, f, m, g), a * b * c)
        return out

    def left_act(self, x2, x, y, f, mvec):
        return self.act_vec(x2, x, y, y, {f: 1} if f is not None else None, mvec, None)

    def right_act(self, x, y, y2, mvec, g):
        return self.act_vec(x, x, y, y2, None, mvec, {g: 1} if g is not None else None)


def check_bimodule(M, xs, ys, report=None):
    """d^2 = 0, graded Leibniz for both actions, associativity, the two
    actions commuting, and units."""
    rep = report or VerificationReport("bimodule:" + M.name)
    C, D, g = M.left, M.right, M.grading
    fails = {k: None for k in ("d^2=0", "leibniz", "associativity", "bimodule", "units")}

    def note(k, w):
        if fails[k] is None:
            fails[k] = w

    for x, y in itertools.product(xs, ys):
        for m in M.basis(x, y):
            if M.d_vec(x, y, M._d(x, y, m)):
                note("d^2=0", {"component": [x, y], "element": m})
            dm = M._d(x, y, m)
            km = g.ip(M.degree(x, y, m))
            # units
            if M.act_vec(x, x, y, y, C.identity_vec(x), {m: 1}, None) != {m: 1}:
                note("units", {"left": m})
            if M.act_vec(x, x, y, y, None, {m: 1}, D.identity_vec(y)) != {m: 1}:
                note("units", {"right": m})
            for x2 in xs:
                for f in C.basis(x, x2):
                    kf = g.ip(C.key_degree(x, x2, f))
                    lhs = M.d_vec(x2, y, M._act(x2, x, y, y, f, m, None))
                    rhs = M.act_vec(x2, x, y, y, C._d(x, x2, f), {m: 1}, None)
                    vadd(rhs, M.act_vec(x2, x, y, y, {f: 1}, dm, None), -1 if kf else 1)
                    if vadd(lhs, rhs, -1):
                        note("leibniz", {"left": f, "element": m})
                    for x3 in xs:
                        fm = M._act(x2, x, y, y, f, m, None)
                        for f2 in C.basis(x2, x3):
                            a = M.act_vec(x3, x2, y, y, {f2: 1}, fm, None)
                            b = M.act_vec(x3, x, y, y, C._mul(x, x2, x3, f2, f), {m: 1}, None)
                            if vadd(a, b, -1):
                                note("associativity", {"left": [f2, f], "element": m})
                    for y2 in ys:
                        for h in D.basis(y2, y):
                            a = M.act_vec(x2, x2, y, y2, None, M._act(x2, x, y, y, f, m, None), {h: 1})
                            b = M.act_vec(x2, x, y2, y2, {f: 1}, M._act(x, x, y, y2, None, m, h), None)
                            if vadd(a, b, -1):
                                note("bimodule", {"left": f, "right": h, "element": m})
            for y2 in ys:
                for h in D.basis(y2, y):
                    lhs = M.d_vec(x, y2, M._act(x, x, y, y2, None, m, h))
                    rhs = M.act_vec(x, x, y, y2, None, dm, {h: 1})
                    vadd(rhs, M.act_vec(x, x, y, y2, None, {m: 1}, D._d(y2, y, h)), -1 if km else 1)
                    if vadd(lhs, rhs, -1):
                        note("leibniz", {"right": h, "element": m})
                    mh = M._act(x, x, y, y2, None, m, h)
                    for y3 in ys:
                        for h2 in D.basis(y3, y2):
                            a = M.act_vec(x, x, y2, y3, None, mh, {h2: 1})
                            b = M.act_vec(x, x, y, y3, None, {m: 1}, D._mul(y3, y2, y, h, h2))
                            if vadd(a, b, -1):
                                note("associativity", {"right": [h, h2], "element": m})
    for k, w in fails.items():
        rep.add(k, FAIL if w is not None else PASS, w)
    return rep


# ---------------------------------------------------------------------------


def unit_category(grading, field):
    """The ground ring k as a one-object dg category."""
    return Presentation(grading, field, ["*"], {("*", "*"): [("1", grading.zero)]},
                        {}, {}, {"*": {"1": 1}}, name="k")


class IdentityBimodule(Bimodule):
    """<X|C|Y> = hom_C(Y, X) with actions by composition."""

    def __init__(self, C):
        super().__init__(C, C, "1_%s" % getattr(C, "name", "C"))

    def _basis(self, x, y):
        keys, degs = self.left.hom(y, x)
        return [(k, degs[k]) for k in keys]

    def _d(self, x, y, m):
        return self.left._d(y, x, m)

    def _act(self, x2, x, y, y2, f, m, g):
        C = self.left
        v = {m: C.field.one}
        if g is not None:
            v = C.mul_vec(y2, y, x, v, {g: 1})
        if f is not None:
            v = C.mul_vec(y2, x, x2, {f: 1}, v)
        return v


def identity_bimodule(C):
    return IdentityBimodule(C)


class YonedaBra(Bimodule):
    """<X| as a (k, C)-bimodule: <*|X|Y> = hom(Y, X), right action by precomposition."""

    def __init__(self, C, x):
        super().__init__(unit_category(C.grading, C.field), C, "<%s|" % (x,))
        self.C, self.x = C, x

    def _basis(self, star, y):
        keys, degs = self.C.hom(y, self.x)
        return [(k, degs[k]) for k in keys]

    def _d(self, star, y, m):
        return self.C._d(y, self.x, m)

    def _act(self, s2, s, y, y2, f, m, g):
        v = {m: self.field.one}
        if g is not None:
            v = self.C.mul_vec(y2, y, self.x, v, {g: 1})
        return v


class YonedaKet(Bimodule):
    """|X> as a (C, k)-bimodule: <Y|X|*> = hom(X, Y), left action by postcomposition."""

    def __init__(self, C, x):
        super().__init__(C, unit_category(C.grading, C.field), "|%s>" % (x,))
        self.C, self.x = C, x

    def _basis(self, y, star):
        keys, degs = self.C.hom(self.x, y)
        return [(k, degs[k]) for k in keys]

    def _d(self, y, star, m):
        return self.C._d(self.x, y, m)

    def _act(self, y2, y, s, s2, f, m, g):
        v = {m: self.field.one}
        if f is not None:
            v = self.C.mul_vec(self.x, y, y2, {f: 1}, v)
        return v


def yoneda_bra(C, x):
    return YonedaBra(C, x)


def yoneda_ket(C, x):
    return YonedaKet(C, x)


def yoneda_bra_map(C, f, x, x2, y):
    """<f| : <x| -> <x2|, m |-> f o m, on the component at y."""
    src, tgt = YonedaBra(C, x), YonedaBra(C, x2)
    cols = {m: C.mul_vec(y, x, x2, {f: 1}, {m: 1}) for m in src.basis("*", y)}
    return LinearMap(src.module("*", y), tgt.module("*", y), C.key_degree(x, x2, f), cols)


def yoneda_ket_map(C, f, x, x2, y):
    """|f> : |x2> -> |x>, m |-> (-1)^<|m|,|f|> m o f, on the component at y."""
    src, tgt = YonedaKet(C, x2), YonedaKet(C, x)
    g = C.grading
    kf = C.key_degree(x, x2, f)
    cols = {}
    for m in src.basis(y, "*"):
        s = g.sign(C.key_degree(x2, y, m), kf)
        cols[m] = {k: s * c for k, c in C.mul_vec(x, x2, y, {m: 1}, {f: 1}).items()}
    return LinearMap(src.module(y, "*"), tgt.module(y, "*"), kf, cols)


# ---------------------------------------------------------------------------


class TensorOver(Bimodule):
    """M (x)_B N computed as a quotient of the direct sum over middle objects
    by the balancing relations m.f (x) n ~ m (x) f.n."""

    def __init__(self, M, N, middle, name=None):
        super().__init__(M.left, N.right, name or "%s(x)%s" % (M.name, N.name))
        if M.right is not N.left and M.right.grading != N.left.grading:
            raise ValueError("middle categories do not match")
        self.M, self.N = M, N
        self.B = M.right
        self.middle = list(middle)
        self._quot = {}

    def _raw(self, x, z):
        M, N = self.M, self.N
        out = []
        for y in self.middle:
            for m in M.basis(x, y):
                for n in N.basis(y, z):
                    out.append(((y, m, n), deg_add(M.degree(x, y, m), N.degree(y, z, n))))
        return out

    def quotient(self, x, z):
        if (x, z) not in self._quot:
            M, N, B = self.M, self.N, self.B
            raw = self._raw(x, z)
            rels = []
            for y in self.middle:
                for y2 in self.middle:
                    for f in B.basis(y2, y):
                        for m in M.basis(x, y):
                            mf = M._act(x, x, y, y2, None, m, f)
                            for n in N.basis(y2, z):
                                fn = N._act(y, y2, z, z, f, n, None)
                                rel = {(y2, a, n): c for a, c in mf.items()}
                                vadd(rel, {(y, m, b): c for b, c in fn.items()}, -1)
                                if rel:
                                    rels.append(rel)
            keys = [k for k, _ in raw]
            self._quot[(x, z)] = (Quotient(keys, rels), dict(raw))
        return self._quot[(x, z)]

    def height_bounds(self, x, z):
        start, top = -INF, -INF
        for y in self.middle:
            cm, tm = self.M.height_bounds(x, y)
            cn, tn = self.N.height_bounds(y, z)
            if tm == -INF or tn == -INF:
                continue
            top = max(top, tm + tn)
            start = max(start, cm + tn, tm + cn)
        return start, top

    def _basis(self, x, z):
        Q, degs = self.quotient(x, z)
        return [(k, degs[k]) for k in Q.basis]

    def normal(self, x, z, vec):
        return self.quotient(x, z)[0].normal(vec)

    def _d(self, x, z, key):
        y, m, n = key
        M, N, g = self.M, self.N, self.grading
        out = {(y, a, n): c for a, c in M._d(x, y, m).items()}
        s = -1 if g.ip(M.degree(x, y, m)) else 1
        vadd(out, {(y, m, b): c for b, c in N._d(y, z, n).items()}, s)
        return self.normal(x, z, out)

    def _act(self, x2, x, z, z2, f, key, h):
        y, m, n = key
        M, N = self.M, self.N
        left = M._act(x2, x, y, y, f, m, None) if f is not None else {m: self.field.one}
        right = N._act(y, y, z, z2, None, n, h) if h is not None else {n: self.field.one}
        out = {(y, a, b): c * e for a, c in left.items() for b, e in right.items()}
        return self.normal(x2, z2, out)


def tensor_over(M, N, middle):
    return TensorOver(M, N, middle)


class DiscreteCategory(Presentation):
    """Objects with only scalar multiples of their identities."""

    def __init__(self, grading, field, objects):
        objects = list(objects)
        super().__init__(grading, field, objects,
                         {(x, x): [(("id", x), grading.zero)] for x in objects},
                         {}, {}, {x: {("id", x): 1} for x in objects}, name="discrete")


class Restriction(Bimodule):
    """Restrict the actions of a bimodule along dg functors on either side
    (given as object lists with inclusion maps on basis keys)."""

    def __init__(self, M, left=None, right=None, left_map=None, right_map=None, name=None):
        super().__init__(left or M.left, right or M.right, name or M.name)
        self.M = M
        self.left_map = left_map
        self.right_map = right_map

    def _basis(self, x, y):
        keys, degs = self.M.component(x, y)
        return [(k, degs[k]) for k in keys]

    def height_bounds(self, x, y):
        return self.M.height_bounds(x, y)

    def degree(self, x, y, m):
        return self.M.degree(x, y, m)

    def _d(self, x, y, m):
        return self.M._d(x, y, m)

    def _act(self, x2, x, y, y2, f, m, g):
        fv = None if f is None else (self.left_map(x, x2, f) if self.left_map else {f: 1})
        gv = None if g is None else (self.right_map(y2, y, g) if self.right_map else {g: 1})
        return self.M.act_vec(x2, x, y, y2, fv, {m: 1}, gv)


def discrete_inclusion(C):
    """Basis map from a discrete category into C: the identity goes to id."""
    return lambda x, x2, key: dict(C.identity_vec(x))


# ---------------------------------------------------------------------------
# bimodule maps


class BimoduleMap:
    """Componentwise data: ``apply(x, y, m)`` returns a vector in the target."""

    def __init__(self, source, target, degree, apply, name="phi"):
        self.source = source
        self.target = target
        self.degree = tuple(degree)
        self.apply = apply
        self.name = name

    def apply_vec(self, x, y, vec):
        out = {}
        for m, c in vec.items():
            vadd(out, self.apply(x, y, m), c)
        return out


def check_bimodule_map(phi, xs, ys, report=None, closed=True):
    """Degree, equivariance phi(f.m.g) = (-1)^<|phi|,|f|> f.phi(m).g, and
    (optionally) closedness d phi = (-1)^<iota,|phi|> phi d."""
    rep = report or VerificationReport("bimodule-map:" + phi.name)
    S, T = phi.source, phi.target
    g = S.grading
    C, D = S.left, S.right
    bad_deg = bad_eq = bad_d = None
    for x, y in itertools.product(xs, ys):
        for m in S.basis(x, y):
            im = phi.apply(x, y, m)
            want = deg_add(S.degree(x, y, m), phi.degree)
            if bad_deg is None and any(T.degree(x, y, t) != want for t in im):
                bad_deg = {"component": [x, y], "element": m}
            if closed and bad_d is None:
                lhs = T.d_vec(x, y, im)
                rhs = phi.apply_vec(x, y, S._d(x, y, m))
                if vadd(lhs, rhs, 1 if g.ip(phi.degree) else -1):
                    bad_d = {"component": [x, y], "element": m}
            if bad_eq is None:
                for x2 in xs:
                    for f in C.basis(x, x2):
                        s = g.sign(phi.degree, C.key_degree(x, x2, f))
                        a = phi.apply_vec(x2, y, S._act(x2, x, y, y, f, m, None))
                        b = T.act_vec(x2, x, y, y, {f: 1}, im, None)
                        if vadd(a, b, -s):
                            bad_eq = {"left": f, "element": m}
                            break
                for y2 in ys:
                    for h in D.basis(y2, y):
                        a = phi.apply_vec(x, y2, S._act(x, x, y, y2, None, m, h))
                        b = T.act_vec(x, x, y, y2, None, im, {h: 1})
                        if vadd(a, b, -1):
                            bad_eq = {"right": h, "element": m}
                            break
    rep.add("degree", FAIL if bad_deg else PASS, bad_deg)
    rep.add("equivariant", FAIL if bad_eq else PASS, bad_eq)
    if closed:
        rep.add("closed", FAIL if bad_d else PASS, bad_d)
    return rep


def component_rank(M, x, y):
    return len(M.basis(x, y))


def map_rank(phi, x, y):
    e = Echelon()
    for m in phi.source.basis(x, y):
        e.add(phi.apply(x, y, m))
    return e.rank


# ---------------------------------------------------------------------------
# shifts and one-sided twists of bimodules


class ShiftedBimodule(Bimodule):
    """q^s M: degrees move by s, the differential picks up (-1)^<iota,s>
    and the left action (-1)^<|f|,s>.  Nested shifts are merged."""

    def __init__(self, M, shift, name=None):
        if isinstance(M, ShiftedBimodule):
            shift = deg_add(M.shift, shift)
            M = M.M
        super().__init__(M.left, M.right, name or "q^%s %s" % (list(shift), M.name))
        self.M, self.shift = M, tuple(shift)
        g = self.grading
        self._dsign = g.sign(g.iota, self.shift)

    def _basis(self, x, y):
        keys, degs = self.M.component(x, y)
        return [(k, deg_add(degs[k], self.shift)) for k in keys]

    def height_bounds(self, x, y):
        c, t = self.M.height_bounds(x, y)
        h = self.grading.height(self.shift)
        return c + h, t + h

    def _d(self, x, y, m):
        out = self.M._d(x, y, m)
        return out if self._dsign == 1 else {k: -c for k, c in out.items()}

    def _act(self, x2, x, y, y2, f, m, g):
        out = self.M._act(x2, x, y, y2, f, m, g)
        if f is not None and self.grading.pair(self.left.key_degree(x, x2, f), self.shift):
            out = {k: -c for k, c in out.items()}
        return out


class TwistedBimodule(Bimodule):
    """tw(sum of levels) with twist components ``twist[(src, tgt)]``, each a
    degree-iota bimodule map between levels.  Basis keys are (level, key).

    ``omitted_top(x, y)`` optionally bounds the heights of levels left out by
    a truncation; heights above it are complete."""

    def __init__(self, levels, twist, name="tw", omitted_top=None):
        super().__init__(levels[0].left, levels[0].right, name)
        self.levels = list(levels)
        self.twist = dict(twist)
        self.omitted_top = omitted_top
        self._out = {}
        for (s, t), phi in self.twist.items():
            self._out.setdefault(s, []).append((t, phi))

    def _basis(self, x, y):
        for n, L in enumerate(self.levels):
            for k in L.basis(x, y):
                yield (n, k), L.degree(x, y, k)

    def height_bounds(self, x, y):
        start, top = -INF, -INF
        for L in self.levels:
            c, t = L.height_bounds(x, y)
            if t == -INF:
                continue
            start, top = max(start, c), max(top, t)
        if self.omitted_top is not None:
            start = max(start, self.omitted_top(x, y) + 1)
        return start, top

    def _d(self, x, y, key):
        n, m = key
        out = {(n, k): c for k, c in self.levels[n]._d(x, y, m).items()}
        for t, phi in self._out.get(n, ()):
            vadd(out, {(t, k): c for k, c in phi.apply(x, y, m).items()})
        return out

    def _act(self, x2, x, y, y2, f, key, g):
        n, m = key
        return {(n, k): c for k, c in self.levels[n]._act(x2, x, y, y2, f, m, g).items()}


def cone_bimodule(phi):
    """Cone(phi) = tw(q^{-iota} M (+) N) for a closed degree-0 map phi: M -> N."""
    g = phi.source.grading
    src = ShiftedBimodule(phi.source, g.neg(g.iota))
    return TwistedBimodule([src, phi.target], {(0, 1): phi}, "Cone(%s)" % phi.name)
