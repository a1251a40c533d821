"""Envelopes of a dg category: shifts, finite sums, twists and their combination.

Everything is implemented once, as the category of finite twisted complexes
over a base category.  The suspended, additive, twisted and one-sided
envelopes are the full subcategories cut out by restrictions on objects:

    kind   shifts    summands   twist
    sb     any       exactly 1  zero
    add    zero      any        zero
    tw     zero      exactly 1  any
    twix   any       any        any
    pretr  any       any        strictly lower triangular for some order

Morphisms are stored through their bare components: the basis of
hom(src, dst) consists of triples (a, b, g) where b indexes a summand of
src, a indexes a summand of dst and g is a basis morphism of the base
category between the underlying objects.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field

from .core import DgCategory, Morphism, Functor
from .grading import deg_add, deg_sub, deg_neg
from .linalg import vadd, vscale
from .report import VerificationReport, PASS, FAIL, INAPPLICABLE

KINDS = ("sb", "add", "tw", "twix", "pretr")


class MaurerCartanError(ValueError):
    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class ContractError(ValueError):
    pass


def _freeze(vec):
    return tuple(sorted(vec.items(), key=repr))


@dataclass(frozen=True)
class TwixObject:
    """A formal twisted complex tw_alpha(sum_a q^{i_a} X_a).

    ``summands`` is a tuple of (shift, base object).  ``twist`` is a tuple of
    ((a, b), frozen vector) where the vector lives in hom_base(X_b, X_a).
    """

    summands: tuple
    twist: tuple = ()
    label: str | None = field(default=None, compare=False)

    @classmethod
    def build(cls, summands, twist=None, label=None):
        summands = tuple((tuple(s), x) for s, x in summands)
        tw = []
        for (a, b), vec in sorted((twist or {}).items()):
            vec = {k: c for k, c in vec.items() if c}
            if vec:
                tw.append(((a, b), _freeze(vec)))
        return cls(summands, tuple(tw), label)

    def __len__(self):
        return len(self.summands)

    def shift(self, a):
        return self.summands[a][0]

    def base(self, a):
        return self.summands[a][1]

    def twist_dict(self):
        return {ab: dict(v) for ab, v in self.twist}

    def twist_entry(self, a, b):
        for ab, v in self.twist:
            if ab == (a, b):
                return dict(v)
        return {}

    def column(self, b):
        """Nonzero twist entries alpha_{a,b} as a list of (a, vec)."""
        return [(a, dict(v)) for (a, bb), v in self.twist if bb == b]

    def row(self, a):
        return [(b, dict(v)) for (aa, b), v in self.twist if aa == a]

    def __repr__(self):
        if self.label:
            return self.label
        body = " + ".join("q^%s %r" % (list(s), x) for s, x in self.summands) or "0"
        return "tw(%s)" % body if self.twist else "(%s)" % body


def singleton(grading, x, shift=None):
    return TwixObject.build([(shift or grading.zero, x)])


# ---------------------------------------------------------------------------


def mc_residual(C, obj):
    """Left side of the matrix Maurer-Cartan equation, as {(a,b): vec}."""
    g = C.grading
    alpha = obj.twist_dict()
    out = {}
    for (a, b), v in alpha.items():
        xa, xb = obj.base(a), obj.base(b)
        want = deg_add(deg_sub(g.iota, obj.shift(a)), obj.shift(b))
        for k in v:
            if C.key_degree(xb, xa, k) != want:
                raise MaurerCartanError("twist entry (%r,%r) has the wrong degree" % (a, b))
        s = -1 if g.ip(obj.shift(a)) else 1
        acc = vscale(C.d_vec(xb, xa, v), s)
        if acc:
            out[(a, b)] = acc
    for (a, c), v in alpha.items():
        for (c2, b), w in alpha.items():
            if c2 != c:
                continue
            prod = C.mul_vec(obj.base(b), obj.base(c), obj.base(a), v, w)
            if prod:
                vadd(out.setdefault((a, b), {}), prod)
    return {ab: v for ab, v in out.items() if v}


def check_mc(C, obj):
    """Return None if obj satisfies matrix MC, else the residual."""
    r = mc_residual(C, obj)
    return r or None


def is_one_sided(obj):
    """A linear order (list of indices, increasing) making the twist strictly
    lower triangular, or None.  Ties are broken by smallest index first."""
    n = len(obj)
    succ = {a: set() for a in range(n)}
    indeg = [0] * n
    for (a, b), _ in obj.twist:
        if a == b:
            return None
        if a not in succ[b]:
            succ[b].add(a)      # b must precede a
            indeg[a] += 1
    heap = [a for a in range(n) if indeg[a] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        b = heapq.heappop(heap)
        order.append(b)
        for a in sorted(succ[b]):
            indeg[a] -= 1
            if indeg[a] == 0:
                heapq.heappush(heap, a)
    return order if len(order) == n else None


def validates_order(obj, order):
    pos = {a: p for p, a in enumerate(order)}
    return sorted(pos) == list(range(len(obj))) and all(pos[a] > pos[b] for (a, b), _ in obj.twist)


# ---------------------------------------------------------------------------


class TwixCategory(DgCategory):
    """Finite twisted complexes over ``base``, restricted to ``kind``."""

    def __init__(self, base, kind="twix", objects=(), name=None):
        super().__init__()
        if kind not in KINDS:
            raise ValueError("unknown envelope kind %r" % kind)
        self.base = base
        self.kind = kind
        self.grading = base.grading
        self.field = base.field
        self.name = name or "%s(%s)" % (kind, getattr(base, "name", None) or "C")
        self._objects = []
        for o in objects:
            self.add_object(o)

    # objects --------------------------------------------------------------
    def admits(self, obj):
        """Reason string if obj is not an object of this envelope, else None."""
        z = self.grading.zero
        if self.kind in ("sb", "tw") and len(obj) != 1:
            return "needs exactly one summand"
        if self.kind in ("add", "tw") and any(s != z for s, _ in obj.summands):
            return "shifts must vanish"
        if self.kind in ("sb", "add") and obj.twist:
            return "twist must vanish"
        if self.kind == "pretr" and is_one_sided(obj) is None:
            return "twist is not one-sided"
        return None

    def validate(self, obj):
        why = self.admits(obj)
        if why:
            raise ContractError("%r is not an object of %s: %s" % (obj, self.kind, why))
        res = check_mc(self.base, obj)
        if res:
            raise MaurerCartanError("Maurer-Cartan equation fails for %r" % (obj,), res)
        return obj

    def add_object(self, obj):
        self.validate(obj)
        if obj not in self._objects:
            self._objects.append(obj)
        return obj

    def objects(self):
        return list(self._objects)

    def obj(self, summands, twist=None, label=None):
        return self.add_object(TwixObject.build(summands, twist, label))

    def eta_obj(self, x):
        return singleton(self.grading, x)

    # hom complexes ----------------------------------------------------------
    def _hom(self, src, dst):
        C = self.base
        out = []
        for a, (ia, xa) in enumerate(dst.summands):
            for b, (jb, yb) in enumerate(src.summands):
                shift = deg_sub(ia, jb)
                for g in C.basis(yb, xa):
                    out.append(((a, b, g), deg_add(C.key_degree(yb, xa, g), shift)))
        return out

    def _d(self, src, dst, key):
        C = self.base
        gr = self.grading
        a, b, g = key
        xa, yb = dst.base(a), src.base(b)
        k = self.key_degree(src, dst, key)
        out = {}
        s = -1 if gr.ip(dst.shift(a)) else 1
        for t, c in C._d(yb, xa, g).items():
            vadd(out, {(a, b, t): c}, s)
        for a2, alpha in dst.column(a):
            for t, c in C.mul_vec(yb, xa, dst.base(a2), alpha, {g: 1}).items():
                vadd(out, {(a2, b, t): c})
        s = 1 if gr.ip(k) else -1
        for b2, beta in src.row(b):
            for t, c in C.mul_vec(src.base(b2), yb, xa, {g: 1}, beta).items():
                vadd(out, {(a, b2, t): c}, s)
        return out

    def _mul(self, x, y, z, gk, fk):
        a, b, g = gk
        b2, c, f = fk
        if b != b2:
            return {}
        C = self.base
        return {(a, c, t): v for t, v in C._mul(x.base(c), y.base(b), z.base(a), g, f).items()}

    def _identity(self, x):
        C = self.base
        out = {}
        for a, (_, xa) in enumerate(x.summands):
            for t, c in C.identity_vec(xa).items():
                out[(a, a, t)] = c
        return out

    # morphism construction from bare components ----------------------------
    def from_components(self, src, dst, components, degree=None):
        """components: {(a, b): base vector}."""
        vec = {}
        for (a, b), v in components.items():
            for t, c in v.items():
                if c:
                    vec[(a, b, t)] = c
        return Morphism.make(self, src, dst, vec, degree)

    def components(self, f):
        out = {}
        for (a, b, t), c in f.vec.items():
            out.setdefault((a, b), {})[t] = c
        return out

    def lift(self, f, src_shift=None, dst_shift=None):
        """A base morphism f: X -> Y viewed between singletons q^i X -> q^j Y."""
        z = self.grading.zero
        i = src_shift or z
        j = dst_shift or z
        src = singleton(self.grading, f.src, i)
        dst = singleton(self.grading, f.dst, j)
        deg = deg_add(f.degree, deg_sub(j, i))
        return Morphism(self, src, dst, deg, {(0, 0, t): c for t, c in f.vec.items()})

    # structure maps --------------------------------------------------------
    def inclusion(self, obj, a):
        """sigma_a : X_a -> obj, of degree i_a."""
        xa = obj.base(a)
        return self.from_components(singleton(self.grading, xa), obj,
                                    {(a, 0): self.base.identity_vec(xa)}, obj.shift(a))

    def projection(self, obj, a):
        """pi_a : obj -> X_a, of degree -i_a."""
        xa = obj.base(a)
        return self.from_components(obj, singleton(self.grading, xa),
                                    {(0, a): self.base.identity_vec(xa)}, deg_neg(obj.shift(a)))

    def twist_morphism(self, obj, a, b):
        """alpha_{a,b} as a morphism X_b -> X_a between singletons."""
        xa, xb = obj.base(a), obj.base(b)
        deg = deg_add(deg_sub(self.grading.iota, obj.shift(a)), obj.shift(b))
        return Morphism.make(self, singleton(self.grading, xb), singleton(self.grading, xa),
                             {(0, 0, t): c for t, c in obj.twist_entry(a, b).items()}, deg)

    def phi(self, x, shift):
        """The closed invertible map (id_X)^i_0 : X -> q^i X."""
        return self.from_components(singleton(self.grading, x), singleton(self.grading, x, shift),
                                    {(0, 0): self.base.identity_vec(x)}, shift)

    def psi(self, x, alpha):
        """(id) : X -> tw_alpha(X), satisfying d(psi) = psi o alpha."""
        target = TwixObject.build([(self.grading.zero, x)], {(0, 0): alpha})
        return self.from_components(singleton(self.grading, x), target,
                                    {(0, 0): self.base.identity_vec(x)}, self.grading.zero)


def sb_envelope(C, objects=()):
    return TwixCategory(C, "sb", objects)


def additive_envelope(C, objects=()):
    return TwixCategory(C, "add", objects)


def tw_envelope(C, objects=()):
    return TwixCategory(C, "tw", objects)


def twix_envelope(C, objects=()):
    return TwixCategory(C, "twix", objects)


def pretr_envelope(C, objects=()):
    return TwixCategory(C, "pretr", objects)


# ---------------------------------------------------------------------------
# standard objects


def _require(C, f, degree, closed=True):
    if f.degree != degree:
        raise ContractError("expected a morphism of degree %r, got %r" % (degree, f.degree))
    if closed and C.d_vec(f.src, f.dst, f.vec):
        raise ContractError("expected a closed morphism")


def cone(C, f):
    """Cone(f) = tw(q^{-iota} X + Y) with twist f from the first to the second."""
    g = C.grading
    _require(C, f, g.zero)
    return TwixObject.build([(deg_neg(g.iota), f.src), (g.zero, f.dst)], {(1, 0): f.vec},
                            label="Cone(%s)" % _name(f))


def cocone(C, f):
    g = C.grading
    _require(C, f, g.zero)
    return TwixObject.build([(g.zero, f.src), (g.iota, f.dst)], {(1, 0): f.vec},
                            label="Cocone(%s)" % _name(f))


def extension(C, xi):
    """The extension of xi.src by xi.dst defined by a closed degree-iota map."""
    g = C.grading
    _require(C, xi, g.iota)
    return TwixObject.build([(g.zero, xi.src), (g.zero, xi.dst)], {(1, 0): xi.vec})


def _name(f):
    if len(f.vec) == 1:
        (k, c), = f.vec.items()
        return str(k) if c == 1 else "%s*%s" % (c, k)
    return "f"


def direct_sum(*objs):
    """Concatenate summands; twists are placed block diagonally."""
    summands, twist, off = [], {}, 0
    for o in objs:
        summands.extend(o.summands)
        for (a, b), v in o.twist_dict().items():
            twist[(a + off, b + off)] = v
        off += len(o)
    return TwixObject.build(summands, twist)


def shift_object(grading, k, obj):
    """q^k applied to a twisted complex: shifts move by k, twist picks up (-1)^<k,iota>."""
    s = grading.sign(k, grading.iota)
    return TwixObject.build([(deg_add(i, k), x) for i, x in obj.summands],
                            {ab: vscale(v, s) for ab, v in obj.twist_dict().items()})


def shift_functor(E, k):
    """The dg endofunctor q^k on an envelope; morphisms pick up (-1)^<k,|f|>."""
    g = E.grading

    def on_basis(x, y, key):
        return {key: E.field(g.sign(k, E.key_degree(x, y, key)))}

    return Functor(E, E, lambda o: shift_object(g, k, o), on_basis, "q^%s" % list(k))


# ---------------------------------------------------------------------------
# monad structure


def eta(C, E):
    """C -> E(C): X |-> singleton X, f |-> its (0,0) component."""
    g = C.grading
    return Functor(C, E, lambda x: singleton(g, x),
                   lambda x, y, k: {(0, 0, k): C.field.one}, "eta")


def flatten_object(outer_cat, obj):
    """Flatten a twisted complex of twisted complexes into one over the base.

    Summand (a, p) of the result is summand p of the a-th inner complex with
    shift i_a + i_{a,p}.  Inner twists pick up (-1)^<iota, i_a>; outer twist
    components are copied without sign.
    """
    g = outer_cat.grading
    index, summands = {}, []
    for a, (ia, inner) in enumerate(obj.summands):
        for p, (iap, x) in enumerate(inner.summands):
            index[(a, p)] = len(summands)
            summands.append((deg_add(ia, iap), x))
    twist = {}
    for a, (ia, inner) in enumerate(obj.summands):
        s = -1 if g.ip(ia) else 1
        for (p, q), v in inner.twist_dict().items():
            vadd(twist.setdefault((index[(a, p)], index[(a, q)]), {}), v, s)
    for (a, b), v in obj.twist_dict().items():
        for (p, q, t), c in v.items():
            vadd(twist.setdefault((index[(a, p)], index[(b, q)]), {}), {t: c})
    return TwixObject.build(summands, twist), index


def mu(outer, inner):
    """The flattening functor E(E(C)) -> E(C) (no signs on morphisms)."""
    def on_obj(o):
        return flatten_object(outer, o)[0]

    def on_basis(x, y, key):
        a, b, (p, q, t) = key
        _, ix = flatten_object(outer, x)
        _, iy = flatten_object(outer, y)
        return {(iy[(a, p)], ix[(b, q)], t): inner.field.one}

    return Functor(outer, inner, on_obj, on_basis, "mu")


def nested_mc_equivalence(C, x, alpha_inner, alpha_outer):
    """Check that MC for alpha' in C plus MC for alpha over tw_alpha'(X) is
    equivalent to MC for alpha + alpha'.  Returns (lhs, rhs) booleans."""
    g = C.grading
    inner = TwixObject.build([(g.zero, x)], {(0, 0): alpha_inner})
    E = TwixCategory(C, "twix")
    ok_inner = check_mc(C, inner) is None
    outer_twist = {(0, 0): {(0, 0, t): c for t, c in alpha_outer.items()}}
    nested = TwixObject.build([(g.zero, inner)], outer_twist)
    ok_outer = ok_inner and check_mc(E, nested) is None
    total = vadd(dict(alpha_inner), alpha_outer)
    ok_sum = check_mc(C, TwixObject.build([(g.zero, x)], {(0, 0): total})) is None
    return ok_outer, ok_sum


def nonpositive_implies_onesided(C, obj):
    """Certify one-sidedness from degree support, or report the check inapplicable.

    Returns (status, order).  Requires a declared negative cone, iota positive
    and every base basis morphism of degree <= 0.
    """
    g = C.grading
    if g.order is None:
        return INAPPLICABLE, None
    if g.iota == g.zero or g.is_negative(g.iota):
        return INAPPLICABLE, None
    obs = C.objects()
    for x in obs:
        for y in obs:
            for k in C.basis(x, y):
                if not g.leq(C.key_degree(x, y, k), g.zero):
                    return INAPPLICABLE, None
    w = g.order
    height = [sum(a * b for a, b in zip(w, s)) for s, _ in obj.summands]
    for (a, b), _ in obj.twist:
        if not height[a] > height[b]:
            return FAIL, None
    order = sorted(range(len(obj)), key=lambda a: (height[a], a))
    return PASS, order


def check_structure_maps(E, obj, report=None):
    """d(sigma_a) = sum sigma_b alpha_{b,a}, d(pi_a) = -(-1)^<iota,i_a> sum alpha_{a,b} pi_b,
    pi_a sigma_b = delta_ab id and sum sigma_a pi_a = id."""
    from .core import differential
    rep = report or VerificationReport("structure-maps")
    g = E.grading
    n = len(obj)
    sig = [E.inclusion(obj, a) for a in range(n)]
    pi = [E.projection(obj, a) for a in range(n)]
    fails = []
    for a in range(n):
        acc = {}
        for b in range(n):
            t = E.twist_morphism(obj, b, a)
            if t.vec:
                vadd(acc, (sig[b] @ t).vec)
        if differential(sig[a]).vec != acc:
            fails.append({"d(sigma)": a})
        acc = {}
        for b in range(n):
            t = E.twist_morphism(obj, a, b)
            if t.vec:
                vadd(acc, (t @ pi[b]).vec, 1 if g.ip(obj.shift(a)) else -1)
        if differential(pi[a]).vec != acc:
            fails.append({"d(pi)": a})
        for b in range(n):
            want = E.identity_vec(singleton(g, obj.base(a))) if a == b else {}
            if (pi[a] @ sig[b]).vec != want:
                fails.append({"pi sigma": [a, b]})
    total = {}
    for a in range(n):
        vadd(total, (sig[a] @ pi[a]).vec)
    if total != E.identity_vec(obj):
        fails.append({"sum sigma pi": "not identity"})
    rep.add("structure-maps", FAIL if fails else PASS, fails[0] if fails else None)
    return rep
