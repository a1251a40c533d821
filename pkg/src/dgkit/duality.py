"""Opposite categories, tensor products, and how both interact with envelopes.

Also home of :class:`SignTrace`, a small bookkeeping device that computes
Koszul signs by literally performing adjacent transpositions.  It shares no
code with the closed-form exponents below and serves as their oracle.
"""

from __future__ import annotations

import itertools

from .core import DgCategory, Functor
from .envelopes import TwixCategory, TwixObject, is_one_sided
from .grading import deg_add, deg_sub, deg_neg
from .linalg import vadd


class GradingMismatch(ValueError):
    pass


class OppositeCategory(DgCategory):
    """hom_op(x, y) = hom(y, x); f^op o g^op = (-1)^<|f|,|g|> (g o f)^op."""

    def __init__(self, base, name=None):
        super().__init__()
        self.base = base
        self.grading = base.grading
        self.field = base.field
        self.name = name or "%s^op" % (getattr(base, "name", None) or "C")

    def objects(self):
        return self.base.objects()

    def _hom(self, x, y):
        keys, degs = self.base.hom(y, x)
        return [(k, degs[k]) for k in keys]

    def _d(self, x, y, key):
        return self.base._d(y, x, key)

    def _mul(self, x, y, z, g, f):
        # g in hom(z, y), f in hom(y, x) of the base; result (f o g)^op
        B = self.base
        s = self.grading.sign(B.key_degree(z, y, g), B.key_degree(y, x, f))
        out = B._mul(z, y, x, f, g)
        return out if s == 1 else {k: -c for k, c in out.items()}

    def _identity(self, x):
        return self.base.identity_vec(x)


def opposite(C):
    return OppositeCategory(C)


class TensorCategory(DgCategory):
    """Objects are pairs; hom((x,y),(x',y')) = hom(x,x') (x) hom(y,y')."""

    def __init__(self, left, right, objects=None, name=None):
        super().__init__()
        if left.grading != right.grading:
            raise GradingMismatch("tensor factors must share a grading")
        if left.field != right.field:
            raise GradingMismatch("tensor factors must share a coefficient field")
        self.left, self.right = left, right
        self.grading = left.grading
        self.field = left.field
        self._objects = list(objects) if objects is not None else [
            (x, y) for x in left.objects() for y in right.objects()]
        self.name = name or "%s(x)%s" % (getattr(left, "name", "C"), getattr(right, "name", "D"))

    def objects(self):
        return list(self._objects)

    def _hom(self, s, t):
        (x, y), (x2, y2) = s, t
        L, R = self.left, self.right
        lk, ld = L.hom(x, x2)
        rk, rd = R.hom(y, y2)
        return [((f, g), deg_add(ld[f], rd[g])) for f in lk for g in rk]

    def _d(self, s, t, key):
        (x, y), (x2, y2) = s, t
        f, g = key
        L, R = self.left, self.right
        out = {}
        for a, c in L._d(x, x2, f).items():
            out[(a, g)] = c
        sgn = self.grading.sign(self.grading.iota, L.key_degree(x, x2, f))
        for b, c in R._d(y, y2, g).items():
            vadd(out, {(f, b): c}, sgn)
        return out

    def _mul(self, s, t, u, gk, fk):
        (x, y), (x2, y2), (x3, y3) = s, t, u
        f2, g2 = gk
        f, g = fk
        L, R = self.left, self.right
        sgn = self.grading.sign(R.key_degree(y2, y3, g2), L.key_degree(x, x2, f))
        lv = L._mul(x, x2, x3, f2, f)
        if not lv:
            return {}
        rv = R._mul(y, y2, y3, g2, g)
        return {(a, b): sgn * c * e for a, c in lv.items() for b, e in rv.items()}

    def _identity(self, s):
        x, y = s
        return {(a, b): c * e for a, c in self.left.identity_vec(x).items()
                for b, e in self.right.identity_vec(y).items()}


def tensor_category(C, D, objects=None):
    return TensorCategory(C, D, objects)


# ---------------------------------------------------------------------------
# envelopes and opposites


def quadratic_refinement(grading, i):
    """q(i) with q(a+b) = q(a) + q(b) + <a,b> mod 2 (and q(iota) = 1 when <iota,iota> = 1
    is carried by a diagonal entry)."""
    P = grading.pairing
    n = grading.rank
    s = 0
    for r in range(n):
        if P[r][r]:
            s += i[r] * (i[r] + 1) // 2
        for c in range(r + 1, n):
            if P[r][c]:
                s += i[r] * i[c]
    return s % 2


OP_CONVENTIONS = ("literal", "derived", "involutive")


def op_twist_exponent(grading, ia, ib, convention):
    """Exponent of the sign relating alpha'_{b,a} to alpha_{a,b}."""
    g = grading
    base = 1 + g.pair(deg_add(ia, ib), g.iota)
    if convention == "literal":
        return (base + g.ip(ib)) % 2
    e = (base + g.pair(deg_add(ia, ib), ib)) % 2
    if convention == "involutive":
        e = (e + quadratic_refinement(g, deg_neg(ia)) + quadratic_refinement(g, deg_neg(ib))) % 2
    return e


def op_morphism_exponent(grading, ia, jb, l, convention):
    """Exponent for a bare component f_{a,b} of a degree-l morphism."""
    g = grading
    e = g.pair(deg_add(ia, jb), deg_add(l, jb))
    if convention == "involutive":
        e = (e + quadratic_refinement(g, deg_neg(ia)) + quadratic_refinement(g, deg_neg(jb))) % 2
    return e


def op_object(grading, obj, convention="derived"):
    """The object of E(C^op) corresponding to obj^op."""
    twist = {}
    for (a, b), v in obj.twist_dict().items():
        e = op_twist_exponent(grading, obj.shift(a), obj.shift(b), convention)
        twist[(b, a)] = {k: (-c if e else c) for k, c in v.items()}
    return TwixObject.build([(deg_neg(s), x) for s, x in obj.summands], twist)


def envelope_op_iso(E, convention="derived", target=None):
    """The isomorphism E(C)^op -> E(C^op) as extensional functor data.

    ``convention`` selects the sign rule: "literal" uses the twist exponent
    1 + <i_a + i_b, iota> + <iota, i_b>, "derived" replaces its last term by
    <i_a + i_b, i_b>, and "involutive" further conjugates by a quadratic
    refinement so that the functor squares to the identity on the nose.
    """
    if convention not in OP_CONVENTIONS:
        raise ValueError("unknown convention %r" % convention)
    g = E.grading
    src = OppositeCategory(E)
    tgt = target or TwixCategory(OppositeCategory(E.base), E.kind)

    def on_obj(o):
        return op_object(g, o, convention)

    def on_basis(x, y, key):
        # key is a basis element of hom_E(y, x): bare (a, b, t), a in x, b in y
        a, b, t = key
        l = E.key_degree(y, x, key)
        e = op_morphism_exponent(g, x.shift(a), y.shift(b), l, convention)
        return {(b, a, t): E.field(-1 if e else 1)}

    return Functor(src, tgt, on_obj, on_basis, "op-iso[%s]" % convention)


def double_op_defect(E, objects, convention="derived"):
    """Apply the op-isomorphism twice (E(C) -> E(C^op)^op -> E(C^op^op) = E(C))
    and return the first basis morphism or object not fixed, or None."""
    F = envelope_op_iso(E, convention)
    G = envelope_op_iso(F.target, convention)
    for x in objects:
        if G.obj(F.obj(x)) != x:
            return {"object": repr(x), "after": repr(G.obj(F.obj(x)))}
    for x, y in itertools.product(objects, objects):
        for key in E.basis(y, x):
            image = {}
            for k2, c in F.on_basis(x, y, key).items():
                # k2 lives in hom_{E(C^op)}(F x, F y); view it in the opposite
                for k3, c3 in G.on_basis(F.obj(y), F.obj(x), k2).items():
                    vadd(image, {k3: c * c3})
            if image != {key: E.field.one}:
                return {"basis": repr(key), "source": repr(y), "target": repr(x),
                        "image": {repr(k): str(v) for k, v in image.items()}}
    return None


def extend_functor(F, E_src, E_tgt):
    """Apply a dg functor F: C -> D summand-wise to twisted complexes."""
    def on_obj(o):
        return TwixObject.build([(s, F.obj(x)) for s, x in o.summands],
                                {ab: F.map_vec(o.base(ab[1]), o.base(ab[0]), v)
                                 for ab, v in o.twist_dict().items()})

    def on_basis(x, y, key):
        a, b, t = key
        return {(a, b, t2): c for t2, c in F.on_basis(x.base(b), y.base(a), t).items()}

    return Functor(E_src, E_tgt, on_obj, on_basis, "E(%s)" % F.name)


def contravariant_extend(F, kind="twix", convention="derived", E=None, E_target=None):
    """Extend F: C^op -> D to E(C)^op -> E(D) via the op isomorphism."""
    C = F.source.base if isinstance(F.source, OppositeCategory) else F.source
    E = E or TwixCategory(C, kind)
    iso = envelope_op_iso(E, convention)
    ext = extend_functor(F, iso.target, E_target or TwixCategory(F.target, kind))
    from .core import compose_functors
    return compose_functors(ext, iso, "E(%s)^contra" % F.name)


# ---------------------------------------------------------------------------
# star embeddings


def star_twist_exponents(grading, ia, iap, jb, jbp, variant="morphism"):
    """Signs (alpha (x) id, id (x) beta) entering the twist of X * Y.

    "morphism" derives both from the star formula for morphisms; "extra-term"
    keeps the extra <iota - i_a' + i_a, j_b'> on the second term.
    """
    g = grading
    first = g.pair(deg_add(deg_sub(g.iota, iap), ia), jb)
    second = g.pair(ia, g.iota)
    if variant == "extra-term":
        second = (second + g.pair(g.iota, jbp)) % 2
    return first, second


def star_morphism_exponent(grading, k, iap, ia, jbp, l):
    g = grading
    return (g.pair(deg_add(deg_sub(k, iap), ia), jbp) + g.pair(ia, l)) % 2


def star_sb_exponent(grading, k, l, i, ip, j, jp):
    """Closed form <k, j'> + <i, j' + l + j> for f^{i'}_i * g^{j'}_j."""
    g = grading
    return (g.pair(k, jp) + g.pair(i, deg_add(deg_add(jp, l), j))) % 2


def star_object(CD, X, Y, variant="morphism"):
    """X * Y over the tensor category CD; summand (a, b) sits at a*|Y| + b."""
    g = CD.grading
    L, R = CD.left, CD.right
    nB = len(Y)
    summands = [(deg_add(ia, jb), (x, y)) for ia, x in X.summands for jb, y in Y.summands]
    twist = {}
    for (ap, a), v in X.twist_dict().items():
        for b, (jb, y) in enumerate(Y.summands):
            e, _ = star_twist_exponents(g, X.shift(a), X.shift(ap), jb, jb, variant)
            s = -1 if e else 1
            idy = R.identity_vec(y)
            vec = {(t, u): s * c * d for t, c in v.items() for u, d in idy.items()}
            vadd(twist.setdefault((ap * nB + b, a * nB + b), {}), vec)
    for (bp, b), v in Y.twist_dict().items():
        for a, (ia, x) in enumerate(X.summands):
            _, e = star_twist_exponents(g, ia, ia, Y.shift(b), Y.shift(bp), variant)
            s = -1 if e else 1
            idx = L.identity_vec(x)
            vec = {(t, u): s * c * d for t, c in idx.items() for u, d in v.items()}
            vadd(twist.setdefault((a * nB + bp, a * nB + b), {}), vec)
    return TwixObject.build(summands, twist)


def star_functor(E_left, E_right, variant="morphism", objects=None):
    """The embedding E(C) (x) E(D) -> E(C (x) D), as functor data.

    Returns (functor, tensor of envelopes, envelope of tensor)."""
    CD = TensorCategory(E_left.base, E_right.base)
    kind = E_left.kind if E_left.kind == E_right.kind else "twix"
    target = TwixCategory(CD, kind)
    source = TensorCategory(E_left, E_right, objects)
    g = CD.grading

    def on_obj(p):
        return star_object(CD, p[0], p[1], variant)

    def on_basis(s, t, key):
        (X, Y), (Xp, Yp) = s, t
        (ap, a, f), (bp, b, h) = key
        k = E_left.key_degree(X, Xp, (ap, a, f))
        l = E_right.key_degree(Y, Yp, (bp, b, h))
        e = star_morphism_exponent(g, k, Xp.shift(ap), X.shift(a), Yp.shift(bp), l)
        nB, nBp = len(Y), len(Yp)
        return {(ap * nBp + bp, a * nB + b, (f, h)): CD.field(-1 if e else 1)}

    return Functor(source, target, on_obj, on_basis, "star[%s]" % kind), source, target


def product_order(X, Y):
    """A linear extension of the product of the one-sided orders, or None."""
    ox, oy = is_one_sided(X), is_one_sided(Y)
    if ox is None or oy is None:
        return None
    px = {a: n for n, a in enumerate(ox)}
    py = {b: n for n, b in enumerate(oy)}
    nB = len(Y)
    cells = sorted(((px[a] + py[b], px[a], a * nB + b) for a in range(len(X)) for b in range(nB)))
    return [c for _, _, c in cells]


# ---------------------------------------------------------------------------
# Koszul sign bookkeeping


class SignTrace:
    """A row of tensor legs with degrees and a running Z/2 sign.

    ``swap(p)`` exchanges legs p and p+1 and adds <|x|, |y|>; ``arrange``
    reaches a target order by bubble sort, logging every transposition.
    """

    def __init__(self, grading, legs):
        self.grading = grading
        self.legs = [(name, tuple(d)) for name, d in legs]
        names = [n for n, _ in self.legs]
        if len(set(names)) != len(names):
            raise ValueError("leg names must be distinct")
        self.sign = 0
        self.log = []

    def swap(self, p):
        if not 0 <= p < len(self.legs) - 1:
            raise ValueError("no adjacent pair at position %d" % p)
        (x, dx), (y, dy) = self.legs[p], self.legs[p + 1]
        e = self.grading.pair(dx, dy)
        self.sign ^= e
        self.log.append((x, y, e))
        self.legs[p], self.legs[p + 1] = self.legs[p + 1], self.legs[p]

    def arrange(self, target):
        names = [n for n, _ in self.legs]
        if sorted(map(repr, target)) != sorted(map(repr, names)):
            raise ValueError("target is not a rearrangement of the legs")
        rank = {n: k for k, n in enumerate(target)}
        changed = True
        while changed:
            changed = False
            for p in range(len(self.legs) - 1):
                if rank[self.legs[p][0]] > rank[self.legs[p + 1][0]]:
                    self.swap(p)
                    changed = True
        return self.sign

    def charge(self, a, b):
        """Add <a, b> for a rule that is not a transposition."""
        self.sign ^= self.grading.pair(a, b)
        self.log.append(("rule", (a, b)))
        return self.sign


def koszul_oracle(trace, target):
    """Sign exponent of rearranging ``trace`` into ``target`` order."""
    return trace.arrange(target)


def oracle_star_sb(grading, k, l, i, ip, j, jp):
    """Rearrange (phi' f phi^-1) (x) (psi' g psi^-1) into
    (phi' (x) psi')(f (x) g)(phi (x) psi)^-1 by transpositions."""
    t = SignTrace(grading, [("phi'", ip), ("f", k), ("phi^-1", deg_neg(i)),
                            ("psi'", jp), ("g", l), ("psi^-1", deg_neg(j))])
    t.arrange(["phi'", "psi'", "f", "g", "phi^-1", "psi^-1"])
    # (phi^-1 (x) psi^-1) = (-1)^<i,j> (phi (x) psi)^-1
    t.charge(i, j)
    return t.sign


def oracle_op_sb(grading, i, j, k):
    """(phi_i f phi_j^-1)^op reversed leg by leg, then the shift maps
    identified with those of the opposite envelope."""
    t = SignTrace(grading, [("phi", i), ("f", k), ("phi^-1", deg_neg(j))])
    t.arrange(["phi^-1", "f", "phi"])
    # (phi_i)^op is (-1)^<i,i> times the inverse shift map of C^op, because
    # (phi_i)^op o (phi_i^-1)^op = (-1)^<i,i> id and (phi_j^-1)^op is taken as
    # the plain shift map.
    t.charge(i, i)
    return t.sign


def op_sb_exponent(grading, i, j, k):
    """Closed form <i + j, i + |f|> for (f^i_j)^op."""
    return grading.pair(deg_add(i, j), deg_add(i, k))


def op_composition_exponent(grading, kf, kg):
    """f^op o g^op = (-1)^e (g o f)^op with e = <|f|, |g|>."""
    return grading.pair(kf, kg)


def oracle_op_composition(grading, kf, kg):
    t = SignTrace(grading, [("f", kf), ("g", kg)])
    return t.arrange(["g", "f"])


def degree_tuples(grading, arity, values=range(-2, 3), samples=None, rng=None):
    """All arity-tuples of degrees with coordinates in ``values``, or a seeded
    sample of ``samples`` of them when the full product is too large."""
    coords = list(values)
    degrees = list(itertools.product(coords, repeat=grading.rank))
    if samples is None or len(degrees) ** arity <= samples:
        yield from itertools.product(degrees, repeat=arity)
        return
    for _ in range(samples):
        yield tuple(rng.choice(degrees) for _ in range(arity))


def sign_oracle_sweep(grading, values=range(-2, 3), samples=20000, seed=0):
    """Compare closed-form exponents with transposition oracles: the star of
    shifted morphisms, the op of shifted morphisms and composition in the
    opposite category.  Exhaustive when the tuple space has at most
    ``samples`` points, otherwise a seeded sample."""
    import random
    from .report import VerificationReport, PASS, FAIL
    rng = random.Random(seed)
    rep = VerificationReport("sign-oracles")
    rep.seed = seed
    cases = [
        ("star-sb", 6, star_sb_exponent, oracle_star_sb),
        ("op-sb", 3, op_sb_exponent, oracle_op_sb),
        ("op-composition", 2, op_composition_exponent, oracle_op_composition),
    ]
    for name, arity, closed, oracle in cases:
        count, bad = 0, None
        for tup in degree_tuples(grading, arity, values, samples, rng):
            count += 1
            if closed(grading, *tup) != oracle(grading, *tup):
                bad = {"degrees": [list(d) for d in tup]}
                break
        rep.add(name, FAIL if bad else PASS, bad or {"cases": count})
    return rep
