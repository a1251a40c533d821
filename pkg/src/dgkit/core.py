"""Finitely presented dg categories, morphisms, dg functors and axiom checks.

A dg category here is anything implementing the small :class:`DgCategory`
protocol: finite hom bases with degrees, a differential and composition on
basis elements, and identity vectors.  Everything else (linear extension,
homogeneity, the checks) is derived from those five methods.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .grading import GradingSpec, deg_add
from .linalg import vadd, vscale, solve, Echelon
from .report import VerificationReport, PASS, FAIL


class CompositionError(ValueError):
    pass


class DegreeError(ValueError):
    pass


class DgCategory:
    """Protocol for dg categories with finite hom bases.

    Subclasses implement ``_hom``, ``_d``, ``_mul``, ``_identity`` and set
    ``grading`` and ``field``.  Hom bases are memoized per object pair.
    """

    grading: GradingSpec
    field = None

    def __init__(self):
        self._hom_cache = {}

    # --- protocol ---------------------------------------------------------
    def _hom(self, x, y):
        """Return an ordered list of (key, degree) spanning hom(x, y)."""
        raise NotImplementedError

    def _d(self, x, y, key):
        raise NotImplementedError

    def _mul(self, x, y, z, g, f):
        """Composite g o f for basis g in hom(y, z) and f in hom(x, y)."""
        raise NotImplementedError

    def _identity(self, x):
        raise NotImplementedError

    def objects(self):
        """A finite list of objects used by exhaustive checks."""
        return []

    # --- cached access ----------------------------------------------------
    def hom(self, x, y):
        try:
            return self._hom_cache[(x, y)]
        except KeyError:
            entries = list(self._hom(x, y))
            degs = dict(entries)
            if len(degs) != len(entries):
                raise ValueError("duplicate basis keys in hom(%r, %r)" % (x, y))
            self._hom_cache[(x, y)] = (tuple(k for k, _ in entries), degs)
            return self._hom_cache[(x, y)]

    def basis(self, x, y):
        return self.hom(x, y)[0]

    def key_degree(self, x, y, key):
        return self.hom(x, y)[1][key]

    def dim(self, x, y):
        return len(self.basis(x, y))

    # --- linear extension -------------------------------------------------
    def d_vec(self, x, y, vec):
        out = {}
        for k, c in vec.items():
            vadd(out, self._d(x, y, k), c)
        return out

    def mul_vec(self, x, y, z, gv, fv):
        out = {}
        for g, a in gv.items():
            for f, b in fv.items():
                vadd(out, self._mul(x, y, z, g, f), a * b)
        return out

    def identity_vec(self, x):
        return self._identity(x)

    # --- morphism helpers -------------------------------------------------
    def morphism(self, x, y, vec, degree=None):
        return Morphism.make(self, x, y, vec, degree)

    def basis_morphism(self, x, y, key):
        return Morphism(self, x, y, self.key_degree(x, y, key), {key: self.field.one})

    def basis_morphisms(self, x, y):
        return [self.basis_morphism(x, y, k) for k in self.basis(x, y)]

    def id(self, x):
        return Morphism(self, x, x, self.grading.zero, dict(self._identity(x)))

    def zero(self, x, y, degree):
        return Morphism(self, x, y, tuple(degree), {})

    def hom_keys_of_degree(self, x, y, degree):
        keys, degs = self.hom(x, y)
        return [k for k in keys if degs[k] == degree]

    def hom_degrees(self, x, y):
        keys, degs = self.hom(x, y)
        return sorted(set(degs.values()))


@dataclass
class Morphism:
    """A homogeneous morphism: a vector over the basis of hom(src, dst)."""

    cat: DgCategory
    src: object
    dst: object
    degree: tuple
    vec: dict

    @classmethod
    def make(cls, cat, x, y, vec, degree=None):
        vec = {k: cat.field(c) for k, c in vec.items() if c}
        degs = cat.hom(x, y)[1]
        found = set()
        for k in vec:
            if k not in degs:
                raise KeyError("%r is not a basis element of hom(%r, %r)" % (k, x, y))
            found.add(degs[k])
        if len(found) > 1:
            raise DegreeError("inhomogeneous morphism with degrees %r" % sorted(found))
        if found:
            (d,) = found
            if degree is not None and tuple(degree) != d:
                raise DegreeError("declared degree %r but entries have degree %r" % (degree, d))
            degree = d
        if degree is None:
            raise DegreeError("the zero morphism needs an explicit degree")
        return cls(cat, x, y, tuple(degree), vec)

    # arithmetic
    def _same(self, other):
        if (self.cat is not other.cat or self.src != other.src or self.dst != other.dst):
            raise CompositionError("morphisms live in different hom spaces")
        if self.vec and other.vec and self.degree != other.degree:
            raise DegreeError("cannot add morphisms of degrees %r and %r" % (self.degree, other.degree))

    def __add__(self, other):
        self._same(other)
        deg = self.degree if self.vec or not other.vec else other.degree
        return Morphism(self.cat, self.src, self.dst, deg, vadd(dict(self.vec), other.vec))

    def __sub__(self, other):
        return self + (-1) * other

    def __neg__(self):
        return (-1) * self

    def __rmul__(self, c):
        return Morphism(self.cat, self.src, self.dst, self.degree, vscale(self.vec, c))

    def __matmul__(self, other):
        return compose(self, other)

    def __eq__(self, other):
        if not isinstance(other, Morphism):
            return NotImplemented
        return (self.cat is other.cat and self.src == other.src and self.dst == other.dst
                and self.vec == other.vec and (not self.vec or self.degree == other.degree))

    def is_zero(self):
        return not self.vec

    def __repr__(self):
        return "Morphism(%r -> %r, deg %r, %r)" % (self.src, self.dst, self.degree, self.vec)


def compose(g, f):
    """g o f."""
    if f.dst != g.src or f.cat is not g.cat:
        raise CompositionError("cannot compose %r after %r" % (g.dst, f.src))
    C = g.cat
    vec = C.mul_vec(f.src, f.dst, g.dst, g.vec, f.vec)
    return Morphism(C, f.src, g.dst, deg_add(g.degree, f.degree), vec)


def differential(f):
    C = f.cat
    return Morphism(C, f.src, f.dst, deg_add(f.degree, C.grading.iota), C.d_vec(f.src, f.dst, f.vec))


def is_closed(f):
    return differential(f).is_zero()


def _exact_system(C, x, y, target_degree):
    g = C.grading
    src_deg = g.sub(target_degree, g.iota)
    cols = {k: C._d(x, y, k) for k in C.hom_keys_of_degree(x, y, src_deg)}
    return cols, src_deg


def is_exact(f):
    """Return h with d(h) = f, or None if f is not a boundary."""
    C = f.cat
    cols, src_deg = _exact_system(C, f.src, f.dst, f.degree)
    sol = solve(cols, f.vec)
    if sol is None:
        return None
    return Morphism(C, f.src, f.dst, src_deg, sol)


def is_isomorphism(f):
    """Return a two-sided inverse of a closed degree-0 morphism, or None."""
    C = f.cat
    g = C.grading
    if f.degree != g.zero or not is_closed(f):
        return None
    x, y = f.src, f.dst
    keys = C.hom_keys_of_degree(y, x, g.zero)
    # unknown h in hom(y, x); equations h o f = id_x and f o h = id_y
    cols = {}
    for k in keys:
        left = C.mul_vec(x, y, x, {k: 1}, f.vec)
        right = C.mul_vec(y, x, y, f.vec, {k: 1})
        col = {("L", a): c for a, c in left.items()}
        col.update({("R", a): c for a, c in right.items()})
        cols[k] = col
    target = {("L", a): c for a, c in C.identity_vec(x).items()}
    target.update({("R", a): c for a, c in C.identity_vec(y).items()})
    sol = solve(cols, target)
    if sol is None:
        return None
    return Morphism(C, y, x, g.zero, sol)


# ---------------------------------------------------------------------------
# Concrete presentations


class Presentation(DgCategory):
    """A dg category given by explicit finite data.

    hom:      {(x, y): [(label, degree), ...]}   basis of morphisms x -> y
    diff:     {(x, y, label): {label: coeff}}    missing entries mean zero
    comp:     {(x, y, z, g, f): {label: coeff}}  g: y -> z after f: x -> y
    identity: {x: {label: coeff}}
    Composition with identities is filled in automatically when the identity
    of an object is a single basis element.
    """

    def __init__(self, grading, field, objects, hom, diff, comp, identity,
                 window=None, twix=None, name=None):
        super().__init__()
        self.grading = grading
        self.field = field
        self._objects = list(objects)
        self.hom_data = {k: [(lab, tuple(d)) for lab, d in v] for k, v in hom.items()}
        self.diff = {k: {a: field(c) for a, c in v.items() if c} for k, v in diff.items()}
        self.comp = {k: {a: field(c) for a, c in v.items() if c} for k, v in comp.items()}
        self.identity_data = {x: {a: field(c) for a, c in v.items() if c} for x, v in identity.items()}
        self.window = window
        self.twix = dict(twix or {})
        self.name = name
        self._fill_units()

    def _fill_units(self):
        for x, iv in self.identity_data.items():
            if len(iv) != 1:
                continue
            (u, c), = iv.items()
            if c != 1:
                continue
            for y in self._objects:
                for lab, _ in self.hom_data.get((x, y), []):
                    self.comp.setdefault((x, x, y, lab, u), {lab: self.field.one})
                for lab, _ in self.hom_data.get((y, x), []):
                    self.comp.setdefault((y, x, x, u, lab), {lab: self.field.one})

    def objects(self):
        return list(self._objects)

    def _hom(self, x, y):
        return self.hom_data.get((x, y), [])

    def _d(self, x, y, key):
        return self.diff.get((x, y, key), {})

    def _mul(self, x, y, z, g, f):
        return self.comp.get((x, y, z, g, f), {})

    def _identity(self, x):
        return self.identity_data.get(x, {})

    def structurally_equal(self, other):
        return (self.grading == other.grading and self.field == other.field
                and self._objects == other._objects
                and {k: v for k, v in self.hom_data.items() if v} == {k: v for k, v in other.hom_data.items() if v}
                and {k: v for k, v in self.diff.items() if v} == {k: v for k, v in other.diff.items() if v}
                and {k: v for k, v in self.comp.items() if v} == {k: v for k, v in other.comp.items() if v}
                and self.identity_data == other.identity_data
                and self.window == other.window
                and self.twix == other.twix)


# ---------------------------------------------------------------------------
# Axiom checks


def _first(report, name, witness_iter):
    for w in witness_iter:
        report.add(name, FAIL, w)
        return
    report.add(name, PASS)


def check_axioms(C, objects=None, report=None):
    """Exhaustive d^2 = 0, Leibniz, associativity and unit checks."""
    rep = report or VerificationReport("axioms")
    obs = list(C.objects() if objects is None else objects)
    g = C.grading
    iota = g.iota

    def degree_failures():
        for x, y in itertools.product(obs, obs):
            keys, degs = C.hom(x, y)
            for k in keys:
                want = deg_add(degs[k], iota)
                for t in C._d(x, y, k):
                    if degs.get(t) != want:
                        yield {"hom": [x, y], "basis": k, "term": t}
            for z in obs:
                for a in C.basis(y, z):
                    for b in keys:
                        want = deg_add(C.key_degree(y, z, a), degs[b])
                        for t in C._mul(x, y, z, a, b):
                            if C.key_degree(x, z, t) != want:
                                yield {"compose": [a, b], "term": t}

    def d2_failures():
        for x, y in itertools.product(obs, obs):
            for k in C.basis(x, y):
                dd = C.d_vec(x, y, C._d(x, y, k))
                if dd:
                    yield {"hom": [x, y], "basis": k, "d2": dd}

    def leibniz_failures():
        for x, y, z in itertools.product(obs, obs, obs):
            for a in C.basis(y, z):
                sa = g.ip(C.key_degree(y, z, a))
                da = C._d(y, z, a)
                for b in C.basis(x, y):
                    lhs = C.d_vec(x, z, C._mul(x, y, z, a, b))
                    rhs = C.mul_vec(x, y, z, da, {b: 1})
                    vadd(rhs, C.mul_vec(x, y, z, {a: 1}, C._d(x, y, b)), -1 if sa else 1)
                    if vadd(lhs, rhs, -1):
                        yield {"g": a, "f": b, "objects": [x, y, z]}

    def assoc_failures():
        for w, x, y, z in itertools.product(obs, obs, obs, obs):
            for a in C.basis(y, z):
                for b in C.basis(x, y):
                    ab = C._mul(x, y, z, a, b)
                    for c in C.basis(w, x):
                        lhs = C.mul_vec(w, x, z, ab, {c: 1})
                        rhs = C.mul_vec(w, y, z, {a: 1}, C._mul(w, x, y, b, c))
                        if vadd(lhs, rhs, -1):
                            yield {"h": a, "g": b, "f": c}

    def unit_failures():
        for x in obs:
            ix = C.identity_vec(x)
            if not ix:
                yield {"object": x, "problem": "missing identity"}
                continue
            if any(C.key_degree(x, x, k) != g.zero for k in ix):
                yield {"object": x, "problem": "identity not of degree 0"}
            if C.d_vec(x, x, ix):
                yield {"object": x, "problem": "identity not closed"}
            for y in obs:
                for k in C.basis(x, y):
                    if C.mul_vec(x, y, y, C.identity_vec(y), {k: 1}) != {k: 1}:
                        yield {"object": y, "problem": "not a left unit", "basis": k}
                    if C.mul_vec(x, x, y, {k: 1}, ix) != {k: 1}:
                        yield {"object": x, "problem": "not a right unit", "basis": k}

    _first(rep, "degrees", degree_failures())
    _first(rep, "d^2=0", d2_failures())
    _first(rep, "leibniz", leibniz_failures())
    _first(rep, "associativity", assoc_failures())
    _first(rep, "units", unit_failures())
    return rep


# ---------------------------------------------------------------------------
# dg functors as extensional data


class Functor:
    """A dg functor given by an object map and a map on basis morphisms.

    ``on_basis(x, y, key)`` returns the image of a basis element of
    hom_source(x, y) as a vector in hom_target(F x, F y).
    """

    def __init__(self, source, target, on_objects, on_basis, name="F"):
        self.source = source
        self.target = target
        self.on_objects = on_objects
        self.on_basis = on_basis
        self.name = name

    def obj(self, x):
        return self.on_objects(x)

    def map_vec(self, x, y, vec):
        out = {}
        for k, c in vec.items():
            vadd(out, self.on_basis(x, y, k), c)
        return out

    def __call__(self, f):
        if isinstance(f, Morphism):
            return Morphism(self.target, self.obj(f.src), self.obj(f.dst), f.degree,
                            self.map_vec(f.src, f.dst, f.vec))
        return self.obj(f)


def check_functor(F, objects, report=None, fully_faithful=False):
    """Degree, differential, composition and unit compatibility on basis."""
    rep = report or VerificationReport("functor:" + F.name)
    S, T = F.source, F.target
    obs = list(objects)

    def degree_failures():
        for x, y in itertools.product(obs, obs):
            Fx, Fy = F.obj(x), F.obj(y)
            for k in S.basis(x, y):
                want = S.key_degree(x, y, k)
                for t in F.on_basis(x, y, k):
                    if T.key_degree(Fx, Fy, t) != want:
                        yield {"basis": k, "objects": [x, y]}

    def d_failures():
        for x, y in itertools.product(obs, obs):
            Fx, Fy = F.obj(x), F.obj(y)
            for k in S.basis(x, y):
                lhs = F.map_vec(x, y, S._d(x, y, k))
                rhs = T.d_vec(Fx, Fy, F.on_basis(x, y, k))
                if vadd(lhs, rhs, -1):
                    yield {"basis": k, "objects": [x, y], "defect": lhs}

    def comp_failures():
        for x, y, z in itertools.product(obs, obs, obs):
            Fx, Fy, Fz = F.obj(x), F.obj(y), F.obj(z)
            for a in S.basis(y, z):
                Fa = F.on_basis(y, z, a)
                for b in S.basis(x, y):
                    lhs = F.map_vec(x, z, S._mul(x, y, z, a, b))
                    rhs = T.mul_vec(Fx, Fy, Fz, Fa, F.on_basis(x, y, b))
                    if vadd(lhs, rhs, -1):
                        yield {"g": a, "f": b, "objects": [x, y, z]}

    def unit_failures():
        for x in obs:
            if F.map_vec(x, x, S.identity_vec(x)) != T.identity_vec(F.obj(x)):
                yield {"object": x}

    _first(rep, "degree", degree_failures())
    _first(rep, "commutes-with-d", d_failures())
    _first(rep, "composition", comp_failures())
    _first(rep, "units", unit_failures())
    if fully_faithful:
        def ff_failures():
            for x, y in itertools.product(obs, obs):
                Fx, Fy = F.obj(x), F.obj(y)
                e = Echelon()
                for k in S.basis(x, y):
                    e.add(F.on_basis(x, y, k))
                if e.rank != T.dim(Fx, Fy):
                    yield {"objects": [x, y], "rank": e.rank, "target_dim": T.dim(Fx, Fy)}
        _first(rep, "fully-faithful", ff_failures())
    return rep


def compose_functors(G, F, name=None):
    """G o F."""
    def on_basis(x, y, k):
        return G.map_vec(F.obj(x), F.obj(y), F.on_basis(x, y, k))
    return Functor(F.source, G.target, lambda x: G.obj(F.obj(x)), on_basis,
                   name or "%s*%s" % (G.name, F.name))


def identity_functor(C):
    return Functor(C, C, lambda x: x, lambda x, y, k: {k: C.field.one}, "id")


def functors_equal(F, G, objects):
    """Return None if F and G agree on the given objects, else a witness."""
    for x in objects:
        if F.obj(x) != G.obj(x):
            return {"object": x}
    for x, y in itertools.product(objects, objects):
        for k in F.source.basis(x, y):
            if F.on_basis(x, y, k) != G.on_basis(x, y, k):
                return {"basis": k, "objects": [x, y]}
    return None


# ---------------------------------------------------------------------------
# Graded modules and linear maps (the k-module level)


@dataclass(frozen=True)
class GradedModule:
    """A free graded module given by labelled basis elements and degrees."""

    basis: tuple  # ((label, degree), ...)

    def __post_init__(self):
        labels = [b for b, _ in self.basis]
        if len(set(labels)) != len(labels):
            raise ValueError("basis labels must be unique")

    def degree(self, label):
        return dict(self.basis)[label]

    @property
    def labels(self):
        return tuple(b for b, _ in self.basis)

    def __len__(self):
        return len(self.basis)


@dataclass
class LinearMap:
    """A homogeneous map; ``columns[src_label]`` is the image vector."""

    source: GradedModule
    target: GradedModule
    degree: tuple
    columns: dict

    def __post_init__(self):
        sd = dict(self.source.basis)
        td = dict(self.target.basis)
        for a, col in self.columns.items():
            for b, c in col.items():
                if c and td[b] != deg_add(sd[a], self.degree):
                    raise DegreeError("entry (%r,%r) breaks homogeneity" % (b, a))

    def apply(self, vec):
        out = {}
        for a, c in vec.items():
            vadd(out, self.columns.get(a, {}), c)
        return out

    def __matmul__(self, other):
        cols = {a: self.apply(other.columns.get(a, {})) for a in other.source.labels}
        return LinearMap(other.source, self.target, deg_add(self.degree, other.degree), cols)

    def equals(self, other):
        return all(vadd(dict(self.columns.get(a, {})), other.columns.get(a, {}), -1) == {}
                   for a in self.source.labels)


def identity_map(M, one=1):
    return LinearMap(M, M, (0,) * len(M.basis[0][1]) if M.basis else (), {a: {a: one} for a in M.labels})


def module_tensor(M, N):
    """Basis: ordered pairs, degrees add."""
    return GradedModule(tuple(((a, b), deg_add(da, db)) for a, da in M.basis for b, db in N.basis))


def map_tensor(grading, f, g):
    """(f (x) g)(m (x) n) = (-1)^<|g|,|m|> f(m) (x) g(n)."""
    src = module_tensor(f.source, g.source)
    tgt = module_tensor(f.target, g.target)
    md = dict(f.source.basis)
    cols = {}
    for m in f.source.labels:
        fm = f.columns.get(m, {})
        s = grading.sign(g.degree, md[m])
        for n in g.source.labels:
            gn = g.columns.get(n, {})
            cols[(m, n)] = {(a, b): s * x * y for a, x in fm.items() for b, y in gn.items() if x * y}
    return LinearMap(src, tgt, deg_add(f.degree, g.degree), cols)


def module_shift_left(grading, j, M):
    """q^j M: the same basis with degrees raised by j."""
    return GradedModule(tuple((a, deg_add(d, j)) for a, d in M.basis))


module_shift_right = module_shift_left


def shift_map_left(grading, j, f):
    """q^j f = (-1)^<j,|f|> f."""
    s = grading.sign(j, f.degree)
    return LinearMap(module_shift_left(grading, j, f.source), module_shift_left(grading, j, f.target),
                     f.degree, {a: vscale(c, s) for a, c in f.columns.items()})


def shift_map_right(grading, j, f):
    """f q^j acts with no sign."""
    return LinearMap(module_shift_right(grading, j, f.source), module_shift_right(grading, j, f.target),
                     f.degree, {a: dict(c) for a, c in f.columns.items()})


def shift_comparison(grading, j, M):
    """q^j M -> M q^j, m |-> (-1)^<j,|m|> m (|m| the degree in M)."""
    L = module_shift_left(grading, j, M)
    R = module_shift_right(grading, j, M)
    return LinearMap(L, R, grading.zero, {a: {a: grading.sign(j, d)} for a, d in M.basis})
