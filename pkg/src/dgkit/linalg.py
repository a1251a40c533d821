"""Sparse exact linear algebra over a coefficient field.

Vectors are plain dicts mapping hashable keys to nonzero scalars.  All
elimination is exact: rows are kept fully reduced, so a single pass reduces
any vector to its normal form modulo the span.
"""

from __future__ import annotations


def vadd(acc, vec, c=1):
    """acc += c * vec, in place; zero entries are dropped."""
    if not c:
        return acc
    for k, x in vec.items():
        y = acc.get(k)
        z = x * c if y is None else y + x * c
        if z:
            acc[k] = z
        elif y is not None:
            del acc[k]
    return acc


def vscale(vec, c):
    if not c:
        return {}
    return {k: x * c for k, x in vec.items()}


def vsum(pairs):
    """Sum of c * vec over an iterable of (c, vec)."""
    acc = {}
    for c, v in pairs:
        vadd(acc, v, c)
    return acc


def vclean(vec):
    return {k: x for k, x in vec.items() if x}


def vequal(u, v):
    return vclean(u) == vclean(v)


class Echelon:
    """Incrementally maintained reduced row echelon form.

    Each stored row remembers, in ``combo``, how it was built from the vectors
    passed to :meth:`add`; this is what :func:`solve` uses.
    """

    def __init__(self, order=None, track=False):
        self.rows = {}      # pivot -> row (pivot entry is 1)
        self.combos = {}    # pivot -> {tag: coeff}
        self.order = order
        self.track = track

    def __len__(self):
        return len(self.rows)

    rank = property(__len__)

    def reduce(self, vec, combo=None):
        """Return vec minus its projection onto the span (and update combo)."""
        v = dict(vec)
        for k in [k for k in v if k in self.rows]:
            c = v.get(k)
            if not c:
                continue
            vadd(v, self.rows[k], -c)
            if combo is not None:
                vadd(combo, self.combos[k], -c)
        return v

    def _pivot(self, v):
        if self.order is None:
            return next(iter(v))
        return max(v, key=self.order)

    def add(self, vec, tag=None):
        """Insert vec; return True if it enlarged the span."""
        combo = {tag: 1} if self.track else None
        v = self.reduce(vec, combo)
        if not v:
            return False
        p = self._pivot(v)
        inv = 1 / v[p]
        v = {k: x * inv for k, x in v.items()}
        if combo is not None:
            combo = {k: x * inv for k, x in combo.items()}
        for q, row in self.rows.items():
            c = row.get(p)
            if c:
                vadd(row, v, -c)
                if self.track:
                    vadd(self.combos[q], combo, -c)
        self.rows[p] = v
        if self.track:
            self.combos[p] = combo
        return True

    def contains(self, vec):
        return not self.reduce(vec)


def rank(vectors, order=None):
    e = Echelon(order=order)
    for v in vectors:
        e.add(v)
    return e.rank


def solve(columns, target):
    """Find coefficients x with sum_t x[t] * columns[t] == target.

    ``columns`` maps tags to vectors.  Returns a dict tag -> coeff, or None
    when target is not in the span.
    """
    e = Echelon(track=True)
    for t, col in columns.items():
        e.add(col, t)
    combo = {}
    rest = e.reduce(target, combo)
    if rest:
        return None
    return {t: -c for t, c in combo.items() if c}


class Quotient:
    """The quotient V / W of a finite-basis space by the span of relations.

    ``normal(v)`` gives the unique representative supported on the surviving
    basis keys; those keys form the quotient basis.
    """

    def __init__(self, keys, relations, order=None):
        keys = list(keys)
        pos = {k: i for i, k in enumerate(keys)}
        self.echelon = Echelon(order=order or pos.__getitem__)
        for rel in relations:
            self.echelon.add(rel)
        self.basis = [k for k in keys if k not in self.echelon.rows]

    @property
    def dim(self):
        return len(self.basis)

    def normal(self, vec):
        return self.echelon.reduce(vec)


class GradedMatrix:
    """A linear map between graded pieces, stored as column dicts."""

    def __init__(self, columns):
        self.columns = columns

    def rank(self):
        return rank(self.columns.values())
