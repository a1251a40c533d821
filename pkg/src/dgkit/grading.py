"""The grading group Z^n with its symmetric mod-2 pairing and the degree iota."""

from __future__ import annotations

from dataclasses import dataclass, field


class DimensionError(ValueError):
    pass


def deg_add(a, b):
    if len(a) != len(b):
        raise DimensionError("degree length mismatch: %r vs %r" % (a, b))
    return tuple(x + y for x, y in zip(a, b))


def deg_sub(a, b):
    if len(a) != len(b):
        raise DimensionError("degree length mismatch: %r vs %r" % (a, b))
    return tuple(x - y for x, y in zip(a, b))


def deg_neg(a):
    return tuple(-x for x in a)


def deg_scale(n, a):
    return tuple(n * x for x in a)


def deg_sum(degs, rank):
    out = (0,) * rank
    for d in degs:
        out = deg_add(out, d)
    return out


@dataclass(frozen=True)
class GradingSpec:
    """Gamma = Z^rank with <a,b> = a^T P b mod 2 and a chosen iota.

    ``order`` is an optional weight vector w; when present the negative cone is
    {g : w.g < 0}, which induces the partial order used for non-positivity
    arguments.  ``height`` is the functional used for degree windows; it
    defaults to the first coordinate on which iota is nonzero.
    """

    rank: int
    pairing: tuple
    iota: tuple
    order: tuple | None = None
    height_weights: tuple | None = field(default=None)

    def __post_init__(self):
        n = self.rank
        P = tuple(tuple(int(x) % 2 for x in row) for row in self.pairing)
        object.__setattr__(self, "pairing", P)
        object.__setattr__(self, "iota", tuple(int(x) for x in self.iota))
        if len(P) != n or any(len(row) != n for row in P):
            raise DimensionError("pairing must be %dx%d" % (n, n))
        if len(self.iota) != n:
            raise DimensionError("iota must have length %d" % n)
        for i in range(n):
            for j in range(n):
                if P[i][j] != P[j][i]:
                    raise ValueError("pairing is not symmetric mod 2")
        if self.pair(self.iota, self.iota) != 1:
            raise ValueError("<iota, iota> must be 1")
        if self.order is not None and len(self.order) != n:
            raise DimensionError("order weights must have length %d" % n)
        if self.height_weights is None:
            w = [0] * n
            for i, x in enumerate(self.iota):
                if x:
                    w[i] = 1 if x > 0 else -1
                    break
            object.__setattr__(self, "height_weights", tuple(w))

    # pairing -----------------------------------------------------------
    def pair(self, a, b):
        n = self.rank
        if len(a) != n or len(b) != n:
            raise DimensionError("degrees must have length %d" % n)
        P = self.pairing
        s = 0
        for i in range(n):
            if a[i] & 1:
                row = P[i]
                for j in range(n):
                    if row[j] and b[j] & 1:
                        s ^= 1
        return s

    def ip(self, a):
        """<iota, a> mod 2."""
        return self.pair(self.iota, a)

    def sign(self, a, b):
        return -1 if self.pair(a, b) else 1

    # arithmetic ----------------------------------------------------------
    @property
    def zero(self):
        return (0,) * self.rank

    def degree(self, *coords):
        if len(coords) == 1 and isinstance(coords[0], (tuple, list)):
            coords = tuple(coords[0])
        if len(coords) != self.rank:
            raise DimensionError("expected %d coordinates" % self.rank)
        return tuple(int(c) for c in coords)

    def add(self, a, b):
        return deg_add(a, b)

    def sub(self, a, b):
        return deg_sub(a, b)

    def neg(self, a):
        return deg_neg(a)

    def scale(self, n, a):
        return deg_scale(n, a)

    def height(self, a):
        return sum(w * x for w, x in zip(self.height_weights, a))

    # order ---------------------------------------------------------------
    def is_negative(self, a):
        if self.order is None:
            raise ValueError("no negative cone declared")
        return sum(w * x for w, x in zip(self.order, a)) < 0

    def leq(self, a, b):
        """a <= b, i.e. a - b lies in the negative cone or is zero."""
        d = deg_sub(a, b)
        return d == self.zero or self.is_negative(d)


def classical_spec():
    """Gamma = Z, <i,j> = ij mod 2, iota = 1 (cochain complexes)."""
    return GradingSpec(1, ((1,),), (1,), order=(1,))


def pair(g, a, b):
    return g.pair(a, b)
