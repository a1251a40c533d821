"""Reading and writing ``.dgc`` presentation files.

The format is line oriented.  ``#`` starts a comment.  Blocks::

    grading
      rank 1
      pairing 1            # row-major, rank*rank entries in {0,1}
      iota 1
      order 1              # optional weights defining the negative cone
    end
    ring rational          # or: ring mod 5
    window -6..6           # optional degree window (on the height functional)
    objects
      X Y
    end
    hom X Y
      f [0]
      g [-1]
    end
    identity X = e11 + e22
    diff X Y
      g = f
    end
    comp X Y Z             # entries "g f = ..." mean g o f, f: X->Y, g: Y->Z
      h f = 2 k - 1/3 m
    end
    twix T
      summand [-1] X
      summand [0] Y
      twist 1 0 = f
    end

Linear combinations are signed sums of ``scalar label`` terms; a bare ``0``
is the zero vector.  Composition with an object's identity is filled in
automatically when that identity is a single basis element.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .core import Presentation, check_axioms
from .grading import GradingSpec
from .scalars import Field


class ParseError(ValueError):
    def __init__(self, message, line=None, column=None, path=None):
        loc = ""
        if path:
            loc += str(path) + ":"
        if line is not None:
            loc += "%d:" % line
            if column is not None:
                loc += "%d:" % column
        super().__init__((loc + " " if loc else "") + message)
        self.line = line
        self.column = column


class PresentationError(ValueError):
    """A syntactically valid file whose data violates the dg axioms."""

    def __init__(self, message, report):
        super().__init__(message)
        self.report = report


_LABEL = r"[A-Za-z_][A-Za-z0-9_'.]*"
_TERM = re.compile(r"\s*([+-])?\s*(\d+(?:/\d+)?)?\s*\*?\s*(%s)?" % _LABEL)
_DEG = re.compile(r"\[([^\]]*)\]")


def parse_degree(text, rank, line=None):
    m = _DEG.fullmatch(text.strip())
    if not m:
        raise ParseError("expected a degree like [1,0], got %r" % text, line)
    parts = [p for p in re.split(r"[,\s]+", m.group(1).strip()) if p]
    try:
        vals = tuple(int(p) for p in parts)
    except ValueError:
        raise ParseError("non-integer degree %r" % text, line) from None
    if len(vals) != rank:
        raise ParseError("degree %r should have %d coordinates" % (text, rank), line)
    return vals


def parse_combination(text, field, line=None):
    text = text.strip()
    if text in ("0", ""):
        return {}
    out = {}
    pos = 0
    first = True
    while pos < len(text):
        m = _TERM.match(text, pos)
        sign, num, lab = m.group(1), m.group(2), m.group(3)
        if m.end() == pos or lab is None or (not first and sign is None):
            raise ParseError("cannot read linear combination %r" % text, line, pos + 1)
        c = field(Fraction(num) if num else 1)
        if sign == "-":
            c = -c
        out[lab] = out.get(lab, field.zero) + c
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
        first = False
    return {k: v for k, v in out.items() if v}


def format_combination(vec, field):
    if not vec:
        return "0"
    parts = []
    for lab, c in vec.items():
        s = field.format(c)
        neg = s.startswith("-")
        if neg:
            s = s[1:]
        term = lab if s == "1" else "%s %s" % (s, lab)
        if not parts:
            parts.append(("-" if neg else "") + term)
        else:
            parts.append(("- " if neg else "+ ") + term)
    return " ".join(parts)


def _tokens(text):
    out = []
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append((n, line))
    return out


def parses(text, path=None):
    """Parse presentation text into a :class:`Presentation` (no axiom check)."""
    from .envelopes import TwixObject

    lines = _tokens(text)
    i = 0
    rank = pairing = iota = order = None
    field = Field()
    window = None
    objects = []
    hom, diff, comp, ident, twix = {}, {}, {}, {}, {}
    pending_ident = []

    def block(start):
        body = []
        j = start
        while j < len(lines) and lines[j][1] != "end":
            body.append(lines[j])
            j += 1
        if j == len(lines):
            raise ParseError("unterminated block", lines[start - 1][0], path=path)
        return body, j + 1

    def need_rank(n):
        if rank is None:
            raise ParseError("grading block must come first", n, path=path)

    def obj_check(name, n):
        if name not in objects:
            raise ParseError("unknown object %r" % name, n, path=path)

    def label_check(x, y, lab, n):
        if lab not in dict(hom.get((x, y), [])):
            raise ParseError("%r is not a basis element of hom(%s, %s)" % (lab, x, y), n, path=path)

    try:
        while i < len(lines):
            n, line = lines[i]
            words = line.split()
            head = words[0]
            if head == "grading":
                body, i = block(i + 1)
                vals = {}
                for m, l in body:
                    k, *rest = l.split()
                    try:
                        vals[k] = [int(v) for v in rest]
                    except ValueError:
                        raise ParseError("expected integers after %r" % k, m) from None
                if "rank" not in vals or "iota" not in vals:
                    raise ParseError("grading needs rank and iota", n)
                rank = vals["rank"][0]
                flat = vals.get("pairing", [])
                if len(flat) != rank * rank:
                    raise ParseError("pairing needs %d entries" % (rank * rank), n)
                pairing = tuple(tuple(flat[r * rank:(r + 1) * rank]) for r in range(rank))
                iota = tuple(vals["iota"])
                order = tuple(vals["order"]) if "order" in vals else None
                continue
            if head == "ring":
                if words[1:] == ["rational"]:
                    field = Field()
                elif len(words) == 3 and words[1] == "mod":
                    field = Field(int(words[2]))
                else:
                    raise ParseError("ring must be 'rational' or 'mod p'", n)
                i += 1
                continue
            if head == "window":
                m = re.fullmatch(r"window\s+(-?\d+)\.\.(-?\d+)", line)
                if not m:
                    raise ParseError("window must look like 'window lo..hi'", n)
                window = (int(m.group(1)), int(m.group(2)))
                i += 1
                continue
            if head == "objects":
                body, i = block(i + 1)
                for m, l in body:
                    for w in l.split():
                        if not re.fullmatch(_LABEL, w):
                            raise ParseError("bad object name %r" % w, m)
                        if w in objects:
                            raise ParseError("duplicate object %r" % w, m)
                        objects.append(w)
                continue
            if head == "hom":
                need_rank(n)
                if len(words) != 3:
                    raise ParseError("expected 'hom X Y'", n)
                x, y = words[1:]
                obj_check(x, n)
                obj_check(y, n)
                body, i = block(i + 1)
                entries = hom.setdefault((x, y), [])
                for m, l in body:
                    lab, _, rest = l.partition(" ")
                    if not re.fullmatch(_LABEL, lab):
                        raise ParseError("bad basis label %r" % lab, m)
                    if lab in dict(entries):
                        raise ParseError("duplicate basis label %r" % lab, m)
                    entries.append((lab, parse_degree(rest, rank, m)))
                continue
            if head == "identity":
                m = re.fullmatch(r"identity\s+(%s)\s*=\s*(.*)" % _LABEL, line)
                if not m:
                    raise ParseError("expected 'identity X = ...'", n)
                pending_ident.append((n, m.group(1), m.group(2)))
                i += 1
                continue
            if head == "diff":
                if len(words) != 3:
                    raise ParseError("expected 'diff X Y'", n)
                x, y = words[1:]
                obj_check(x, n)
                obj_check(y, n)
                body, i = block(i + 1)
                for m, l in body:
                    lhs, eq, rhs = l.partition("=")
                    if not eq:
                        raise ParseError("expected 'label = combination'", m)
                    lab = lhs.strip()
                    label_check(x, y, lab, m)
                    vec = parse_combination(rhs, field, m)
                    for t in vec:
                        label_check(x, y, t, m)
                    diff[(x, y, lab)] = vec
                continue
            if head == "comp":
                if len(words) != 4:
                    raise ParseError("expected 'comp X Y Z'", n)
                x, y, z = words[1:]
                for o in (x, y, z):
                    obj_check(o, n)
                body, i = block(i + 1)
                for m, l in body:
                    lhs, eq, rhs = l.partition("=")
                    pair = lhs.split()
                    if not eq or len(pair) != 2:
                        raise ParseError("expected 'g f = combination'", m)
                    g, f = pair
                    label_check(y, z, g, m)
                    label_check(x, y, f, m)
                    vec = parse_combination(rhs, field, m)
                    for t in vec:
                        label_check(x, z, t, m)
                    comp[(x, y, z, g, f)] = vec
                continue
            if head == "twix":
                need_rank(n)
                if len(words) != 2:
                    raise ParseError("expected 'twix NAME'", n)
                name = words[1]
                body, i = block(i + 1)
                summands, tw = [], {}
                for m, l in body:
                    kw = l.split()[0]
                    if kw == "summand":
                        mm = re.fullmatch(r"summand\s+(\[[^\]]*\])\s+(%s)" % _LABEL, l)
                        if not mm:
                            raise ParseError("expected 'summand [deg] X'", m)
                        obj_check(mm.group(2), m)
                        summands.append((parse_degree(mm.group(1), rank, m), mm.group(2)))
                    elif kw == "twist":
                        mm = re.fullmatch(r"twist\s+(\d+)\s+(\d+)\s*=\s*(.*)", l)
                        if not mm:
                            raise ParseError("expected 'twist a b = combination'", m)
                        a, b = int(mm.group(1)), int(mm.group(2))
                        if a >= len(summands) or b >= len(summands):
                            raise ParseError("twist index out of range", m)
                        vec = parse_combination(mm.group(3), field, m)
                        for t in vec:
                            label_check(summands[b][1], summands[a][1], t, m)
                        tw[(a, b)] = vec
                    else:
                        raise ParseError("unknown twix entry %r" % kw, m)
                twix[name] = TwixObject.build(summands, tw, label=name)
                continue
            raise ParseError("unknown block %r" % head, n)
        if rank is None:
            raise ParseError("missing grading block", 1)
        for n, x, rhs in pending_ident:
            obj_check(x, n)
            vec = parse_combination(rhs, field, n)
            for t in vec:
                label_check(x, x, t, n)
            ident[x] = vec
        try:
            grading = GradingSpec(rank, pairing, iota, order=order)
        except ValueError as e:
            raise ParseError(str(e), 1) from None
    except ParseError as e:
        if path and not str(e).startswith(str(path)):
            raise ParseError(str(e), path=path) from None
        raise
    return Presentation(grading, field, objects, hom, diff, comp, ident,
                        window=window, twix=twix)


def parse(path, check=True):
    """Read a file; with ``check`` the dg axioms are verified and violations
    raise :class:`PresentationError` carrying the report."""
    with open(path) as fh:
        text = fh.read()
    P = parses(text, path=path)
    P.name = str(path).rsplit("/", 1)[-1].rsplit(".", 1)[0]
    if check:
        rep = check_axioms(P)
        if not rep.ok:
            bad = rep.failures()[0]
            raise PresentationError("%s: %s fails, witness %r" % (path, bad.name, bad.witness), rep)
    return P


def _unit_value(P, key):
    x, y, z, g, f = key
    iz, ix = P.identity_data.get(z, {}), P.identity_data.get(x, {})
    if len(iz) == 1 and list(iz.items())[0] == (g, 1) and y == z:
        return {f: P.field.one}
    if len(ix) == 1 and list(ix.items())[0] == (f, 1) and x == y:
        return {g: P.field.one}
    return None


def _deg(d):
    return "[" + ",".join(str(x) for x in d) + "]"


def export(P):
    """Serialize a presentation; ``parses(export(P))`` reproduces P."""
    g, F = P.grading, P.field
    out = ["grading", "  rank %d" % g.rank,
           "  pairing " + " ".join(str(x) for row in g.pairing for x in row),
           "  iota " + " ".join(str(x) for x in g.iota)]
    if g.order is not None:
        out.append("  order " + " ".join(str(x) for x in g.order))
    out.append("end")
    out.append("ring " + F.name)
    if P.window is not None:
        out.append("window %d..%d" % tuple(P.window))
    out.append("objects")
    if P.objects():
        out.append("  " + " ".join(P.objects()))
    out.append("end")
    obs = P.objects()
    for x in obs:
        for y in obs:
            entries = P.hom_data.get((x, y))
            if entries:
                out.append("hom %s %s" % (x, y))
                out.extend("  %s %s" % (lab, _deg(d)) for lab, d in entries)
                out.append("end")
    for x in obs:
        if x in P.identity_data:
            out.append("identity %s = %s" % (x, format_combination(P.identity_data[x], F)))
    for x in obs:
        for y in obs:
            rows = [(lab, P.diff[(x, y, lab)]) for lab, _ in P.hom_data.get((x, y), [])
                    if P.diff.get((x, y, lab))]
            if rows:
                out.append("diff %s %s" % (x, y))
                out.extend("  %s = %s" % (lab, format_combination(v, F)) for lab, v in rows)
                out.append("end")
    for x in obs:
        for y in obs:
            for z in obs:
                rows = []
                for gl, _ in P.hom_data.get((y, z), []):
                    for fl, _ in P.hom_data.get((x, y), []):
                        key = (x, y, z, gl, fl)
                        v = P.comp.get(key)
                        if v and _unit_value(P, key) != v:
                            rows.append("  %s %s = %s" % (gl, fl, format_combination(v, F)))
                if rows:
                    out.append("comp %s %s %s" % (x, y, z))
                    out.extend(rows)
                    out.append("end")
    for name, T in P.twix.items():
        out.append("twix %s" % name)
        out.extend("  summand %s %s" % (_deg(s), x) for s, x in T.summands)
        for (a, b), v in T.twist_dict().items():
            out.append("  twist %d %d = %s" % (a, b, format_combination(v, F)))
        out.append("end")
    return "\n".join(out) + "\n"


def export_sparse(columns, row_order=None, col_order=None, field=None):
    """Coordinate triples ``row col value`` for a matrix given as columns,
    in a deterministic order."""
    fmt = field.format if field else str
    cols = col_order if col_order is not None else sorted(columns, key=repr)
    rank_of = {r: n for n, r in enumerate(row_order)} if row_order is not None else None
    lines = []
    for ci, c in enumerate(cols):
        col = columns.get(c, {})
        rows = sorted(col, key=(rank_of.__getitem__ if rank_of else repr))
        for r in rows:
            ri = rank_of[r] if rank_of else r
            lines.append("%s %s %s" % (ri, ci, fmt(col[r])))
    return "\n".join(lines) + ("\n" if lines else "")
