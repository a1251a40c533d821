"""Tw does not respect quasi-equivalence: the 2x2 matrix algebra with
d = [e21, -] has a contractible object X, yet tw_{-e21}(X) has non-trivial
endomorphism homology."""

from dgkit.cli import fixture_path
from dgkit.envelopes import TwixCategory
from dgkit.homotopy import is_contractible, hom_ranks, counterexample_report
from dgkit.presentation import parse

P = parse(fixture_path("m2x2"))
h = is_contractible(P, "X")
print("null-homotopy of id_X:", h.vec, "in degree", h.degree)

tw = TwixCategory(P, "tw")
T = tw.add_object(P.twix["T"])
print("End(T) homology ranks:", {d[0]: r for d, r in sorted(hom_ranks(tw, T, T).items()) if r})
print()
print(counterexample_report(P))
