"""Derived Morita witnesses for the shift and additive envelopes of the
A -> B quiver, plus the pretriangulated case whose verdict stays open."""

import sys

from dgkit.cli import fixture_path
from dgkit.homotopy import morita_witness
from dgkit.presentation import parse

R = int(sys.argv[1]) if len(sys.argv) > 1 else 2
P = parse(fixture_path("quiver2"))
for kind in ("sb", "add", "pretr"):
    rep = morita_witness(P, kind, R, (-1, 1), presentation=P)
    print("==", kind, rep.params["sample"])
    print(rep)
