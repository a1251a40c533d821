"""Truncated bar resolutions of the dual numbers: the counit cone is acyclic
exactly in the degrees the truncation can see, and the reliable range grows
with the truncation length."""

from dgkit.bar import BarBimodule, counit_map
from dgkit.cli import fixture_path
from dgkit.homotopy import cone_complex
from dgkit.presentation import parse

P = parse(fixture_path("kx2"))
for R in range(1, 5):
    cx = cone_complex(counit_map(BarBimodule(P, ["O"], R)), "O", "O", (-6, 1))
    row = []
    for deg, (rank, reliable) in sorted(cx.homology((-6, 1)).items()):
        row.append("%3d:%d%s" % (deg[0], rank, "" if reliable else "?"))
    print("R=%d  " % R + " ".join(row))
print("(? marks degrees touched by the truncation)")
