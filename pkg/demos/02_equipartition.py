"""
Exact equipartitions by repeated ham-sandwich cuts
==================================================

Two weighted point clouds are cut into 2^k convex cells, each holding exactly
1/2^k of both.  Atoms lying on a cut are split fractionally; the fractions are
part of the output.
"""

# %%
import random
from fractions import Fraction
from pathlib import Path

from fairfan.hamsandwich import equipartition_2pow, ham_sandwich_cut, region_masses
from fairfan.measures import DiscreteMeasure, MeasureFamily
from fairfan.svg import render

OUT = Path(__file__).parent / "out"
OUT.mkdir(exist_ok=True)

rng = random.Random(2)


def cloud(k, label):
    pts = {(rng.randint(-40, 40), rng.randint(-40, 40)) for _ in range(k)}
    return DiscreteMeasure(tuple((p, rng.randint(1, 5)) for p in sorted(pts)), Fraction(1, 2), label)


red, blue = cloud(40, "red"), cloud(25, "blue")
print("totals:", red.total, blue.total)

# %%
# One cut first: the line passes through two atoms, whose weight is split.
cut = ham_sandwich_cut(red, blue)
print("line:", cut.line.normal, "=", cut.line.offset)
print("boundary shares:", {k: tuple(map(str, v)) for k, v in cut.boundary_assignment.items()})
print("side masses:", {k: tuple(map(str, v)) for k, v in cut.side_masses(red, blue).items()})

# %%
# Three levels of recursion give eight cells.
part = equipartition_2pow(red, blue, 3)
print("red per cell: ", [str(x) for x in region_masses(part, red)])
print("blue per cell:", [str(x) for x in region_masses(part, blue)])

# %%
fam = MeasureFamily((red, blue), 2)
(OUT / "equipartition.svg").write_text(render(fam, part, title="8 cells"))
print("wrote", OUT / "equipartition.svg")
