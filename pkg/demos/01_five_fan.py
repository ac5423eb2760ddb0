"""
A 5-fan in the plane
====================

Twelve random measures, five wedges, and every wedge touches at least four
of the measures.  All arithmetic is exact; the picture lands in demos/out/.
"""

# %%
import random
from pathlib import Path

from fairfan.fan import build_fan
from fairfan.measures import coverage_counts, random_family
from fairfan.svg import render

OUT = Path(__file__).parent / "out"
OUT.mkdir(exist_ok=True)

d, n, c = 2, 5, 4
m = n * (c - d) + d
family = random_family(random.Random(7), d, m)
print(f"{m} measures, {sum(len(mu.atoms) for mu in family.measures)} atoms")

# %%
# Build the fan.  Its apex is one anchor point (a vertex of the anchors' hull);
# rays pass through every (c-d)-th anchor in angular order.
fan = build_fan(family, n, c)
print("apex:", tuple(str(x) for x in fan.apex.basepoint))
print("ray directions:", [(str(s), str(t)) for s, t in fan.rays])

# %%
# Coverage per wedge: how many measures put positive mass there.
for i, k in enumerate(coverage_counts(family, fan.partition, 0)):
    print(f"wedge C{i + 1}: {k} measures (needs {c})")
print("anchors per closed wedge:", fan.anchor_counts())

# %%
(OUT / "five_fan.svg").write_text(render(family, fan.partition, fan, title="5-fan, c = 4"))
print("wrote", OUT / "five_fan.svg")
