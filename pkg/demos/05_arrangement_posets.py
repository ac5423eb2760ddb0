"""
Intersection posets of coordinate subspace arrangements
=======================================================

Elements are zero patterns; each column's zero set is empty or has at least
m-c+1 rows.  Chain lengths computed by brute force are set against the
closed forms.
"""

# %%
from pathlib import Path

from fairfan.arrangement import A, A_TILDE, build_poset, compare_formulas, small_fiber_report, order_complex_dim

OUT = Path(__file__).parent / "out"
OUT.mkdir(exist_ok=True)

# %%
p = build_poset(4, 2, 3, A)
print(len(p.elements), "elements, order complex dimension", order_complex_dim(p))
for e in p.elements:
    print("  ", e.label())
print(small_fiber_report())
(OUT / "poset_4_2_3.dot").write_text(p.to_dot())

# %%
print(" m n c  variant  top  fiber_dim  poset_dim  ok")
for variant in (A, A_TILDE):
    for m, n, c in [(3, 2, 3), (5, 2, 4), (6, 3, 4), (7, 4, 5), (7, 3, 7)]:
        rep = compare_formulas(m, n, c, variant)
        s = rep.summary
        print(f"{m:2d}{n:2d}{c:2d}  {variant:7s}  {str(s.has_top):5s} {s.fiber_dim:9d} {s.poset_dim:9d}  {rep.ok}")
