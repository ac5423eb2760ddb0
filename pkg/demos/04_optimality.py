"""
Why one measure fewer is not enough
===================================

With m = n(c-d)+d-1 measures arranged as bumps on a line plus a small simplex,
every fan or interval partition leaves some piece with at most c-1 measures.
In one dimension this is a statement about consecutive intervals, decided here
by dynamic programming.
"""

# %%
from fairfan.adversarial import (
    adversarial_m,
    candidate_stream,
    gen_adversarial,
    oracle_1d,
    verify_adversarial,
)

print("feasible?  rows n, columns c, entry = smallest feasible m")
for n in range(2, 7):
    row = []
    for c in range(2, 7):
        row.append(next(m for m in range(100) if oracle_1d(m, n, c)))
    print(n, row)

# %%
for d, n, c in [(1, 3, 3), (2, 3, 3), (3, 2, 4)]:
    fam = gen_adversarial(d, n, c)
    rep = verify_adversarial(fam, list(candidate_stream(fam, n, 300, seed=1)), n, c)
    print(f"d={d} n={n} c={c}: m={adversarial_m(d, n, c)}, checked {rep.checked}, "
          f"skipped {rep.rejected}, counterexamples {len(rep.counterexamples)}")
