"""
Coverage and fraction guarantees from planar equipartitions
===========================================================

Equipart one measure together with an auxiliary measure built from the others;
the auxiliary mass in each piece forces many supports to be touched.  The same
machinery, applied to two groups of measures, certifies that each piece holds
a fixed fraction of at least c measures.
"""

# %%
import random
from fractions import Fraction

from fairfan.measures import random_family
from fairfan.pipelines import (
    NU_MEASURE,
    POINT_MEASURE,
    epsilon_bound,
    fraction_pipeline,
    plan_alpha_groups,
    plan_epsilon_groups,
    theorem5_pipeline,
)

n, c, d = 4, 3, 2
m = n * (c - d) + d
family = random_family(random.Random(11), d, m)

# %%
# Two auxiliary measures: unit points at anchors, or the normalised sum.
for proof in (POINT_MEASURE, NU_MEASURE):
    _, rep = theorem5_pipeline(family, n, c, proof)
    print(proof, "aux per piece:", [str(x) for x in rep.auxiliary], "coverage:", rep.coverage, "ok:", rep.certified)

# %%
# Fractions: epsilon for n = 2, c = 4.
n, c = 2, 4
m = n * (c - d) + d
eps, bound = epsilon_bound(n, c, d)
print(f"epsilon = {eps}  (and {eps} >= d/(c n^2) = {bound})")
plan = plan_epsilon_groups(m, n, c, d)
print("groups:", plan.groups, "quotas:", plan.quotas)
_, rep = fraction_pipeline(random_family(random.Random(5), d, m), n, c, plan)
for i, (cert, fr) in enumerate(zip(rep.certified, rep.fractions)):
    print(f"piece {i}: measures {cert} at fractions {[str(fr[j]) for j in cert]}")

# %%
# Fixed fraction alpha: more measures buy a larger guaranteed fraction.
for alpha in (Fraction(1, 3), Fraction(1, 5), Fraction(1, 20), Fraction(1, 1000)):
    _, need = plan_alpha_groups(n, c, d, alpha)
    print(f"alpha = {alpha}: m = {need}")
