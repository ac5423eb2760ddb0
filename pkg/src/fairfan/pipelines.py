"""Reductions from coverage/fraction guarantees to planar equipartitions.

All planners are exact; the pipelines run :func:`equipartition_2pow` on an
aggregate of measures and read the guarantees off the exact mass matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .fan import anchor_atom
from .geometry import ConvexPartition
from .hamsandwich import equipartition_2pow
from .measures import (
    DiscreteMeasure,
    MeasureFamily,
    coverage_counts,
    evaluate_matrix,
    MassMatrix,
)

Q = Fraction

POINT_MEASURE = "point_measure"
NU_MEASURE = "nu_measure"


class PipelineError(ValueError):
    pass


class ScopeError(PipelineError):
    """The request is outside what can be built constructively here."""


# ---------------------------------------------------------------------------
# pigeonhole


def claim_threshold(m: int, r: int, eps) -> Fraction:
    return (r - 1) + eps * (m - r + 1)


def pigeonhole_indices(xs: Sequence, r: int, eps):
    """Indices of the r largest entries if sum(xs) >= r-1+eps*(m-r+1), else None.

    Every returned index has value >= eps (asserted).  Ties are broken by
    position.
    """
    m = len(xs)
    if not 1 <= r <= m:
        raise PipelineError(f"r must be in [1, {m}], got {r}")
    if any(x < 0 or x > 1 for x in xs):
        raise PipelineError("entries must lie in [0, 1]")
    if not 0 <= eps <= 1:
        raise PipelineError("eps must lie in [0, 1]")
    if sum(xs) < claim_threshold(m, r, eps):
        return None
    top = sorted(range(m), key=lambda i: (-xs[i], i))[:r]
    assert all(xs[i] >= eps for i in top), "pigeonhole claim violated"
    return sorted(top)


def claim_extremal(m: int, r: int, eps, below) -> list:
    """Vector with only r-1 entries >= eps: r-1 ones, the rest ``below`` < eps.

    Its sum is strictly less than the threshold whenever ``below < eps`` and
    ``r <= m``.
    """
    if not below < eps:
        raise PipelineError("need below < eps")
    return [1] * (r - 1) + [below] * (m - r + 1)


# ---------------------------------------------------------------------------
# aggregates


@dataclass(frozen=True)
class AggregateMeasure:
    source_indices: tuple
    normalized: bool
    result: DiscreteMeasure
    origin: tuple  # (source measure index, atom index) per atom of result

    @property
    def total(self):
        return self.result.total


def _fresh_label(family: MeasureFamily, base: str) -> str:
    taken = {mu.label for mu in family.measures}
    label, k = base, 1
    while label in taken:
        k += 1
        label = f"{base}{k}"
    return label


def build_nu(family: MeasureFamily, indices, normalized: bool = True, label: str = "nu") -> AggregateMeasure:
    """Sum of the selected measures, each rescaled to total 1 if ``normalized``."""
    indices = tuple(indices)
    if not indices:
        raise PipelineError("need at least one source measure")
    atoms, origin = [], []
    for j in indices:
        mu = family.measures[j]
        tot = mu.total
        if tot <= 0:
            raise PipelineError(f"measure {j} has zero total mass")
        for a, (p, w) in enumerate(mu.atoms):
            atoms.append((p, w / tot if normalized else w))
            origin.append((j, a))
    radius = min(family.measures[j].bump_radius for j in indices)
    res = DiscreteMeasure(tuple(atoms), radius, _fresh_label(family, label))
    return AggregateMeasure(indices, normalized, res, tuple(origin))


def point_measure(family: MeasureFamily, indices, label: str = "V") -> AggregateMeasure:
    """Unit atoms at the anchor atom of each selected measure."""
    atoms, origin = [], []
    for j in indices:
        mu = family.measures[j]
        a = anchor_atom(mu)
        atoms.append((mu.atoms[a][0], Q(1)))
        origin.append((j, a))
    radius = min(family.measures[j].bump_radius for j in indices)
    res = DiscreteMeasure(tuple(atoms), radius, _fresh_label(family, label))
    return AggregateMeasure(tuple(indices), False, res, tuple(origin))


def _spread_shares(partition: ConvexPartition, family: MeasureFamily, agg: AggregateMeasure) -> None:
    """Copy an aggregate's atom shares onto the source measures' atoms."""
    for t, (j, a) in enumerate(agg.origin):
        share = partition.shares.get((agg.result.label, t))
        if share is not None:
            partition.shares[(family.measures[j].label, a)] = share


def power_of_two(n: int) -> int:
    if n < 1 or n & (n - 1):
        raise ScopeError(
            f"n={n} is not a power of two; constructive equipartitions exist here only for n = 2^k"
        )
    return n.bit_length() - 1


# ---------------------------------------------------------------------------
# coverage via one equiparted measure plus an auxiliary measure


@dataclass
class CoverageReport:
    n: int
    c: int
    proof: str
    equiparted: list            # per region mass of the first measure
    auxiliary: list             # per region mass of V or nu
    auxiliary_target: Fraction  # the exact value each region should get
    touched: list               # per region: indices of later measures touched
    coverage: list              # closed-mode counts per region
    certified: bool
    problems: list = field(default_factory=list)

    def to_json(self):
        from .io import q

        return {
            "n": self.n,
            "c": self.c,
            "proof": self.proof,
            "equiparted": [q(x) for x in self.equiparted],
            "auxiliary": [q(x) for x in self.auxiliary],
            "auxiliary_target": q(self.auxiliary_target),
            "touched": [list(t) for t in self.touched],
            "coverage": list(self.coverage),
            "certified": self.certified,
            "problems": list(self.problems),
        }


def _masses_of(partition: ConvexPartition, mu: DiscreteMeasure):
    from .hamsandwich import region_masses

    return region_masses(partition, mu)


def theorem5_pipeline(family: MeasureFamily, n: int, c: int, proof: str = NU_MEASURE):
    """Equipart the first measure together with V (anchor points of the rest)
    or nu (normalised sum of the rest); every piece then meets >= c supports."""
    d = family.dimension
    if d != 2:
        raise ScopeError("only d = 2 is constructive (planar ham-sandwich engine)")
    k = power_of_two(n)
    m = family.m
    if c < d:
        raise PipelineError("need c >= d")
    if m != n * (c - d) + d:
        raise PipelineError(f"needs m = n(c-d)+d = {n * (c - d) + d}, got {m}")
    rest = list(range(d - 1, m))
    if proof == POINT_MEASURE:
        agg = point_measure(family, rest)
    elif proof == NU_MEASURE:
        agg = build_nu(family, rest)
    else:
        raise PipelineError(f"unknown proof variant {proof!r}")
    first = family.measures[0]
    part = equipartition_2pow(first, agg.result, k)
    if proof == NU_MEASURE:
        _spread_shares(part, family, agg)

    eq = _masses_of(part, first)
    aux = _masses_of(part, agg.result)
    target = Q(n * (c - d) + 1, n)
    touched = []
    for i in range(n):
        hit = set()
        for t, (j, a) in enumerate(agg.origin):
            if part.shares[(agg.result.label, t)][i] > 0:
                hit.add(j)
        touched.append(sorted(hit))
    cov = coverage_counts(family, part, 0)
    problems = []
    for i in range(n):
        if eq[i] != first.total / n:
            problems.append(f"region {i}: first measure not equiparted")
        if aux[i] != target:
            problems.append(f"region {i}: auxiliary mass {aux[i]} != {target}")
        # each source adds at most 1, so mass above c-d needs c-d+1 sources
        if len(touched[i]) < c - d + 1:
            problems.append(f"region {i}: only {len(touched[i])} supports touched")
        if cov[i] < c:
            problems.append(f"region {i}: coverage {cov[i]} < {c}")
    report = CoverageReport(n, c, proof, eq, aux, target, touched, cov, not problems, problems)
    return part, report


def equal_total_sums(family: MeasureFamily, partition: ConvexPartition, d: int = 2):
    """Per-region masses of mu_d+...+mu_m and of mu_1+...+mu_m (strict mode)."""
    mat = evaluate_matrix(family, partition)
    n = partition.n
    tail = [sum((mat.entries[j][i] for j in range(d - 1, family.m)), Q(0)) for i in range(n)]
    full = [sum((mat.entries[j][i] for j in range(family.m)), Q(0)) for i in range(n)]
    return tail, full


# ---------------------------------------------------------------------------
# fraction guarantees


def epsilon_bound(n: int, c: int, d: int):
    """(eps, d/(c n^2)) with eps = 1/(n((n-1)(ceil(c/d)-1)+1)); eps >= the bound."""
    if n < 2 or d < 2 or c < d:
        raise PipelineError("need n >= 2 and c >= d >= 2")
    r = -(-c // d)
    eps = Q(1, n * ((n - 1) * (r - 1) + 1))
    bound = Q(d, c * n * n)
    assert eps >= bound
    return eps, bound


@dataclass(frozen=True)
class GroupPlan:
    groups: tuple     # d tuples of measure indices
    quotas: tuple     # r_k
    group_sizes: tuple  # m_k
    kind: str = "epsilon"
    alpha: Fraction | None = None
    n: int = 0

    @property
    def d(self) -> int:
        return len(self.quotas)

    @property
    def required_m(self) -> int:
        return sum(self.group_sizes)

    def group_targets(self):
        """Per-group fraction each certified measure is guaranteed."""
        if self.kind == "alpha":
            return [self.alpha] * self.d
        return [Q(1, self.n * (mk - rk + 1)) for mk, rk in zip(self.group_sizes, self.quotas)]

    def to_json(self):
        from .io import q

        return {
            "kind": self.kind,
            "alpha": None if self.alpha is None else q(self.alpha),
            "n": self.n,
            "groups": [list(g) for g in self.groups],
            "quotas": list(self.quotas),
            "group_sizes": list(self.group_sizes),
        }


def split_quotas(c: int, d: int) -> list:
    """d quotas in {floor(c/d), ceil(c/d)} summing to c, larger ones first."""
    base, extra = divmod(c, d)
    return [base + 1] * extra + [base] * (d - extra)


def _groups_in_order(sizes):
    out, start = [], 0
    for s in sizes:
        out.append(tuple(range(start, start + s)))
        start += s
    return tuple(out)


def plan_epsilon_groups(m: int, n: int, c: int, d: int) -> GroupPlan:
    if n < 1 or d < 1 or c < d:
        raise PipelineError("need n >= 1 and c >= d >= 1")
    if m != n * (c - d) + d:
        raise PipelineError(f"needs m = n(c-d)+d = {n * (c - d) + d}, got {m}")
    quotas = split_quotas(c, d)
    sizes = [n * (r - 1) + 1 for r in quotas]
    assert sum(sizes) == m
    return GroupPlan(_groups_in_order(sizes), tuple(quotas), tuple(sizes), "epsilon", None, n)


def alpha_ratio(n: int, alpha) -> Fraction:
    alpha = Q(alpha)
    return (1 - alpha) / (Q(1, n) - alpha)


def plan_alpha_groups(n: int, c: int, d: int, alpha):
    """Quotas r_k >= 2 and sizes m_k = ceil((r_k - 1)(1-alpha)/(1/n-alpha)).

    Returns ``(plan, required_m)``.
    """
    alpha = Q(alpha)
    if n < 1:
        raise PipelineError("need n >= 1")
    if not 0 < alpha < Q(1, n):
        raise PipelineError(f"need 0 < alpha < 1/n = {Q(1, n)}")
    if c < 2 * d:
        raise PipelineError(f"need c >= 2d = {2 * d}")
    ratio = alpha_ratio(n, alpha)
    quotas = split_quotas(c, d)
    sizes = [math.ceil((r - 1) * ratio) for r in quotas]
    required = sum(sizes)
    if ratio.denominator == 1:
        assert required == (c - d) * ratio
    assert required <= math.ceil((c - d) * ratio) + d - 1
    plan = GroupPlan(_groups_in_order(sizes), tuple(quotas), tuple(sizes), "alpha", alpha, n)
    return plan, required


@dataclass
class FractionReport:
    n: int
    c: int
    plan: GroupPlan
    hypothesis: list   # per group: m_k / n
    thresholds: list   # per group: r_k - 1 + target * (m_k - r_k + 1)
    certified: list    # per region: sorted measure indices
    fractions: list    # per region: {index: fraction}
    ok: bool
    problems: list = field(default_factory=list)

    def to_json(self):
        from .io import q

        return {
            "n": self.n,
            "c": self.c,
            "plan": self.plan.to_json(),
            "hypothesis": [q(x) for x in self.hypothesis],
            "thresholds": [q(x) for x in self.thresholds],
            "regions": [
                {
                    "certified": list(cert),
                    "fractions": {str(j): q(f) for j, f in sorted(fr.items())},
                }
                for cert, fr in zip(self.certified, self.fractions)
            ],
            "ok": self.ok,
            "problems": list(self.problems),
        }


def fraction_pipeline(family: MeasureFamily, n: int, c: int, plan: GroupPlan, target="epsilon"):
    """Equipart the d = 2 group aggregates, then certify >= c measures per
    region at fraction >= the target (epsilon_k per group, or alpha)."""
    if family.dimension != 2 or plan.d != 2:
        raise ScopeError("only d = 2 is constructive (planar ham-sandwich engine)")
    k = power_of_two(n)
    if plan.n != n:
        raise PipelineError("plan was made for a different n")
    if sum(plan.quotas) != c:
        raise PipelineError("plan quotas do not sum to c")
    if plan.required_m > family.m:
        raise PipelineError(f"plan needs {plan.required_m} measures, family has {family.m}")
    if target == "epsilon":
        targets = plan.group_targets() if plan.kind == "epsilon" else None
        if targets is None:
            raise PipelineError("epsilon target needs an epsilon plan")
    elif target == "alpha":
        if plan.alpha is None:
            raise PipelineError("alpha target needs an alpha plan")
        targets = [plan.alpha] * plan.d
    else:
        raise PipelineError(f"unknown target {target!r}")

    aggs = [build_nu(family, g, label=f"nu{t + 1}_") for t, g in enumerate(plan.groups)]
    part = equipartition_2pow(aggs[0].result, aggs[1].result, k)
    for agg in aggs:
        _spread_shares(part, family, agg)
    mat = evaluate_matrix(family, part)
    totals = family.totals()

    hyp = [Q(mk, n) for mk in plan.group_sizes]
    thr = [rk - 1 + t * (mk - rk + 1) for rk, mk, t in zip(plan.quotas, plan.group_sizes, targets)]
    problems = []
    for g, (h, t) in enumerate(zip(hyp, thr)):
        if h < t:
            problems.append(f"group {g}: hypothesis {h} < {t}")
    certified, fracs = [], []
    for i in range(n):
        cert, fr = [], {}
        for g, group in enumerate(plan.groups):
            xs = [mat.entries[j][i] / totals[j] for j in group]
            if sum(xs) != hyp[g]:
                problems.append(f"region {i} group {g}: aggregate mass {sum(xs)} != {hyp[g]}")
            picked = pigeonhole_indices(xs, plan.quotas[g], targets[g])
            if picked is None:
                problems.append(f"region {i} group {g}: claim hypothesis fails")
                continue
            for p in picked:
                cert.append(group[p])
                fr[group[p]] = xs[p]
        if len(cert) < c:
            problems.append(f"region {i}: only {len(cert)} measures certified")
        certified.append(sorted(cert))
        fracs.append(fr)
    return part, FractionReport(n, c, plan, hyp, thr, certified, fracs, not problems, problems)


__all__ = [
    "AggregateMeasure",
    "CoverageReport",
    "FractionReport",
    "GroupPlan",
    "MassMatrix",
    "NU_MEASURE",
    "POINT_MEASURE",
    "PipelineError",
    "ScopeError",
    "alpha_ratio",
    "build_nu",
    "claim_extremal",
    "claim_threshold",
    "equal_total_sums",
    "epsilon_bound",
    "fraction_pipeline",
    "pigeonhole_indices",
    "plan_alpha_groups",
    "plan_epsilon_groups",
    "point_measure",
    "split_quotas",
    "theorem5_pipeline",
]
