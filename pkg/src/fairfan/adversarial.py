"""Families with m = n(c-d)+d-1 measures that no equiparting partition can serve.

``d = 1``: tiny disjoint bumps on the real line.  ``d >= 2``: the last d-1
measures are bumps at the vertices of a small simplex below the origin and
the rest sit in a row on a line above it.  Every piece must meet all simplex
bumps, so along the line the pieces behave like consecutive intervals.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .geometry import ConvexPartition, ConvexRegion, GE, HalfSpace, Hyperplane, LE, unit_vector, add, scale
from .measures import DiscreteMeasure, MeasureFamily, coverage_counts

Q = Fraction


class AdversarialError(ValueError):
    pass


def adversarial_m(d: int, n: int, c: int) -> int:
    return n * (c - d) + d - 1


def _simplex_vertices(d: int):
    """d-1 points forming a (near-)regular simplex around -e_d in the span of
    e_1..e_{d-2}.  Exact for d <= 3; rational approximations beyond."""
    base = tuple(-x for x in unit_vector(d, d - 1))
    k = d - 1
    if k == 1:
        return [base]
    if k == 2:
        return [add(base, unit_vector(d, 0)), add(base, scale(-1, unit_vector(d, 0)))]
    import numpy as np

    # centred standard simplex of R^k, expressed in an orthonormal basis of
    # the sum-zero hyperplane (dimension k-1 = d-2)
    eye = np.eye(k) - 1.0 / k
    basis, _ = np.linalg.qr(eye[:, : k - 1])
    coords = eye @ basis
    coords /= np.linalg.norm(coords[0])
    out = []
    for row in coords:
        v = [Q(float(x)).limit_denominator(10**6) for x in row] + [Q(0), Q(0)]
        out.append(add(base, tuple(v)))
    return out


def gen_adversarial(d: int, n: int, c: int) -> MeasureFamily:
    """Unit-weight single-bump measures; radii 1/8 of the smallest gap."""
    if d < 1 or n < 2 or c < d:
        raise AdversarialError("need d >= 1, n >= 2, c >= d")
    m = adversarial_m(d, n, c)
    if d == 1:
        points = [(Q(k),) for k in range(m)]
        radius = Q(1, 8)
        simplex = []
    else:
        lines = m - d + 1
        gap = Q(2, lines - 1) if lines > 1 else Q(2)
        points = []
        for k in range(lines):
            x = -1 + gap * k if lines > 1 else Q(0)
            p = [Q(0)] * d
            p[d - 1] = Q(1)
            p[d - 2] = x
            points.append(tuple(p))
        simplex = _simplex_vertices(d)
        radius = min(gap, Q(1)) / 8
    atoms = points + simplex
    measures = []
    for k, p in enumerate(atoms):
        tag = "line" if k < len(points) else "simplex"
        measures.append(DiscreteMeasure(((p, Q(1)),), radius, f"{tag}{k + 1}"))
    if not measures:
        raise AdversarialError(f"m = n(c-d)+d-1 = {m}: the family would be empty")
    return MeasureFamily(tuple(measures), d)


def simplex_indices(family: MeasureFamily) -> list:
    return [j for j, mu in enumerate(family.measures) if mu.label.startswith("simplex")]


# ---------------------------------------------------------------------------
# the one-dimensional interval oracle


def _covered(p, q) -> int:
    # odd positions 2b-1 in [p, q]
    if q < p:
        return 0
    lo = p + 1 if p % 2 == 0 else p
    if lo > q:
        return 0
    return (q - lo) // 2 + 1


def oracle_1d(m_bumps: int, n: int, c: int) -> bool:
    """Can n consecutive intervals each meet >= c of m bumps in a row?

    Cut positions 0..2m: even = gap, odd 2b-1 = inside bump b (so both
    neighbouring intervals meet it).  Dynamic programming over the last cut.
    """
    if n < 1:
        raise AdversarialError("need n >= 1")
    if m_bumps < 0:
        raise AdversarialError("need m >= 0")
    if c <= 0:
        return True
    top = 2 * m_bumps
    reach = [p == 0 for p in range(top + 1)]  # first interval starts at 0
    for _ in range(n - 1):
        nxt = [False] * (top + 1)
        starts = [p for p in range(top + 1) if reach[p]]
        for p in starts:
            for q in range(p, top + 1):
                if not nxt[q] and _covered(p, q) >= c:
                    nxt[q] = True
        reach = nxt
    return any(reach[p] and _covered(p, top) >= c for p in range(top + 1))


def oracle_1d_brute(m_bumps: int, n: int, c: int) -> bool:
    """Same question by enumerating every nondecreasing cut tuple."""
    top = 2 * m_bumps
    for cuts in itertools.combinations_with_replacement(range(top + 1), n - 1):
        bounds = (0,) + cuts + (top,)
        if all(_covered(a, b) >= c for a, b in zip(bounds, bounds[1:])):
            return True
    return False


def oracle_1d_formula(m_bumps: int, n: int, c: int) -> bool:
    return m_bumps >= n * (c - 1) + 1 if c >= 1 else True


def random_interval_cuts(rng: random.Random, m_bumps: int, n: int):
    return sorted(rng.randint(0, 2 * m_bumps) for _ in range(n - 1))


def interval_coverage(m_bumps: int, cuts) -> list:
    bounds = [0] + list(cuts) + [2 * m_bumps]
    return [_covered(a, b) for a, b in zip(bounds, bounds[1:])]


# ---------------------------------------------------------------------------
# verification against candidate partitions


@dataclass
class AdversarialReport:
    d: int
    n: int
    c: int
    m: int
    checked: int = 0
    rejected: int = 0          # candidates that do not equipart
    witnesses: list = field(default_factory=list)   # (candidate, region, coverage)
    counterexamples: list = field(default_factory=list)
    reduction_feasible: bool = False

    @property
    def ok(self) -> bool:
        return not self.counterexamples and not self.reduction_feasible

    def to_json(self):
        return {
            "d": self.d,
            "n": self.n,
            "c": self.c,
            "m": self.m,
            "checked": self.checked,
            "rejected": self.rejected,
            "witnesses": [list(w) for w in self.witnesses],
            "counterexamples": list(self.counterexamples),
            "reduction_feasible": self.reduction_feasible,
            "ok": self.ok,
        }


def verify_adversarial(family: MeasureFamily, partitions, n: int, c: int, keep_witnesses: int = 50) -> AdversarialReport:
    """Check that every candidate meeting all simplex bumps in every piece
    leaves some piece with coverage <= c-1."""
    d = family.dimension
    report = AdversarialReport(d, n, c, family.m)
    simplex = simplex_indices(family)
    lines = family.m - len(simplex)
    report.reduction_feasible = oracle_1d(lines, n, c - len(simplex))
    for idx, part in enumerate(partitions):
        if part.n != n:
            raise AdversarialError("candidate has the wrong number of pieces")
        if simplex:
            sub = MeasureFamily(tuple(family.measures[j] for j in simplex), d)
            if min(coverage_counts(sub, part, 0)) < len(simplex):
                report.rejected += 1
                continue
        report.checked += 1
        cov = coverage_counts(family, part, 0)
        low = min(range(n), key=lambda i: cov[i])
        if cov[low] <= c - 1:
            if len(report.witnesses) < keep_witnesses:
                report.witnesses.append((idx, low, cov[low]))
        else:
            report.counterexamples.append(idx)
    return report


def interval_partition(cuts, dimension: int = 1) -> ConvexPartition:
    """Pieces (-inf, t1], [t1, t2], ..., [t_{n-1}, inf) on the real line."""
    regions = []
    bounds = [None] + list(cuts) + [None]
    for a, b in zip(bounds, bounds[1:]):
        hs = []
        if a is not None:
            hs.append(HalfSpace(Hyperplane((Q(1),), a), GE))
        if b is not None:
            hs.append(HalfSpace(Hyperplane((Q(1),), b), LE))
        regions.append(ConvexRegion(tuple(hs), 1))
    return ConvexPartition(regions, {"type": "intervals"})


def random_line_candidates(rng: random.Random, family: MeasureFamily, n: int, count: int):
    """Random interval partitions; some cuts land inside bumps."""
    pts = sorted(mu.atoms[0][0][0] for mu in family.measures)
    r = family.measures[0].bump_radius
    lo, hi = pts[0] - 1, pts[-1] + 1
    for _ in range(count):
        cuts = set()
        while len(cuts) < n - 1:
            if rng.random() < 0.5:
                x = rng.choice(pts) + Q(rng.randint(-99, 99), 100) * r
            else:
                x = lo + (hi - lo) * Q(rng.randint(0, 10**6), 10**6)
            cuts.add(x)
        yield interval_partition(sorted(cuts))


def random_fan_candidates(rng: random.Random, family: MeasureFamily, n: int, count: int):
    """Random n-fans whose apex flat passes through every simplex bump."""
    from .fan import fan_from_rays, rays_form_fan
    from .geometry import Flat, project_about_flat, sub

    d = family.dimension
    simplex = [family.measures[j] for j in simplex_indices(family)]
    r = simplex[0].bump_radius
    for _ in range(count):
        pts = [add(mu.atoms[0][0], tuple(Q(rng.randint(-40, 40), 100) * r / d for _ in range(d))) for mu in simplex]
        flat = Flat(pts[0], tuple(sub(p, pts[0]) for p in pts[1:]))
        proj = project_about_flat([], flat)
        while n == 2:
            a = rng.random() * 2 * math.pi
            v = (Q(math.cos(a)).limit_denominator(10**4), Q(math.sin(a)).limit_denominator(10**4))
            rays = [v, (-v[0], -v[1])]
            break
        while n > 2:
            angles = sorted(rng.random() * 2 * math.pi for _ in range(n))
            rays = [(Q(math.cos(a)).limit_denominator(10**4), Q(math.sin(a)).limit_denominator(10**4)) for a in angles]
            if rays_form_fan(rays):
                break
        yield fan_from_rays(flat, proj, rays, d)


def candidate_stream(family: MeasureFamily, n: int, count: int, seed: int = 0):
    rng = random.Random(seed)
    if family.dimension == 1:
        return random_line_candidates(rng, family, n, count)
    return random_fan_candidates(rng, family, n, count)


__all__ = [
    "AdversarialError",
    "AdversarialReport",
    "adversarial_m",
    "candidate_stream",
    "gen_adversarial",
    "interval_coverage",
    "interval_partition",
    "oracle_1d",
    "oracle_1d_brute",
    "oracle_1d_formula",
    "random_interval_cuts",
    "verify_adversarial",
]
