"""Discrete measures: weighted atoms with small bump balls, and mass evaluation."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .geometry import (
    ConvexPartition,
    ConvexRegion,
    GeometryError,
    as_point,
    norm2,
    rational_sqrt_floor,
    sub,
)

Q = Fraction

STRICT = "strict"
CLOSED = "closed"


class MeasureError(ValueError):
    pass


@dataclass(frozen=True)
class DiscreteMeasure:
    """Atoms ``(point, weight)``; each atom stands for a bump of ``bump_radius``."""

    atoms: tuple
    bump_radius: Fraction
    label: str = ""

    def __post_init__(self):
        atoms = tuple((as_point(p), Q(w)) for p, w in self.atoms)
        if not atoms:
            raise MeasureError("a measure needs at least one atom")
        if any(w <= 0 for _, w in atoms):
            raise MeasureError("atom weights must be positive")
        d = len(atoms[0][0])
        if any(len(p) != d for p, _ in atoms):
            raise MeasureError("atoms of mixed dimension")
        object.__setattr__(self, "atoms", atoms)
        r = Q(self.bump_radius)
        if r <= 0:
            raise MeasureError("bump_radius must be positive")
        object.__setattr__(self, "bump_radius", r)

    @property
    def dimension(self) -> int:
        return len(self.atoms[0][0])

    @property
    def total(self) -> Fraction:
        return sum((w for _, w in self.atoms), Q(0))

    def points(self):
        return [p for p, _ in self.atoms]

    def scaled(self, factor) -> "DiscreteMeasure":
        factor = Q(factor)
        return DiscreteMeasure(tuple((p, w * factor) for p, w in self.atoms), self.bump_radius, self.label)

    def with_radius(self, radius) -> "DiscreteMeasure":
        return DiscreteMeasure(self.atoms, radius, self.label)


@dataclass(frozen=True)
class MeasureFamily:
    measures: tuple
    dimension: int

    def __post_init__(self):
        ms = tuple(self.measures)
        object.__setattr__(self, "measures", ms)
        if not ms:
            raise MeasureError("a family needs at least one measure")
        if any(mu.dimension != self.dimension for mu in ms):
            raise MeasureError("measures must share the family dimension")
        labels = [mu.label for mu in ms]
        if len(set(labels)) != len(labels):
            raise MeasureError("measure labels must be unique")

    @property
    def m(self) -> int:
        return len(self.measures)

    def __len__(self):
        return len(self.measures)

    def __getitem__(self, i):
        return self.measures[i]

    def totals(self):
        return [mu.total for mu in self.measures]


@dataclass(frozen=True)
class MassMatrix:
    entries: tuple  # m rows of n Fractions
    row_totals: tuple

    @property
    def shape(self):
        return len(self.entries), len(self.entries[0]) if self.entries else 0

    def column(self, i):
        return [row[i] for row in self.entries]

    def is_conservative(self) -> bool:
        return all(sum(row, Q(0)) == t for row, t in zip(self.entries, self.row_totals))


def atom_meets_interior(center, radius, region: ConvexRegion) -> bool:
    return region.meets_open_ball(center, radius)


def mass(measure: DiscreteMeasure, region: ConvexRegion, mode: str = CLOSED,
         partition: ConvexPartition | None = None, index: int | None = None) -> Fraction:
    """Mass of ``measure`` in ``region``.

    ``closed``: total weight of atoms whose bump ball meets the region's
    interior.  ``strict``: the exact share under the partition's assignment
    (explicit shares if present, else lowest-index region containing the atom);
    this needs ``partition`` and the region's ``index`` in it.
    """
    if measure.dimension != region.dimension:
        raise MeasureError("dimension mismatch")
    if mode == CLOSED:
        return sum((w for p, w in measure.atoms if region.meets_open_ball(p, measure.bump_radius)), Q(0))
    if mode == STRICT:
        if partition is None or index is None:
            if partition is None and index is None:
                # standalone strict mass: atoms in the closed region
                return sum((w for p, w in measure.atoms if region.contains(p)), Q(0))
            raise MeasureError("strict mode needs both partition and index")
        return _strict_row(measure, partition)[index]
    raise MeasureError(f"unknown mode {mode!r}")


def _strict_row(measure: DiscreteMeasure, partition: ConvexPartition) -> list:
    row = [Q(0)] * partition.n
    for k, (p, w) in enumerate(measure.atoms):
        share = partition.shares.get((measure.label, k))
        if share is not None:
            for i, s in enumerate(share):
                row[i] += w * s
        else:
            row[partition.owner(p)] += w
    return row


def evaluate_matrix(family: MeasureFamily, partition: ConvexPartition) -> MassMatrix:
    """Strict-mode m x n mass matrix; rows sum to the measure totals exactly."""
    rows = tuple(tuple(_strict_row(mu, partition)) for mu in family.measures)
    return MassMatrix(rows, tuple(family.totals()))


def closed_matrix(family: MeasureFamily, partition: ConvexPartition) -> MassMatrix:
    rows = tuple(tuple(mass(mu, r, CLOSED) for r in partition.regions) for mu in family.measures)
    return MassMatrix(rows, tuple(family.totals()))


def coverage_counts(family: MeasureFamily, partition: ConvexPartition, tau=0) -> list[int]:
    """Per region, how many measures have closed-mode mass above ``tau``.

    ``tau`` may be one number or a per-measure sequence.
    """
    taus = list(tau) if isinstance(tau, (list, tuple)) else [tau] * family.m
    if len(taus) != family.m:
        raise MeasureError("need one threshold per measure")
    taus = [Q(t) for t in taus]
    if any(t < 0 for t in taus):
        raise MeasureError("thresholds must be nonnegative")
    counts = []
    for region in partition.regions:
        counts.append(sum(1 for mu, t in zip(family.measures, taus) if _closed_exceeds(mu, region, t)))
    return counts


def _closed_exceeds(mu, region, t) -> bool:
    acc = Q(0)
    for p, w in mu.atoms:
        if region.meets_open_ball(p, mu.bump_radius):
            acc += w
            if acc > t:
                return True
    return False


def min_pairwise_sqdist(points) -> Fraction | None:
    best = None
    for p, q in itertools.combinations(points, 2):
        d2 = norm2(sub(p, q))
        if best is None or d2 < best:
            best = d2
    return best


def default_radius(points: Sequence, fallback=Q(1, 4)) -> Fraction:
    """A quarter of (a rational lower bound on) the minimum distance between
    distinct points; ``fallback`` if there are fewer than two distinct points."""
    distinct = sorted(set(as_point(p) for p in points))
    best = min_pairwise_sqdist(distinct)
    if not best:
        return Q(fallback)
    lower = rational_sqrt_floor(best)
    if lower <= 0:
        raise MeasureError("atoms too close for a positive default radius")
    return lower / 4


def make_family(raw_measures, dimension: int, radius=None) -> MeasureFamily:
    """Build a family from ``[(label, [(point, weight), ...]), ...]``.

    With ``radius=None`` every measure gets the family-wide default radius.
    """
    raw_measures = list(raw_measures)
    if radius is None:
        radius = default_radius([p for _, atoms in raw_measures for p, _ in atoms])
    return MeasureFamily(
        tuple(DiscreteMeasure(tuple(atoms), radius, label) for label, atoms in raw_measures),
        dimension,
    )


def random_family(rng, d: int, m: int, atoms_per_measure=(1, 3), coord_range=100) -> MeasureFamily:
    """Random integer-coordinate family with distinct atom locations."""
    lo, hi = atoms_per_measure
    used = set()
    raw = []
    for j in range(m):
        atoms = []
        for _ in range(rng.randint(lo, hi)):
            while True:
                p = tuple(Q(rng.randint(-coord_range, coord_range)) for _ in range(d))
                if p not in used:
                    used.add(p)
                    break
            atoms.append((p, Q(rng.randint(1, 9))))
        raw.append((f"mu{j + 1}", atoms))
    return make_family(raw, d)


__all__ = [
    "CLOSED",
    "STRICT",
    "DiscreteMeasure",
    "GeometryError",
    "MassMatrix",
    "MeasureError",
    "MeasureFamily",
    "closed_matrix",
    "coverage_counts",
    "default_radius",
    "evaluate_matrix",
    "make_family",
    "mass",
    "random_family",
]
