"""Fan partitions in which every wedge meets the supports of at least c measures.

Outline of :func:`build_fan`:

1. pick one anchor point inside each measure's support, nudged into general
   position;
2. find a (d-2)-face F of the anchors' hull and look at the remaining anchors
   in the 2-plane orthogonal to it;
3. rotate a hyperplane about F until c-d anchors lie strictly on one side and
   one more anchor w lies on it;
4. cut the other side into wedges with half-hyperplanes through every
   (c-d)-th remaining anchor.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .geometry import (
    ConvexPartition,
    ConvexRegion,
    Flat,
    GE,
    HalfSpace,
    Hyperplane,
    LE,
    AngularProjection,
    add,
    cross2,
    dot,
    find_ridge,
    in_general_position,
    norm2,
    project_about_flat,
    scale,
    sub,
)
from .measures import MeasureFamily

Q = Fraction


class FanError(ValueError):
    pass


# ---------------------------------------------------------------------------
# anchors


def anchor_atom(measure) -> int:
    best = 0
    for k, (_, w) in enumerate(measure.atoms):
        if w > measure.atoms[best][1]:
            best = k
    return best


def _moment(t: int, d: int):
    return tuple(Q(t) ** (i + 1) for i in range(d))


def choose_anchors(family: MeasureFamily, max_halvings: int = 80) -> list:
    """One point per measure, strictly inside its bump ball, in general position.

    Starts from each measure's heaviest atom and, if needed, moves point j
    along the moment curve by delta*(t, t^2, ..., t^d), t = j+1, halving delta
    until the points are in general position.
    """
    d = family.dimension
    if family.m < d:
        raise FanError(f"need at least d={d} measures, got {family.m}")
    centers = [mu.atoms[anchor_atom(mu)][0] for mu in family.measures]
    if in_general_position(centers):
        return centers
    offsets = [_moment(j + 1, d) for j in range(family.m)]
    # start where every offset is within half of its measure's radius
    delta = min(mu.bump_radius / 2 / max(abs(c) for c in off) / d for mu, off in zip(family.measures, offsets))
    for _ in range(max_halvings):
        moved = [add(c, scale(delta, off)) for c, off in zip(centers, offsets)]
        if in_general_position(moved):
            for mu, c, p in zip(family.measures, centers, moved):
                if norm2(sub(p, c)) >= mu.bump_radius ** 2:
                    raise FanError("perturbation left a bump ball; use a larger bump_radius")
            return moved
        delta /= 2
    raise FanError("could not reach general position inside the bump balls; use a larger bump_radius")


# ---------------------------------------------------------------------------
# angular sweep


def _ccw_key(u, v) -> int:
    # valid as a total order only for vectors inside one open half-plane
    c = cross2(u, v)
    return -1 if c > 0 else (1 if c < 0 else 0)


@dataclass(frozen=True)
class RotationCut:
    """Result of rotating a hyperplane about the flat.

    ``order`` lists point indices counter-clockwise starting from the
    clockwise-extreme one; ``inside`` are strictly in H+, ``w`` lies on H,
    ``outside`` are strictly in H-.
    """

    order: tuple
    inside: tuple
    w: int
    outside: tuple
    angles: tuple  # (angle of w, angle of w + pi) as floats

    @property
    def angle_pair(self):
        return self.angles


def rotate_to_cut(projection: AngularProjection, interior_target: int) -> RotationCut:
    """Pick w as the (target+1)-th projected point counter-clockwise."""
    imgs = list(projection.images)
    if interior_target < 0:
        raise FanError("interior target must be nonnegative")
    if len(imgs) < interior_target + 1:
        raise FanError(
            f"need at least {interior_target + 1} points off the flat, got {len(imgs)}"
        )
    by_index = {im.index: (im.s, im.t) for im in imgs}
    order = sorted(by_index, key=functools.cmp_to_key(lambda a, b: _ccw_key(by_index[a], by_index[b])))
    for a, b in zip(order, order[1:]):
        if cross2(by_index[a], by_index[b]) <= 0:
            raise FanError("projected points are not strictly inside one half-plane")
    if len(order) > 1 and cross2(by_index[order[0]], by_index[order[-1]]) <= 0:
        raise FanError("projected points are not strictly inside one half-plane")
    w = order[interior_target]
    ang = {im.index: im.angle for im in imgs}[w]
    return RotationCut(
        tuple(order),
        tuple(order[:interior_target]),
        w,
        tuple(order[interior_target + 1:]),
        (ang, (ang + math.pi) % (2 * math.pi)),
    )


# ---------------------------------------------------------------------------
# fans


def wedge_region(projection: AngularProjection, a, b, dimension: int) -> ConvexRegion:
    """Closed wedge swept counter-clockwise from ray a to ray b (angle <= pi)."""
    o = projection.origin
    na = projection.left_normal(*a)
    nb = projection.left_normal(*b)
    first = HalfSpace(Hyperplane(na, dot(na, o)), GE)
    if cross2(a, b) == 0:
        return ConvexRegion((first,), dimension)
    return ConvexRegion((first, HalfSpace(Hyperplane(nb, dot(nb, o)), LE)), dimension)


def rays_form_fan(rays) -> bool:
    """Exact check: rays are in strict counter-clockwise order over exactly
    one turn and every consecutive gap (including the wrap) is at most pi."""
    n = len(rays)
    if n < 2 or any(not any(r) for r in rays):
        return False
    base = rays[0]

    def half(v):
        c = cross2(base, v)
        return 0 if c > 0 or (c == 0 and dot(base, v) > 0) else 1

    def before(u, v):
        hu, hv = half(u), half(v)
        return hu < hv or (hu == hv and cross2(u, v) > 0)

    if not all(before(u, v) for u, v in zip(rays, rays[1:])):
        return False
    for i in range(n):
        u, v = rays[i], rays[(i + 1) % n]
        c = cross2(u, v)
        if c < 0 or (c == 0 and dot(u, v) > 0):
            return False
    return True


@dataclass
class FanPartition:
    apex: Flat
    rays: list  # exact in-plane (s, t) directions, counter-clockwise
    projection: AngularProjection
    partition: ConvexPartition
    anchors: list = field(default_factory=list)
    flat_indices: tuple = ()
    w_index: int | None = None
    surplus_region: int | None = None
    c: int = 0

    @property
    def n(self) -> int:
        return len(self.rays)

    @property
    def regions(self):
        return self.partition.regions

    @property
    def region_order(self):
        return self.partition.regions

    @property
    def angles(self):
        return [self.projection.float_angle(s, t) for s, t in self.rays]

    def anchor_counts(self) -> list[int]:
        """Anchors lying in each closed wedge (boundary anchors count twice)."""
        return [sum(1 for p in self.anchors if r.contains(p)) for r in self.regions]

    def is_valid(self) -> bool:
        """Structural partition check: an exact counter-clockwise fan."""
        return rays_form_fan(self.rays) and len(self.regions) == len(self.rays)


def fan_from_rays(apex: Flat, projection: AngularProjection, rays, d: int, provenance=None) -> ConvexPartition:
    n = len(rays)
    regions = [wedge_region(projection, rays[i], rays[(i + 1) % n], d) for i in range(n)]
    return ConvexPartition(regions, provenance or {"type": "fan"})


def check_hypothesis(d: int, n: int, c: int, m: int) -> None:
    if d < 2:
        raise FanError("the fan construction needs d >= 2")
    if n < 2:
        raise FanError("need n >= 2")
    if c < d:
        raise FanError(f"need c >= d (c={c}, d={d})")
    if m < n * (c - d) + d:
        raise FanError(f"requires m >= n(c-d)+d = {n * (c - d) + d}, got m={m}")


def build_fan(family: MeasureFamily, n: int, c: int) -> FanPartition:
    d = family.dimension
    m = family.m
    check_hypothesis(d, n, c, m)
    anchors = choose_anchors(family)
    ridge = find_ridge(anchors)
    off = [i for i in range(m) if i not in ridge.indices]
    projection = project_about_flat(anchors, ridge.flat, off)
    cut = rotate_to_cut(projection, c - d)
    coords = {im.index: (im.s, im.t) for im in projection.images}
    wv = coords[cut.w]
    neg_w = (-wv[0], -wv[1])

    if c > d:
        rays = [wv]
        for j in range(1, n - 1):
            rays.append(coords[cut.outside[j * (c - d) - 1]])
        rays.append(neg_w)
    else:
        rays = _shadow_rays(family, anchors, projection, cut.w, wv, n)

    part = fan_from_rays(ridge.flat, projection, rays, d,
                         {"type": "fan", "flat_indices": list(ridge.indices), "w": cut.w})
    return FanPartition(
        apex=ridge.flat,
        rays=rays,
        projection=projection,
        partition=part,
        anchors=anchors,
        flat_indices=ridge.indices,
        w_index=cut.w,
        surplus_region=n - 2,
        c=c,
    )


def _shadow_rays(family, anchors, projection, w, wv, n):
    """c = d: n-1 rays through the bump ball of w plus the ray opposite w."""
    if n == 2:
        return [wv, (-wv[0], -wv[1])]
    mu = family.measures[w]
    center = mu.atoms[anchor_atom(mu)][0]
    perp = (-wv[1], wv[0])
    step = projection.lift(*perp)
    eps = Q(1)
    for _ in range(200):
        tip = add(anchors[w], scale(eps * (n - 2), step))
        if norm2(sub(tip, center)) < mu.bump_radius ** 2:
            break
        eps /= 2
    else:
        raise FanError("could not fit rays inside the bump of w")
    rays = [(wv[0] + k * eps * perp[0], wv[1] + k * eps * perp[1]) for k in range(n - 1)]
    rays.append((-wv[0], -wv[1]))
    return rays


__all__ = [
    "FanError",
    "FanPartition",
    "RotationCut",
    "build_fan",
    "check_hypothesis",
    "choose_anchors",
    "rays_form_fan",
    "rotate_to_cut",
    "wedge_region",
]
