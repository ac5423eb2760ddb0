"""Exact geometric primitives.

Everything here works on tuples of :class:`fractions.Fraction`.  Predicates
(orientation, sidedness, distances to polyhedra) are exact; floats appear only
in :class:`AngularProjection` angles/radii, which are for display.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

Q = Fraction
Vector = tuple  # tuple[Fraction, ...]


class GeometryError(ValueError):
    """Raised on degenerate or dimensionally inconsistent input."""


# ---------------------------------------------------------------------------
# vectors


def as_point(coords: Iterable) -> Vector:
    pt = tuple(Q(c) for c in coords)
    if not pt:
        raise GeometryError("empty point")
    return pt


def add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def scale(s, u):
    return tuple(s * a for a in u)


def dot(u, v):
    return sum((a * b for a, b in zip(u, v)), Q(0))


def norm2(u):
    return dot(u, u)


def unit_vector(d: int, i: int) -> Vector:
    return tuple(Q(1) if k == i else Q(0) for k in range(d))


def _lcm_denominator(values) -> int:
    den = 1
    for v in values:
        den = den * v.denominator // math.gcd(den, v.denominator)
    return den


def _int_row(row) -> list[int]:
    # scaling a row by a positive factor keeps the determinant's sign
    den = _lcm_denominator(row)
    return [int(v * den) for v in row]


def _bareiss_det(rows: list[list[int]]) -> int:
    a = [r[:] for r in rows]
    n = len(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def sign_det(rows: Sequence[Sequence[Fraction]]) -> int:
    """Sign of the determinant of a square rational matrix."""
    d = _bareiss_det([_int_row(r) for r in rows])
    return (d > 0) - (d < 0)


def det(rows: Sequence[Sequence[Fraction]]) -> Fraction:
    n = len(rows)
    a = [list(map(Q, r)) for r in rows]
    result = Q(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k] != 0), None)
        if piv is None:
            return Q(0)
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            result = -result
        result *= a[k][k]
        for i in range(k + 1, n):
            f = a[i][k] / a[k][k]
            if f:
                for j in range(k, n):
                    a[i][j] -= f * a[k][j]
    return result


def solve(matrix, rhs):
    """Solve a square rational system; ``None`` if singular."""
    n = len(matrix)
    a = [list(map(Q, row)) + [Q(b)] for row, b in zip(matrix, rhs)]
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k] != 0), None)
        if piv is None:
            return None
        a[k], a[piv] = a[piv], a[k]
        for i in range(n):
            if i != k and a[i][k] != 0:
                f = a[i][k] / a[k][k]
                for j in range(k, n + 1):
                    a[i][j] -= f * a[k][j]
    return tuple(a[i][n] / a[i][i] for i in range(n))


def nullspace(rows, ncols: int) -> list[Vector]:
    """Rational basis of {x : rows @ x = 0}."""
    a = [list(map(Q, r)) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        pv = a[r][c]
        a[r] = [x / pv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Q(0)] * ncols
        v[fc] = Q(1)
        for i, pc in enumerate(pivots):
            v[pc] = -a[i][fc]
        basis.append(tuple(v))
    return basis


def gram_schmidt(vectors: Iterable[Vector]) -> list[Vector]:
    """Orthogonal (not normalised) rational basis; dependent inputs are dropped."""
    out: list[Vector] = []
    for v in vectors:
        w = tuple(v)
        for b in out:
            w = sub(w, scale(dot(w, b) / norm2(b), b))
        if any(w):
            out.append(w)
    return out


def rational_sqrt_floor(x: Fraction, bits: int = 24) -> Fraction:
    """A rational lower bound on sqrt(x), accurate to about 2**-bits."""
    if x < 0:
        raise GeometryError("negative argument")
    k = 1 << bits
    return Q(math.isqrt(math.floor(x * k * k)), k)


# ---------------------------------------------------------------------------
# predicates


def orientation(points: Sequence[Vector]) -> int:
    """Sign of det[[1, p0], ..., [1, pd]] for d+1 points in R^d."""
    pts = [as_point(p) for p in points]
    d = len(pts[0])
    if any(len(p) != d for p in pts) or len(pts) != d + 1:
        raise GeometryError(f"orientation needs {d + 1} points of dimension {d}")
    return sign_det([sub(p, pts[0]) for p in pts[1:]])


def to_integer_coords(points: Sequence[Vector]) -> list[list[int]]:
    """Clear a common denominator; preserves all orientation signs."""
    den = _lcm_denominator(c for p in points for c in p)
    return [[int(c * den) for c in p] for p in points]


def in_general_position(points: Sequence[Vector]) -> bool:
    """True iff no d+1 of the points lie on a common affine hyperplane.

    Float determinants with a generous error margin settle the clear cases;
    anything near zero is decided exactly.
    """
    if not points:
        return True
    d = len(points[0])
    k = len(points)
    if k <= d:
        if k <= 1:
            return True
        diffs = [sub(p, points[0]) for p in points[1:]]
        return _rank(diffs) == k - 1
    import numpy as np

    combos = np.array(list(itertools.combinations(range(k), d + 1)), dtype=np.int64)
    arr = np.array([[float(c) for c in p] for p in points])
    mats = arr[combos[:, 1:]] - arr[combos[:, :1]]
    dets = np.linalg.det(mats) if d > 1 else mats[:, 0, 0]
    scale_ = np.max(np.abs(mats), axis=(1, 2)) ** d * math.factorial(d)
    unsure = np.nonzero(np.abs(dets) <= 1e-9 * scale_ + 1e-300)[0]
    for idx in unsure:
        combo = combos[idx]
        rows = [sub(points[i], points[combo[0]]) for i in combo[1:]]
        if sign_det(rows) == 0:
            return False
    return True


def _rank(rows) -> int:
    return len(rows) - len(nullspace([list(c) for c in zip(*rows)], len(rows)))


# ---------------------------------------------------------------------------
# hyperplanes, flats, regions


@dataclass(frozen=True)
class Hyperplane:
    """{x : <normal, x> = offset}."""

    normal: Vector
    offset: Fraction

    def __post_init__(self):
        object.__setattr__(self, "normal", as_point(self.normal))
        object.__setattr__(self, "offset", Q(self.offset))
        if not any(self.normal):
            raise GeometryError("hyperplane normal must be nonzero")

    @property
    def dimension(self) -> int:
        return len(self.normal)

    def value(self, x) -> Fraction:
        return dot(self.normal, x) - self.offset

    def side(self, x) -> int:
        v = self.value(x)
        return (v > 0) - (v < 0)

    @classmethod
    def through(cls, normal, point) -> "Hyperplane":
        normal = as_point(normal)
        return cls(normal, dot(normal, as_point(point)))


LE, GE = "<=", ">="


@dataclass(frozen=True)
class HalfSpace:
    plane: Hyperplane
    side: str = LE

    def __post_init__(self):
        if self.side not in (LE, GE):
            raise GeometryError(f"bad side {self.side!r}")

    def normalized(self) -> tuple[Vector, Fraction]:
        """(a, b) with the half-space written as a.x <= b."""
        if self.side == LE:
            return self.plane.normal, self.plane.offset
        return tuple(-c for c in self.plane.normal), -self.plane.offset

    def slack(self, x) -> Fraction:
        a, b = self.normalized()
        return b - dot(a, x)

    def contains(self, x) -> bool:
        return self.slack(x) >= 0

    def opposite(self) -> "HalfSpace":
        return HalfSpace(self.plane, GE if self.side == LE else LE)


@dataclass(frozen=True)
class Flat:
    """basepoint + span(directions)."""

    basepoint: Vector
    directions: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "basepoint", as_point(self.basepoint))
        dirs = tuple(as_point(v) for v in self.directions)
        object.__setattr__(self, "directions", dirs)
        if dirs and len(gram_schmidt(dirs)) != len(dirs):
            raise GeometryError("flat directions are linearly dependent")

    @property
    def ambient_dimension(self) -> int:
        return len(self.basepoint)

    @property
    def dimension(self) -> int:
        return len(self.directions)

    def contains(self, x) -> bool:
        v = sub(as_point(x), self.basepoint)
        ortho = gram_schmidt(self.directions)
        for b in ortho:
            v = sub(v, scale(dot(v, b) / norm2(b), b))
        return not any(v)


@dataclass(frozen=True)
class ConvexRegion:
    """Intersection of finitely many closed half-spaces (possibly unbounded)."""

    halfspaces: tuple = ()
    dimension: int = 2

    def contains(self, x) -> bool:
        return all(h.contains(x) for h in self.halfspaces)

    def contains_interior(self, x) -> bool:
        return all(h.slack(x) > 0 for h in self.halfspaces)

    def intersect(self, other: "ConvexRegion") -> "ConvexRegion":
        return ConvexRegion(self.halfspaces + other.halfspaces, self.dimension)

    def with_halfspace(self, h: HalfSpace) -> "ConvexRegion":
        return ConvexRegion(self.halfspaces + (h,), self.dimension)

    def sqdist(self, x) -> Fraction:
        """Exact squared Euclidean distance from ``x`` to the region."""
        x = as_point(x)
        if self.contains(x):
            return Q(0)
        rows = [h.normalized() for h in self.halfspaces]
        d = self.dimension
        best = None
        # the nearest point is the projection onto the affine hull of its
        # active constraints; enumerate candidate active sets
        for k in range(1, min(d, len(rows)) + 1):
            for combo in itertools.combinations(range(len(rows)), k):
                proj = _project_affine(x, [rows[i] for i in combo])
                if proj is None:
                    continue
                if all(dot(a, proj) <= b for a, b in rows):
                    dist = norm2(sub(x, proj))
                    if best is None or dist < best:
                        best = dist
        if best is None:
            raise GeometryError("region appears empty")
        return best

    def meets_open_ball(self, center, radius) -> bool:
        """Does the open ball B(center, radius) meet int(region)?

        For a region with nonempty interior this is dist(center, region) < radius.
        """
        center = as_point(center)
        r2 = Q(radius) ** 2
        inside = True
        for h in self.halfspaces:
            a, _ = h.normalized()
            s = h.slack(center)
            if s <= 0:
                inside = False
                if s * s >= r2 * norm2(a):
                    return False  # the ball misses this half-space's interior
        if inside or len(self.halfspaces) == 1:
            return True
        return self.sqdist(center) < r2

    def interior_point(self):
        """A rational point strictly inside, or ``None`` if none was found."""
        return strict_interior_point(self.halfspaces, self.dimension)


def _project_affine(x, constraints):
    """Projection of x onto {y : a_i.y = b_i}; None if the a_i are dependent."""
    normals = [a for a, _ in constraints]
    gram = [[dot(ai, aj) for aj in normals] for ai in normals]
    rhs = [dot(a, x) - b for a, b in constraints]
    lam = solve(gram, rhs)
    if lam is None:
        return None
    y = x
    for l, a in zip(lam, normals):
        y = sub(y, scale(l, a))
    return y


def strict_interior_point(halfspaces: Sequence[HalfSpace], dimension: int, center=None, box=None):
    """Search for a rational point satisfying every half-space strictly.

    A Chebyshev-centre LP (floating point) proposes candidates, which are
    rationalised and certified exactly; if none survives, an exact vertex
    enumeration of the slack LP decides.  ``center`` and ``box`` restrict the
    search to an axis-aligned cube of half-width ``box``.  Returns ``None``
    when no point exists in the search box.
    """
    if center is not None:
        center = as_point(center)
        box = Q(box)
    if not halfspaces:
        return center if center is not None else tuple(Q(0) for _ in range(dimension))
    rows = [h.normalized() for h in halfspaces]

    def ok(x):
        if center is not None and any(abs(a - c) > box for a, c in zip(x, center)):
            return False
        return all(dot(a, x) < b for a, b in rows)

    for candidate in _interior_candidates(rows, dimension, center, box):
        if ok(candidate):
            return candidate
    return _exact_interior(rows, dimension, center, box)


def _box_rows(rows, dimension, center, box):
    if center is None:
        big = 1 + max(abs(b) for _, b in rows) + max(abs(c) for a, _ in rows for c in a)
        big = Q(10**6) * big
        center, box = tuple(Q(0) for _ in range(dimension)), big
    extra = []
    for j in range(dimension):
        e = unit_vector(dimension, j)
        extra.append((e, center[j] + box))
        extra.append((tuple(-c for c in e), box - center[j]))
    return extra


def _exact_interior(rows, dimension, center, box):
    """Exact: a vertex of {a.x + t <= b, box, t <= 1} with t > 0, if any."""
    full = [(a, b, True) for a, b in rows]
    full += [(a, b, False) for a, b in _box_rows(rows, dimension, center, box)]
    lifted = [(tuple(a) + ((Q(1),) if slack else (Q(0),)), b) for a, b, slack in full]
    lifted.append((tuple([Q(0)] * dimension) + (Q(1),), Q(1)))
    best = None
    for combo in itertools.combinations(range(len(lifted)), dimension + 1):
        mat = [list(lifted[i][0]) for i in combo]
        sol = solve(mat, [lifted[i][1] for i in combo])
        if sol is None or sol[-1] <= 0:
            continue
        if all(dot(a, sol) <= b for a, b in lifted):
            if best is None or sol[-1] > best[-1]:
                best = sol
    if best is None:
        return None
    return tuple(best[:dimension])


def _interior_candidates(rows, dimension, center=None, box=None):
    import numpy as np
    from scipy.optimize import linprog

    A = np.array([[float(c) for c in a] for a, _ in rows])
    b = np.array([float(v) for _, v in rows])
    norms = np.linalg.norm(A, axis=1)
    scale_ = max(1.0, float(np.max(np.abs(b))) if len(b) else 1.0)
    A_ub = np.hstack([A, norms[:, None]])
    cost = np.zeros(dimension + 1)
    cost[-1] = -1.0
    if center is None:
        bounds = [(-1e6 * scale_, 1e6 * scale_)] * dimension + [(0, scale_)]
    else:
        fb = float(box)
        bounds = [(float(c) - fb, float(c) + fb) for c in center] + [(0, fb)]
    res = linprog(cost, A_ub=A_ub, b_ub=b, bounds=bounds, method="highs")
    if res.status != 0 or res.x[-1] <= 0:
        return
    x = res.x[:dimension]
    radius = res.x[-1]
    for den in (10**3, 10**6, 10**9, 10**12):
        yield tuple(Q(v).limit_denominator(den) for v in x)
    # shrink towards the float centre with explicit rational rounding
    if radius > 0:
        step = max(radius / 4, 1e-12)
        k = Q(step).limit_denominator(10**15)
        yield tuple(Q(round(v / float(k))) * k for v in x)


def interiors_disjoint(r1: ConvexRegion, r2: ConvexRegion) -> bool:
    """Exact certificate that int(r1) and int(r2) do not meet.

    Uses Motzkin's transposition theorem: the strict system a_i.x < b_i is
    infeasible iff some nonzero lambda >= 0 has sum lambda_i a_i = 0 and
    sum lambda_i b_i <= 0.  Vertex certificates use at most d+2 constraints.
    """
    rows = [h.normalized() for h in r1.halfspaces + r2.halfspaces]
    d = r1.dimension
    for k in range(2, min(len(rows), d + 2) + 1):
        for combo in itertools.combinations(range(len(rows)), k):
            cols = [rows[i][0] for i in combo]
            mat = [[cols[j][r] for j in range(k)] for r in range(d)]
            for lam in nullspace(mat, k):
                for sgn in (1, -1):
                    lam_s = [sgn * v for v in lam]
                    if all(v >= 0 for v in lam_s) and any(lam_s):
                        if sum((l * rows[i][1] for l, i in zip(lam_s, combo)), Q(0)) <= 0:
                            return True
    return False


# ---------------------------------------------------------------------------
# ridge discovery


@dataclass(frozen=True)
class Ridge:
    """A (d-2)-face of conv(points) with a supporting hyperplane.

    ``support`` satisfies ``support.value(p) >= 0`` for every input point with
    equality exactly on the ridge vertices.
    """

    indices: tuple
    flat: Flat
    support: Hyperplane


def _lex_support_normal(points, i0):
    d = len(points[0])
    p0 = points[i0]
    others = [sub(p, p0) for k, p in enumerate(points) if k != i0]
    delta = Q(0)
    for _ in range(200):
        a = tuple(delta**k if k else Q(1) for k in range(d))
        if all(dot(a, v) > 0 for v in others):
            return a
        delta = Q(1, 2) if delta == 0 else delta / 2
    raise GeometryError("could not certify a supporting hyperplane at the extreme vertex")


def find_ridge(points: Sequence[Vector]) -> Ridge:
    """Find a (d-2)-dimensional face of the hull by gift-wrapping pivots.

    Starts at the lexicographically smallest point and performs d-2 pivots,
    each rotating the current supporting hyperplane until it meets another
    input point.
    """
    pts = [as_point(p) for p in points]
    if not pts:
        raise GeometryError("no points")
    d = len(pts[0])
    if d < 2:
        raise GeometryError("ridges need d >= 2")
    if any(len(p) != d for p in pts):
        raise GeometryError("dimension mismatch")
    if len(pts) < d:
        raise GeometryError(f"need at least d={d} points, got {len(pts)}")
    if not in_general_position(pts):
        raise GeometryError("points are not in general position")

    i0 = min(range(len(pts)), key=lambda i: pts[i])
    face = [i0]
    normal = _lex_support_normal(pts, i0)
    s0 = pts[i0]
    while len(face) < d - 1:
        spans = [sub(pts[i], s0) for i in face[1:]]
        comp = nullspace([normal, *spans], d)
        chosen = None
        for attempt in range(1, 50):
            t = tuple(sum((attempt**k * v[r] for k, v in enumerate(comp)), Q(0)) for r in range(d))
            best, arg, tie = None, None, False
            for q, p in enumerate(pts):
                if q in face:
                    continue
                v = sub(p, s0)
                lam = -dot(t, v) / dot(normal, v)
                if best is None or lam > best:
                    best, arg, tie = lam, q, False
                elif lam == best:
                    tie = True
            if not tie:
                chosen = (best, arg, t)
                break
        if chosen is None:
            raise GeometryError("gift-wrapping pivot could not resolve a tie")
        lam, q, t = chosen
        normal = add(scale(lam, normal), t)
        face.append(q)
    support = Hyperplane(normal, dot(normal, s0))
    for k, p in enumerate(pts):
        v = support.value(p)
        if v < 0 or (v == 0) != (k in face):
            raise GeometryError("ridge certificate failed")
    flat = Flat(s0, tuple(sub(pts[i], s0) for i in face[1:]))
    return Ridge(tuple(face), flat, support)


# ---------------------------------------------------------------------------
# projection about a (d-2)-flat


@dataclass(frozen=True)
class ProjectedPoint:
    index: int
    angle: float
    radius: float
    s: Fraction  # <p - origin, axis0>
    t: Fraction  # <p - origin, axis1>


@dataclass(frozen=True)
class AngularProjection:
    """Points seen in the 2-plane orthogonal to a (d-2)-flat.

    ``axes`` are rational, mutually orthogonal, orthogonal to the flat, but not
    normalised.  Exact in-plane coordinates ``(s, t)`` are inner products with
    the axes; they differ from orthonormal coordinates by a positive diagonal
    scaling, so orientation and angular order are preserved.
    """

    origin: Vector
    axes: tuple
    images: tuple = field(default_factory=tuple)

    def lift(self, s, t) -> Vector:
        """The in-plane vector of R^d whose exact coordinates are (s, t)."""
        b0, b1 = self.axes
        return add(scale(Q(s) / norm2(b0), b0), scale(Q(t) / norm2(b1), b1))

    def left_normal(self, s, t) -> Vector:
        """n with n.(x - origin) = orient((s, t), coords(x))."""
        b0, b1 = self.axes
        return sub(scale(Q(s), b1), scale(Q(t), b0))

    def coords(self, x):
        v = sub(as_point(x), self.origin)
        return dot(v, self.axes[0]), dot(v, self.axes[1])

    def float_angle(self, s, t) -> float:
        b0, b1 = self.axes
        ang = math.atan2(float(t) / math.sqrt(norm2(b1)), float(s) / math.sqrt(norm2(b0)))
        return ang % (2 * math.pi)


def complement_axes(flat: Flat) -> tuple:
    d = flat.ambient_dimension
    if flat.dimension != d - 2:
        raise GeometryError("flat must have dimension d-2")
    dirs = gram_schmidt(flat.directions)
    basis = gram_schmidt(list(dirs) + [unit_vector(d, i) for i in range(d)])
    return tuple(basis[len(dirs):len(dirs) + 2])


def project_about_flat(points: Sequence[Vector], flat: Flat, indices=None) -> AngularProjection:
    axes = complement_axes(flat)
    proj = AngularProjection(flat.basepoint, axes)
    images = []
    idx = range(len(points)) if indices is None else indices
    for i in idx:
        s, t = proj.coords(points[i])
        r2 = s * s / norm2(axes[0]) + t * t / norm2(axes[1])
        if r2 == 0:
            raise GeometryError(f"point {i} lies on the flat")
        images.append(ProjectedPoint(i, proj.float_angle(s, t), math.sqrt(r2), s, t))
    return AngularProjection(flat.basepoint, axes, tuple(images))


def cross2(u, v):
    return u[0] * v[1] - u[1] * v[0]


# ---------------------------------------------------------------------------
# partitions


@dataclass
class ConvexPartition:
    """Convex regions covering R^d with pairwise disjoint interiors.

    ``shares`` optionally maps an atom key to the fraction of that atom's
    weight assigned to each region; atoms without an entry are assigned by the
    half-open rule (lowest-index region whose closure contains them).
    """

    regions: list
    provenance: dict = field(default_factory=dict)
    shares: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return len(self.regions)

    @property
    def dimension(self) -> int:
        return self.regions[0].dimension

    def locate(self, x) -> list[int]:
        """Indices of regions whose closure contains x."""
        return [i for i, r in enumerate(self.regions) if r.contains(x)]

    def owner(self, x) -> int:
        hits = self.locate(x)
        if not hits:
            raise GeometryError(f"point {x} is not covered by the partition")
        return hits[0]


def check_partition(partition: ConvexPartition, samples: Sequence[Vector] = ()) -> list[str]:
    """Exact partition checks; returns a list of problems.

    Nonempty interiors are certified with rational interior points, disjoint
    interiors with Motzkin certificates.  Coverage of R^d is structural for
    the constructors in this package; ``samples`` adds pointwise spot checks.
    """
    problems = []
    for i, r in enumerate(partition.regions):
        if r.interior_point() is None:
            problems.append(f"region {i} has no certified interior point")
    for i, j in itertools.combinations(range(partition.n), 2):
        if not interiors_disjoint(partition.regions[i], partition.regions[j]):
            problems.append(f"regions {i} and {j} may overlap")
    for x in samples:
        if not partition.locate(x):
            problems.append(f"sample {x} uncovered")
    return problems
