"""Intersection posets of the coordinate-subspace arrangements A(m,n,c), A~(m,n,c).

A poset element is a zero pattern: an R x n 0/1 matrix (R = m-1 for A, m for
A~) recording which coordinates are forced to vanish.  Each column's zero-set
is empty or has at least g = m-c+1 rows.  No row may be entirely zero, and for
A~ no column may be entirely zero either.  Order is containment of zero-sets.

Two engines:

* :func:`build_poset` lists every element explicitly (size-capped);
* :func:`orbit_summary` walks the same poset modulo row and column
  permutations, which is exact (they are automorphisms) and scales to the
  whole m <= 7, n <= 4 grid.
"""

from __future__ import annotations

import itertools
import os
from collections import defaultdict
from dataclasses import dataclass, field
from functools import lru_cache

A = "A"
A_TILDE = "A_tilde"
DEFAULT_CAP = 20000


class PosetError(ValueError):
    pass


def _check(m: int, n: int, c: int, variant: str) -> int:
    if variant not in (A, A_TILDE):
        raise PosetError(f"unknown variant {variant!r}")
    if m < 2 or n < 1 or not 2 <= c <= m:
        raise PosetError("need m >= 2, n >= 1, 2 <= c <= m")
    return m - 1 if variant == A else m


def generator_size(m: int, c: int) -> int:
    return m - c + 1


def max_poset_size() -> int:
    raw = os.environ.get("FAIRFAN_MAX_POSET")
    return int(raw) if raw else DEFAULT_CAP


# ---------------------------------------------------------------------------
# explicit poset


@dataclass(frozen=True)
class ZeroPattern:
    rows: int
    cols: int
    zeros: tuple  # rows x cols tuple of bools

    @classmethod
    def from_columns(cls, rows: int, columns) -> "ZeroPattern":
        cols = len(columns)
        return cls(rows, cols, tuple(tuple(r in columns[k] for k in range(cols)) for r in range(rows)))

    def column_sets(self) -> tuple:
        return tuple(frozenset(r for r in range(self.rows) if self.zeros[r][k]) for k in range(self.cols))

    @property
    def zero_count(self) -> int:
        return sum(map(sum, self.zeros))

    def zero_cells(self) -> frozenset:
        return frozenset((r, k) for r in range(self.rows) for k in range(self.cols) if self.zeros[r][k])

    def __le__(self, other: "ZeroPattern") -> bool:
        return self.zero_cells() <= other.zero_cells()

    def permute_columns(self, perm) -> "ZeroPattern":
        """Column k moves to position perm[k]."""
        inv = [0] * self.cols
        for k, p in enumerate(perm):
            inv[p] = k
        return ZeroPattern(self.rows, self.cols, tuple(tuple(row[inv[j]] for j in range(self.cols)) for row in self.zeros))

    def nonzero_columns(self) -> frozenset:
        return frozenset(k for k in range(self.cols) if any(self.zeros[r][k] for r in range(self.rows)))

    def label(self) -> str:
        return "/".join("".join("0" if z else "*" for z in row) for row in self.zeros)


@dataclass
class IntersectionPoset:
    m: int
    n: int
    c: int
    variant: str
    elements: list
    hasse_edges: list = field(default_factory=list)  # (lower, upper) indices

    @property
    def rows(self) -> int:
        return self.m - 1 if self.variant == A else self.m

    def index(self) -> dict:
        return {e: i for i, e in enumerate(self.elements)}

    def leq(self, i: int, j: int) -> bool:
        return self.elements[i] <= self.elements[j]

    def fiber(self, columns=None) -> "IntersectionPoset":
        """Sub-poset of elements whose nonzero columns are exactly ``columns``
        (default: all columns)."""
        want = frozenset(range(self.n)) if columns is None else frozenset(columns)
        keep = [i for i, e in enumerate(self.elements) if e.nonzero_columns() == want]
        pos = {i: t for t, i in enumerate(keep)}
        edges = [(pos[a], pos[b]) for a, b in self.hasse_edges if a in pos and b in pos]
        return IntersectionPoset(self.m, self.n, self.c, self.variant, [self.elements[i] for i in keep], edges)

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "n": self.n,
            "c": self.c,
            "variant": self.variant,
            "elements": [[[int(z) for z in row] for row in e.zeros] for e in self.elements],
            "hasse_edges": [list(e) for e in self.hasse_edges],
        }

    def to_dot(self, highlight=None) -> str:
        """Hasse diagram in DOT; larger zero-sets are drawn higher."""
        highlight = set(highlight or ())
        lines = ["digraph poset {", "  rankdir=BT;", "  node [shape=box, fontname=monospace];"]
        for i, e in enumerate(self.elements):
            extra = ", color=red" if i in highlight else ""
            lines.append(f'  p{i} [label="{e.label()}"{extra}];')
        for a, b in self.hasse_edges:
            lines.append(f"  p{a} -> p{b};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def _column_choices(rows: int, g: int, col_cap: int):
    out = [frozenset()]
    for s in range(g, col_cap + 1):
        out.extend(frozenset(x) for x in itertools.combinations(range(rows), s))
    return out


def estimate_size(m: int, n: int, c: int, variant: str = A) -> int:
    """Upper bound on the number of elements (column choices ^ n)."""
    from math import comb

    rows = _check(m, n, c, variant)
    g = generator_size(m, c)
    cap = rows if variant == A else rows - 1
    per = 1 + sum(comb(rows, s) for s in range(g, cap + 1))
    return per ** n


def _valid(columns, rows: int, n: int) -> bool:
    if not any(columns):
        return False
    for r in range(rows):
        if all(r in col for col in columns):
            return False
    return True


def build_poset(m: int, n: int, c: int, variant: str = A, cap: int | None = None) -> IntersectionPoset:
    rows = _check(m, n, c, variant)
    cap = max_poset_size() if cap is None else cap
    if estimate_size(m, n, c, variant) > cap:
        raise PosetError(
            f"poset for (m,n,c)=({m},{n},{c}) may exceed {cap} elements; raise FAIRFAN_MAX_POSET or use orbit_summary"
        )
    g = generator_size(m, c)
    col_cap = rows if variant == A else rows - 1
    choices = _column_choices(rows, g, col_cap)
    elements = []
    for columns in itertools.product(choices, repeat=n):
        if _valid(columns, rows, n):
            elements.append(ZeroPattern.from_columns(rows, columns))
    elements.sort(key=lambda e: (e.zero_count, e.zeros))
    index = {e.column_sets(): i for i, e in enumerate(elements)}
    edges = []
    for i, e in enumerate(elements):
        for lower in _lower_covers(e.column_sets(), g):
            j = index.get(lower)
            if j is not None:
                edges.append((j, i))
    edges.sort()
    return IntersectionPoset(m, n, c, variant, elements, edges)


def _lower_covers(columns, g: int):
    """Patterns covered by ``columns``: drop one zero from a column with more
    than g zeros, or clear a column with exactly g zeros."""
    for k, col in enumerate(columns):
        if not col:
            continue
        if len(col) > g:
            for r in col:
                yield columns[:k] + (col - {r},) + columns[k + 1:]
        else:
            yield columns[:k] + (frozenset(),) + columns[k + 1:]


def longest_chain(poset: IntersectionPoset) -> int:
    """Dimension of the order complex: edges in a longest chain; -1 if empty.

    Uses the full comparability relation (not only Hasse edges), so it also
    serves as an independent check of the cover rule.
    """
    els = poset.elements
    if not els:
        return -1
    order = sorted(range(len(els)), key=lambda i: els[i].zero_count)
    cells = [els[i].zero_cells() for i in range(len(els))]
    height = {}
    for i in order:
        best = 0
        for j in order:
            if els[j].zero_count >= els[i].zero_count:
                break
            if cells[j] < cells[i]:
                best = max(best, height[j] + 1)
        height[i] = best
    return max(height.values())


def order_complex_dim(poset: IntersectionPoset) -> int:
    """Longest chain via the Hasse diagram (DAG longest path); -1 if empty."""
    if not poset.elements:
        return -1
    up = defaultdict(list)
    for a, b in poset.hasse_edges:
        up[a].append(b)
    height = [0] * len(poset.elements)
    order = sorted(range(len(poset.elements)), key=lambda i: poset.elements[i].zero_count)
    for i in order:
        for j in up[i]:
            height[j] = max(height[j], height[i] + 1)
    return max(height)


def transitive_closure_matches(poset: IntersectionPoset) -> bool:
    """Reflexive-transitive closure of the Hasse edges equals containment."""
    n = len(poset.elements)
    up = defaultdict(set)
    for a, b in poset.hasse_edges:
        up[a].add(b)
    cells = [e.zero_cells() for e in poset.elements]
    for i in range(n):
        seen, stack = {i}, [i]
        while stack:
            for j in up[stack.pop()]:
                if j not in seen:
                    seen.add(j)
                    stack.append(j)
        truth = {j for j in range(n) if cells[i] <= cells[j]}
        if seen != truth:
            return False
    return True


def phi(element: ZeroPattern) -> frozenset:
    """Columns containing zeros."""
    return element.nonzero_columns()


def phi_image(poset: IntersectionPoset):
    """(Q', has_top): the image of phi and whether the full column set is in it."""
    image = {phi(e) for e in poset.elements}
    return image, frozenset(range(poset.n)) in image


def chain_dim_of_subsets(family) -> int:
    """Longest chain (by strict inclusion) in a family of sets; -1 if empty."""
    fam = sorted(set(family), key=len)
    if not fam:
        return -1
    h = {}
    for s in fam:
        h[s] = max((h[t] + 1 for t in h if t < s), default=0)
    return max(h.values())


def is_down_closed(family) -> bool:
    fam = set(family)
    for s in fam:
        for k in s:
            t = s - {k}
            if t and t not in fam:
                return False
    return True


# ---------------------------------------------------------------------------
# symmetry-reduced engine
#
# A pattern up to row permutations is a multiset of row types; a row type is
# an n-bit mask of the columns where that row is zero.  States are count
# vectors indexed by mask, canonicalised over column permutations.


@dataclass
class OrbitSummary:
    m: int
    n: int
    c: int
    variant: str
    orbits: int
    poset_dim: int           # longest chain in the whole poset
    fiber_dim: int           # longest chain in phi^{-1}(all columns); -1 if empty
    image_sizes: tuple       # sizes |S| of column sets in Q'
    fiber_min_zeros: int | None
    fiber_max_zeros: int | None

    @property
    def has_top(self) -> bool:
        return self.n in self.image_sizes

    @property
    def image_dim(self) -> int:
        return len(self.image_sizes) - 1

    @property
    def image_down_closed(self) -> bool:
        return self.image_sizes == tuple(range(1, len(self.image_sizes) + 1))


@lru_cache(maxsize=None)
def _perm_tables(n: int):
    tables = []
    for perm in itertools.permutations(range(n)):
        t = []
        for mask in range(1 << n):
            out = 0
            for k in range(n):
                if mask >> k & 1:
                    out |= 1 << perm[k]
            t.append(out)
        tables.append(t)
    return tables


def _canon(counts, n: int):
    best = None
    size = 1 << n
    for t in _perm_tables(n):
        v = [0] * size
        for mask, c in enumerate(counts):
            if c:
                v[t[mask]] = c
        v = tuple(v)
        if best is None or v < best:
            best = v
    return best


def _col_sizes(counts, n: int):
    sizes = [0] * n
    for mask, c in enumerate(counts):
        if c:
            for k in range(n):
                if mask >> k & 1:
                    sizes[k] += c
    return sizes


def _sub_multisets(counts, masks, g):
    """All ways to pick g rows from the given row types."""
    masks = [mk for mk in masks if counts[mk]]

    def rec(i, left):
        if left == 0:
            yield {}
            return
        if i == len(masks):
            return
        mk = masks[i]
        for take in range(min(counts[mk], left), -1, -1):
            for rest in rec(i + 1, left - take):
                if take:
                    rest = dict(rest)
                    rest[mk] = take
                yield rest

    yield from rec(0, g)


def orbit_summary(m: int, n: int, c: int, variant: str = A) -> OrbitSummary:
    rows = _check(m, n, c, variant)
    g = generator_size(m, c)
    col_cap = rows if variant == A else rows - 1
    full = (1 << n) - 1
    size = 1 << n

    if g > col_cap:
        return OrbitSummary(m, n, c, variant, 0, -1, -1, (), None, None)

    # minimal elements: one column with g zeros
    start = [0] * size
    start[0] = rows - g
    start[1] += g
    if start[full] and full == 1:
        # n = 1: the zero rows would be entirely zero
        return OrbitSummary(m, n, c, variant, 0, -1, -1, (), None, None)
    start = _canon(tuple(start), n)

    def upper(counts):
        sizes = _col_sizes(counts, n)
        for k in range(n):
            bit = 1 << k
            if sizes[k] == 0:
                cands = [mk for mk in range(size) if not mk & bit and (mk | bit) != full]
                for pick in _sub_multisets(counts, cands, g):
                    v = list(counts)
                    for mk, t in pick.items():
                        v[mk] -= t
                        v[mk | bit] += t
                    yield tuple(v)
            elif sizes[k] < col_cap:
                for mk in range(size):
                    if counts[mk] and not mk & bit and (mk | bit) != full:
                        v = list(counts)
                        v[mk] -= 1
                        v[mk | bit] += 1
                        yield tuple(v)

    def lower(counts, fiber_only=False):
        sizes = _col_sizes(counts, n)
        for k in range(n):
            bit = 1 << k
            if sizes[k] > g:
                for mk in range(size):
                    if counts[mk] and mk & bit:
                        v = list(counts)
                        v[mk] -= 1
                        v[mk ^ bit] += 1
                        yield tuple(v)
            elif sizes[k] == g and not fiber_only:
                v = [0] * size
                for mk, cnt in enumerate(counts):
                    v[mk & ~bit] += cnt
                if any(v[mk] for mk in range(1, size)):
                    yield tuple(v)

    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for s in frontier:
            for u in upper(s):
                cu = _canon(u, n)
                if cu not in seen:
                    seen.add(cu)
                    nxt.append(cu)
        frontier = nxt

    def zeros(s):
        return sum(bin(mk).count("1") * cnt for mk, cnt in enumerate(s))

    order = sorted(seen, key=zeros)
    h_all, h_fib = {}, {}
    image = set()
    fiber_zeros = []
    for s in order:
        h_all[s] = max((h_all[_canon(l, n)] + 1 for l in lower(s)), default=0)
        sizes = _col_sizes(s, n)
        nonempty = sum(1 for x in sizes if x)
        image.add(nonempty)
        if nonempty == n:
            fiber_zeros.append(zeros(s))
            h_fib[s] = max((h_fib[_canon(l, n)] + 1 for l in lower(s, True)), default=0)
    return OrbitSummary(
        m,
        n,
        c,
        variant,
        len(seen),
        max(h_all.values()) if h_all else -1,
        max(h_fib.values()) if h_fib else -1,
        tuple(sorted(image)),
        min(fiber_zeros) if fiber_zeros else None,
        max(fiber_zeros) if fiber_zeros else None,
    )


# ---------------------------------------------------------------------------
# closed forms under test


def formula_fiber_dim_A(m, n, c):
    return n * c - m - 2 * n + 1


def formula_has_top_A(m, n, c):
    return n * (c - 2) + 1 >= m


def formula_poset_dim_A(m, n, c):
    return n * c - n - c


def formula_fiber_dim_A_tilde(m, n, c):
    return n * c - n - max(m, n)


def formula_has_top_A_tilde(m, n, c):
    return n * (c - 1) >= m


@dataclass
class FormulaReport:
    m: int
    n: int
    c: int
    variant: str
    summary: OrbitSummary
    checks: dict  # name -> (observed, expected, ok)

    @property
    def ok(self) -> bool:
        return all(v[2] for v in self.checks.values())

    def to_json(self):
        s = self.summary
        return {
            "m": self.m,
            "n": self.n,
            "c": self.c,
            "variant": self.variant,
            "orbits": s.orbits,
            "poset_dim": s.poset_dim,
            "fiber_dim": s.fiber_dim,
            "has_top": s.has_top,
            "image_sizes": list(s.image_sizes),
            "checks": {k: {"observed": v[0], "expected": v[1], "ok": v[2]} for k, v in self.checks.items()},
        }


def compare_formulas(m: int, n: int, c: int, variant: str = A) -> FormulaReport:
    s = orbit_summary(m, n, c, variant)
    checks = {}
    if variant == A:
        checks["has_top"] = (s.has_top, formula_has_top_A(m, n, c), s.has_top == formula_has_top_A(m, n, c))
        if s.has_top:
            f = formula_fiber_dim_A(m, n, c)
            checks["fiber_dim"] = (s.fiber_dim, f, s.fiber_dim == f)
        else:
            checks["image_dim<=n-2"] = (s.image_dim, n - 2, s.image_dim <= n - 2)
        f = formula_poset_dim_A(m, n, c)
        checks["poset_dim"] = (s.poset_dim, f, s.poset_dim == f)
    else:
        checks["has_top"] = (s.has_top, formula_has_top_A_tilde(m, n, c), s.has_top == formula_has_top_A_tilde(m, n, c))
        if s.has_top:
            f = formula_fiber_dim_A_tilde(m, n, c)
            checks["fiber_dim"] = (s.fiber_dim, f, s.fiber_dim == f)
            checks["fiber_max_zeros"] = (s.fiber_max_zeros, m * n - max(m, n), s.fiber_max_zeros == m * n - max(m, n))
            checks["fiber_min_zeros"] = (s.fiber_min_zeros, n * (m - c + 1), s.fiber_min_zeros == n * (m - c + 1))
        else:
            checks["image_dim<=n-2"] = (s.image_dim, n - 2, s.image_dim <= n - 2)
    checks["image_down_closed"] = (s.image_down_closed, True, s.image_down_closed)
    return FormulaReport(m, n, c, variant, s, checks)


def small_fiber_report() -> dict:
    """Brute-force facts for (m, n, c) = (4, 2, 3), variant A."""
    p = build_poset(4, 2, 3, A)
    fib = p.fiber()
    _, top = phi_image(p)
    return {
        "elements": len(p.elements),
        "dimension": order_complex_dim(p),
        "fiber_size": len(fib.elements),
        "has_top": top,
        "generator_size": generator_size(4, 3),
        "claimed_fiber_size": 2,
        "discrepancy": len(fib.elements) != 2,
    }


__all__ = [
    "A",
    "A_TILDE",
    "FormulaReport",
    "IntersectionPoset",
    "OrbitSummary",
    "PosetError",
    "ZeroPattern",
    "build_poset",
    "chain_dim_of_subsets",
    "compare_formulas",
    "small_fiber_report",
    "is_down_closed",
    "longest_chain",
    "order_complex_dim",
    "orbit_summary",
    "phi",
    "phi_image",
    "transitive_closure_matches",
]
