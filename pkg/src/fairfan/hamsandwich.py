"""Exact planar ham-sandwich cuts and their recursion into 2^k pieces.

Atoms lying on a cut line are split fractionally between the two sides, the
way a small bump centred on the line would be.  Inside a cell, atoms sitting
on the cell's boundary are searched from a slightly displaced position (still
inside their bump) so that every cut passes through the cell's interior.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .geometry import (
    ConvexPartition,
    ConvexRegion,
    GE,
    HalfSpace,
    Hyperplane,
    LE,
    add,
    cross2,
    scale,
    strict_interior_point,
    sub,
)
from .measures import DiscreteMeasure

Q = Fraction
RED, BLUE = "red", "blue"


class CutError(ValueError):
    pass


@dataclass
class SplitCut:
    """A line with the fractional split of the atoms lying on it.

    The left side is ``normal . x >= offset``.  ``boundary_assignment`` maps
    ``(colour, atom index)`` to ``(left_share, right_share)`` as fractions of
    the atom's weight (in the cell being cut).
    """

    line: Hyperplane
    boundary_assignment: dict
    pair: tuple = ()

    @property
    def left(self) -> HalfSpace:
        return HalfSpace(self.line, GE)

    @property
    def right(self) -> HalfSpace:
        return HalfSpace(self.line, LE)

    def side_masses(self, red: DiscreteMeasure, blue: DiscreteMeasure):
        """Exact (left, right) masses of each colour with the shares applied."""
        out = {}
        for colour, mu in ((RED, red), (BLUE, blue)):
            left = right = Q(0)
            for k, (p, w) in enumerate(mu.atoms):
                share = self.boundary_assignment.get((colour, k))
                if share is not None:
                    left += w * share[0]
                    right += w * share[1]
                elif self.line.side(p) > 0:
                    left += w
                else:
                    right += w
            out[colour] = (left, right)
        return out


@dataclass
class _Item:
    colour: str
    index: int
    pos: tuple        # working position used for the search
    weight: Fraction  # weight inside the current cell
    budget: Fraction  # how far pos may still move


def _search(items):
    """Lexicographically first valid pair (i, j); returns (i, j, normal, offset)."""
    n = len(items)
    pos = [it.pos for it in items]
    locs = {}
    for k, p in enumerate(pos):
        locs.setdefault(p, []).append(k)
    if len(locs) == 1:
        p = pos[0]
        normal = (Q(0), Q(1))
        return (0, 0, normal, normal[1] * p[1])

    totals = {RED: Q(0), BLUE: Q(0)}
    for it in items:
        totals[it.colour] += it.weight
    fx = np.array([[float(c) for c in p] for p in pos])
    fw = np.array([float(it.weight) for it in items])
    is_red = np.array([it.colour == RED for it in items])
    ftot = {RED: float(totals[RED]), BLUE: float(totals[BLUE])}
    span = float(np.max(np.abs(fx))) + 1.0

    for i in range(n - 1):
        v = fx - fx[i]
        dist = np.hypot(v[:, 0], v[:, 1])
        same = np.zeros(n, dtype=bool)
        for k in np.nonzero(dist <= 1e-9 * span)[0]:
            same[k] = pos[k] == pos[i]
        others = np.nonzero(~same)[0]
        if not np.any(others > i):
            continue
        ang = np.arctan2(v[others, 1], v[others, 0]) % (2 * math.pi)
        tol = 1e-9 * span / dist[others].min() + 1e-12
        order = np.argsort(ang, kind="stable")
        sa = ang[order]
        sw = fw[others][order]
        sr = is_red[others][order]
        # tripled circular arrays so every window [th - tol, th + pi + tol] fits
        a3 = np.concatenate([sa - 2 * math.pi, sa, sa + 2 * math.pi])
        wr = np.tile(np.where(sr, sw, 0.0), 3)
        wb = np.tile(np.where(sr, 0.0, sw), 3)
        cr = np.concatenate([[0.0], np.cumsum(wr)])
        cb = np.concatenate([[0.0], np.cumsum(wb)])
        w_same_r = float(fw[same & is_red].sum())
        w_same_b = float(fw[same & ~is_red].sum())

        cand_j = others[others > i]
        th = np.arctan2(v[cand_j, 1], v[cand_j, 0]) % (2 * math.pi)
        lo_sure = np.searchsorted(a3, th + tol, side="right")
        hi_sure = np.maximum(np.searchsorted(a3, th + math.pi - tol, side="left"), lo_sure)
        lo_band = np.searchsorted(a3, th - tol, side="left")
        hi_band = np.searchsorted(a3, th + math.pi + tol, side="right")
        ok = np.ones(cand_j.size, dtype=bool)
        for cum, col, wsame in ((cr, RED, w_same_r), (cb, BLUE, w_same_b)):
            lmin = cum[hi_sure] - cum[lo_sure]
            upper = cum[hi_band] - cum[lo_band] + wsame
            t = ftot[col]
            slack = 1e-9 * t + 1e-12
            ok &= (2 * lmin <= t + slack) & (t <= 2 * upper + slack)
        for j in cand_j[ok]:
            res = _exact_check(items, totals, i, int(j))
            if res is not None:
                return res
    # fall back to an exhaustive exact scan (only reached if the filter was too strict)
    for i in range(n - 1):
        for j in range(i + 1, n):
            if pos[i] != pos[j]:
                res = _exact_check(items, totals, i, j)
                if res is not None:
                    return res
    raise CutError("no ham-sandwich line found")


def _exact_check(items, totals, i, j):
    pi, pj = items[i].pos, items[j].pos
    if pi == pj:
        return None
    dx, dy = pj[0] - pi[0], pj[1] - pi[1]
    normal = (-dy, dx)
    offset = normal[0] * pi[0] + normal[1] * pi[1]
    left = {RED: Q(0), BLUE: Q(0)}
    on = {RED: Q(0), BLUE: Q(0)}
    for it in items:
        s = normal[0] * it.pos[0] + normal[1] * it.pos[1] - offset
        if s > 0:
            left[it.colour] += it.weight
        elif s == 0:
            on[it.colour] += it.weight
    for col in (RED, BLUE):
        t = totals[col]
        if not (2 * left[col] <= t <= 2 * (left[col] + on[col])):
            return None
    return (i, j, normal, offset)


def _cut_items(items):
    """Cut a list of items; returns (line, left_items_shares, on_line)."""
    i, j, normal, offset = _search(items)
    line = Hyperplane(normal, offset)
    totals = {RED: Q(0), BLUE: Q(0)}
    left = {RED: Q(0), BLUE: Q(0)}
    sides = []
    for it in items:
        totals[it.colour] += it.weight
        s = line.value(it.pos)
        sides.append((s > 0) - (s < 0))
        if s > 0:
            left[it.colour] += it.weight
    need = {col: totals[col] / 2 - left[col] for col in (RED, BLUE)}
    shares = []
    for it, sd in zip(items, sides):
        if sd > 0:
            shares.append((Q(1), Q(0)))
        elif sd < 0:
            shares.append((Q(0), Q(1)))
        else:
            give = min(need[it.colour], it.weight)
            need[it.colour] -= give
            f = give / it.weight
            shares.append((f, 1 - f))
    return line, shares, (i, j)


def ham_sandwich_cut(red: DiscreteMeasure, blue: DiscreteMeasure) -> SplitCut:
    """A line halving both planar measures exactly (with boundary shares)."""
    if red.dimension != 2 or blue.dimension != 2:
        raise CutError("ham-sandwich cuts are implemented for d = 2 only")
    items = _items_for(red, blue)
    line, shares, pair = _cut_items(items)
    assignment = {
        (it.colour, it.index): sh
        for it, sh in zip(items, shares)
        if line.value(it.pos) == 0
    }
    return SplitCut(line, assignment, pair)


def _items_for(red, blue):
    items = [_Item(RED, k, p, w, red.bump_radius / 2) for k, (p, w) in enumerate(red.atoms)]
    items += [_Item(BLUE, k, p, w, blue.bump_radius / 2) for k, (p, w) in enumerate(blue.atoms)]
    return items


def _l1(v):
    return sum((abs(c) for c in v), Q(0))


def _round_inside(p, target, halfspaces, limit):
    """p nudged towards ``target`` by at most ``limit`` and strictly inside."""
    gap = sub(target, p)
    length = _l1(gap)
    eta = min(Q(1, 2), limit / length) if length else Q(0)
    exact = add(p, scale(eta, gap))
    # prefer a short dyadic representative to keep denominators small
    for bits in range(8, 64, 8):
        k = 1 << bits
        cand = tuple(Q(round(c * k), k) for c in exact)
        if _l1(sub(cand, p)) <= limit and all(h.slack(cand) > 0 for h in halfspaces):
            return cand, _l1(sub(cand, p))
    return exact, eta * length


@dataclass
class CutNode:
    line: Hyperplane | None = None
    shares: list = field(default_factory=list)
    left: "CutNode | None" = None
    right: "CutNode | None" = None
    leaf: int | None = None

    def to_json(self):
        from .io import hyperplane_to_json, q

        if self.line is None:
            return {"leaf": self.leaf}
        return {
            "line": hyperplane_to_json(self.line),
            "shares": [[c, k, q(a), q(b)] for c, k, a, b in self.shares],
            "left": self.left.to_json(),
            "right": self.right.to_json(),
        }


def equipartition_2pow(red: DiscreteMeasure, blue: DiscreteMeasure, k: int) -> ConvexPartition:
    """2^k convex cells each holding exactly 1/2^k of both measures.

    Cells are listed depth-first, left side first.  ``shares`` holds, for
    every atom of both measures (keyed by ``(label, index)``), the fraction
    of its weight in each cell.
    """
    if k < 0:
        raise CutError("k must be nonnegative")
    if red.dimension != 2 or blue.dimension != 2:
        raise CutError("equipartitions are implemented for d = 2 only")
    if red.label == blue.label and red != blue:
        raise CutError("the two measures need distinct labels")
    n = 1 << k
    cells = []
    fractions = {}

    def recurse(items, halfspaces, depth):
        if depth == k:
            idx = len(cells)
            cells.append(ConvexRegion(tuple(halfspaces), 2))
            for it in items:
                fractions.setdefault((it.colour, it.index), [Q(0)] * n)[idx] += it.weight
            return CutNode(leaf=idx)
        line, shares, _ = _cut_items(items)
        node = CutNode(line=line)
        for side_no, side in ((0, HalfSpace(line, GE)), (1, HalfSpace(line, LE))):
            child_hs = halfspaces + [side]
            child = []
            for it, sh in zip(items, shares):
                f = sh[side_no]
                if f == 0:
                    continue
                pos, budget = it.pos, it.budget
                if line.value(pos) == 0:
                    if depth + 1 < k:
                        # an interior point of the child within reach of pos
                        target = strict_interior_point(child_hs, 2, pos, budget / 4)
                        if target is None:
                            raise CutError("cut produced a cell with empty interior")
                        pos, used = _round_inside(pos, target, child_hs, budget / 2)
                        budget -= used
                    node.shares.append((it.colour, it.index, *sh))
                child.append(_Item(it.colour, it.index, pos, it.weight * f, budget))
            sub_node = recurse(child, child_hs, depth + 1)
            if side_no == 0:
                node.left = sub_node
            else:
                node.right = sub_node
        # shares were appended once per side; keep one copy per atom
        seen = set()
        node.shares = [s for s in node.shares if not ((s[0], s[1]) in seen or seen.add((s[0], s[1])))]
        return node

    tree = recurse(_items_for(red, blue), [], 0)
    shares = {}
    for (colour, index), fr in fractions.items():
        mu = red if colour == RED else blue
        w = mu.atoms[index][1]
        shares[(mu.label, index)] = tuple(x / w for x in fr)
    for colour, mu in ((RED, red), (BLUE, blue)):
        for index in range(len(mu.atoms)):
            shares.setdefault((mu.label, index), tuple([Q(0)] * n))
    return ConvexPartition(cells, {"type": "cut-tree", "cuts": tree}, shares)


def region_masses(partition: ConvexPartition, mu: DiscreteMeasure):
    """Per-cell masses of ``mu`` under the partition's share table."""
    out = [Q(0)] * partition.n
    for k, (p, w) in enumerate(mu.atoms):
        share = partition.shares.get((mu.label, k))
        if share is None:
            out[partition.owner(p)] += w
        else:
            for i, s in enumerate(share):
                out[i] += w * s
    return out


__all__ = [
    "CutError",
    "SplitCut",
    "equipartition_2pow",
    "ham_sandwich_cut",
    "region_masses",
]
