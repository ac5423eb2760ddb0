"""JSON persistence with exact rationals written as "p/q" strings."""

from __future__ import annotations

import json
from fractions import Fraction

from .geometry import ConvexPartition, ConvexRegion, Flat, HalfSpace, Hyperplane
from .measures import DiscreteMeasure, MeasureFamily


def q(x) -> str:
    """Canonical "p/q" form (denominator always written)."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def unq(s) -> Fraction:
    if isinstance(s, float):
        raise ValueError("floats are not accepted; write rationals as \"p/q\" strings")
    return Fraction(s)


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def hyperplane_to_json(h: Hyperplane) -> dict:
    return {"normal": [q(c) for c in h.normal], "offset": q(h.offset)}


def hyperplane_from_json(obj) -> Hyperplane:
    return Hyperplane(tuple(unq(c) for c in obj["normal"]), unq(obj["offset"]))


def region_to_json(r: ConvexRegion) -> list:
    return [dict(hyperplane_to_json(h.plane), side=h.side) for h in r.halfspaces]


def region_from_json(obj, dimension: int) -> ConvexRegion:
    return ConvexRegion(tuple(HalfSpace(hyperplane_from_json(h), h["side"]) for h in obj), dimension)


# ---------------------------------------------------------------------------
# measure families


def family_to_json(family: MeasureFamily) -> dict:
    return {
        "dimension": family.dimension,
        "measures": [
            {
                "label": mu.label,
                "bump_radius": q(mu.bump_radius),
                "atoms": [{"point": [q(c) for c in p], "weight": q(w)} for p, w in mu.atoms],
            }
            for mu in family.measures
        ],
    }


def family_from_json(obj) -> MeasureFamily:
    try:
        d = int(obj["dimension"])
        measures = []
        for k, m in enumerate(obj["measures"]):
            atoms = tuple(
                (tuple(unq(c) for c in a["point"]), unq(a["weight"])) for a in m["atoms"]
            )
            measures.append(DiscreteMeasure(atoms, unq(m["bump_radius"]), m.get("label", f"mu{k + 1}")))
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed measure-family JSON: {exc}") from exc
    return MeasureFamily(tuple(measures), d)


def save_family(family: MeasureFamily, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(family_to_json(family)))


def load_family(path) -> MeasureFamily:
    with open(path, encoding="utf-8") as fh:
        return family_from_json(json.load(fh))


# ---------------------------------------------------------------------------
# partitions


def flat_to_json(f: Flat) -> dict:
    return {
        "basepoint": [q(c) for c in f.basepoint],
        "directions": [[q(c) for c in v] for v in f.directions],
    }


def fan_to_json(fan) -> dict:
    return {
        "type": "fan",
        "apex": flat_to_json(fan.apex),
        "axes": [[q(c) for c in a] for a in fan.projection.axes],
        "rays": [[q(s), q(t)] for s, t in fan.rays],
        "halfspace_form": [region_to_json(r) for r in fan.regions],
    }


def cut_tree_to_json(partition: ConvexPartition) -> dict:
    return {
        "type": "cut-tree",
        "cuts": partition.provenance["cuts"].to_json(),
        "halfspace_form": [region_to_json(r) for r in partition.regions],
    }


def partition_from_json(obj) -> ConvexPartition:
    """Regions (and only the regions) of a saved fan or cut tree."""
    regions = obj["halfspace_form"]
    d = None
    for r in regions:
        for h in r:
            d = len(h["normal"])
            break
        if d:
            break
    if d is None:
        d = 2
    return ConvexPartition([region_from_json(r, d) for r in regions], {"type": obj.get("type")})
