"""JSON schemas for bodies, planks, cut trees and partitions.

Body:      {"type": "hpoly", "normals": [[...]], "offsets": [...]}
           {"type": "vpoly", "vertices": [[...]]}
           {"type": "ball", "center": [...], "radius": r}
Plank:     {"normal": [...], "low": r, "high": r}
Cut tree:  "leaf" | {"cut": {"normal": [...], "offset": r}, "below": tree, "above": tree}
Partition: {"provenance": str, "cells": [body, ...]}
"""
from __future__ import annotations

import hashlib
import json

import numpy as np

from .bodies import ConvexBody
from .cuts import LEAF, Cut, Leaf, PartitionFamily
from .errors import InvalidBody
from .geometry import Hyperplane
from .planks import Plank


def _list(a):
    # +0.0 folds negative zeros so equal bodies serialise identically
    return (np.asarray(a, dtype=float) + 0.0).tolist()


def body_to_dict(body: ConvexBody) -> dict:
    if body.kind == "ball":
        return {"type": "ball", "center": _list(body.center), "radius": body.radius}
    if body.kind == "vpoly":
        return {"type": "vpoly", "vertices": _list(body.vertices)}
    return {"type": "hpoly", "normals": _list(body.normals), "offsets": _list(body.offsets)}


def body_from_dict(d: dict, validate: bool = True) -> ConvexBody:
    try:
        kind = d["type"]
        if kind == "hpoly":
            return ConvexBody.from_halfspaces(d["normals"], d["offsets"], validate=validate)
        if kind == "vpoly":
            return ConvexBody.from_vertices(d["vertices"])
        if kind == "ball":
            return ConvexBody.ball(d["center"], d["radius"])
    except (KeyError, TypeError) as exc:
        raise InvalidBody(f"malformed body object: {exc}") from None
    raise InvalidBody(f"unknown body type {kind!r}")


def plank_to_dict(P: Plank) -> dict:
    return {"normal": _list(P.normal), "low": P.low, "high": P.high}


def plank_from_dict(d: dict) -> Plank:
    return Plank.from_dict(d)


def hyperplane_to_dict(H: Hyperplane) -> dict:
    return {"normal": _list(H.normal), "offset": H.offset}


def hyperplane_from_dict(d: dict) -> Hyperplane:
    return Hyperplane.through(d["normal"], d["offset"])


def tree_to_json(tree):
    if isinstance(tree, Leaf):
        return "leaf"
    return {"cut": hyperplane_to_dict(tree.hyperplane),
            "below": tree_to_json(tree.below), "above": tree_to_json(tree.above)}


def tree_from_json(obj):
    if obj == "leaf":
        return LEAF
    return Cut(hyperplane_from_dict(obj["cut"]), tree_from_json(obj["below"]),
               tree_from_json(obj["above"]))


def partition_to_dict(p: PartitionFamily) -> dict:
    return {"provenance": p.provenance, "cells": [body_to_dict(c) for c in p.cells]}


def partition_from_dict(d: dict, host: ConvexBody | None = None) -> PartitionFamily:
    cells = [body_from_dict(c, validate=False) for c in d["cells"]]
    return PartitionFamily(cells, d.get("provenance", "user"), host)


def dumps(obj) -> str:
    """Canonical JSON: sorted keys, shortest round-trip float repr."""
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=True)


def digest(obj) -> str:
    return hashlib.sha256(json.dumps(obj, sort_keys=True).encode()).hexdigest()[:16]
