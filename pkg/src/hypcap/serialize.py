"""JSON interchange format for sets.

{"type": "hedgehog", "core_radius": r, "spikes": [{"angle": a, "intervals": [[lo, hi], ...]}]}
{"type": "diameter", "angle": a, "intervals": [[x1, x2], ...]}
{"type": "grid", "n_r": .., "n_theta": .., "r_max": .., "cells": [run lengths]}
{"type": "chart", "pieces": [{"kind": "arc", "radius": .., "theta0": .., "theta1": ..},
                             {"kind": "segment", "angle": .., "a": .., "b": ..}]}

Angles are radians. Radii are Euclidean unless "hyperbolic": true, in which
case radial positions are hyperbolic distances from 0 (signed along a
diameter). Grid cells are run lengths over the row-major occupancy matrix,
alternating empty/occupied and starting with an empty run.
"""
from __future__ import annotations

import csv
import io
import json

import numpy as np

from .exceptions import DomainError
from .hyp_core import Geodesic, r_of_tau, u_of_x
from .set_model import (Arc, BoundaryChart, DiameterSet, GridSet, Hedgehog,
                        Segment)


def _num(x, name):
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise DomainError(f"{name} must be a number, got {x!r}")
    return float(x)


def _pairs(v, name):
    if not isinstance(v, list):
        raise DomainError(f"{name} must be a list of [lo, hi] pairs")
    out = []
    for p in v:
        if not (isinstance(p, list) and len(p) == 2):
            raise DomainError(f"{name} entries must be [lo, hi] pairs, got {p!r}")
        out.append((_num(p[0], name), _num(p[1], name)))
    return out


def rle_encode(occ):
    flat = np.asarray(occ, dtype=bool).ravel()
    runs, cur, count = [], False, 0
    for v in flat:
        if v == cur:
            count += 1
        else:
            runs.append(count)
            cur, count = v, 1
    runs.append(count)
    return runs


def rle_decode(runs, shape):
    total = int(np.prod(shape))
    if any((not isinstance(r, int)) or r < 0 for r in runs) or sum(runs) != total:
        raise DomainError(f"cell runs must be non-negative integers summing to {total}")
    flat = np.zeros(total, dtype=bool)
    pos, val = 0, False
    for r in runs:
        flat[pos:pos + r] = val
        pos += r
        val = not val
    return flat.reshape(shape)


def set_from_dict(d):
    if not isinstance(d, dict) or "type" not in d:
        raise DomainError('set description must be an object with a "type" field')
    kind = d["type"]
    hyper = bool(d.get("hyperbolic", False))
    if kind == "hedgehog":
        core = _num(d.get("core_radius", 0.0), "core_radius")
        spikes = []
        for s in d.get("spikes", []):
            if not isinstance(s, dict) or "angle" not in s:
                raise DomainError("each spike needs an angle and intervals")
            iv = _pairs(s.get("intervals", []), "intervals")
            if hyper:
                iv = [(r_of_tau(a), r_of_tau(b)) for a, b in iv]
            spikes.append((_num(s["angle"], "angle"), iv))
        if hyper:
            core = r_of_tau(core)
        return Hedgehog(core, spikes)
    if kind == "diameter":
        iv = _pairs(d.get("intervals", []), "intervals")
        angle = _num(d.get("angle", 0.0), "angle")
        return DiameterSet(tuple(iv), angle) if hyper else DiameterSet.from_x(iv, angle)
    if kind == "grid":
        n_r, n_t = int(d["n_r"]), int(d["n_theta"])
        occ = rle_decode(d.get("cells", [n_r * n_t]), (n_r, n_t))
        return GridSet(n_r, n_t, _num(d["r_max"], "r_max"), occ)
    if kind == "chart":
        pieces = []
        for p in d.get("pieces", []):
            if p.get("kind") == "arc":
                pieces.append(Arc(_num(p["radius"], "radius"), _num(p["theta0"], "theta0"),
                                  _num(p["theta1"], "theta1")))
            elif p.get("kind") == "segment":
                a, b = _num(p["a"], "a"), _num(p["b"], "b")
                if not hyper:
                    a, b = u_of_x(a), u_of_x(b)
                pieces.append(Segment(_num(p.get("angle", 0.0), "angle"), a, b))
            else:
                raise DomainError(f"unknown chart piece {p!r}")
        return BoundaryChart(tuple(pieces))
    raise DomainError(f"unknown set type {kind!r}")


def set_to_dict(s):
    if isinstance(s, Hedgehog):
        return {"type": "hedgehog", "hyperbolic": False, "core_radius": s.core_radius,
                "spikes": [{"angle": a, "intervals": [list(p) for p in iv]} for a, iv in s.spikes]}
    if isinstance(s, DiameterSet):
        return {"type": "diameter", "hyperbolic": True, "angle": s.angle,
                "intervals": [list(p) for p in s.intervals]}
    if isinstance(s, GridSet):
        return {"type": "grid", "n_r": s.n_r, "n_theta": s.n_theta, "r_max": s.r_max,
                "cells": rle_encode(s.occupancy)}
    if isinstance(s, BoundaryChart):
        pieces = []
        for p in s.pieces:
            if p.mobius is not None:
                raise DomainError("mapped chart pieces have no interchange form")
            if isinstance(p, Arc):
                pieces.append({"kind": "arc", "radius": p.radius, "theta0": p.theta0, "theta1": p.theta1})
            else:
                pieces.append({"kind": "segment", "angle": p.angle, "a": p.u0, "b": p.u1})
        return {"type": "chart", "hyperbolic": True, "pieces": pieces}
    raise DomainError(f"cannot serialize {type(s).__name__}")


def geodesic_from_dict(d):
    """{"kind": "diameter", "angle": a} or {"kind": "arc", "theta1": .., "theta2": ..},
    each with an optional "orientation" of +1 or -1."""
    if d is None:
        return Geodesic.diameter(0.0)
    if not isinstance(d, dict):
        raise DomainError("geodesic must be an object")
    o = int(d.get("orientation", 1))
    if d.get("kind", "diameter") == "arc":
        return Geodesic.arc(_num(d["theta1"], "theta1"), _num(d["theta2"], "theta2"), o)
    return Geodesic.diameter(_num(d.get("angle", 0.0), "angle"), o)


def loads(text):
    try:
        d = json.loads(text)
    except json.JSONDecodeError as e:
        raise DomainError(f"malformed JSON at line {e.lineno} column {e.colno}: {e.msg}") from None
    return set_from_dict(d)


def dumps(s) -> str:
    return json.dumps(set_to_dict(s))



def rows_to_table(rows, columns) -> str:
    """CSV with a header row and LF line endings; nested values are JSON-encoded."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([json.dumps(r[c]) if isinstance(r.get(c), (dict, list)) else r.get(c, "")
                    for c in columns])
    return buf.getvalue()
