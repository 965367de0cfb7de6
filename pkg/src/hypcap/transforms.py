"""Set transformations: polarization, symmetrizations, contraction, radial
projection and dispersion."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import DomainError, PreconditionError, ResolutionError, ScheduleError
from .hyp_core import (Geodesic, MobiusMap, hyp_dist, polar_cell_area, reflect,
                       r_of_tau, tau_of_area, tau_of_r, transport_to_vertical,
                       u_of_x)
from .set_model import (DiameterSet, GridSet, Hedgehog, _merge_intervals,
                        hyp_length)

TWO_PI = 2 * np.pi
MIN_STRIP_ROWS = 16


# interval algebra on sorted disjoint lists

def _intersect(A, B):
    out, i, j = [], 0, 0
    while i < len(A) and j < len(B):
        lo, hi = max(A[i][0], B[j][0]), min(A[i][1], B[j][1])
        if hi > lo:
            out.append((lo, hi))
        if A[i][1] < B[j][1]:
            i += 1
        else:
            j += 1
    return out


def _clip(A, lo=-math.inf, hi=math.inf):
    return [(max(a, lo), min(b, hi)) for a, b in A if min(b, hi) > max(a, lo)]


def polarize_diameter(E: DiameterSet, c: float, orientation: int = 1) -> DiameterSet:
    """Polarization across the geodesic orthogonal to the carrying diameter
    at the point c (Euclidean coordinate). With orientation +1 the positive
    half-plane is the side containing the -1 end of the diameter."""
    if not abs(c) < 1:
        raise DomainError("foot point must satisfy |c| < 1")
    uc = u_of_x(c)
    A = list(E.intervals)
    R = _merge_intervals([(2 * uc - b, 2 * uc - a) for a, b in A])
    union = _merge_intervals(A + list(R))
    inter = _intersect(A, list(R))
    if orientation == 1:
        keep = _clip(union, hi=uc) + _clip(inter, lo=uc)
    elif orientation == -1:
        keep = _clip(union, lo=uc) + _clip(inter, hi=uc)
    else:
        raise DomainError("orientation must be +1 or -1")
    return DiameterSet(tuple(keep), E.angle)


def polarize_grid(E: GridSet, geo: Geodesic) -> GridSet:
    """Cell-pair polarization. Every cell whose center lies in H+ is paired
    with the cell containing the reflected center when that cell lies in H-
    and is not yet paired; occupancy of a half-occupied pair moves to the H+
    cell. Unpaired cells are left unchanged."""
    centers = E.centers()
    side = geo.side(centers)
    ti, tj = E.cell_of(reflect(geo, centers))
    occ = E.occupancy.copy()
    claimed = np.zeros_like(occ)
    for i, j in zip(*np.nonzero(side == 1)):
        pi, pj = ti[i, j], tj[i, j]
        if pi < 0 or side[pi, pj] != -1 or claimed[pi, pj]:
            continue
        claimed[pi, pj] = True
        if occ[pi, pj] and not occ[i, j]:
            occ[i, j], occ[pi, pj] = True, False
    return E.with_occupancy(occ)


def _strip_maps(geo: Geodesic, a):
    psi = transport_to_vertical(geo, a)
    inv = psi.inverse()

    def to_strip(z):
        w = psi(z)
        return np.log((1 + w) / (1 - w))

    def from_strip(s):
        return inv(np.tanh(s / 2))
    return to_strip, from_strip


def steiner_hyperbolic(E: GridSet, geo: Geodesic, a=0j, refine: float = 1.0) -> GridSet:
    """Hyperbolic Steiner symmetrization about ``geo`` centered at ``a``.

    The set is carried to the strip |Im w| < pi/2 with ``geo`` on Re w = 0;
    each horizontal line section is replaced by the centered interval of equal
    length, then the result is carried back and sampled at cell centers."""
    to_strip, from_strip = _strip_maps(geo, complex(a))
    h = E.dr / refine
    occ_pts = E.occupied_points()
    if occ_pts.size == 0:
        return E.empty_like()
    # bounding box of the image, padded by one cell
    corners = E.centers()[E.occupancy]
    w = to_strip(corners)
    pad = 4 * h / (1 - E.r_max**2)
    xmax = np.max(np.abs(w.real)) + pad
    ys = np.arange(-np.pi / 2 + h / 2, np.pi / 2, h)
    xs = np.arange(-xmax, xmax + h, h)
    W = xs[None, :] + 1j * ys[:, None]
    Z = from_strip(W)
    ii, jj = E.cell_of(Z)
    inside = ii >= 0
    hit = np.zeros(W.shape, dtype=bool)
    hit[inside] = E.occupancy[ii[inside], jj[inside]]
    measure = hit.sum(axis=1) * h
    if np.count_nonzero(measure) < MIN_STRIP_ROWS:
        raise ResolutionError("fewer than 16 strip lines meet the set; refine the grid")
    wc = to_strip(E.centers())
    row = np.clip(np.floor((wc.imag + np.pi / 2) / h).astype(int), 0, len(ys) - 1)
    out = np.abs(wc.real) <= measure[row] / 2
    return E.with_occupancy(out & (measure[row] > 0))


def length_on_geodesic(E: GridSet, geo: Geodesic, a=0j, samples: int = 20000) -> float:
    """Hyperbolic length of E intersected with the geodesic through ``a``
    orthogonal to ``geo``, by arc-length sampling."""
    psi = transport_to_vertical(geo, complex(a)).inverse()
    smax = 2 * tau_of_r(E.r_max) + 2
    s = np.linspace(-smax, smax, samples + 1)
    mid = 0.5 * (s[1:] + s[:-1])
    z = psi(np.tanh(mid / 2))
    i, j = E.cell_of(z)
    ok = i >= 0
    hit = np.zeros(mid.shape, dtype=bool)
    hit[ok] = E.occupancy[i[ok], j[ok]]
    return float(np.sum(hit) * (s[1] - s[0]))


def is_symmetric_about(E: GridSet, geo: Geodesic, tol_cells: int = 0) -> int:
    """Number of occupied cells whose reflected center falls in an unoccupied
    cell (0 for an exactly symmetric set)."""
    c = E.occupied_points()
    i, j = E.cell_of(reflect(geo, c))
    ok = i >= 0
    bad = np.count_nonzero(~ok)
    bad += np.count_nonzero(~E.occupancy[i[ok], j[ok]])
    return int(bad)


def schwarz_hyperbolic(E: GridSet, a=0j) -> float:
    """Hyperbolic radius of the disk with the same hyperbolic area as E."""
    return tau_of_area(E.hyp_area())


def circular_symmetrize(E: GridSet) -> GridSet:
    """Per ring, the same number of cells packed symmetrically about angle 0
    (an odd extra cell goes to the positive side)."""
    n = E.n_theta
    counts = E.occupancy.sum(axis=1)
    j = np.arange(n)
    pos = (counts[:, None] + 1) // 2
    neg = counts[:, None] // 2
    occ = (j[None, :] < pos) | (j[None, :] >= n - neg)
    return E.with_occupancy(occ)


def recentered_ring_counts(E: GridSet, r: float):
    """Per-ring occupied counts of the image of E under z -> (z - r)/(1 - r z),
    re-rasterized by cell-center sampling."""
    shift = MobiusMap(-r + 0j, 0.0)  # z -> (z + r) / (1 + r z)
    g = GridSet.from_predicate(lambda z: _grid_contains(E, shift(z)), E.n_r, E.n_theta, E.r_max)
    return g.occupancy.sum(axis=1), g


def _grid_contains(E: GridSet, z):
    i, j = E.cell_of(z)
    ok = i >= 0
    out = np.zeros(np.shape(z), dtype=bool)
    out[ok] = E.occupancy[i[ok], j[ok]]
    return out


def _beta_of_alpha(r, alpha):
    return float(np.angle((np.exp(1j * alpha) - r) / (1 - r * np.exp(1j * alpha)))) % TWO_PI


def circular_symmetrize_hyperbolic(E: GridSet, r: float, alpha: float) -> GridSet:
    """Circular symmetrization along the geodesic ray from r toward e^{i alpha}:
    move r to 0, symmetrize about [0, 1), then carry 0 back to r and the
    positive radius onto the ray. Re-rasterized by cell-center sampling."""
    if not (0 <= r < 1):
        raise DomainError("center must lie in [0, 1)")
    _, g = recentered_ring_counts(E, r)
    sym = circular_symmetrize(g)
    beta = _beta_of_alpha(r, alpha)
    back = MobiusMap(r + 0j, 0.0)
    unrotate = MobiusMap(0j, -beta)

    def pred(z):
        # inverse of z -> (e^{i beta} z + r) / (1 + e^{i beta} r z)
        return _grid_contains(sym, unrotate(back(z)))
    return GridSet.from_predicate(pred, E.n_r, E.n_theta, E.r_max)


def circular_area_profile(E: GridSet, r: float, alphas, nodes: int = 48):
    """Euclidean area of the hyperbolic circular symmetrization of E along the
    ray from r toward e^{i alpha}, for each alpha.

    The symmetrized set is taken as continuous symmetric ring arcs (half-angle
    pi * count / n_theta) of the recentered rasterization, and the area of its
    image is integrated with Gauss-Legendre quadrature."""
    counts, g = recentered_ring_counts(E, r)
    xr, wr = np.polynomial.legendre.leggauss(8)
    xt, wt = np.polynomial.legendre.leggauss(nodes)
    edges = g.radii_edges()
    out = []
    for alpha in np.atleast_1d(alphas):
        beta = _beta_of_alpha(r, alpha)
        total = 0.0
        for i, k in enumerate(counts):
            if k == 0:
                continue
            half = np.pi * k / g.n_theta
            r0, r1 = edges[i], edges[i + 1]
            rho = 0.5 * (r1 - r0) * xr + 0.5 * (r1 + r0)
            wrho = 0.5 * (r1 - r0) * wr
            x = r * rho
            if k == g.n_theta:
                ring = TWO_PI * (1 + x**2) / (1 - x**2) ** 3
            else:
                th = half * xt
                den = np.abs(1 + x[:, None] * np.exp(1j * (th[None, :] + beta))) ** 4
                ring = half * np.sum(wt[None, :] / den, axis=1)
            total += np.sum(wrho * rho * ring)
        out.append((1 - r * r) ** 2 * total)
    return np.array(out)


def szego_radial(E: GridSet, r: float) -> GridSet:
    """Per angular column, a single interval from the center whose
    logarithmic measure beyond r equals that of the column."""
    edges = E.radii_edges()
    inner = edges[1:] <= r
    if np.any(inner) and not np.all(E.occupancy[inner]):
        raise PreconditionError("the closed disk of radius r is not contained in E")
    lo = np.maximum(edges[:-1], r)
    hi = np.maximum(edges[1:], r)
    with np.errstate(divide="ignore"):
        cell_log = np.where(hi > lo, np.log(hi / np.where(lo > 0, lo, 1.0)), 0.0)
    M = (cell_log[:, None] * E.occupancy).sum(axis=0)
    R = r * np.exp(M)
    if np.any(R > E.r_max):
        raise ResolutionError("symmetrized set leaves the grid; increase r_max")
    centers = 0.5 * (edges[:-1] + edges[1:])
    occ = centers[:, None] <= R[None, :]
    return E.with_occupancy(occ)


def column_log_measure(E: GridSet, r: float):
    edges = E.radii_edges()
    lo = np.maximum(edges[:-1], r)
    hi = np.maximum(edges[1:], r)
    cell_log = np.log(hi / np.where(lo > 0, lo, 1.0))
    return (cell_log[:, None] * E.occupancy).sum(axis=0)


def radial_hyperbolic(E: Hedgehog) -> Hedgehog:
    """Per spike angle, replace the radial section by [0, r(l)] with l its
    hyperbolic length (core included)."""
    spikes = []
    for angle, iv in E.spikes:
        ell = tau_of_r(E.core_radius) + hyp_length(iv)
        spikes.append((angle, [(E.core_radius, r_of_tau(ell))]))
    return Hedgehog(E.core_radius, spikes)


def column_hyp_lengths(E: GridSet):
    tau_edges = tau_of_r(E.radii_edges())
    return (np.diff(tau_edges)[:, None] * E.occupancy).sum(axis=0)


def radial_hyperbolic_grid(E: GridSet):
    """Grid version: returns the rasterized output and the exact hyperbolic
    area of the continuous output columns."""
    ell = column_hyp_lengths(E)
    R = r_of_tau(ell)
    edges = E.radii_edges()
    centers = 0.5 * (edges[:-1] + edges[1:])
    occ = centers[:, None] <= R[None, :]
    area = float(np.sum(polar_cell_area(0.0, R, E.dtheta)))
    return E.with_occupancy(occ), area


def hedgehog_hyp_diameter(E: Hedgehog) -> float:
    """Exact hyperbolic diameter: extremes are attained at interval endpoints
    and at points of the core circle antipodal to them."""
    pts = list(E.endpoints())
    rc = E.core_radius
    best = 2 * tau_of_r(rc) if rc > 0 else 0.0
    if rc > 0:
        pts += [-rc * w / abs(w) for w in list(pts) if abs(w) > 0]
        pts.append(rc + 0j)
    if not pts:
        return best
    z = np.array(pts, dtype=complex)
    return float(max(best, np.max(hyp_dist(z[:, None], z[None, :]))))


def contraction_map(z, r0: float, r: float):
    """Point map: keeps the argument, and the hyperbolic distance to the
    circle |z| = r (new) equals that to |z| = r0 (old)."""
    z = np.asarray(z, dtype=complex)
    if np.any(np.abs(z) < r0 - 1e-12):
        raise PreconditionError("points must satisfy |z| >= r0")
    t = tau_of_r(np.minimum(np.abs(z), 1 - 1e-16)) - tau_of_r(r0) + tau_of_r(r)
    return r_of_tau(t) * np.exp(1j * np.angle(z))


def contraction_phi(E: Hedgehog, r0: float, r: float) -> Hedgehog:
    """Move every interval inward keeping hyperbolic length and the gap to the
    reference circle: tau(a') - tau(r) = tau(a) - tau(r0)."""
    if not (0 <= r <= r0 < 1):
        raise DomainError("need 0 <= r <= r0 < 1")
    if E.core_radius > 0:
        raise PreconditionError("contraction is defined for sets in r0 <= |z| < 1 only")
    shift = tau_of_r(r) - tau_of_r(r0)
    spikes = []
    for angle, iv in E.spikes:
        if any(a < r0 - 1e-12 for a, _ in iv):
            raise PreconditionError("interval below r0")
        spikes.append((angle, [(r_of_tau(max(tau_of_r(a) + shift, 0.0)),
                                r_of_tau(tau_of_r(b) + shift)) for a, b in iv]))
    return Hedgehog(0.0, spikes)


def radial_project(points, r: float):
    z = np.asarray(points, dtype=complex)
    if np.any(np.abs(z) < r - 1e-12):
        raise PreconditionError("points must satisfy |z| >= r")
    return r * z / np.abs(z)


# dispersion

def _point_to_ray_segment(w, angle, a, b):
    """Hyperbolic distance from w to the radial segment [a, b] e^{i angle}."""
    v = complex(w) * np.exp(-1j * angle)
    cands = [a, b]
    if abs(v.real) > 1e-15:
        x0 = (abs(v) ** 2 + 1) / (2 * v.real)
        foot = x0 - math.copysign(math.sqrt(x0 * x0 - 1), x0)
        if a <= foot <= b:
            cands.append(foot)
    elif a <= 0 <= b:
        cands.append(0.0)
    return min(hyp_dist(v, c) for c in cands)


def _ray_distance(angle1, iv1, angle2, iv2):
    if abs(np.angle(np.exp(1j * (angle1 - angle2)))) < 1e-12:
        u1 = [(tau_of_r(a), tau_of_r(b)) for a, b in iv1]
        u2 = [(tau_of_r(a), tau_of_r(b)) for a, b in iv2]
        return min(max(c - b, a - d, 0.0) for a, b in u1 for c, d in u2)
    best = math.inf
    for a, b in iv1:
        for c, d in iv2:
            if a == 0 and c == 0:
                return 0.0
            for w in (a * np.exp(1j * angle1), b * np.exp(1j * angle1)):
                best = min(best, _point_to_ray_segment(w, angle2, c, d))
            for w in (c * np.exp(1j * angle2), d * np.exp(1j * angle2)):
                best = min(best, _point_to_ray_segment(w, angle1, a, b))
    return best


def part_distance(p: Hedgehog, q: Hedgehog) -> float:
    """Hyperbolic distance between two core-free hedgehogs."""
    return min(_ray_distance(a1, iv1, a2, iv2) for a1, iv1 in p.spikes for a2, iv2 in q.spikes)


@dataclass(frozen=True)
class DispersionSchedule:
    """Parts are core-free hedgehogs on single rays; ``speeds`` are hyperbolic
    lengths per unit t moved outward along the ray."""
    parts: tuple
    speeds: tuple
    check_points: int = field(default=33, compare=False)

    def __post_init__(self):
        parts = tuple(self.parts)
        speeds = tuple(float(v) for v in self.speeds)
        object.__setattr__(self, "parts", parts)
        object.__setattr__(self, "speeds", speeds)
        if len(parts) != len(speeds) or len(parts) < 1:
            raise ScheduleError("need one speed per part")
        for p in parts:
            if p.core_radius > 0 or len(p.spikes) != 1:
                raise ScheduleError("each part must be a core-free set on a single ray")
        if any(v < 0 for v in speeds):
            raise ScheduleError("parts may only move outward")
        for k in range(len(parts)):
            for m in range(k + 1, len(parts)):
                p, q = parts[k], parts[m]
                if part_distance(p, q) <= 0:
                    raise ScheduleError(f"parts {k} and {m} intersect at t = 0")
                vp, vq = speeds[k], speeds[m]
                if abs(np.angle(np.exp(1j * (p.angles[0] - q.angles[0])))) < 1e-12:
                    inner_v, outer_v = (vp, vq) if p.spikes[0][1][0][0] < q.spikes[0][1][0][0] else (vq, vp)
                    if outer_v <= inner_v:
                        raise ScheduleError(f"parts {k} and {m} on one ray do not separate")
                elif max(vp, vq) == 0:
                    raise ScheduleError(f"parts {k} and {m} never move apart")

    def part_at(self, k, t) -> Hedgehog:
        (angle, iv), = self.parts[k].spikes
        s = self.speeds[k] * t
        return Hedgehog(0.0, [(angle, [(r_of_tau(tau_of_r(a) + s), r_of_tau(tau_of_r(b) + s))
                                       for a, b in iv])])

    def min_distance(self, t) -> float:
        ps = [self.part_at(k, t) for k in range(len(self.parts))]
        if len(ps) < 2:
            return math.inf
        return min(part_distance(ps[i], ps[j]) for i in range(len(ps)) for j in range(i + 1, len(ps)))

    def pair_distances(self, t):
        ps = [self.part_at(k, t) for k in range(len(self.parts))]
        return np.array([part_distance(ps[i], ps[j]) for i in range(len(ps))
                         for j in range(i + 1, len(ps))])


def disperse(schedule: DispersionSchedule, t: float) -> Hedgehog:
    """The union of all parts after moving part k outward by speeds[k] * t.
    Pairwise distances are checked to be non-decreasing on [0, t]."""
    if t < 0:
        raise ScheduleError("t must be >= 0")
    if t > 0:
        prev = schedule.pair_distances(0.0)
        for s in np.linspace(0, t, schedule.check_points)[1:]:
            cur = schedule.pair_distances(s)
            if np.any(cur < prev - 1e-9):
                raise ScheduleError("pairwise distance decreases along the schedule")
            prev = cur
    out = Hedgehog()
    for k in range(len(schedule.parts)):
        out = out.union(schedule.part_at(k, t))
    return out


# reports

@dataclass(frozen=True)
class TransformReport:
    name: str
    params: dict
    preserved: dict
    notes: str = ""

    def to_dict(self):
        return {"name": self.name, "params": self.params,
                "preserved": {k: {"before": v[0], "after": v[1]} for k, v in self.preserved.items()},
                "notes": self.notes}


def _lengths_by_angle(h: Hedgehog):
    return {f"{a:.12g}": h.radial_length(a) for a in h.angles}


def apply_transform(name: str, obj, **params):
    """Run a named transform and recompute the quantities it should preserve."""
    if name == "polarize":
        if isinstance(obj, DiameterSet):
            out = polarize_diameter(obj, params["c"], params.get("orientation", 1))
            pres = {"hyp_length": (obj.hyp_length(), out.hyp_length())}
        elif isinstance(obj, GridSet):
            geo = params["geodesic"]
            out = polarize_grid(obj, geo)
            pres = {"cells": (obj.count(), out.count()),
                    "hyp_area": (obj.hyp_area(), out.hyp_area())}
        else:
            raise PreconditionError("polarize needs a diameter or grid set")
        return out, TransformReport(name, _jsonable(params), pres)
    if name in ("steiner", "circular", "szego", "schwarz") and not isinstance(obj, GridSet):
        raise PreconditionError(f"{name} needs a grid set; rasterize the input first")
    if name == "steiner":
        geo, a = params["geodesic"], params.get("a", 0j)
        out = steiner_hyperbolic(obj, geo, a)
        pres = {"hyp_area": (obj.hyp_area(), out.hyp_area()),
                "perp_length": (length_on_geodesic(obj, geo, a), length_on_geodesic(out, geo, a))}
        note = f"strip step {obj.dr:.6g}, output sampled at cell centers"
        return out, TransformReport(name, _jsonable(params), pres, note)
    if name == "circular":
        if params.get("r", 0.0) == 0.0 and params.get("alpha", 0.0) == 0.0:
            out = circular_symmetrize(obj)
            note = ""
        else:
            out = circular_symmetrize_hyperbolic(obj, params["r"], params.get("alpha", 0.0))
            note = f"recentered by cell-center sampling at {obj.n_r}x{obj.n_theta}"
        pres = {"ring_counts": (obj.occupancy.sum(axis=1).tolist(), out.occupancy.sum(axis=1).tolist()),
                "hyp_area": (obj.hyp_area(), out.hyp_area())}
        return out, TransformReport(name, _jsonable(params), pres, note)
    if name == "szego":
        out = szego_radial(obj, params["r"])
        pres = {"column_log_measure": (column_log_measure(obj, params["r"]).tolist(),
                                       column_log_measure(out, params["r"]).tolist())}
        return out, TransformReport(name, _jsonable(params), pres)
    if name == "schwarz":
        tau = schwarz_hyperbolic(obj, params.get("a", 0j))
        a = complex(params.get("a", 0j))
        out = GridSet.hyp_disk(a, tau, obj.n_r, obj.n_theta, obj.r_max)
        pres = {"hyp_area": (obj.hyp_area(), float(4 * np.pi * np.sinh(tau / 2) ** 2))}
        return out, TransformReport(name, _jsonable(params) | {"tau": tau}, pres)
    if name == "radial":
        if isinstance(obj, GridSet):
            out, area = radial_hyperbolic_grid(obj)
            pres = {"column_hyp_length": (column_hyp_lengths(obj).tolist(),
                                          column_hyp_lengths(out).tolist()),
                    "hyp_area": (obj.hyp_area(), area)}
            return out, TransformReport(name, _jsonable(params), pres)
        if not isinstance(obj, Hedgehog):
            raise PreconditionError("radial needs a hedgehog or grid set")
        out = radial_hyperbolic(obj)
        pres = {"length_by_angle": (_lengths_by_angle(obj), _lengths_by_angle(out)),
                "hyp_diameter": (hedgehog_hyp_diameter(obj), hedgehog_hyp_diameter(out))}
        return out, TransformReport(name, _jsonable(params), pres)
    if name == "contract":
        if not isinstance(obj, Hedgehog):
            raise PreconditionError("contract needs a hedgehog")
        out = contraction_phi(obj, params["r0"], params["r"])
        pres = {"spike_lengths": ([obj.spike_length(a) for a in obj.angles],
                                  [out.spike_length(a) for a in out.angles])}
        return out, TransformReport(name, _jsonable(params), pres)
    raise PreconditionError(f"unknown transform {name!r}")


def _jsonable(params):
    out = {}
    for k, v in params.items():
        if isinstance(v, complex):
            out[k] = [v.real, v.imag]
        elif isinstance(v, Geodesic):
            out[k] = {"kind": v.kind, "angle": v.angle, "theta1": v.theta1,
                      "theta2": v.theta2, "orientation": v.orientation}
        else:
            out[k] = v
    return out
