"""Set representations: hedgehogs, interval sets on a diameter, polar grids,
and boundary charts consumed by the Fekete optimizer."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial.distance import directed_hausdorff

from .exceptions import DomainError
from .hyp_core import (BOUNDARY_MARGIN, MobiusMap, polar_cell_area, tau_of_r,
                       u_of_x, x_of_u)

TWO_PI = 2 * np.pi
MERGE_TOL = 1e-13
ANGLE_DECIMALS = 12


def _merge_intervals(intervals, lo=-math.inf):
    """Sort, clip below ``lo``, drop degenerate pieces, merge touching ones."""
    out = []
    for a, b in sorted((float(a), float(b)) for a, b in intervals):
        if b < a:
            raise DomainError(f"interval [{a}, {b}] has b < a")
        a = max(a, lo)
        if b - a <= 0:
            continue
        if out and a <= out[-1][1] + MERGE_TOL:
            out[-1] = (out[-1][0], max(out[-1][1], b))
        else:
            out.append((a, b))
    return tuple(out)


def _norm_angle(a):
    a = float(a) % TWO_PI
    a = round(a, ANGLE_DECIMALS)
    return 0.0 if a >= TWO_PI else a


@dataclass(frozen=True)
class Hedgehog:
    """Closed central disk |z| <= core_radius plus radial interval unions.

    ``spikes`` is a sequence of (angle, [(a, b), ...]) with Euclidean radii.
    Construction normalizes: angles are reduced mod 2 pi and merged,
    intervals are sorted and merged, degenerate intervals are dropped and
    parts swallowed by the core are clipped."""
    core_radius: float = 0.0
    spikes: tuple = ()

    def __post_init__(self):
        r = float(self.core_radius)
        if not (0 <= r <= 1 - BOUNDARY_MARGIN):
            raise DomainError("core radius must lie in [0, 1)")
        by_angle = {}
        for angle, intervals in self.spikes:
            for a, b in intervals:
                if not (0 <= a and b <= 1 - BOUNDARY_MARGIN):
                    raise DomainError(f"interval [{a}, {b}] leaves [0, 1)")
            by_angle.setdefault(_norm_angle(angle), []).extend(intervals)
        spikes = []
        for angle in sorted(by_angle):
            iv = _merge_intervals(by_angle[angle], lo=r)
            if iv:
                spikes.append((angle, iv))
        object.__setattr__(self, "core_radius", r)
        object.__setattr__(self, "spikes", tuple(spikes))

    @property
    def angles(self):
        return tuple(a for a, _ in self.spikes)

    def is_empty(self):
        return self.core_radius == 0 and not self.spikes

    def intervals_at(self, angle):
        return dict(self.spikes).get(_norm_angle(angle), ())

    def spike_length(self, angle) -> float:
        return hyp_length(self.intervals_at(angle))

    def radial_length(self, angle) -> float:
        """Hyperbolic length of the set on the ray at ``angle`` (core included)."""
        return tau_of_r(self.core_radius) + self.spike_length(angle)

    def rotated(self, phi) -> "Hedgehog":
        return Hedgehog(self.core_radius, [(a + phi, iv) for a, iv in self.spikes])

    def union(self, other: "Hedgehog") -> "Hedgehog":
        return Hedgehog(max(self.core_radius, other.core_radius),
                        list(self.spikes) + list(other.spikes))

    def endpoints(self):
        """Interval endpoints as complex numbers."""
        pts = [r * np.exp(1j * a) for a, iv in self.spikes for ab in iv for r in ab]
        return np.array(pts, dtype=complex)

    def sample(self, per_piece=64):
        pts = []
        if self.core_radius > 0:
            t = np.linspace(0, TWO_PI, 4 * per_piece, endpoint=False)
            pts.append(self.core_radius * np.exp(1j * t))
        for a, iv in self.spikes:
            for lo, hi in iv:
                u = np.linspace(tau_of_r(lo), tau_of_r(hi), per_piece)
                pts.append(x_of_u(u) * np.exp(1j * a))
        if not pts:
            return np.zeros(1, dtype=complex)
        return np.concatenate(pts)


def hyp_length(obj) -> float:
    """Hyperbolic length of a DiameterSet or of a radial interval list."""
    if isinstance(obj, DiameterSet):
        return float(sum(b - a for a, b in obj.intervals))
    return float(sum(tau_of_r(b) - tau_of_r(a) for a, b in obj))


@dataclass(frozen=True)
class DiameterSet:
    """Finite union of closed intervals on the diameter of direction ``angle``,
    stored in the signed hyperbolic coordinate u = 2 artanh(x)."""
    intervals: tuple = ()
    angle: float = 0.0

    def __post_init__(self):
        for a, b in self.intervals:
            if not (math.isfinite(a) and math.isfinite(b)):
                raise DomainError("interval endpoints must be finite")
        object.__setattr__(self, "intervals", _merge_intervals(self.intervals))

    @classmethod
    def from_x(cls, intervals, angle=0.0) -> "DiameterSet":
        iv = []
        for a, b in intervals:
            if not (-1 < a and b < 1):
                raise DomainError("diameter intervals must lie inside (-1, 1)")
            iv.append((u_of_x(a), u_of_x(b)))
        return cls(tuple(iv), angle)

    @property
    def x_intervals(self):
        return tuple((x_of_u(a), x_of_u(b)) for a, b in self.intervals)

    def is_empty(self):
        return not self.intervals

    def hyp_length(self) -> float:
        return hyp_length(self)

    def endpoints(self):
        return np.array([x_of_u(u) for ab in self.intervals for u in ab]) * np.exp(1j * self.angle)

    def contains_u(self, u, tol=0.0):
        u = np.asarray(u, dtype=float)
        out = np.zeros(u.shape, dtype=bool)
        for a, b in self.intervals:
            out |= (u >= a - tol) & (u <= b + tol)
        return out

    def to_hedgehog(self) -> Hedgehog:
        """Same set written as radial spikes at ``angle`` and ``angle + pi``."""
        pos, neg = [], []
        for a, b in self.intervals:
            if b > 0:
                pos.append((x_of_u(max(a, 0.0)), x_of_u(b)))
            if a < 0:
                neg.append((x_of_u(max(-b, 0.0)), x_of_u(-a)))
        spikes = []
        if pos:
            spikes.append((self.angle, pos))
        if neg:
            spikes.append((self.angle + np.pi, neg))
        return Hedgehog(0.0, spikes)

    def sample(self, per_piece=64):
        pts = [x_of_u(np.linspace(a, b, per_piece)) for a, b in self.intervals]
        if not pts:
            return np.zeros(1, dtype=complex)
        return np.concatenate(pts) * np.exp(1j * self.angle)


@dataclass(frozen=True, eq=False)
class GridSet:
    """Occupancy of polar cells. Cell (i, j) covers
    i dr <= |z| < (i+1) dr, j dth <= arg z < (j+1) dth (closed on the lower
    edges), with dr = r_max / n_r and dth = 2 pi / n_theta."""
    n_r: int
    n_theta: int
    r_max: float
    occupancy: np.ndarray = field(repr=False)

    def __post_init__(self):
        if not (0 < self.r_max <= 1 - BOUNDARY_MARGIN):
            raise DomainError("r_max must lie in (0, 1)")
        if self.n_r < 1 or self.n_theta < 1:
            raise DomainError("cell counts must be positive")
        occ = np.asarray(self.occupancy, dtype=bool)
        if occ.shape != (self.n_r, self.n_theta):
            raise DomainError(f"occupancy shape {occ.shape} != ({self.n_r}, {self.n_theta})")
        occ = occ.copy()
        occ.setflags(write=False)
        object.__setattr__(self, "occupancy", occ)

    def __eq__(self, other):
        return (isinstance(other, GridSet) and self.n_r == other.n_r
                and self.n_theta == other.n_theta and self.r_max == other.r_max
                and np.array_equal(self.occupancy, other.occupancy))

    @property
    def dr(self):
        return self.r_max / self.n_r

    @property
    def dtheta(self):
        return TWO_PI / self.n_theta

    def with_occupancy(self, occ) -> "GridSet":
        return GridSet(self.n_r, self.n_theta, self.r_max, occ)

    def empty_like(self) -> "GridSet":
        return self.with_occupancy(np.zeros((self.n_r, self.n_theta), dtype=bool))

    def radii_edges(self):
        return np.arange(self.n_r + 1) * self.dr

    def centers(self):
        rho = (np.arange(self.n_r) + 0.5) * self.dr
        th = (np.arange(self.n_theta) + 0.5) * self.dtheta
        return rho[:, None] * np.exp(1j * th)[None, :]

    def cell_areas(self):
        e = self.radii_edges()
        return np.repeat(polar_cell_area(e[:-1], e[1:], self.dtheta)[:, None], self.n_theta, axis=1)

    def euclid_cell_areas(self):
        e = self.radii_edges()
        a = 0.5 * self.dtheta * (e[1:] ** 2 - e[:-1] ** 2)
        return np.repeat(a[:, None], self.n_theta, axis=1)

    def hyp_area(self) -> float:
        return float(np.sum(self.cell_areas()[self.occupancy]))

    def euclid_area(self) -> float:
        return float(np.sum(self.euclid_cell_areas()[self.occupancy]))

    def count(self) -> int:
        return int(self.occupancy.sum())

    def cell_of(self, z):
        """(i, j) indices of the cells containing z, or -1 for i outside r_max."""
        z = np.asarray(z, dtype=complex)
        rho = np.abs(z)
        i = np.floor(rho / self.dr).astype(int)
        i = np.where(rho >= self.r_max, -1, i)
        j = np.floor((np.angle(z) % TWO_PI) / self.dtheta).astype(int) % self.n_theta
        return i, j

    def boundary_mask(self):
        """Occupied cells with at least one unoccupied edge neighbour."""
        occ = self.occupancy
        pad_out = np.zeros((1, self.n_theta), dtype=bool)
        inner = np.vstack([np.roll(occ[:1], self.n_theta // 2, axis=1), occ[:-1]])
        outer = np.vstack([occ[1:], pad_out])
        left = np.roll(occ, 1, axis=1)
        right = np.roll(occ, -1, axis=1)
        return occ & ~(inner & outer & left & right)

    def boundary_points(self):
        return self.centers()[self.boundary_mask()]

    def occupied_points(self):
        return self.centers()[self.occupancy]

    # constructors
    @classmethod
    def from_predicate(cls, pred, n_r, n_theta, r_max) -> "GridSet":
        """Rasterize by sampling ``pred`` at cell centers."""
        g = cls(n_r, n_theta, r_max, np.zeros((n_r, n_theta), dtype=bool))
        return g.with_occupancy(np.asarray(pred(g.centers()), dtype=bool))

    @classmethod
    def disk(cls, radius, n_r, n_theta, r_max, center=0j) -> "GridSet":
        """Euclidean disk |z - center| <= radius, sampled at cell centers."""
        return cls.from_predicate(lambda z: np.abs(z - center) <= radius, n_r, n_theta, r_max)

    @classmethod
    def hyp_disk(cls, center, tau, n_r, n_theta, r_max) -> "GridSet":
        from .hyp_core import hyp_dist
        return cls.from_predicate(lambda z: hyp_dist(z, center) <= tau, n_r, n_theta, r_max)

    @classmethod
    def from_hedgehog(cls, h: Hedgehog, n_r, n_theta, r_max) -> "GridSet":
        g = cls.disk(h.core_radius, n_r, n_theta, r_max) if h.core_radius > 0 else \
            cls(n_r, n_theta, r_max, np.zeros((n_r, n_theta), dtype=bool))
        occ = g.occupancy.copy()
        for angle, iv in h.spikes:
            j = int(np.floor((angle % TWO_PI) / g.dtheta)) % n_theta
            for a, b in iv:
                _mark_radial(occ, g, j, a, b)
        return g.with_occupancy(occ)

    @classmethod
    def from_diameter_set(cls, ds: DiameterSet, n_r, n_theta, r_max) -> "GridSet":
        """Rasterize an interval set on the real diameter. The positive half goes
        to the column just above the positive axis and the negative half to the
        column just above the negative axis, so reflections across geodesics
        orthogonal to the diameter pair cells consistently."""
        if n_theta % 2:
            raise DomainError("n_theta must be even to rasterize a diameter set")
        g = cls(n_r, n_theta, r_max, np.zeros((n_r, n_theta), dtype=bool))
        occ = g.occupancy.copy()
        for a, b in ds.x_intervals:
            if b >= 0:
                _mark_radial(occ, g, 0, max(a, 0.0), b)
            if a < 0:
                _mark_radial(occ, g, n_theta // 2 - 1, max(-b, 0.0), -a)
        return g.with_occupancy(occ)


def _mark_radial(occ, g, j, a, b):
    lo = int(np.floor(a / g.dr))
    hi = int(np.floor(b / g.dr))
    if lo >= g.n_r:
        raise DomainError("spike beyond grid r_max")
    occ[lo:min(hi, g.n_r - 1) + 1, j] = True


# boundary charts

@dataclass(frozen=True)
class Segment:
    """Geodesic segment: points tanh(u/2) e^{i angle}, u in [u0, u1], optionally
    mapped by a disk automorphism. Radial intervals have u0 >= 0."""
    angle: float
    u0: float
    u1: float
    mobius: MobiusMap | None = None
    kind = "segment"

    def __post_init__(self):
        if not self.u1 >= self.u0:
            raise DomainError("segment needs u1 >= u0")

    @property
    def hyp_length(self):
        return self.u1 - self.u0

    bounded = True

    def _z0(self, u):
        t = np.tanh(u / 2)
        e = np.exp(1j * self.angle)
        return t * e, (1 - t * t) / 2 * e

    def eval(self, x):
        """Chebyshev-type parameter x in [0, pi]: u = c - h cos x."""
        c, h = 0.5 * (self.u0 + self.u1), 0.5 * (self.u1 - self.u0)
        u = c - h * np.cos(x)
        z, dzdu = self._z0(u)
        dz = dzdu * h * np.sin(x)
        if self.mobius is not None:
            dz = dz * self.mobius.derivative(z)
            z = self.mobius(z)
        return z, dz

    def x_of_fraction(self, f):
        return np.pi * np.asarray(f)

    def fraction_of_x(self, x):
        return np.asarray(x) / np.pi

    def sample(self, m):
        z, _ = self._z0(np.linspace(self.u0, self.u1, m))
        return self.mobius(z) if self.mobius is not None else z

    def mapped(self, m: MobiusMap) -> "Segment":
        return Segment(self.angle, self.u0, self.u1, compose(m, self.mobius))


@dataclass(frozen=True)
class Arc:
    """Arc of the circle |z| = radius for theta in [theta0, theta1], optionally
    mapped by a disk automorphism. A span of 2 pi is a full circle."""
    radius: float
    theta0: float
    theta1: float
    mobius: MobiusMap | None = None
    kind = "arc"

    def __post_init__(self):
        if not (0 < self.radius <= 1 - BOUNDARY_MARGIN):
            raise DomainError("arc radius must lie in (0, 1)")
        if not (0 <= self.theta1 - self.theta0 <= TWO_PI + 1e-12):
            raise DomainError("arc angular span must lie in [0, 2 pi]")

    @property
    def full(self):
        return self.theta1 - self.theta0 >= TWO_PI - 1e-12

    @property
    def bounded(self):
        return not self.full

    @property
    def hyp_length(self):
        return 2 * self.radius * (self.theta1 - self.theta0) / (1 - self.radius**2)

    def eval(self, x):
        if self.full:
            th = x
            dth = np.ones_like(x)
        else:
            c, h = 0.5 * (self.theta0 + self.theta1), 0.5 * (self.theta1 - self.theta0)
            th = c - h * np.cos(x)
            dth = h * np.sin(x)
        z = self.radius * np.exp(1j * th)
        dz = 1j * z * dth
        if self.mobius is not None:
            dz = dz * self.mobius.derivative(z)
            z = self.mobius(z)
        return z, dz

    def x_of_fraction(self, f):
        f = np.asarray(f)
        return self.theta0 + TWO_PI * f if self.full else np.pi * f

    def fraction_of_x(self, x):
        x = np.asarray(x)
        return ((x - self.theta0) % TWO_PI) / TWO_PI if self.full else x / np.pi

    def sample(self, m):
        th = np.linspace(self.theta0, self.theta1, m, endpoint=not self.full)
        z = self.radius * np.exp(1j * th)
        return self.mobius(z) if self.mobius is not None else z

    def mapped(self, m: MobiusMap) -> "Arc":
        return Arc(self.radius, self.theta0, self.theta1, compose(m, self.mobius))


@dataclass(frozen=True)
class PointPiece:
    z: complex
    kind = "point"
    hyp_length = 0.0
    bounded = True

    def sample(self, m):
        return np.array([self.z])

    def mapped(self, m: MobiusMap) -> "PointPiece":
        return PointPiece(complex(m(self.z)))


def compose(outer: MobiusMap, inner: MobiusMap | None) -> MobiusMap:
    """outer o inner for holomorphic automorphisms."""
    if inner is None:
        return outer
    if outer.conjugate or inner.conjugate:
        raise DomainError("composition implemented for holomorphic maps only")
    a = complex(inner.inverse()(outer.a))
    theta = float(np.angle(outer.derivative(inner(a)) * inner.derivative(a)))
    return MobiusMap(a, theta)


@dataclass(frozen=True)
class BoundaryChart:
    pieces: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "pieces", tuple(self.pieces))

    @property
    def hyp_length(self) -> float:
        return float(sum(p.hyp_length for p in self.pieces))

    @property
    def curves(self):
        return tuple(p for p in self.pieces if p.kind != "point")

    def is_degenerate(self):
        return self.hyp_length <= 0

    def mapped(self, m: MobiusMap) -> "BoundaryChart":
        return BoundaryChart(tuple(p.mapped(m) for p in self.pieces))

    def sample(self, per_piece=64):
        pts = [p.sample(per_piece) for p in self.pieces]
        return np.concatenate(pts) if pts else np.zeros(0, dtype=complex)

    def __add__(self, other: "BoundaryChart") -> "BoundaryChart":
        return BoundaryChart(self.pieces + other.pieces)


def segment_piece(angle, a, b) -> Segment:
    """Radial segment [a, b] e^{i angle}, 0 <= a <= b < 1."""
    return Segment(float(angle), tau_of_r(a), tau_of_r(b))


def arc_piece(radius, theta0, theta1) -> Arc:
    return Arc(float(radius), float(theta0), float(theta1))


def boundary_chart(obj) -> BoundaryChart:
    """Boundary pieces carrying the equilibrium measure of a set."""
    if isinstance(obj, BoundaryChart):
        return obj
    if isinstance(obj, DiameterSet):
        if obj.is_empty():
            raise DomainError("empty set has no boundary chart")
        return BoundaryChart(tuple(Segment(obj.angle, a, b) for a, b in obj.intervals))
    if not isinstance(obj, Hedgehog):
        raise DomainError(f"no boundary chart for {type(obj).__name__}")
    if obj.is_empty():
        raise DomainError("empty hedgehog has no boundary chart")
    pieces = []
    if obj.core_radius > 0:
        pieces.append(Arc(obj.core_radius, 0.0, TWO_PI))
    for angle, iv in obj.spikes:
        for a, b in iv:
            pieces.append(segment_piece(angle, a, b))
    return BoundaryChart(tuple(pieces))


def hausdorff_distance(a, b) -> float:
    """Euclidean Hausdorff distance between two finite point samples."""
    a = np.atleast_1d(np.asarray(a, dtype=complex))
    b = np.atleast_1d(np.asarray(b, dtype=complex))
    if a.size == 0 or b.size == 0:
        raise DomainError("Hausdorff distance of an empty sample")
    pa = np.column_stack([a.real, a.imag])
    pb = np.column_stack([b.real, b.imag])
    return float(max(directed_hausdorff(pa, pb)[0], directed_hausdorff(pb, pa)[0]))
