"""Primitives of the Poincare disk: distances, lengths, areas, geodesics,
disk automorphisms and reflections."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import DomainError, GeodesicError

BOUNDARY_MARGIN = 1e-12
CLASSIFY_TOL = 1e-12


def _as_complex(z):
    if isinstance(z, HypPoint):
        return z.z
    if isinstance(z, (list, tuple)) and z and isinstance(z[0], HypPoint):
        return np.array([p.z for p in z])
    return z


def _check_in_disk(z):
    za = np.abs(np.asarray(z, dtype=complex))
    if not np.all(np.isfinite(za)) or np.any(za > 1 - BOUNDARY_MARGIN):
        raise DomainError("point outside the open unit disk")


@dataclass(frozen=True)
class HypPoint:
    re: float
    im: float

    def __post_init__(self):
        _check_in_disk(complex(self.re, self.im))

    @classmethod
    def from_complex(cls, z) -> "HypPoint":
        z = complex(z)
        return cls(z.real, z.imag)

    @property
    def z(self) -> complex:
        return complex(self.re, self.im)

    def dist(self, other) -> float:
        return float(hyp_dist(self, other))


def tau_of_r(r):
    """Hyperbolic length of [0, r]."""
    ra = np.asarray(r, dtype=float)
    if not np.all(np.isfinite(ra)) or np.any(ra < 0) or np.any(ra >= 1):
        raise DomainError(f"radius must lie in [0, 1), got {r!r}")
    out = 2.0 * np.arctanh(ra)
    return float(out) if out.ndim == 0 else out


def r_of_tau(tau):
    """Euclidean radius r with hyperbolic length of [0, r] equal to tau."""
    ta = np.asarray(tau, dtype=float)
    if not np.all(np.isfinite(ta)) or np.any(ta < 0):
        raise DomainError(f"hyperbolic length must be finite and >= 0, got {tau!r}")
    out = np.tanh(ta / 2.0)
    return float(out) if out.ndim == 0 else out


def u_of_x(x):
    """Signed hyperbolic coordinate along a diameter."""
    xa = np.asarray(x, dtype=float)
    if np.any(np.abs(xa) >= 1):
        raise DomainError("coordinate must lie in (-1, 1)")
    out = 2.0 * np.arctanh(xa)
    return float(out) if out.ndim == 0 else out


def x_of_u(u):
    out = np.tanh(np.asarray(u, dtype=float) / 2.0)
    return float(out) if out.ndim == 0 else out


def pseudo_dist(z1, z2):
    """|(z1 - z2) / (1 - z1 conj(z2))|, vectorized over numpy arrays."""
    a = np.asarray(_as_complex(z1), dtype=complex)
    b = np.asarray(_as_complex(z2), dtype=complex)
    p = np.abs(a - b) / np.abs(1 - a * np.conj(b))
    return float(p) if p.ndim == 0 else p


def hyp_dist(z1, z2):
    p = np.asarray(pseudo_dist(z1, z2))
    d = 2.0 * np.arctanh(np.minimum(p, 1 - 1e-16))
    return float(d) if d.ndim == 0 else d


def hyp_area_disk(r):
    """Hyperbolic area of the Euclidean disk |z| <= r centered at 0."""
    ra = np.asarray(r, dtype=float)
    if np.any(ra < 0) or np.any(ra >= 1) or not np.all(np.isfinite(ra)):
        raise DomainError("radius must lie in [0, 1)")
    out = 4 * np.pi * ra**2 / (1 - ra**2)
    return float(out) if out.ndim == 0 else out


def hyp_area_disk_tau(tau):
    return 4 * np.pi * np.sinh(np.asarray(tau, dtype=float) / 2) ** 2


def tau_of_area(area):
    """Hyperbolic radius of the disk with the given hyperbolic area."""
    if area < 0 or not np.isfinite(area):
        raise DomainError("area must be finite and >= 0")
    return float(2 * np.arcsinh(np.sqrt(area / (4 * np.pi))))


def polar_cell_area(rho0, rho1, dtheta):
    """Exact hyperbolic area of {rho0 <= |z| <= rho1, angular width dtheta}."""
    rho0 = np.asarray(rho0, dtype=float)
    rho1 = np.asarray(rho1, dtype=float)
    return 2 * dtheta * (rho1**2 - rho0**2) / ((1 - rho0**2) * (1 - rho1**2))


def hyp_diameter(points) -> float:
    z = np.atleast_1d(np.asarray(_as_complex(points), dtype=complex))
    if z.size == 0:
        raise DomainError("hyperbolic diameter of an empty set")
    if z.size == 1:
        return 0.0
    return float(np.max(hyp_dist(z[:, None], z[None, :])))


@dataclass(frozen=True)
class MobiusMap:
    """z -> e^{i theta} (w - a) / (1 - conj(a) w), with w = conj(z) when
    ``conjugate`` is set."""
    a: complex = 0j
    theta: float = 0.0
    conjugate: bool = False

    def __post_init__(self):
        if abs(self.a) >= 1:
            raise DomainError("Mobius parameter must satisfy |a| < 1")

    def __call__(self, z):
        w = np.asarray(_as_complex(z), dtype=complex)
        if self.conjugate:
            w = np.conj(w)
        out = np.exp(1j * self.theta) * (w - self.a) / (1 - np.conj(self.a) * w)
        return complex(out) if out.ndim == 0 else out

    def derivative(self, z):
        """Complex derivative for holomorphic maps (conjugate=False)."""
        w = np.asarray(z, dtype=complex)
        a = self.a
        out = np.exp(1j * self.theta) * (1 - abs(a) ** 2) / (1 - np.conj(a) * w) ** 2
        return complex(out) if out.ndim == 0 else out

    def inverse(self) -> "MobiusMap":
        a2 = -self.a * np.exp(1j * self.theta)
        if self.conjugate:
            return MobiusMap(complex(np.conj(a2)), self.theta, True)
        return MobiusMap(complex(a2), -self.theta, False)

    @classmethod
    def random(cls, rng, max_abs=0.8, allow_conjugate=False) -> "MobiusMap":
        rad = max_abs * np.sqrt(rng.uniform())
        a = rad * np.exp(2j * np.pi * rng.uniform())
        conj = bool(allow_conjugate and rng.uniform() < 0.5)
        return cls(complex(a), float(rng.uniform(0, 2 * np.pi)), conj)


@dataclass(frozen=True)
class Geodesic:
    """Oriented geodesic: a diameter at ``angle`` or the arc orthogonal to the
    unit circle between e^{i theta1} and e^{i theta2}.

    ``orientation`` = +1 marks as positive the side where the raw predicate is
    positive: the left side of the direction e^{i angle} for diameters, the
    side containing the origin for arcs."""
    kind: str
    angle: float = 0.0
    theta1: float = 0.0
    theta2: float = 0.0
    orientation: int = 1
    tol: float = CLASSIFY_TOL

    def __post_init__(self):
        if self.kind not in ("diameter", "arc"):
            raise GeodesicError(f"unknown geodesic kind {self.kind!r}")
        if self.orientation not in (1, -1):
            raise GeodesicError("orientation must be +1 or -1")
        if self.kind == "arc":
            gap = np.angle(np.exp(1j * (self.theta2 - self.theta1)))
            if abs(gap) < 1e-12:
                raise GeodesicError("arc endpoints coincide")
            if abs(abs(gap) - np.pi) < 1e-12:
                raise GeodesicError("antipodal endpoints: use Geodesic.diameter")

    @classmethod
    def diameter(cls, angle, orientation=1, tol=CLASSIFY_TOL):
        return cls("diameter", angle=float(angle), orientation=orientation, tol=tol)

    @classmethod
    def arc(cls, theta1, theta2, orientation=1, tol=CLASSIFY_TOL):
        gap = np.angle(np.exp(1j * (theta2 - theta1)))
        if abs(abs(gap) - np.pi) < 1e-12:
            return cls.diameter(theta1, orientation, tol)
        return cls("arc", theta1=float(theta1), theta2=float(theta2),
                   orientation=orientation, tol=tol)

    @property
    def center_radius(self):
        phi, delta = self._frame()
        return np.exp(1j * phi) / np.cos(delta), np.tan(delta)

    def endpoints(self):
        if self.kind == "diameter":
            return np.exp(1j * self.angle), -np.exp(1j * self.angle)
        return np.exp(1j * self.theta1), np.exp(1j * self.theta2)

    def raw_signed(self, z):
        z = np.asarray(_as_complex(z), dtype=complex)
        if self.kind == "diameter":
            return np.imag(np.exp(-1j * self.angle) * z)
        # |z - c| - R written without the cancellation that a far center causes
        phi, delta = self._frame()
        w = np.exp(-1j * phi) * z
        C, S = np.cos(delta), np.sin(delta)
        return ((1 + np.abs(w) ** 2) * C - 2 * w.real) / (np.abs(C * w - 1) + S)

    def _frame(self):
        """Midpoint angle phi and half-gap delta of an arc."""
        gap = np.angle(np.exp(1j * (self.theta2 - self.theta1)))
        return self.theta1 + gap / 2, abs(gap) / 2

    def signed(self, z):
        return self.orientation * self.raw_signed(z)

    def side(self, z):
        """+1 in H+, -1 in H-, 0 on the geodesic (within tol)."""
        s = np.asarray(self.signed(z))
        out = np.where(s > self.tol, 1, np.where(s < -self.tol, -1, 0))
        return int(out) if out.ndim == 0 else out

    def reflect(self, z):
        return reflect(self, z)

    def flipped(self) -> "Geodesic":
        return Geodesic(self.kind, self.angle, self.theta1, self.theta2,
                        -self.orientation, self.tol)


def reflect(geo: Geodesic, z):
    """Inversion in the circle (or line) carrying the geodesic."""
    w = np.asarray(_as_complex(z), dtype=complex)
    if geo.kind == "diameter":
        out = np.exp(2j * geo.angle) * np.conj(w)
    else:
        # inversion in the circle centered at e^{i phi} / C, in the rotated frame
        phi, delta = geo._frame()
        C = np.cos(delta)
        v = np.conj(np.exp(-1j * phi) * w)
        out = np.exp(1j * phi) * (v - C) / (C * v - 1)
    return complex(out) if out.ndim == 0 else out


def geodesic_orthogonal_at(c, angle=0.0, orientation=1, tol=CLASSIFY_TOL) -> Geodesic:
    """Geodesic crossing the diameter of direction ``angle`` perpendicularly at
    c e^{i angle}. With orientation +1 the positive side contains the
    -e^{i angle} end of that diameter."""
    c = float(c)
    if not abs(c) < 1:
        raise DomainError("foot point must satisfy |c| < 1")
    if c == 0.0:
        return Geodesic.diameter(angle + np.pi / 2, orientation, tol)
    beta = np.arccos(2 * c / (1 + c * c))
    # raw predicate is positive on the origin side of the arc
    sign = orientation if c > 0 else -orientation
    return Geodesic.arc(angle - beta, angle + beta, sign, tol)


def geodesic_through(z1, z2, orientation=1, tol=CLASSIFY_TOL) -> Geodesic:
    """The geodesic passing through two distinct disk points."""
    z1 = complex(_as_complex(z1))
    z2 = complex(_as_complex(z2))
    if abs(z1 - z2) < 1e-15:
        raise GeodesicError("points coincide")
    m = MobiusMap(z1)
    w = m(z2)
    inv = m.inverse()
    e1 = inv(w / abs(w))
    e2 = inv(-w / abs(w))
    return Geodesic.arc(np.angle(e1), np.angle(e2), orientation, tol)


def transport_to_vertical(geo: Geodesic, a) -> MobiusMap:
    """Disk automorphism sending a (on geo) to 0 and geo onto (-i, i)."""
    a = complex(_as_complex(a))
    if abs(geo.raw_signed(a)) > 1e-9:
        raise DomainError("center point must lie on the geodesic")
    m = MobiusMap(a)
    e1 = m(geo.endpoints()[0])
    return MobiusMap(a, float(np.pi / 2 - np.angle(e1)))
