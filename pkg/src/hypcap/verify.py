"""Numerical checks of capacity inequalities and monotonicity statements.

Every check compares two quantities as ``left >= right``. A row fails when
margin = left - right < -tolerance. Tolerances are zero when both sides are
closed forms; otherwise they are a multiple of the noise scale (restart
spread and extrapolation uncertainty) of the Fekete runs involved."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import special_fn as sf
from .capacity_fekete import (CapacityEstimate, CapacityResult, FeketeConfig,
                              capacity_of, estimate_capacity, match_closed_form)
from .exceptions import ConfigurationError
from .hyp_core import hyp_dist, r_of_tau, tau_of_r, u_of_x
from .serialize import geodesic_from_dict, rows_to_table, set_from_dict
from .set_model import Arc, BoundaryChart, DiameterSet, GridSet, Hedgehog, Segment
from . import transforms as tf

THEOREM_IDS = ("L3.1", "L3.4", "C3.1", "L3.3", "T3.26", "T3.30", "T3.35", "T3.42",
               "T3.44", "T4.1", "C4.10", "T4.8", "T4.11", "T4.14", "T4.19", "T5.5",
               "L5.14", "T5.16", "T5.20", "L5.30", "P2.4", "P2.5", "P2.10", "P2.12")

DESK_CONFIG = FeketeConfig(n_sequence=(16, 32, 64, 128), restarts=3)
FF_FACTOR = 3.0   # Fekete vs Fekete
FC_FACTOR = 1.5   # Fekete vs closed form
EXACT_TOL = 1e-12


@dataclass
class CheckSpec:
    theorem_id: str
    grid: list
    method: str = "fekete"
    fekete: FeketeConfig = DESK_CONFIG
    ff_factor: float = FF_FACTOR
    fc_factor: float = FC_FACTOR
    invert: bool = False   # harness self-test: flips every claim

    def __post_init__(self):
        if self.theorem_id not in THEOREM_IDS:
            raise ConfigurationError(f"unsupported theorem id {self.theorem_id!r}")
        if not self.grid:
            raise ConfigurationError("parameter grid is empty")
        if self.method not in ("closed_form", "fekete"):
            raise ConfigurationError("method must be closed_form or fekete")
        if not (self.ff_factor > 0 and self.fc_factor > 0):
            raise ConfigurationError("tolerance factors must be positive")

    def to_dict(self):
        return {"theorem_id": self.theorem_id, "method": self.method,
                "fekete": self.fekete.to_dict(), "ff_factor": self.ff_factor,
                "fc_factor": self.fc_factor, "invert": self.invert, "grid": self.grid}


@dataclass
class CheckReport:
    theorem_id: str
    rows: list
    verdict: str
    spec: dict = field(default_factory=dict)

    @property
    def failures(self):
        return [r for r in self.rows if r["status"] == "fail"]

    def to_dict(self):
        return {"theorem_id": self.theorem_id, "verdict": self.verdict,
                "n_rows": len(self.rows), "n_fail": len(self.failures),
                "rows": self.rows, "spec": self.spec}

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2)

    def to_csv(self):
        return rows_to_table(self.rows, CSV_COLUMNS)


CSV_COLUMNS = ("index", "claim", "left", "right", "margin", "tolerance",
               "left_provenance", "right_provenance", "status", "params")


# quantities with provenance and noise

@dataclass
class Q:
    value: float
    provenance: str
    spread: float = 0.0
    inconclusive: bool = False

    def __add__(self, other):
        prov = self.provenance if self.provenance == other.provenance else "mixed"
        return Q(self.value + other.value, prov, self.spread + other.spread,
                 self.inconclusive or other.inconclusive)

    def scaled(self, c):
        return Q(c * self.value, self.provenance, abs(c) * self.spread, self.inconclusive)


def exact(v, provenance="closed_form"):
    return Q(float(v), provenance)


class _Ctx:
    def __init__(self, spec: CheckSpec):
        self.spec = spec
        self.cache = {}

    def cap(self, s) -> Q:
        key = repr(s) if not isinstance(s, GridSet) else (s.n_r, s.n_theta, s.r_max, s.occupancy.tobytes())
        if key not in self.cache:
            if self.spec.method == "closed_form":
                cf = match_closed_form(s)
                if cf is None:
                    raise ConfigurationError(f"{self.spec.theorem_id} needs a set with no closed form; "
                                             "use method fekete")
                res = CapacityResult(cf.value, "closed_form", cf)
            else:
                res = capacity_of(s, self.spec.fekete)
            bad = isinstance(res.detail, CapacityEstimate) and res.detail.diagnostics.get("nonconverged", 0) > 0
            self.cache[key] = Q(res.value, res.provenance, res.spread, bad)
        return self.cache[key]

    def tol(self, left: Q, right: Q):
        kinds = {left.provenance, right.provenance}
        if kinds == {"closed_form"}:
            return 0.0
        factor = self.spec.ff_factor if "closed_form" not in kinds else self.spec.fc_factor
        return factor * max(left.spread, right.spread)


def _row(ctx, rows, params, claim, left: Q, right: Q, strict=False, tol=None):
    if ctx.spec.invert:
        left, right = right, left
        claim = "NOT " + claim
    t = ctx.tol(left, right) if tol is None else tol
    margin = left.value - right.value
    if left.inconclusive or right.inconclusive:
        status = "inconclusive"
    elif margin < -t or (strict and t == 0 and margin <= 0):
        status = "fail"
    elif t > 0 and abs(margin) <= t:
        status = "equality-candidate"
    else:
        status = "pass"
    rows.append({"index": len(rows), "claim": claim, "left": left.value, "right": right.value,
                 "margin": margin, "tolerance": t, "left_provenance": left.provenance,
                 "right_provenance": right.provenance, "status": status, "params": params})


def _observe(rows, params, claim, left: Q, right: Q):
    rows.append({"index": len(rows), "claim": claim, "left": left.value, "right": right.value,
                 "margin": left.value - right.value, "tolerance": 0.0,
                 "left_provenance": left.provenance, "right_provenance": right.provenance,
                 "status": "observed", "params": params})


# set builders from grid parameters

def _diameter(iv, angle=0.0):
    return DiameterSet.from_x([tuple(p) for p in iv], angle)


def _union_hedgehog(*parts):
    out = Hedgehog()
    for p in parts:
        out = out.union(p.to_hedgehog() if isinstance(p, DiameterSet) else p)
    return out


def _rays(angles, sets, core=0.0):
    return Hedgehog(core, [(a, [tuple(p) for p in iv]) for a, iv in zip(angles, sets)])


def _star_rays(angles, sets, core=0.0):
    """Same ray lengths, each packed into one interval from the core."""
    spikes = []
    for a, iv in zip(angles, sets):
        ell = tau_of_r(core) + sum(tau_of_r(hi) - tau_of_r(lo) for lo, hi in iv)
        spikes.append((a, [(core, r_of_tau(ell))]))
    return Hedgehog(core, spikes)


def _min_gap(angles):
    a = np.sort(np.asarray(angles) % (2 * np.pi))
    gaps = np.diff(np.concatenate([a, [a[0] + 2 * np.pi]]))
    return float(gaps.min()) if len(a) > 1 else 2 * np.pi


def _chart(pieces):
    out = []
    for p in pieces:
        if p["kind"] == "arc":
            out.append(Arc(p["radius"], p["theta0"], p["theta1"]))
        else:
            out.append(Segment(p.get("angle", 0.0), tau_of_r(p["a"]), tau_of_r(p["b"])))
    return BoundaryChart(tuple(out))


def _grid_set(p):
    n_r, n_t, rmax = p["grid"]
    s = p["set"]
    if s["kind"] == "hyp_disk":
        return GridSet.hyp_disk(complex(*s["center"]), s["tau"], n_r, n_t, rmax)
    if s["kind"] == "blobs":
        rng = np.random.default_rng(s.get("seed", 0))
        k = s.get("count", 3)
        centers = rng.uniform(-0.5, 0.5, size=(k, 2)) @ np.array([1, 1j])
        taus = rng.uniform(0.3, 0.8, size=k)
        return GridSet.from_predicate(
            lambda z: np.any([hyp_dist(z, c) <= t for c, t in zip(centers, taus)], axis=0),
            n_r, n_t, rmax)
    if s["kind"] == "json":
        return set_from_dict(s["value"])
    raise ConfigurationError(f"unknown grid set kind {s['kind']!r}")


# individual checks

def _check_L3_1(ctx, p, rows):
    a, tau = p["a"], p["tau"]
    E0 = p.get("E0", [])
    bs = p["b_values"]
    ua = u_of_x(a)
    caps = []
    for b in bs:
        ub = u_of_x(b)
        E = DiameterSet(tuple((u_of_x(x1), u_of_x(x2)) for x1, x2 in E0) + ((ub, ub + tau),))
        caps.append(ctx.cap(E))
    for k in range(1, len(bs)):
        _row(ctx, rows, {**p, "b_prev": bs[k - 1], "b": bs[k]},
             "cap(E(b_k)) >= cap(E(b_{k-1}))", caps[k], caps[k - 1], strict=True)
    interval = exact(sf.cap_zero_interval(r_of_tau(tau)).value)
    limit = (ctx.cap(_diameter(E0)) + interval) if E0 else interval
    _row(ctx, rows, {**p, "b": bs[-1]}, "cap(E0) + cap([a,c(a)]) >= cap(E(b))", limit, caps[-1])
    E_a = DiameterSet(tuple((u_of_x(x1), u_of_x(x2)) for x1, x2 in E0) + ((ua, ua + tau),))
    _row(ctx, rows, {**p, "b": bs[0]}, "cap(E(b)) >= cap(E0 u [a,c(a)])", caps[0], ctx.cap(E_a))


def _check_L3_4(ctx, p, rows):
    E = _diameter(p["intervals"])
    tau = E.hyp_length()
    _row(ctx, rows, {**p, "tau": tau}, "cap(E) >= cap([0,r(tau)])",
         ctx.cap(E), exact(sf.cap_zero_interval(r_of_tau(tau)).value))


def _check_C3_1(ctx, p, rows):
    a = p["a"]
    E0 = p.get("E0", [])
    E1 = p["E1"]
    if any(x2 > a + 1e-12 for _, x2 in E0) or any(x1 < a - 1e-12 for x1, _ in E1):
        raise ConfigurationError("need E0 left of a and E1 inside [a, 1)")
    tau = _diameter(E1).hyp_length()
    ua = u_of_x(a)
    left = ctx.cap(_diameter(list(E0) + list(E1)))
    right_set = DiameterSet(tuple((u_of_x(x1), u_of_x(x2)) for x1, x2 in E0) + ((ua, ua + tau),))
    _row(ctx, rows, {**p, "tau": tau}, "cap(E0 u E1) >= cap(E0 u [a, rho(a,tau)])", left, ctx.cap(right_set))


def _check_L3_3(ctx, p, rows):
    chart = _chart(p["pieces"])
    tau = chart.hyp_length
    _row(ctx, rows, {**p, "tau": tau}, "cap([0,r(tau)]) >= cap(L)",
         exact(sf.cap_zero_interval(r_of_tau(tau)).value), ctx.cap(chart))


def _check_rays(ctx, p, rows, min_len=None, core=0.0, claim="cap(u E_k) >= cap(u E_k*)"):
    angles, sets = p["angles"], p["sets"]
    if min_len is not None:
        for iv in sets:
            ell = sum(tau_of_r(hi) - tau_of_r(lo) for lo, hi in iv)
            if ell < min_len - 1e-12:
                raise ConfigurationError(f"ray length {ell:.6g} below the required {min_len:.6g}")
    left = ctx.cap(_rays(angles, sets, core))
    right = ctx.cap(_star_rays(angles, sets, core))
    _row(ctx, rows, p, claim, left, right)


def _check_T3_26(ctx, p, rows):
    angles = p["angles"]
    if len(angles) > 4 or (len(angles) > 1 and _min_gap(angles) < np.pi / 2 - 1e-12):
        raise ConfigurationError("need at most 4 rays with pairwise angles >= pi/2")
    _check_rays(ctx, p, rows)


def _check_T3_30(ctx, p, rows):
    alpha = _min_gap(p["angles"])
    need = 2 * math.log(1 / math.tan(alpha / 2)) if alpha < np.pi else 0.0
    _check_rays(ctx, p, rows, min_len=need)


def _check_T3_35(ctx, p, rows):
    E1, E2 = _diameter(p["E1"]), _diameter(p["E2"], np.pi / 2)
    l1, l2 = E1.hyp_length() / 2, E2.hyp_length() / 2
    r1, r2, r0 = r_of_tau(l1), r_of_tau(l2), r_of_tau((l1 + l2) / 2)
    mid = exact(sf.cap_plus_set(r1, r2).value)
    low = exact(sf.cap_plus_set(r0, r0).value)
    q = {**p, "r1": r1, "r2": r2, "r0": r0}
    _row(ctx, rows, q, "cap(E1 u E2) >= cap([-r1,r1] u [-ir2,ir2])", ctx.cap(_union_hedgehog(E1, E2)), mid)
    if abs(l1 - l2) < 1e-12:
        _row(ctx, rows, q, "equality at l1 = l2", mid, low, tol=1e-12 * low.value)
    else:
        _row(ctx, rows, q, "cap([-r1,r1] u [-ir2,ir2]) > cap([-r0,r0] u [-ir0,ir0])", mid, low, strict=True)


def _check_T3_42(ctx, p, rows):
    r = p["r"]
    alpha = _min_gap(p["angles"])
    arg = (1 / math.tan(alpha / 2)) * (1 - r) / (1 + r) if alpha < np.pi else 0.0
    need = 2 * math.log(arg) if arg > 1 else 0.0
    _check_rays(ctx, p, rows, min_len=need, core=r, claim="cap(E0 u E_k) >= cap(E0 u E_k*)")


def _check_T3_44(ctx, p, rows):
    angles, lengths, rs = p["angles"], p["lengths"], p["r_values"]
    sets = []
    for r in rs:
        sets.append(Hedgehog(0.0, [(a, [(r, r_of_tau(tau_of_r(r) + L))]) for a, L in zip(angles, lengths)]))
    caps = [ctx.cap(s) for s in sets]
    for k in range(1, len(rs)):
        _row(ctx, rows, {**p, "r_prev": rs[k - 1], "r": rs[k]},
             "cap(E(r_k)) >= cap(E(r_{k-1}))", caps[k], caps[k - 1])
    # contraction route reproduces the family, and matches the closed form when one applies
    top = sets[-1]
    for r, s, c in zip(rs, sets, caps):
        moved = tf.contraction_phi(top, rs[-1], r)
        dev = max(abs(lo1 - lo2) + abs(hi1 - hi2) for (_, i1), (_, i2) in zip(moved.spikes, s.spikes)
                  for (lo1, hi1), (lo2, hi2) in zip(i1, i2))
        _row(ctx, rows, {**p, "r": r}, "contraction route reproduces E(r)",
             exact(1e-10), exact(dev))
        n = len(angles)
        if len(set(lengths)) == 1 and _min_gap(angles) > 2 * np.pi / n - 1e-9:
            cf = exact(sf.cap_rotated_star(n, r, lengths[0]).value)
            fk = Q(*_fekete_only(ctx, s))
            tol = ctx.tol(fk, cf)
            _row(ctx, rows, {**p, "r": r}, "closed form >= Fekete - tol", cf, fk, tol=tol)
            _row(ctx, rows, {**p, "r": r}, "Fekete >= closed form - tol", fk, cf, tol=tol)


def _fekete_only(ctx, s):
    key = ("fekete", repr(s))
    if key not in ctx.cache:
        est = estimate_capacity(s, ctx.spec.fekete)
        ctx.cache[key] = (est.cap_extrapolated, "fekete", est.spread)
    return ctx.cache[key]


def _check_T4_1(ctx, p, rows):
    n, tau = p["n"], p["tau"]
    r = r_of_tau(tau)
    s_vals = np.linspace(0, r, p.get("num", 100))
    sym = sf.cap_two_star_families(n, r, r).value
    vals = []
    for s in s_vals:
        v = sf.cap_two_star_families(n, s, sf.constraint_partner(s, tau)).value
        vals.append(v)
        if abs(s - r) < 1e-15:
            _row(ctx, rows, {**p, "s": float(s)}, "equality at r1 = r2", exact(v), exact(sym),
                 tol=1e-12 * sym)
        else:
            _row(ctx, rows, {**p, "s": float(s)}, "cap(E_n(s, r2(s))) > cap(E_n(r, r))",
                 exact(v), exact(sym), strict=True)
    # the grid minimum sits at the symmetric point within one step
    mirror = [sf.cap_two_star_families(n, sf.constraint_partner(s, tau), s).value for s in s_vals]
    xs = np.concatenate([s_vals, [sf.constraint_partner(s, tau) for s in s_vals]])
    ys = np.concatenate([vals, mirror])
    step = float(s_vals[1] - s_vals[0]) if len(s_vals) > 1 else 0.0
    dist = abs(float(xs[int(np.argmin(ys))]) - r)
    _row(ctx, rows, {**p, "step": step}, "argmin within one grid step of r",
         exact(step + 1e-15), exact(dist))


def _check_C4_10(ctx, p, rows):
    n, tau = p["n"], p["tau"]
    r = r_of_tau(tau)
    s_vals = np.linspace(0, r, p.get("num", 50))
    vals = [sf.cap_two_star_families(n, s, sf.constraint_partner(s, tau)).value for s in s_vals]
    for k in range(1, len(vals)):
        _row(ctx, rows, {**p, "s": float(s_vals[k])}, "cap(s_{k-1}) > cap(s_k)",
             exact(vals[k - 1]), exact(vals[k]), strict=True)
    k0, k1 = sf.two_star_constraint_limits(n, tau)
    start = 8 * n * sf.modulus_ratio(k0)
    end = 16 * n * sf.modulus_ratio(k1)
    _row(ctx, rows, p, "endpoint s=0 matches 8n K/K'(kappa0)", exact(1e-12 * start),
         exact(abs(vals[0] - start)))
    _row(ctx, rows, p, "endpoint s=r matches 16n K/K'(kappa1)", exact(1e-12 * end),
         exact(abs(vals[-1] - end)))


def _check_T4_8(ctx, p, rows):
    n, tau = p["n"], p["tau"]
    r_vals = np.linspace(0, p.get("r_max", 0.99), p.get("num", 50))
    vals = [sf.cap_rotated_star(n, r, tau).value for r in r_vals]
    for k in range(1, len(vals)):
        q = {**p, "r": float(r_vals[k])}
        if n == 1:
            # one segment: Moebius invariance makes the capacity constant in r
            _row(ctx, rows, q, "cap(r_k) = cap(r_{k-1}) for n = 1", exact(vals[k]),
                 exact(vals[k - 1]), tol=1e-12 * vals[0])
            _row(ctx, rows, q, "cap(r_{k-1}) = cap(r_k) for n = 1", exact(vals[k - 1]),
                 exact(vals[k]), tol=1e-12 * vals[0])
        else:
            _row(ctx, rows, q, "cap(r_k) > cap(r_{k-1})", exact(vals[k]), exact(vals[k - 1]),
                 strict=True)
    k0, k1 = sf.rotated_star_kappa_limits(n, tau)
    kap = [sf.rotated_star_kappa(n, r, tau) for r in r_vals]
    _row(ctx, rows, p, "kappa(0) matches kappa0", exact(1e-12), exact(abs(kap[0] - k0)))
    _row(ctx, rows, p, "kappa(r) stays below kappa1", exact(k1), exact(max(kap)), tol=1e-14)


def _check_T4_11(ctx, p, rows):
    sets = p["sets"]
    n = len(sets)
    angles = [2 * np.pi * k / n for k in range(n)]
    avg = None
    for iv in sets:
        q = ctx.cap(_rays(angles, [iv] * n)).scaled(1 / n)
        avg = q if avg is None else avg + q
    middle = ctx.cap(_rays(angles, sets))
    total = None
    for iv in sets:
        q = ctx.cap(_rays([0.0], [iv]))
        total = q if total is None else total + q
    _row(ctx, rows, p, "cap(u e^{2pi i(k-1)/n} E_k) >= average of symmetric caps", middle, avg)
    _row(ctx, rows, p, "sum cap(E_k) > cap(u e^{2pi i(k-1)/n} E_k)", total, middle)


def _check_T4_14(ctx, p, rows):
    r, n = p["r"], p["n"]
    E1 = [tuple(x) for x in p["E1"]]
    alphas = p["alphas"]
    if len(alphas) < n or _max_gap(alphas) > 2 * np.pi / n + 1e-12:
        raise ConfigurationError("need m >= n rays with gaps <= 2 pi / n")
    tau = sum(tau_of_r(b) - tau_of_r(a) for a, b in E1)
    eq = [2 * np.pi * k / n for k in range(n)]
    E = _rays(alphas, [E1] * len(alphas), r)
    Es = _rays(eq, [E1] * n, r)
    En = Hedgehog(r, [(a, [(r, r_of_tau(tau_of_r(r) + tau))]) for a in eq])
    cE, cS, cN = ctx.cap(E), ctx.cap(Es), ctx.cap(En)
    _row(ctx, rows, p, "cap(E) >= cap(E*)", cE, cS)
    _row(ctx, rows, p, "cap(E*) >= cap(E_n(r,tau))", cS, cN)


def _max_gap(angles):
    a = np.sort(np.asarray(angles) % (2 * np.pi))
    return float(np.diff(np.concatenate([a, [a[0] + 2 * np.pi]])).max())


def _check_T4_19(ctx, p, rows):
    r, a, b = p["r"], p["a"], p["b"]
    E1 = [tuple(x) for x in p["E1"]]
    if any(lo < a - 1e-12 or hi > b + 1e-12 for lo, hi in E1):
        raise ConfigurationError("E1 must lie in [a, b]")
    alphas = p["alphas"]
    n = len(alphas)
    eq = [2 * np.pi * k / n for k in range(n)]
    E = _rays(alphas, [E1] * n, r)
    Es = _rays(eq, [E1] * n, r)
    Eab = _rays(eq, [[(a, b)]] * n, r)
    cE, cS, cAB = ctx.cap(E), ctx.cap(Es), ctx.cap(Eab)
    _row(ctx, rows, p, "cap(E*) >= cap(E)", cS, cE)
    _row(ctx, rows, p, "cap(E^{a,b}) > cap(E*)", cAB, cS)


def _ring_tolerance(E: GridSet, rings=2):
    return rings * float(np.sum(E.cell_areas()[E.boundary_mask()]))


def _check_T5_5(ctx, p, rows):
    E = _grid_set(p)
    geo = geodesic_from_dict(p.get("geodesic"))
    a = complex(*p.get("a", [0.0, 0.0]))
    out = tf.steiner_hyperbolic(E, geo, a)
    tol = _ring_tolerance(E)
    A0, A1 = E.hyp_area(), out.hyp_area()
    _row(ctx, rows, p, "area preserved (out >= in - tol)", exact(A1, "grid"), exact(A0, "grid"), tol=tol)
    _row(ctx, rows, p, "area preserved (in >= out - tol)", exact(A0, "grid"), exact(A1, "grid"), tol=tol)
    cell_len = 2 * E.dr / (1 - E.r_max**2)
    L0, L1 = tf.length_on_geodesic(E, geo, a), tf.length_on_geodesic(out, geo, a)
    _row(ctx, rows, p, "perpendicular length preserved", exact(2 * cell_len, "grid"),
         exact(abs(L0 - L1), "grid"))
    s = p["set"]
    if s["kind"] == "hyp_disk" and abs(geo.raw_signed(complex(*s["center"]))) < 1e-12:
        # a disk centered on the geodesic is fixed: differing cells hug its boundary
        c, t = complex(*s["center"]), s["tau"]
        diff = E.occupancy ^ out.occupancy
        z = E.centers()[diff]
        worst = float(np.max(np.abs(hyp_dist(z, c) - t))) if z.size else 0.0
        cell = float(np.max(2 * np.hypot(E.dr, np.abs(E.centers()[diff]) * E.dtheta)
                            / (1 - np.abs(z) ** 2))) if z.size else 0.0
        _row(ctx, rows, p, "centered disk fixed up to one cell", exact(cell, "grid"),
             exact(worst, "grid"))


def _check_L5_14(ctx, p, rows):
    E = _grid_set(p)
    alphas = np.linspace(0, np.pi, p.get("num_alpha", 20))
    A = tf.circular_area_profile(E, p["r"], alphas)
    for k in range(1, len(A)):
        _row(ctx, rows, {**p, "alpha": float(alphas[k])}, "A(alpha_k) >= A(alpha_{k-1})",
             exact(A[k], "quadrature"), exact(A[k - 1], "quadrature"), tol=1e-12 * A[k])


def _projection_length(chart: BoundaryChart, r):
    """Length of the radial projection onto C_r of the arcs in the chart."""
    spans = []
    for pc in chart.pieces:
        if isinstance(pc, Arc):
            if pc.full:
                return 2 * np.pi * r
            spans.append((pc.theta0 % (2 * np.pi), pc.theta0 % (2 * np.pi) + (pc.theta1 - pc.theta0)))
    # union of angular spans on the circle
    pts = []
    for a, b in spans:
        if b > 2 * np.pi:
            pts += [(a, 2 * np.pi), (0.0, b - 2 * np.pi)]
        else:
            pts.append((a, b))
    pts.sort()
    total, cur = 0.0, None
    for a, b in pts:
        if cur is None or a > cur[1]:
            if cur:
                total += cur[1] - cur[0]
            cur = [a, b]
        else:
            cur[1] = max(cur[1], b)
    if cur:
        total += cur[1] - cur[0]
    return r * total


def _arc_set(r, alpha, center=0.0):
    if alpha >= np.pi - 1e-12:
        return Hedgehog(r)
    return BoundaryChart((Arc(r, center - alpha, center + alpha),))


def _check_T5_16(ctx, p, rows):
    r, alpha = p["r"], p["alpha"]
    E = _chart(p["pieces"])
    for pc in E.pieces:
        lo = pc.radius if isinstance(pc, Arc) else r_of_tau(pc.u0)
        if lo < r - 1e-12:
            raise ConfigurationError("set must lie in r <= |z| < 1")
    proj = _projection_length(E, r)
    if proj < 2 * alpha * r - 1e-12:
        raise ConfigurationError("radial projection shorter than 2 alpha r")
    _row(ctx, rows, {**p, "projection": proj}, "cap(E) >= cap(C_r(alpha))",
         ctx.cap(E), ctx.cap(_arc_set(r, alpha)))


def _check_T5_20(ctx, p, rows):
    r, alpha = p["r"], p["alpha"]
    phi = p.get("arc_center", 0.0)
    spikes = [(s["angle"], [tuple(x) for x in s["intervals"]]) for s in p["spikes"]]
    radii = DiameterSet(tuple((tau_of_r(a), tau_of_r(b)) for _, iv in spikes for a, b in iv))
    tau = radii.hyp_length()
    if tau < tau_of_r(r) - 1e-12:
        raise ConfigurationError("circular projection shorter than tau(r)")
    pieces = [Arc(r, phi - alpha, phi + alpha)] if alpha > 0 else []
    pieces += [Segment(a, tau_of_r(lo), tau_of_r(hi)) for a, iv in spikes for lo, hi in iv]
    E = BoundaryChart(tuple(pieces))
    ref_pieces = ([Arc(r, -alpha, alpha)] if 0 < alpha < np.pi - 1e-12 else
                  [Arc(r, 0.0, 2 * np.pi)] if alpha > 0 else [])
    ref = BoundaryChart(tuple(ref_pieces) + (Segment(0.0, 0.0, tau),))
    _row(ctx, rows, {**p, "tau": tau}, "cap(E) >= cap(C_r(alpha) u [0, r(tau)])", ctx.cap(E), ctx.cap(ref))


def _check_L5_30(ctx, p, rows):
    if "hedgehog" in p:
        h = set_from_dict(p["hedgehog"])
        out = tf.radial_hyperbolic(h)
        d0, d1 = tf.hedgehog_hyp_diameter(h), tf.hedgehog_hyp_diameter(out)
        _row(ctx, rows, p, "diam(E) >= diam(E_rad)", exact(d0, "exact"), exact(d1, "exact"),
             tol=EXACT_TOL * max(d0, 1.0))
    if "grid" in p:
        E = _grid_set(p)
        _, area = tf.radial_hyperbolic_grid(E)
        A0 = E.hyp_area()
        _row(ctx, rows, p, "area(E) >= area(E_rad)", exact(A0, "exact"), exact(area, "exact"),
             tol=EXACT_TOL * max(A0, 1.0))


def _check_P2_4(ctx, p, rows):
    parts = [set_from_dict(d) for d in p["parts"]]
    union = parts[0]
    for q in parts[1:]:
        union = _union_hedgehog(union, q)
    total = None
    for q in parts:
        c = ctx.cap(q)
        total = c if total is None else total + c
    _row(ctx, rows, p, "sum cap(E_k) >= cap(u E_k)", total, ctx.cap(union))


def _check_P2_5(ctx, p, rows):
    E = _diameter(p["intervals"])
    P = tf.polarize_diameter(E, p["c"], p.get("orientation", 1))
    _row(ctx, rows, p, "cap(E) >= cap(P(E))", ctx.cap(E), ctx.cap(P))


def _check_P2_10(ctx, p, rows):
    h = set_from_dict(p["hedgehog"])
    out = tf.contraction_phi(h, p["r0"], p["r"])
    _row(ctx, rows, p, "cap(E) >= cap(phi(E))", ctx.cap(h), ctx.cap(out))


def _check_P2_12(ctx, p, rows):
    parts = [set_from_dict(d) for d in p["parts"]]
    sched = tf.DispersionSchedule(tuple(parts), tuple(p["speeds"]))
    total = None
    for q in parts:
        c = ctx.cap(q)
        total = c if total is None else total + c
    for t in p["t_values"]:
        c = ctx.cap(tf.disperse(sched, t))
        _row(ctx, rows, {**p, "t": t, "min_distance": sched.min_distance(t)},
             "sum cap(E_k) >= cap(phi(E, t))", total, c)
    t = p["t_values"][-1]
    c = ctx.cap(tf.disperse(sched, t))
    rel = p.get("relative", 0.02)
    gap = Q(abs(total.value - c.value), "mixed", 0.0)
    _row(ctx, rows, {**p, "t": t}, f"|sum cap - cap(phi(E,t))| <= {rel} sum cap",
         Q(rel * total.value, total.provenance), gap, tol=0.0)


CHECKS = {
    "L3.1": _check_L3_1, "L3.4": _check_L3_4, "C3.1": _check_C3_1, "L3.3": _check_L3_3,
    "T3.26": _check_T3_26, "T3.30": _check_T3_30, "T3.35": _check_T3_35,
    "T3.42": _check_T3_42, "T3.44": _check_T3_44, "T4.1": _check_T4_1,
    "C4.10": _check_C4_10, "T4.8": _check_T4_8, "T4.11": _check_T4_11,
    "T4.14": _check_T4_14, "T4.19": _check_T4_19, "T5.5": _check_T5_5,
    "L5.14": _check_L5_14, "T5.16": _check_T5_16, "T5.20": _check_T5_20,
    "L5.30": _check_L5_30, "P2.4": _check_P2_4, "P2.5": _check_P2_5,
    "P2.10": _check_P2_10, "P2.12": _check_P2_12,
}


def _verdict(rows):
    statuses = {r["status"] for r in rows}
    if "fail" in statuses:
        return "fail"
    if statuses == {"observed"}:
        return "observed-only"
    if "inconclusive" in statuses:
        return "inconclusive"
    return "pass"


def run_check(spec: CheckSpec) -> CheckReport:
    ctx = _Ctx(spec)
    rows = []
    fn = CHECKS[spec.theorem_id]
    for p in spec.grid:
        fn(ctx, p, rows)
    return CheckReport(spec.theorem_id, rows, _verdict(rows), spec.to_dict())


# open-problem sweep: [0, r] and a spike of hyperbolic length s at angle alpha

@dataclass
class SweepReport:
    rows: list
    verdicts: dict

    @property
    def verdict(self):
        v = set(self.verdicts.values())
        if "fail" in v:
            return "fail"
        return "pass" if "pass" in v else "observed-only"

    def to_csv(self):
        return rows_to_table(self.rows, SWEEP_COLUMNS)

    def to_dict(self):
        return {"verdict": self.verdict, "verdicts": self.verdicts, "rows": self.rows}


SWEEP_COLUMNS = ("alpha", "t", "capacity", "provenance", "spread")


def two_interval_set(r, s, alpha, t):
    """[0, r] together with {x e^{i alpha}: t <= x <= d(s,t)}, hyperbolic length s."""
    d = r_of_tau(tau_of_r(t) + s)
    return Hedgehog(0.0, [(0.0, [(0.0, r)]), (alpha, [(t, d)])])


def sweep_two_intervals(alphas, t_values, r=0.5, s=1.0, cfg: FeketeConfig = DESK_CONFIG,
                        factor=FF_FACTOR) -> SweepReport:
    """Capacity of [0, r] plus a moving spike. Increase in t is asserted for
    alpha >= pi/2 and only observed below."""
    rows, verdicts = [], {}
    for alpha in alphas:
        caps = []
        for t in t_values:
            res = capacity_of(two_interval_set(r, s, alpha, t), cfg)
            caps.append(res)
            rows.append({"alpha": float(alpha), "t": float(t), "capacity": res.value,
                         "provenance": res.provenance, "spread": res.spread})
        diffs = [caps[k].value - caps[k - 1].value for k in range(1, len(caps))]
        tols = [factor * max(caps[k].spread, caps[k - 1].spread) for k in range(1, len(caps))]
        increasing = all(d >= -t for d, t in zip(diffs, tols))
        key = f"{float(alpha):.12g}"
        if alpha >= np.pi / 2 - 1e-12:
            verdicts[key] = "pass" if increasing else "fail"
        else:
            verdicts[key] = "observed-only"
        rows[-1]["observed_increasing"] = increasing
    return SweepReport(rows, verdicts)


def sweep_constraint_curve(n, tau, num=100):
    """Two-star capacities along tau(r1) + tau(r2) = 2 tau (closed forms); the
    grid always contains the symmetric point r1 = r2 = r(tau)."""
    r = r_of_tau(tau)
    grid = np.union1d(np.linspace(0, r_of_tau(2 * tau) * (1 - 1e-12), num), [r])
    out = []
    for s in grid:
        r2 = sf.constraint_partner(s, tau)
        out.append({"r1": float(s), "r2": float(r2),
                    "capacity": sf.cap_two_star_families(n, s, r2).value,
                    "provenance": "closed_form", "spread": 0.0, "symmetric": bool(s == r)})
    return out


# desk-scale default grids

def default_grid(theorem_id):
    pi = np.pi
    g = {
        "L3.1": [{"a": 0.0, "tau": math.log(3), "E0": [[-0.6, -0.2]],
                  "b_values": [0.0, 0.2, 0.4, 0.6, 0.8]}],
        "L3.4": [{"intervals": [[0.0, 0.3], [0.5, 0.6]]},
                 {"intervals": [[-0.4, -0.1], [0.2, 0.45]]},
                 {"intervals": [[-0.7, -0.6], [0.0, 0.2], [0.5, 0.55]]},
                 {"intervals": [[0.0, 0.5]]}],
        "C3.1": [{"a": 0.1, "E0": [[-0.5, -0.2]], "E1": [[0.3, 0.5], [0.7, 0.75]]},
                 {"a": 0.0, "E0": [[-0.3, 0.0]], "E1": [[0.2, 0.4]]}],
        "L3.3": [{"pieces": [{"kind": "arc", "radius": 0.5, "theta0": 0.0, "theta1": 1.0}]},
                 {"pieces": [{"kind": "segment", "angle": 0.0, "a": 0.0, "b": 0.3},
                             {"kind": "arc", "radius": 0.3, "theta0": 0.0, "theta1": 1.5}]},
                 {"pieces": [{"kind": "arc", "radius": 0.2, "theta0": 0.0, "theta1": 5.5}]}],
        "T3.26": [{"angles": [0.0, pi / 2], "sets": [[[0.1, 0.4]], [[0.0, 0.2], [0.3, 0.5]]]},
                  {"angles": [0.0, pi / 2, pi, 3 * pi / 2],
                   "sets": [[[0.2, 0.5]], [[0.1, 0.3]], [[0.0, 0.4]], [[0.3, 0.6]]]}],
        "T3.30": [{"angles": [0.0, 2 * pi / 5, 4 * pi / 5, 6 * pi / 5, 8 * pi / 5],
                   "sets": [[[0.3, 0.9]], [[0.0, 0.85]], [[0.2, 0.88]], [[0.1, 0.86]], [[0.4, 0.92]]]}],
        "T3.35": [{"E1": [[0.0, 0.5]], "E2": [[0.0, 0.5]]},
                  {"E1": [[-0.3, 0.1], [0.2, 0.4]], "E2": [[0.0, 0.25]]}],
        "T3.42": [{"r": 0.3, "angles": [0.0, 2 * pi / 3, 4 * pi / 3],
                   "sets": [[[0.4, 0.6]], [[0.35, 0.5], [0.55, 0.65]], [[0.5, 0.7]]]}],
        "T3.44": [{"angles": [0.0, 2 * pi / 3, 4 * pi / 3], "lengths": [0.8, 0.8, 0.8],
                   "r_values": [0.0, 0.2, 0.4, 0.6]}],
        "T4.1": [{"n": n, "tau": t, "num": 100} for n in (2, 3, 4) for t in (0.5, 1.0)],
        "C4.10": [{"n": n, "tau": t, "num": 50} for n in (1, 2, 3, 5) for t in (0.5, 1.0, 2.0)],
        "T4.8": [{"n": n, "tau": t, "num": 50} for n in (1, 2, 3, 5) for t in (0.5, 1.0, 2.0)],
        "T4.11": [{"sets": [[[0.0, 0.5]], [[0.1, 0.3]]]},
                  {"sets": [[[0.2, 0.6]], [[0.0, 0.3]], [[0.1, 0.5]]]}],
        "T4.14": [{"r": 0.2, "n": 3, "E1": [[0.3, 0.5]], "alphas": [0.0, 1.8, 3.6, 4.5]}],
        "T4.19": [{"r": 0.2, "a": 0.3, "b": 0.6, "E1": [[0.35, 0.5]], "alphas": [0.0, 1.5, 3.5]}],
        "T5.5": [{"grid": [48, 96, 0.9], "set": {"kind": "hyp_disk", "center": [0.2, 0.0], "tau": 0.8},
                  "geodesic": {"kind": "diameter", "angle": 0.0}, "a": [0.0, 0.0]},
                 {"grid": [48, 96, 0.9], "set": {"kind": "blobs", "seed": 1},
                  "geodesic": {"kind": "diameter", "angle": 0.5}, "a": [0.0, 0.0]}],
        "L5.14": [{"grid": [32, 64, 0.9], "set": {"kind": "blobs", "seed": s}, "r": 0.3}
                  for s in (1, 2, 3)],
        "T5.16": [{"r": 0.3, "alpha": 1.0,
                   "pieces": [{"kind": "arc", "radius": 0.4, "theta0": 0.0, "theta1": 1.2},
                              {"kind": "arc", "radius": 0.5, "theta0": 1.0, "theta1": 2.2}]},
                  {"r": 0.3, "alpha": 0.5,
                   "pieces": [{"kind": "arc", "radius": 0.3, "theta0": 2.0, "theta1": 3.0},
                              {"kind": "segment", "angle": 2.5, "a": 0.3, "b": 0.6}]}],
        "T5.20": [{"r": 0.3, "alpha": 0.8, "arc_center": 1.0,
                   "spikes": [{"angle": 3.0, "intervals": [[0.0, 0.2], [0.4, 0.6]]}]},
                  {"r": 0.4, "alpha": 0.5, "arc_center": 2.0,
                   "spikes": [{"angle": 0.0, "intervals": [[0.1, 0.5]]},
                              {"angle": 4.0, "intervals": [[0.5, 0.6]]}]}],
        "L5.30": [{"hedgehog": {"type": "hedgehog", "core_radius": 0.2,
                                "spikes": [{"angle": 0.0, "intervals": [[0.3, 0.5], [0.6, 0.7]]},
                                           {"angle": 2.0, "intervals": [[0.2, 0.4]]}]},
                   "grid": [32, 64, 0.9], "set": {"kind": "blobs", "seed": 4}}],
        "P2.4": [{"parts": [{"type": "hedgehog", "spikes": [{"angle": 0.0, "intervals": [[0.0, 0.5]]}]},
                            {"type": "hedgehog", "spikes": [{"angle": 2.0, "intervals": [[0.2, 0.6]]}]}]}],
        "P2.5": [{"intervals": [[-0.5, -0.1], [0.3, 0.6]], "c": 0.2},
                 {"intervals": [[-0.2, 0.1], [0.4, 0.7]], "c": -0.1, "orientation": -1}],
        "P2.10": [{"hedgehog": {"type": "hedgehog", "spikes": [
            {"angle": 0.0, "intervals": [[0.5, 0.7]]}, {"angle": 2.5, "intervals": [[0.5, 0.6], [0.65, 0.8]]}]},
            "r0": 0.5, "r": 0.2}],
        "P2.12": [{"parts": [{"type": "hedgehog", "spikes": [{"angle": 0.0, "intervals": [[0.0, 0.4]]}]},
                             {"type": "hedgehog", "spikes": [{"angle": pi, "intervals": [[0.1, 0.5]]}]}],
                   "speeds": [6.0, 6.0], "t_values": [0.0, 0.5, 1.0]}],
    }
    return g[theorem_id]


def default_spec(theorem_id, **kw) -> CheckSpec:
    if theorem_id not in THEOREM_IDS:
        raise ConfigurationError(f"unsupported theorem id {theorem_id!r}")
    return CheckSpec(theorem_id, default_grid(theorem_id), **kw)
