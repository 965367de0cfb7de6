"""Capacity from hyperbolic Fekete points.

For n points on a compact set E the normalized product
d_n = (prod_{j<k} p(z_j, z_k))^{2/(n(n-1))} of pseudo-hyperbolic distances
of a maximizing tuple decreases to the hyperbolic transfinite diameter, and
cap(E) = 2 pi / log(1/d_h). Each cap_n = 2 pi / log(1/d_n) is therefore an
upper bound (up to optimizer sub-optimality)."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .exceptions import ConfigurationError, DomainError
from .hyp_core import tau_of_r, r_of_tau
from .set_model import (BoundaryChart, DiameterSet, GridSet, Hedgehog,
                        boundary_chart)
from . import special_fn as sf

P_FLOOR = 1e-9
EXTRAPOLATIONS = ("none", "reciprocal_n", "log_reciprocal_n")
# relative bias of the extrapolated value seen against closed forms stays below 7e-4
MODEL_FLOOR = 1e-3


@dataclass(frozen=True)
class FeketeConfig:
    n_sequence: tuple = (16, 32, 64, 128, 256)
    restarts: int = 8
    tol: float = 1e-10
    seed: int = 0
    extrapolation: str = "log_reciprocal_n"
    max_exchanges: int = 64

    def __post_init__(self):
        ns = tuple(int(n) for n in self.n_sequence)
        object.__setattr__(self, "n_sequence", ns)
        if not ns or any(n < 3 for n in ns) or any(b <= a for a, b in zip(ns, ns[1:])):
            raise ConfigurationError("n_sequence must be strictly increasing with every n >= 3")
        if self.restarts < 1:
            raise ConfigurationError("restarts must be >= 1")
        if not self.tol > 0:
            raise ConfigurationError("tol must be positive")
        if self.extrapolation not in EXTRAPOLATIONS:
            raise ConfigurationError(f"extrapolation must be one of {EXTRAPOLATIONS}")

    def to_dict(self):
        return {"n_sequence": list(self.n_sequence), "restarts": self.restarts,
                "tol": self.tol, "seed": self.seed, "extrapolation": self.extrapolation,
                "max_exchanges": self.max_exchanges}


@dataclass
class CapacityEstimate:
    cap_extrapolated: float
    cap_upper_bounds: tuple
    d_n: tuple
    n_sequence: tuple
    fekete_points: np.ndarray = field(repr=False)
    diagnostics: dict = field(default_factory=dict)
    degenerate: bool = False

    @property
    def value(self):
        return self.cap_extrapolated

    @property
    def spread(self) -> float:
        """Noise scale in capacity units: the largest of the final restart
        spread, the extrapolation uncertainty and a relative model floor."""
        if self.degenerate:
            return 0.0
        return max(self.diagnostics.get("restart_spread", [0.0])[-1],
                   self.diagnostics.get("extrapolation_uncertainty", 0.0),
                   MODEL_FLOOR * abs(self.cap_extrapolated))

    def to_dict(self, points=False):
        out = {"cap_extrapolated": self.cap_extrapolated,
               "cap_upper_bounds": list(self.cap_upper_bounds),
               "d_n": list(self.d_n), "n_sequence": list(self.n_sequence),
               "spread": self.spread, "degenerate": self.degenerate,
               "diagnostics": self.diagnostics}
        if points:
            out["fekete_points"] = [[float(z.real), float(z.imag)] for z in self.fekete_points]
        return out


def cap_from_log_d(log_d):
    return 2 * math.pi / -log_d if log_d < 0 else math.inf


# objective

def _pair_terms(z):
    D = z[:, None] - z[None, :]
    Q = 1 - z[:, None] * np.conj(z)[None, :]
    np.fill_diagonal(D, 1)
    np.fill_diagonal(Q, 1)
    P = np.abs(D) / np.abs(Q)
    bad = P < P_FLOOR
    np.fill_diagonal(bad, True)
    return D, Q, P, bad


def log_energy(z) -> float:
    """Sum over pairs of log pseudo-distance, with the coincidence guard."""
    z = np.asarray(z, dtype=complex)
    if z.size < 2:
        return 0.0
    _, _, P, _ = _pair_terms(z)
    iu = np.triu_indices(z.size, 1)
    return float(np.sum(np.log(np.maximum(P[iu], P_FLOOR))))


class _ChartProblem:
    def __init__(self, pieces):
        self.pieces = [p for p in pieces if p.hyp_length > 0]
        if not self.pieces:
            raise DomainError("chart has no curve of positive length")

    def positions(self, xs):
        zs, dzs = [], []
        for p, x in zip(self.pieces, xs):
            if len(x):
                z, dz = p.eval(np.asarray(x, dtype=float))
                zs.append(np.atleast_1d(z))
                dzs.append(np.atleast_1d(dz))
        return np.concatenate(zs), np.concatenate(dzs)

    def bounds(self, counts):
        b = []
        for p, m in zip(self.pieces, counts):
            b += [(0.0, np.pi) if p.bounded else (None, None)] * m
        return b

    def split(self, x, counts):
        return np.split(np.asarray(x, dtype=float), np.cumsum(counts)[:-1])

    def fun(self, x, counts):
        z, dz = self.positions(self.split(x, counts))
        D, Q, P, bad = _pair_terms(z)
        val = 0.5 * np.sum(np.log(np.maximum(P, P_FLOOR))[~np.eye(len(z), dtype=bool)])
        D = np.where(bad, 1, D)
        G = np.conj(1 / D) + z[None, :] / np.conj(Q)
        G[bad] = 0
        grad = np.real(G.sum(axis=1) * np.conj(dz))
        return -val, -grad

    def optimize(self, xs, tol):
        counts = [len(x) for x in xs]
        x0 = np.concatenate([np.asarray(x, dtype=float) for x in xs])
        res = minimize(self.fun, x0, args=(counts,), jac=True, method="L-BFGS-B",
                       bounds=self.bounds(counts),
                       options=dict(maxiter=20000, ftol=tol, gtol=1e-10, maxcor=30))
        ok = bool(res.success) or "ABNORMAL" in str(res.message).upper()
        return self.split(res.x, counts), -float(res.fun), ok, int(res.nit)

    # initial and warm configurations, in per-piece fraction coordinates

    def from_fractions(self, fracs):
        return [p.x_of_fraction(np.sort(f)) for p, f in zip(self.pieces, fracs)]

    def to_fractions(self, xs):
        return [np.sort(p.fraction_of_x(x)) for p, x in zip(self.pieces, xs)]

    def resample(self, fracs, counts):
        out = []
        for p, f, m in zip(self.pieces, fracs, counts):
            k = len(f)
            q_new = (np.arange(m) + 0.5) / max(m, 1)
            if m == 0:
                out.append(np.zeros(0))
            elif k == 0:
                out.append(q_new)
            elif p.bounded:
                q = np.concatenate([[0.0], (np.arange(k) + 0.5) / k, [1.0]])
                ff = np.concatenate([[0.0], f, [1.0]])
                out.append(np.interp(q_new, q, ff))
            else:
                q = (np.arange(k) + 0.5) / k
                q3 = np.concatenate([q - 1, q, q + 1])
                f3 = np.concatenate([f - 1, f, f + 1])
                out.append(np.interp(q_new, q3, f3) % 1.0)
        return out

    def candidates(self, counts, density=6):
        """Trial positions per piece for exchange moves."""
        cz, cx, cp = [], [], []
        for k, (p, m) in enumerate(zip(self.pieces, counts)):
            K = density * max(m, 2) + 8
            x = p.x_of_fraction((np.arange(K) + 0.5) / K)
            z, _ = p.eval(x)
            cz.append(np.atleast_1d(z))
            cx.append(x)
            cp.append(np.full(K, k))
        return np.concatenate(cz), np.concatenate(cx), np.concatenate(cp)


def _largest_remainder(weights, n):
    w = np.asarray(weights, dtype=float)
    w = w / w.sum()
    raw = w * n
    base = np.floor(raw).astype(int)
    rem = n - base.sum()
    order = np.argsort(-(raw - base), kind="stable")
    base[order[:rem]] += 1
    return [int(b) for b in base]


def _exchange(prob: _ChartProblem, xs, f, tol, max_moves):
    """Move single points between pieces while the re-optimized objective
    improves. Returns the improved configuration."""
    moves = 0
    tried = set()
    while moves < max_moves and len(prob.pieces) > 1:
        counts = [len(x) for x in xs]
        z, _ = prob.positions(xs)
        owner = np.concatenate([np.full(m, k) for k, m in enumerate(counts)])
        D, Q, P, bad = _pair_terms(z)
        logP = np.log(np.maximum(P, P_FLOOR))
        np.fill_diagonal(logP, 0.0)
        L = logP.sum(axis=1)
        cz, cx, cpiece = prob.candidates(counts)
        Pc = np.abs(cz[:, None] - z[None, :]) / np.abs(1 - cz[:, None] * np.conj(z)[None, :])
        logPc = np.log(np.maximum(Pc, P_FLOOR))
        gain = logPc.sum(axis=1)[:, None] - logPc - L[None, :]
        gain[cpiece[:, None] == owner[None, :]] = -np.inf
        # a piece keeps at least one point unless it started empty
        for k, m in enumerate(counts):
            if m <= 1:
                gain[:, owner == k] = -np.inf
        if not np.isfinite(gain).any():
            break
        c, j = np.unravel_index(np.argmax(gain), gain.shape)
        key = (tuple(counts), int(cpiece[c]), int(owner[j]))
        if key in tried:
            break
        tried.add(key)
        new = [list(x) for x in xs]
        src = int(owner[j])
        local = j - int(np.sum(counts[:src]))
        del new[src][local]
        new[int(cpiece[c])].append(float(cx[c]))
        new = [np.sort(np.asarray(x, dtype=float)) if prob.pieces[k].bounded else np.asarray(x, dtype=float)
               for k, x in enumerate(new)]
        xs2, f2, _, _ = prob.optimize(new, tol)
        if f2 > f + 1e-12 * abs(f):
            xs, f = xs2, f2
            moves += 1
            tried.clear()
        else:
            break
    return xs, f, moves


def _jitter(prob, fracs, rng):
    out = []
    for p, f in zip(prob.pieces, fracs):
        m = len(f)
        if m == 0:
            out.append(f)
            continue
        g = f + rng.normal(0.0, 0.3 / m, size=m)
        out.append(np.clip(g, 0.0, 1.0) if p.bounded else g % 1.0)
    if len(prob.pieces) > 1:
        k, l = rng.choice(len(prob.pieces), size=2, replace=False)
        if len(out[k]) > 1:
            i = rng.integers(len(out[k]))
            out[l] = np.append(out[l], rng.uniform())
            out[k] = np.delete(out[k], i)
    return out


def _extrapolate(ns, caps, model):
    """Returns (value, uncertainty)."""
    ns = np.asarray(ns, dtype=float)
    caps = np.asarray(caps, dtype=float)
    if model == "none" or len(ns) < 3:
        unc = abs(caps[-1] - caps[-2]) if len(ns) >= 2 else 0.0
        return float(caps[-1]), float(unc)

    def fit(idx):
        n = ns[idx]
        if model == "reciprocal_n":
            A = np.column_stack([np.ones_like(n), 1 / n])
            coef, *_ = np.linalg.lstsq(A, caps[idx], rcond=None)
            return float(coef[0])
        y = 2 * np.pi / caps[idx]
        A = np.column_stack([np.ones_like(n), np.log(n) / n, 1 / n])
        a = np.linalg.solve(A, y)[0]
        return float(2 * np.pi / a)

    last = fit(slice(len(ns) - 3, len(ns)))
    if len(ns) >= 4:
        prev = fit(slice(len(ns) - 4, len(ns) - 1))
        unc = abs(last - prev)
    else:
        unc = abs(caps[-1] - last)
    return last, float(unc)


def _run_chart(chart: BoundaryChart, cfg: FeketeConfig) -> CapacityEstimate:
    prob = _ChartProblem(chart.pieces)
    weights = [p.hyp_length for p in prob.pieces]
    best_fracs = None
    caps, dns, diag_levels = [], [], []
    final_z = None
    for n in cfg.n_sequence:
        if best_fracs is None:
            counts0 = _largest_remainder(weights, n)
        else:
            prev_counts = [len(f) for f in best_fracs]
            counts0 = _largest_remainder([c + 1e-9 for c in prev_counts], n)
        results = []
        for k in range(cfg.restarts):
            rng = np.random.default_rng([cfg.seed, n, k])
            if best_fracs is None:
                fr = [(np.arange(m) + 0.5) / m if m else np.zeros(0) for m in counts0]
            else:
                fr = prob.resample(best_fracs, counts0)
            if k > 0:
                fr = _jitter(prob, fr, rng)
            xs, f, ok, nit = prob.optimize(prob.from_fractions(fr), cfg.tol)
            xs, f, moves = _exchange(prob, xs, f, cfg.tol, cfg.max_exchanges)
            results.append((f, k, xs, ok, nit, moves))
        best = results[0]
        for r in results[1:]:
            if r[0] > best[0]:
                best = r
        f, kbest, xs, ok, nit, moves = best
        log_d = 2 * f / (n * (n - 1))
        cap_each = [cap_from_log_d(2 * r[0] / (n * (n - 1))) for r in results]
        caps.append(cap_from_log_d(log_d))
        dns.append(math.exp(log_d))
        diag_levels.append({
            "n": n, "objective": [r[0] for r in results], "best_restart": kbest,
            "converged": [r[3] for r in results], "iterations": [r[4] for r in results],
            "exchanges": [r[5] for r in results],
            "allocation": [len(x) for x in xs],
            "restart_spread": float(max(cap_each) - min(cap_each)),
        })
        best_fracs = prob.to_fractions(xs)
        final_z = prob.positions(xs)[0]
    value, unc = _extrapolate(cfg.n_sequence, caps, cfg.extrapolation)
    rel = [(caps[i + 1] - caps[i]) / caps[i] for i in range(len(caps) - 1)]
    diagnostics = {
        "method": "chart",
        "extrapolation": cfg.extrapolation,
        "extrapolation_uncertainty": unc,
        "restart_spread": [lv["restart_spread"] for lv in diag_levels],
        "max_relative_increase": float(max(rel)) if rel else 0.0,
        "nonconverged": int(sum(not c for lv in diag_levels for c in lv["converged"])),
        "levels": diag_levels,
        "config": cfg.to_dict(),
    }
    return CapacityEstimate(value, tuple(caps), tuple(dns), cfg.n_sequence,
                            final_z, diagnostics)


def _discrete_fekete(cand, n, rng, start=None, max_sweeps=None):
    """Leja-type greedy selection followed by single-point swaps."""
    C = cand.size
    logP = np.log(np.maximum(np.abs(cand[:, None] - cand[None, :])
                             / np.abs(1 - cand[:, None] * np.conj(cand)[None, :]), P_FLOOR))
    np.fill_diagonal(logP, 0.0)
    first = int(np.argmax(np.abs(cand))) if start is None else int(start)
    sel = [first]
    pot = logP[first].copy()
    mask = np.zeros(C, dtype=bool)
    mask[first] = True
    for _ in range(n - 1):
        pot_m = np.where(mask, -np.inf, pot)
        j = int(np.argmax(pot_m))
        sel.append(j)
        mask[j] = True
        pot += logP[j]
    sel = np.array(sel)
    sweeps = max_sweeps if max_sweeps is not None else 4 * n
    for _ in range(sweeps):
        S = logP[np.ix_(sel, sel)]
        L = S.sum(axis=1)
        potc = logP[:, sel].sum(axis=1)
        gain = potc[:, None] - logP[:, sel] - L[None, :]
        gain[sel, :] = -np.inf
        c, j = np.unravel_index(np.argmax(gain), gain.shape)
        if gain[c, j] <= 1e-12 * max(1.0, abs(L.sum())):
            break
        sel[j] = c
    S = logP[np.ix_(sel, sel)]
    return sel, float(S.sum() / 2)


def _run_grid(E: GridSet, cfg: FeketeConfig) -> CapacityEstimate:
    cand = E.boundary_points()
    ns = [n for n in cfg.n_sequence if n <= cand.size]
    if len(ns) == 0:
        raise DomainError("grid has fewer boundary cells than the smallest n")
    caps, dns, levels = [], [], []
    sel_best = None
    for n in ns:
        results = []
        for k in range(cfg.restarts):
            rng = np.random.default_rng([cfg.seed, n, k])
            start = None if k == 0 else int(rng.integers(cand.size))
            sel, f = _discrete_fekete(cand, n, rng, start)
            results.append((f, k, sel))
        best = results[0]
        for r in results[1:]:
            if r[0] > best[0]:
                best = r
        f, kbest, sel = best
        log_d = 2 * f / (n * (n - 1))
        cap_each = [cap_from_log_d(2 * r[0] / (n * (n - 1))) for r in results]
        caps.append(cap_from_log_d(log_d))
        dns.append(math.exp(log_d))
        levels.append({"n": n, "objective": [r[0] for r in results], "best_restart": kbest,
                       "restart_spread": float(max(cap_each) - min(cap_each))})
        sel_best = sel
    value, unc = _extrapolate(ns, caps, cfg.extrapolation)
    rel = [(caps[i + 1] - caps[i]) / caps[i] for i in range(len(caps) - 1)]
    diagnostics = {"method": "grid", "candidates": int(cand.size),
                   "extrapolation": cfg.extrapolation,
                   "extrapolation_uncertainty": unc,
                   "restart_spread": [lv["restart_spread"] for lv in levels],
                   "max_relative_increase": float(max(rel)) if rel else 0.0,
                   "levels": levels, "config": cfg.to_dict()}
    return CapacityEstimate(value, tuple(caps), tuple(dns), tuple(ns), cand[sel_best], diagnostics)


def _degenerate(cfg, reason):
    return CapacityEstimate(0.0, tuple(0.0 for _ in cfg.n_sequence), tuple(0.0 for _ in cfg.n_sequence),
                            cfg.n_sequence, np.zeros(0, dtype=complex),
                            {"degenerate_reason": reason, "config": cfg.to_dict()}, degenerate=True)


def estimate_capacity(obj, cfg: FeketeConfig | None = None) -> CapacityEstimate:
    """Fekete-point estimate for a Hedgehog, DiameterSet, BoundaryChart or GridSet."""
    cfg = cfg or FeketeConfig()
    if isinstance(obj, GridSet):
        if obj.count() == 0:
            return _degenerate(cfg, "empty grid")
        return _run_grid(obj, cfg)
    if isinstance(obj, (Hedgehog, DiameterSet)) and obj.is_empty():
        return _degenerate(cfg, "set has no curve of positive length")
    chart = boundary_chart(obj)
    if chart.is_degenerate():
        return _degenerate(cfg, "chart has zero length")
    return _run_chart(chart, cfg)


def fekete_points(chart, n: int, cfg: FeketeConfig | None = None):
    """Best n-tuple found on the chart and its normalized product d_n."""
    if n < 3:
        raise DomainError("n must be >= 3")
    cfg = cfg or FeketeConfig()
    if isinstance(chart, GridSet):
        est = _run_grid(chart, FeketeConfig((n,), cfg.restarts, cfg.tol, cfg.seed, "none"))
        return est.fekete_points, est.d_n[-1]
    chart = boundary_chart(chart)
    if chart.is_degenerate():
        pts = [p.z for p in chart.pieces if p.kind == "point"][:1] or [0j]
        return np.full(n, pts[0], dtype=complex), 0.0
    est = _run_chart(chart, FeketeConfig((n,), cfg.restarts, cfg.tol, cfg.seed, "none"))
    return est.fekete_points, est.d_n[-1]


# dispatcher

@dataclass
class CapacityResult:
    value: float
    provenance: str
    detail: object = None

    @property
    def spread(self) -> float:
        return self.detail.spread if isinstance(self.detail, CapacityEstimate) else 0.0

    def __float__(self):
        return float(self.value)

    def to_dict(self):
        out = {"capacity": self.value, "provenance": self.provenance, "spread": self.spread}
        if isinstance(self.detail, CapacityEstimate):
            out["estimate"] = self.detail.to_dict()
        elif isinstance(self.detail, sf.ClosedFormCapacity):
            out["formula"] = self.detail.formula_id
            out["parameters"] = self.detail.parameters
        return out


ANGLE_TOL = 1e-9


def _equally_spaced(angles, m):
    a = np.sort(np.asarray(angles) % (2 * np.pi))
    gaps = np.diff(np.concatenate([a, [a[0] + 2 * np.pi]]))
    return len(a) == m and np.all(np.abs(gaps - 2 * np.pi / m) < ANGLE_TOL)


def match_closed_form(obj):
    """Closed-form capacity when the set matches a known pattern, else None."""
    if isinstance(obj, DiameterSet):
        if len(obj.intervals) == 1:
            a, b = obj.intervals[0]
            return sf.cap_zero_interval(r_of_tau(b - a))
        return None
    if not isinstance(obj, Hedgehog) or obj.is_empty():
        return None
    h = obj
    if h.core_radius > 0:
        return sf.cap_disk(h.core_radius) if not h.spikes else None
    # everything on one diameter
    angles = h.angles
    if len(angles) <= 2:
        base = angles[0]
        if all(abs(np.sin(a - base)) < ANGLE_TOL for a in angles):
            iv = []
            for a, ints in h.spikes:
                sgn = 1.0 if np.cos(a - base) > 0 else -1.0
                for lo, hi in ints:
                    u = sorted((sgn * tau_of_r(lo), sgn * tau_of_r(hi)))
                    iv.append(tuple(u))
            ds = DiameterSet(tuple(iv), base)
            if len(ds.intervals) == 1:
                a, b = ds.intervals[0]
                return sf.cap_zero_interval(r_of_tau(b - a))
            return None
    if any(len(iv) != 1 for _, iv in h.spikes):
        return None
    m = len(angles)
    ints = [iv[0] for _, iv in h.spikes]
    if not _equally_spaced(angles, m):
        return None
    if all(abs(lo - ints[0][0]) < 1e-14 and abs(hi - ints[0][1]) < 1e-14 for lo, hi in ints):
        r, rho = ints[0]
        return sf.cap_rotated_star(m, r, tau_of_r(rho) - tau_of_r(r))
    if m % 4 == 0 and all(lo == 0.0 for lo, _ in ints):
        even = {hi for hi in (ints[j][1] for j in range(0, m, 2))}
        odd = {hi for hi in (ints[j][1] for j in range(1, m, 2))}
        if len(even) == 1 and len(odd) == 1:
            return sf.cap_two_star_families(m // 4, even.pop(), odd.pop())
    return None


def capacity_of(obj, cfg: FeketeConfig | None = None) -> CapacityResult:
    """Closed form when the set matches a known family, Fekete estimate otherwise."""
    cf = match_closed_form(obj)
    if cf is not None:
        return CapacityResult(cf.value, "closed_form", cf)
    est = estimate_capacity(obj, cfg)
    return CapacityResult(est.cap_extrapolated, "fekete", est)
