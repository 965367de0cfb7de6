import itertools
import math

import numpy as np
import pytest

from hypcap import special_fn as sf
from hypcap.capacity_fekete import (FeketeConfig, _extrapolate, _largest_remainder, cap_from_log_d,
                                    capacity_of, estimate_capacity, fekete_points, log_energy,
                                    match_closed_form)
from hypcap.exceptions import ConfigurationError
from hypcap.hyp_core import pseudo_dist, r_of_tau, u_of_x
from hypcap.set_model import Arc, BoundaryChart, DiameterSet, GridSet, Hedgehog, boundary_chart

SMALL = FeketeConfig(n_sequence=(8, 16, 32), restarts=2)


def d_n_of(points):
    z = np.asarray(points)
    n = len(z)
    logs = [math.log(pseudo_dist(z[i], z[j])) for i, j in itertools.combinations(range(n), 2)]
    return math.exp(2 * sum(logs) / (n * (n - 1)))


@pytest.mark.parametrize("n", [3, 7, 16])
def test_circle_fekete_points_are_equally_spaced(n):
    r = 0.6
    z, d = fekete_points(boundary_chart(Hedgehog(r)), n, SMALL)
    ideal = r * np.exp(2j * np.pi * np.arange(n) / n)
    assert d == pytest.approx(d_n_of(ideal), rel=1e-8)
    assert d == pytest.approx(d_n_of(z), rel=1e-10)


def test_three_points_on_arc_against_brute_force():
    arc = Arc(0.5, 0.0, 2.0)
    t = np.linspace(0.0, 2.0, 201)
    pts = 0.5 * np.exp(1j * t)
    P = np.abs(pts[:, None] - pts[None, :]) / np.abs(1 - pts[:, None] * np.conj(pts)[None, :])
    # the outer two points sit at the arc ends; search the middle one
    best = max(P[0, k] * P[k, -1] * P[0, -1] for k in range(1, 200))
    # and confirm with a coarse full search
    idx = np.arange(0, 201, 8)
    full = max(P[i, j] * P[j, k] * P[i, k] for i, j, k in itertools.combinations(idx, 3))
    _, d = fekete_points(BoundaryChart((arc,)), 3, SMALL)
    assert d ** 3 >= max(best, full) - 1e-12
    assert d ** 3 == pytest.approx(best, rel=1e-4)


def test_log_energy_and_cap_from_log_d():
    z = np.array([0.5, -0.5])
    assert log_energy(z) == pytest.approx(math.log(0.8))
    assert cap_from_log_d(-1.0) == pytest.approx(2 * math.pi)
    assert cap_from_log_d(0.0) == math.inf


def test_coincident_points_are_guarded():
    assert np.isfinite(log_energy(np.array([0.1, 0.1, 0.3])))


@pytest.mark.parametrize("r", [0.3, 0.6])
def test_disk_estimate(r):
    est = estimate_capacity(Hedgehog(r), FeketeConfig(n_sequence=(16, 32, 64), restarts=2))
    want = sf.cap_disk(r).value
    assert abs(est.value - want) / want < 5e-3
    assert all(b >= est.value - 1e-9 for b in est.cap_upper_bounds)


def test_interval_estimate_and_bound_chain():
    est = estimate_capacity(DiameterSet.from_x([(0.0, 0.5)]), SMALL)
    want = sf.cap_zero_interval(0.5).value
    assert abs(est.value - want) / want < 5e-3
    assert est.diagnostics["max_relative_increase"] <= 1e-3
    assert len(est.d_n) == len(SMALL.n_sequence)


def test_estimate_is_moebius_invariant_for_intervals():
    # same hyperbolic length, different position
    a = estimate_capacity(DiameterSet.from_x([(0.0, 0.5)]), SMALL).value
    u0 = u_of_x(-0.3)
    b = estimate_capacity(DiameterSet(((u0, u0 + math.log(3)),)), SMALL).value
    assert a == pytest.approx(b, rel=2e-3)


def test_determinism():
    h = Hedgehog(0.0, [(0.0, [(0.0, 0.5)]), (2.0, [(0.1, 0.4)])])
    a = estimate_capacity(h, SMALL).to_dict(points=True)
    b = estimate_capacity(h, SMALL).to_dict(points=True)
    assert a == b


def test_seed_changes_only_noise():
    h = Hedgehog(0.0, [(0.0, [(0.0, 0.5)]), (2.0, [(0.1, 0.4)])])
    a = estimate_capacity(h, SMALL).value
    b = estimate_capacity(h, FeketeConfig(n_sequence=(8, 16, 32), restarts=2, seed=7)).value
    assert a == pytest.approx(b, rel=1e-3)


def test_degenerate_sets():
    est = estimate_capacity(Hedgehog(), SMALL)
    assert est.degenerate and est.value == 0.0 and est.spread == 0.0


def test_grid_estimate_is_rough_but_close():
    g = GridSet.disk(0.5, 32, 64, 0.9)
    est = estimate_capacity(g, FeketeConfig(n_sequence=(8, 16, 32, 64), restarts=2))
    assert abs(est.value - sf.cap_disk(0.5).value) / sf.cap_disk(0.5).value < 0.05


@pytest.mark.parametrize("kw", [
    {"n_sequence": ()}, {"n_sequence": (16, 8)}, {"n_sequence": (2, 4)},
    {"restarts": 0}, {"tol": 0.0}, {"extrapolation": "cubic"},
])
def test_config_validation(kw):
    with pytest.raises(ConfigurationError):
        FeketeConfig(**kw)


def test_extrapolation_recovers_model():
    ns = np.array([16, 32, 64, 128])
    a, b, c = 0.3, 0.2, -0.1
    caps = 2 * np.pi / (a + (b * np.log(ns) + c) / ns)
    v, unc = _extrapolate(ns, caps, "log_reciprocal_n")
    assert v == pytest.approx(2 * np.pi / a, rel=1e-10) and unc < 1e-8
    caps = 5.0 + 3.0 / ns
    v, _ = _extrapolate(ns, caps, "reciprocal_n")
    assert v == pytest.approx(5.0, rel=1e-12)
    v, _ = _extrapolate(ns, caps, "none")
    assert v == caps[-1]


def test_largest_remainder():
    assert sum(_largest_remainder([1.0, 2.0, 3.0], 10)) == 10
    assert list(_largest_remainder([1.0, 1.0], 5)) in ([3, 2], [2, 3])


def test_closed_form_routing():
    assert match_closed_form(Hedgehog(0.4)).formula_id == "disk"
    assert match_closed_form(DiameterSet.from_x([(-0.2, 0.5)])).formula_id == "zero_interval"
    collinear = Hedgehog(0.0, [(0.0, [(0.0, 0.5)]), (math.pi, [(0.0, 0.3)])])
    assert match_closed_form(collinear).value == pytest.approx(
        sf.cap_zero_interval(r_of_tau(math.log(3) + 2 * math.atanh(0.3))).value)
    star = Hedgehog(0.0, [(2 * math.pi * k / 3, [(0.2, 0.6)]) for k in range(3)])
    assert match_closed_form(star).formula_id == "rotated_star"
    two = Hedgehog(0.0, [(math.pi * k / 2, [(0.0, 0.5 if k % 2 == 0 else 0.3)]) for k in range(4)])
    assert match_closed_form(two).formula_id == "two_star_families"
    assert match_closed_form(Hedgehog(0.0, [(0.0, [(0.0, 0.5)]), (1.0, [(0.0, 0.5)])])) is None
    assert match_closed_form(Hedgehog(0.2, [(0.0, [(0.3, 0.5)])])) is None


def test_capacity_of_provenance():
    assert capacity_of(Hedgehog(0.4)).provenance == "closed_form"
    res = capacity_of(Hedgehog(0.0, [(0.0, [(0.0, 0.5)]), (1.0, [(0.0, 0.5)])]), SMALL)
    assert res.provenance == "fekete" and res.spread > 0
