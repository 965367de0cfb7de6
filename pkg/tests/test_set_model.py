import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hypcap.exceptions import DomainError
from hypcap.hyp_core import MobiusMap, hyp_area_disk_tau, hyp_dist, tau_of_r, u_of_x
from hypcap.set_model import (Arc, BoundaryChart, DiameterSet, GridSet, Hedgehog, Segment,
                              boundary_chart, hausdorff_distance, hyp_length)

interval = st.tuples(st.floats(0.0, 0.9), st.floats(0.0, 0.9)).map(sorted).map(tuple)
spikes = st.lists(st.tuples(st.floats(0, 2 * math.pi), st.lists(interval, min_size=1, max_size=3)),
                  max_size=4)


def test_hedgehog_normalization():
    h = Hedgehog(0.2, [(0.0, [(0.1, 0.5)]), (1.0, [(0.3, 0.4), (0.35, 0.6)]),
                       (2 * math.pi + 1.0, [(0.7, 0.8)]), (3.0, [(0.05, 0.15)])])
    assert h.spikes == ((0.0, ((0.2, 0.5),)), (1.0, ((0.3, 0.6), (0.7, 0.8))))
    assert h.radial_length(0.0) == pytest.approx(tau_of_r(0.5))


@given(spikes, st.floats(0, 0.5))
def test_hedgehog_normalization_is_idempotent(sp, core):
    h = Hedgehog(core, sp)
    assert Hedgehog(h.core_radius, h.spikes) == h


def test_hedgehog_rejects_bad_radii():
    with pytest.raises(DomainError):
        Hedgehog(1.0)
    with pytest.raises(DomainError):
        Hedgehog(0.0, [(0.0, [(0.2, 1.0)])])


def test_hedgehog_union_and_rotation():
    a = Hedgehog(0.0, [(0.0, [(0.0, 0.3)])])
    b = Hedgehog(0.1, [(0.0, [(0.2, 0.5)]), (1.0, [(0.3, 0.4)])])
    u = a.union(b)
    assert u.core_radius == 0.1 and u.intervals_at(0.0) == ((0.1, 0.5),)
    assert a.rotated(0.5).angles == (0.5,)


def test_diameter_set_round_trip():
    d = DiameterSet.from_x([(-0.5, -0.1), (0.2, 0.6), (0.5, 0.7)])
    assert len(d.intervals) == 2
    assert np.allclose(np.array(d.x_intervals), [[-0.5, -0.1], [0.2, 0.7]])
    assert d.hyp_length() == pytest.approx(u_of_x(-0.1) - u_of_x(-0.5) + u_of_x(0.7) - u_of_x(0.2))
    assert not d.contains_u(0.0) and d.contains_u(u_of_x(0.3))


def test_diameter_to_hedgehog_keeps_length():
    d = DiameterSet.from_x([(-0.5, 0.3), (0.5, 0.6)], angle=0.4)
    h = d.to_hedgehog()
    total = sum(hyp_length(iv) for _, iv in h.spikes)
    assert total == pytest.approx(d.hyp_length(), rel=1e-12)
    assert set(np.round(h.angles, 9)) == {0.4, round(0.4 + math.pi, 9)}


def test_grid_disk_area_within_boundary_rings():
    for n in (16, 32, 64):
        g = GridSet.hyp_disk(0.3 + 0.1j, 0.8, n, 2 * n, 0.95)
        ring = np.sum(g.cell_areas()[g.boundary_mask()])
        assert abs(g.hyp_area() - hyp_area_disk_tau(0.8)) <= 2 * ring


def test_grid_total_area_matches_closed_form():
    g = GridSet(10, 12, 0.9, np.ones((10, 12), dtype=bool))
    assert g.hyp_area() == pytest.approx(4 * math.pi * 0.81 / 0.19, rel=1e-12)
    assert g.euclid_area() == pytest.approx(math.pi * 0.81, rel=1e-12)


def test_grid_cell_lookup():
    g = GridSet.disk(0.5, 20, 40, 0.9)
    i, j = g.cell_of(np.array([0.1 + 0j, 0.95 + 0j]))
    assert i[0] >= 0 and i[1] == -1
    c = g.centers()
    ii, jj = g.cell_of(c.ravel())
    assert np.array_equal(ii.reshape(c.shape), np.arange(20)[:, None].repeat(40, 1))


def test_grid_from_predicate_matches_hyp_disk():
    c, t = 0.2j, 0.6
    a = GridSet.hyp_disk(c, t, 24, 48, 0.9)
    b = GridSet.from_predicate(lambda z: hyp_dist(z, c) <= t, 24, 48, 0.9)
    assert a == b


def test_grid_rasterizes_hedgehog_and_diameter():
    h = Hedgehog(0.3, [(0.0, [(0.5, 0.7)])])
    g = GridSet.from_hedgehog(h, 32, 64, 0.9)
    assert g.occupancy[:, 0].sum() > g.occupancy[:, 10].sum() > 0
    d = DiameterSet.from_x([(-0.5, 0.2)])
    gd = GridSet.from_diameter_set(d, 32, 64, 0.9)
    assert gd.count() > 0


def test_segment_and_arc_evaluation():
    s = Segment(0.5, 0.2, 1.4)
    z, dz = s.eval(np.array([0.0, np.pi]))
    assert np.allclose(np.abs(z), np.tanh(np.array([0.2, 1.4]) / 2))
    assert s.hyp_length == pytest.approx(1.2)
    a = Arc(0.5, 0.0, 1.0)
    assert a.hyp_length == pytest.approx(2 * 0.5 * 1.0 / 0.75)
    full = Arc(0.5, 0.0, 2 * math.pi)
    assert full.full and not full.bounded
    with pytest.raises(DomainError):
        Arc(1.0, 0.0, 1.0)
    with pytest.raises(DomainError):
        Segment(0.0, 1.0, 0.5)


def test_arc_derivative_matches_difference_quotient():
    a = Arc(0.6, 0.3, 1.7)
    x = np.linspace(0.1, 3.0, 9)
    h = 1e-6
    z1, dz = a.eval(x)
    z2, _ = a.eval(x + h)
    assert np.allclose((z2 - z1) / h, dz, atol=1e-5)


def test_mapped_piece_length_is_invariant():
    m = MobiusMap(0.3 - 0.2j, 0.7)
    s = Segment(1.0, 0.1, 1.0)
    pts = s.mapped(m).sample(2000)
    lengths = np.sum([hyp_dist(pts[k], pts[k + 1]) for k in range(len(pts) - 1)])
    assert lengths == pytest.approx(0.9, rel=1e-5)


def test_boundary_chart_of_hedgehog():
    h = Hedgehog(0.2, [(0.0, [(0.3, 0.5)]), (1.0, [(0.2, 0.6)])])
    ch = boundary_chart(h)
    kinds = sorted(p.kind for p in ch.pieces)
    assert kinds == ["arc", "segment", "segment"]
    assert isinstance(ch, BoundaryChart) and not ch.is_degenerate()
    d = DiameterSet.from_x([(-0.3, 0.1), (0.4, 0.5)])
    assert boundary_chart(d).hyp_length == pytest.approx(d.hyp_length())


def test_empty_set_has_no_chart():
    with pytest.raises(DomainError):
        boundary_chart(Hedgehog())
    assert BoundaryChart(()).is_degenerate()


def test_hausdorff_distance():
    a = np.array([0.0, 0.1])
    b = np.array([0.0, 0.1, 0.3j])
    assert hausdorff_distance(a, b) == pytest.approx(0.3)
