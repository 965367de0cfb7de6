import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hypcap.exceptions import DomainError
from hypcap.serialize import (dumps, geodesic_from_dict, loads, rle_decode, rle_encode,
                              rows_to_table, set_from_dict, set_to_dict)
from hypcap.set_model import Arc, BoundaryChart, DiameterSet, GridSet, Hedgehog, Segment

interval = st.tuples(st.floats(0.0, 0.9), st.floats(0.0, 0.9)).map(sorted).map(tuple)
hedgehogs = st.builds(
    Hedgehog, st.floats(0, 0.5),
    st.lists(st.tuples(st.floats(0, 6.28), st.lists(interval, min_size=1, max_size=3)), max_size=4))
diameters = st.builds(
    DiameterSet, st.lists(st.tuples(st.floats(-3, 3), st.floats(-3, 3)).map(sorted).map(tuple),
                          max_size=4).map(tuple), st.floats(0, 3.14))


@given(hedgehogs)
def test_hedgehog_round_trip(h):
    assert loads(dumps(h)) == h


@given(diameters)
def test_diameter_round_trip(d):
    assert loads(dumps(d)) == d


@given(st.integers(1, 12), st.integers(1, 12), st.integers(0, 2**31))
def test_grid_round_trip(n_r, n_t, seed):
    occ = np.random.default_rng(seed).random((n_r, n_t)) < 0.4
    g = GridSet(n_r, n_t, 0.9, occ)
    assert loads(dumps(g)) == g


def test_chart_round_trip():
    ch = BoundaryChart((Arc(0.4, 0.0, 1.0), Segment(2.0, 0.1, 0.8)))
    assert loads(dumps(ch)) == ch


def test_rle():
    occ = np.array([[True, True, False], [False, True, True]])
    assert rle_encode(occ) == [0, 2, 2, 2]
    assert np.array_equal(rle_decode([0, 2, 2, 2], (2, 3)), occ)
    with pytest.raises(DomainError):
        rle_decode([1, 2], (2, 3))


def test_euclidean_and_hyperbolic_radii():
    a = set_from_dict({"type": "hedgehog", "spikes": [{"angle": 0, "intervals": [[0, 0.5]]}]})
    b = set_from_dict({"type": "hedgehog", "hyperbolic": True,
                       "spikes": [{"angle": 0, "intervals": [[0, math.log(3)]]}]})
    assert a.spikes[0][1][0][1] == pytest.approx(b.spikes[0][1][0][1])


def test_malformed_json_reports_position():
    with pytest.raises(DomainError, match="line 2 column"):
        loads('{"type": "hedgehog",\n "core_radius" 0.5}')


@pytest.mark.parametrize("doc", [
    {"type": "blob"},
    {"core_radius": 0.5},
    {"type": "hedgehog", "core_radius": "big"},
    {"type": "hedgehog", "spikes": [{"angle": 0, "intervals": [[0.1]]}]},
    {"type": "hedgehog", "core_radius": 1.5},
    {"type": "chart", "pieces": [{"kind": "spiral"}]},
])
def test_invalid_descriptions(doc):
    with pytest.raises(DomainError):
        set_from_dict(doc)


def test_geodesic_from_dict():
    assert geodesic_from_dict(None).kind == "diameter"
    g = geodesic_from_dict({"kind": "arc", "theta1": 0.0, "theta2": 1.0, "orientation": -1})
    assert g.kind == "arc" and g.orientation == -1


def test_rows_to_table():
    text = rows_to_table([{"a": 1, "b": {"x": 1}}], ("a", "b"))
    assert text == 'a,b\n1,"{""x"": 1}"\n'
    assert rows_to_table([], ("a", "b")) == "a,b\n"


def test_set_to_dict_is_json():
    d = set_to_dict(Hedgehog(0.1, [(1.0, [(0.2, 0.3)])]))
    assert json.loads(json.dumps(d)) == d
