import math

import pytest
from sklearn.base import clone

from hypcap import special_fn as sf
from hypcap.estimators import (CircularSymmetrizer, Contraction, FeketeCapacity, Polarizer,
                               RadialHyperbolic, SteinerSymmetrizer, SzegoRadial)
from hypcap.exceptions import DomainError
from hypcap.hyp_core import Geodesic
from hypcap.set_model import DiameterSet, GridSet, Hedgehog


def test_capacity_estimator_params_and_clone():
    est = FeketeCapacity(n_sequence=(8, 16, 32), restarts=2)
    assert est.get_params()["restarts"] == 2
    c = clone(est).set_params(seed=5)
    assert c.seed == 5 and est.seed == 0


def test_capacity_estimator_fit():
    est = FeketeCapacity(n_sequence=(16, 32, 64), restarts=2).fit(Hedgehog(0.5))
    assert est.provenance_ == "closed_form" and est.spread_ == 0.0
    assert est.predict() == pytest.approx(2 * math.pi / math.log(2))
    est = FeketeCapacity(n_sequence=(16, 32, 64), restarts=2, use_closed_forms=False).fit(Hedgehog(0.5))
    assert est.provenance_ == "fekete" and len(est.bounds_) == 3
    assert est.capacity_ == pytest.approx(2 * math.pi / math.log(2), rel=5e-3)


def test_capacity_estimator_rejects_non_sets():
    with pytest.raises(DomainError):
        FeketeCapacity().fit([0.1, 0.2])


def test_transformers():
    d = DiameterSet.from_x([(-0.4, 0.1), (0.3, 0.6)])
    out = Polarizer(c=0.1).fit_transform(d)
    assert out.hyp_length() == pytest.approx(d.hyp_length())
    h = Hedgehog(0.0, [(0.0, [(0.0, 0.3), (0.5, 0.7)])])
    t = RadialHyperbolic()
    assert len(t.fit_transform(h).intervals_at(0.0)) == 1 and t.report_.name == "radial"
    g = GridSet.hyp_disk(0.2 + 0j, 0.7, 32, 64, 0.9)
    assert SteinerSymmetrizer(geodesic=Geodesic.diameter(0.0)).fit_transform(g).count() > 0
    assert CircularSymmetrizer().fit_transform(g).count() == g.count()
    disk = GridSet.disk(0.5, 32, 64, 0.9)
    assert SzegoRadial(r=0.3).fit_transform(disk).count() > 0
    far = Hedgehog(0.0, [(0.0, [(0.5, 0.7)])])
    moved = Contraction(r0=0.5, r=0.0).fit_transform(far)
    assert moved.intervals_at(0.0)[0][0] == pytest.approx(0.0, abs=1e-12)
    assert sf.cap_zero_interval(moved.intervals_at(0.0)[0][1]).value > 0
