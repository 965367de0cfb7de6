"""Estimator-style wrappers around capacity estimation and set transforms."""
from __future__ import annotations

from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_orientation, check_set, check_unit_interval
from .capacity_fekete import FeketeConfig, capacity_of, estimate_capacity
from .hyp_core import Geodesic
from .set_model import DiameterSet, GridSet, Hedgehog
from .transforms import apply_transform


class FeketeCapacity(BaseEstimator):
    """Capacity of a set. With ``use_closed_forms`` the known families are
    evaluated exactly and everything else goes through Fekete points."""

    def __init__(self, n_sequence=(16, 32, 64, 128, 256), restarts=8, tol=1e-10,
                 seed=0, extrapolation="log_reciprocal_n", use_closed_forms=True):
        self.n_sequence = n_sequence
        self.restarts = restarts
        self.tol = tol
        self.seed = seed
        self.extrapolation = extrapolation
        self.use_closed_forms = use_closed_forms

    def _config(self):
        return FeketeConfig(tuple(self.n_sequence), self.restarts, self.tol, self.seed,
                            self.extrapolation)

    def fit(self, X, y=None):
        check_set(X)
        cfg = self._config()
        if self.use_closed_forms:
            res = capacity_of(X, cfg)
            self.capacity_ = res.value
            self.provenance_ = res.provenance
            self.result_ = res
            self.estimate_ = res.detail if res.provenance == "fekete" else None
        else:
            est = estimate_capacity(X, cfg)
            self.capacity_ = est.cap_extrapolated
            self.provenance_ = "fekete"
            self.estimate_ = est
            self.result_ = None
        self.bounds_ = tuple(self.estimate_.cap_upper_bounds) if self.estimate_ is not None else ()
        self.spread_ = self.estimate_.spread if self.estimate_ is not None else 0.0
        return self

    def predict(self, X=None):
        """Fitted capacity (refits when a new set is given)."""
        if X is not None:
            self.fit(X)
        check_is_fitted(self, "capacity_")
        return self.capacity_


class _SetTransformer(TransformerMixin, BaseEstimator):
    transform_name = ""
    accepts = (Hedgehog, DiameterSet, GridSet)

    def _params(self):
        return {}

    def fit(self, X, y=None):
        check_set(X, self.accepts)
        self.input_type_ = type(X).__name__
        return self

    def transform(self, X):
        check_set(X, self.accepts)
        out, report = apply_transform(self.transform_name, X, **self._params())
        self.report_ = report
        return out


class Polarizer(_SetTransformer):
    """Polarization of a diameter set across the geodesic orthogonal to it at
    ``c``, or of a grid set across ``geodesic``."""
    transform_name = "polarize"
    accepts = (DiameterSet, GridSet)

    def __init__(self, c=0.0, orientation=1, geodesic=None):
        self.c = c
        self.orientation = orientation
        self.geodesic = geodesic

    def _params(self):
        check_orientation(self.orientation)
        geo = self.geodesic
        if geo is None:
            from .hyp_core import geodesic_orthogonal_at
            geo = geodesic_orthogonal_at(self.c, 0.0, self.orientation)
        return {"c": self.c, "orientation": self.orientation, "geodesic": geo}


class SteinerSymmetrizer(_SetTransformer):
    transform_name = "steiner"
    accepts = (GridSet,)

    def __init__(self, geodesic=None, a=0j):
        self.geodesic = geodesic
        self.a = a

    def _params(self):
        geo = self.geodesic if self.geodesic is not None else Geodesic.diameter(0.0)
        return {"geodesic": geo, "a": complex(self.a)}


class CircularSymmetrizer(_SetTransformer):
    transform_name = "circular"
    accepts = (GridSet,)

    def __init__(self, r=0.0, alpha=0.0):
        self.r = r
        self.alpha = alpha

    def _params(self):
        return {"r": check_unit_interval(self.r, "r"), "alpha": float(self.alpha)}


class SzegoRadial(_SetTransformer):
    transform_name = "szego"
    accepts = (GridSet,)

    def __init__(self, r=0.1):
        self.r = r

    def _params(self):
        return {"r": check_unit_interval(self.r, "r", closed_low=False)}


class RadialHyperbolic(_SetTransformer):
    transform_name = "radial"
    accepts = (Hedgehog, GridSet)


class Contraction(_SetTransformer):
    transform_name = "contract"
    accepts = (Hedgehog,)

    def __init__(self, r0=0.5, r=0.0):
        self.r0 = r0
        self.r = r

    def _params(self):
        return {"r0": self.r0, "r": self.r}
