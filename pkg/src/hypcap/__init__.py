"""Conformal capacity of compact sets in the hyperbolic unit disk."""
from .capacity_fekete import (CapacityEstimate, CapacityResult, FeketeConfig, capacity_of,
                              estimate_capacity, fekete_points, match_closed_form)
from .estimators import (CircularSymmetrizer, Contraction, FeketeCapacity, Polarizer,
                         RadialHyperbolic, SteinerSymmetrizer, SzegoRadial)
from .exceptions import (ConfigurationError, DivergenceError, DomainError, GeodesicError,
                         PreconditionError, ResolutionError, ScheduleError)
from .hyp_core import (Geodesic, HypPoint, MobiusMap, hyp_dist, pseudo_dist, r_of_tau,
                       reflect, tau_of_r)
from .serialize import dumps, loads, set_from_dict, set_to_dict
from .set_model import (Arc, BoundaryChart, DiameterSet, GridSet, Hedgehog, Segment,
                        boundary_chart)
from .special_fn import (agm, cap_disk, cap_plus_set, cap_rotated_star, cap_sym_interval,
                         cap_two_star_families, cap_zero_interval, ellip_K, ellip_Kprime)
from .transforms import (DispersionSchedule, TransformReport, apply_transform,
                         circular_symmetrize, circular_symmetrize_hyperbolic, contraction_phi,
                         disperse, polarize_diameter, polarize_grid, radial_hyperbolic,
                         steiner_hyperbolic, szego_radial)
from .verify import CheckReport, CheckSpec, run_check, sweep_two_intervals

__all__ = [
    "CapacityEstimate", "CapacityResult", "FeketeConfig", "capacity_of", "estimate_capacity",
    "fekete_points", "match_closed_form", "CircularSymmetrizer", "Contraction",
    "FeketeCapacity", "Polarizer", "RadialHyperbolic", "SteinerSymmetrizer", "SzegoRadial",
    "ConfigurationError", "DivergenceError", "DomainError", "GeodesicError",
    "PreconditionError", "ResolutionError", "ScheduleError", "Geodesic", "HypPoint",
    "MobiusMap", "hyp_dist", "pseudo_dist", "r_of_tau", "reflect", "tau_of_r", "dumps",
    "loads", "set_from_dict", "set_to_dict", "Arc", "BoundaryChart", "DiameterSet", "GridSet",
    "Hedgehog", "Segment", "boundary_chart", "agm", "cap_disk", "cap_plus_set",
    "cap_rotated_star", "cap_sym_interval", "cap_two_star_families", "cap_zero_interval",
    "ellip_K", "ellip_Kprime", "DispersionSchedule", "TransformReport", "apply_transform",
    "circular_symmetrize", "circular_symmetrize_hyperbolic", "contraction_phi", "disperse",
    "polarize_diameter", "polarize_grid", "radial_hyperbolic", "steiner_hyperbolic",
    "szego_radial", "CheckReport", "CheckSpec", "run_check", "sweep_two_intervals",
]

__version__ = "0.1.0"
