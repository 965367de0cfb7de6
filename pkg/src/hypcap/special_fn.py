"""Complete elliptic integrals (AGM) and closed-form capacities."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .exceptions import DivergenceError, DomainError
from .hyp_core import tau_of_r

AGM_RTOL = 1e-15
AGM_MAXITER = 40
KAPPA_EPS = 1e-14

FORMULAS = ("disk", "sym_interval", "zero_interval", "rotated_star", "two_star_families")


def agm(a: float, b: float) -> float:
    if a < 0 or b < 0:
        raise DomainError("agm needs non-negative arguments")
    if a == 0 or b == 0:
        return 0.0
    for _ in range(AGM_MAXITER):
        if abs(a - b) <= AGM_RTOL * max(a, b):
            break
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    return 0.5 * (a + b)


def _check_modulus(k):
    if not (0 <= k < 1) or not math.isfinite(k):
        raise DomainError(f"elliptic modulus must lie in [0, 1), got {k!r}")


def _K_from_complement(kp: float) -> float:
    return math.pi / (2 * agm(1.0, kp))


def ellip_K(k: float) -> float:
    """K(k) = pi / (2 agm(1, sqrt(1 - k^2)))."""
    k = float(k)
    _check_modulus(k)
    return _K_from_complement(math.sqrt((1 - k) * (1 + k)))


def ellip_Kprime(k: float) -> float:
    """K'(k) = K(sqrt(1 - k^2))."""
    k = float(k)
    _check_modulus(k)
    if k == 0:
        raise DivergenceError("K'(0) is infinite")
    return _K_from_complement(k)


def modulus_ratio(k: float) -> float:
    """K(k) / K'(k)."""
    return ellip_K(k) / ellip_Kprime(k)


@dataclass(frozen=True)
class ClosedFormCapacity:
    value: float
    formula_id: str
    parameters: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.formula_id not in FORMULAS:
            raise DomainError(f"unknown formula {self.formula_id!r}")
        if not self.value > 0:
            raise DomainError("closed-form capacity must be positive")

    def __float__(self):
        return float(self.value)


def _check_kappa(kappa):
    if not (KAPPA_EPS < kappa < 1 - KAPPA_EPS):
        raise DomainError(f"degenerate modulus kappa={kappa!r}")


def _check_open_unit(name, r):
    if not (0 < r < 1):
        raise DomainError(f"{name} must lie in (0, 1), got {r!r}")


def cap_disk(r: float) -> ClosedFormCapacity:
    """Capacity of the closed disk |z| <= r."""
    _check_open_unit("r", r)
    return ClosedFormCapacity(2 * math.pi / math.log(1 / r), "disk", {"r": r})


def cap_disk_tau(tau: float) -> float:
    """Same value written through the hyperbolic radius."""
    return 2 * math.pi / math.log((math.exp(tau) + 1) / (math.exp(tau) - 1))


def cap_sym_interval(r: float) -> ClosedFormCapacity:
    """Capacity of [-r, r]."""
    _check_open_unit("r", r)
    kappa = r * r
    _check_kappa(kappa)
    return ClosedFormCapacity(8 * modulus_ratio(kappa), "sym_interval", {"r": r})


def cap_zero_interval(r: float) -> ClosedFormCapacity:
    """Capacity of [0, r]; equals that of any interval of the same hyperbolic length."""
    _check_open_unit("r", r)
    _check_kappa(r)
    return ClosedFormCapacity(4 * modulus_ratio(r), "zero_interval", {"r": r})


def rotated_star_rho(r: float, tau: float) -> float:
    et = math.exp(tau)
    return (et * (1 + r) - (1 - r)) / (et * (1 + r) + (1 - r))


def rotated_star_kappa(n: int, r: float, tau: float) -> float:
    rho = rotated_star_rho(r, tau)
    if not rho < 1:
        raise DomainError("spike reaches the unit circle")
    return (rho**n - r**n) / (1 - r**n * rho**n)


def rotated_star_kappa_limits(n: int, tau: float):
    """Moduli at the endpoints r -> 0 and r -> 1 of the rotated-star family."""
    q = (math.exp(tau) - 1) / (math.exp(tau) + 1)
    return q**n, q


def cap_rotated_star(n: int, r: float, tau: float) -> ClosedFormCapacity:
    """Capacity of n copies of the radial interval [r, rho] (hyperbolic
    length tau) rotated by multiples of 2 pi / n."""
    if int(n) != n or n < 1:
        raise DomainError("n must be a positive integer")
    if not (0 <= r < 1):
        raise DomainError("inner radius must lie in [0, 1)")
    if not (tau > 0 and math.isfinite(tau)):
        raise DomainError("spike length must be positive")
    n = int(n)
    kappa = rotated_star_kappa(n, r, tau)
    _check_kappa(kappa)
    return ClosedFormCapacity(4 * n * modulus_ratio(kappa), "rotated_star",
                              {"n": n, "r": r, "tau": tau, "kappa": kappa})


def two_star_kappa(n: int, r1: float, r2: float) -> float:
    a, b = r1 ** (2 * n), r2 ** (2 * n)
    return (a + b) / (1 + a * b)


def cap_two_star_families(n: int, r1: float, r2: float) -> ClosedFormCapacity:
    """Capacity of n diameters [-r1, r1] at angles k pi / n together with n
    diameters [-r2, r2] at the bisecting angles."""
    if int(n) != n or n < 1:
        raise DomainError("n must be a positive integer")
    if not (0 <= r1 < 1 and 0 <= r2 < 1):
        raise DomainError("radii must lie in [0, 1)")
    if r1 == 0 and r2 == 0:
        raise DomainError("both radii zero: capacity vanishes")
    n = int(n)
    kappa = two_star_kappa(n, r1, r2)
    _check_kappa(kappa)
    return ClosedFormCapacity(8 * n * modulus_ratio(kappa), "two_star_families",
                              {"n": n, "r1": r1, "r2": r2, "kappa": kappa})


def constraint_partner(s: float, tau: float) -> float:
    """r2 such that tau(s) + tau(r2) = 2 tau."""
    rest = 2 * tau - tau_of_r(s)
    if rest < 0:
        raise DomainError("s exceeds the constraint curve")
    return math.tanh(rest / 2)


def two_star_constraint_limits(n: int, tau: float):
    """Moduli at s -> 0 (kappa0, paired with 8n) and s -> r (kappa1, paired
    with 16n) along the curve tau(s) + tau(r2) = 2 tau."""
    q2 = (math.exp(2 * tau) - 1) / (math.exp(2 * tau) + 1)
    q1 = (math.exp(tau) - 1) / (math.exp(tau) + 1)
    return q2 ** (2 * n), q1 ** (4 * n)


def cap_plus_set(r1: float, r2: float) -> ClosedFormCapacity:
    """Capacity of [-r1, r1] u [-i r2, i r2] via its conformal reduction to a
    symmetric interval."""
    r = math.sqrt((r1 * r1 + r2 * r2) / (1 + r1 * r1 * r2 * r2))
    out = cap_sym_interval(r)
    return ClosedFormCapacity(out.value, "sym_interval", {"r": r, "r1": r1, "r2": r2})
