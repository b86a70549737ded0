"""Line solitons and the Neumann half-line: profiles, masses, energies, universal constants.

All quantities follow from the explicit soliton

    phi_w(x) = [ (p/2) w sech^2((p/2 - 1) sqrt(w) |x|) ]^(1/(p-2)),

whose mass is a pure power of w.  The ground state energy on the line is
-theta_p mu^(2 beta + 1) and on the Neumann half-line -theta_p 2^(2 beta) mu^(2 beta + 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError
from .quadrature import full_profile_integral
from .roots import expand_upward, solve_bracketed

P_CRITICAL = 6.0
#: Sharp Gagliardo-Nirenberg constants for p = 6 and p = infinity.
K6_LINE = 4.0 / math.pi**2
K6_HALFLINE = 16.0 / math.pi**2
KINF_LINE = 1.0
KINF_HALFLINE = 2.0
#: Mass of every critical soliton on the line / the half soliton on the half-line.
CRITICAL_MASS_LINE = math.sqrt(3.0) * math.pi / 2.0
CRITICAL_MASS_HALFLINE = math.sqrt(3.0) * math.pi / 4.0


def check_power(p: float, *, critical: bool = True) -> None:
    if not (2.0 < p <= P_CRITICAL) or (not critical and p == P_CRITICAL):
        upper = "6]" if critical else "6)"
        raise DomainError(f"p must lie in (2, {upper}, got {p!r}")


def check_frequency(omega: float) -> None:
    if not omega > 0.0 or not math.isfinite(omega):
        raise DomainError(f"omega must be positive and finite, got {omega!r}")


def log_sech(z):
    """log(sech z), stable for large |z| (no overflow of cosh)."""
    z = np.abs(z)
    return -z - np.log1p(np.exp(-2.0 * z)) + math.log(2.0)


def soliton_rate(p: float, omega: float) -> float:
    """Spatial rate (p/2 - 1) sqrt(omega) inside the sech."""
    return 0.5 * (p - 2.0) * math.sqrt(omega)


def soliton_peak(p: float, omega: float) -> float:
    return (0.5 * p * omega) ** (1.0 / (p - 2.0))


def soliton_value(p: float, omega: float, x):
    """phi_omega(x); accepts scalars or arrays."""
    check_power(p)
    check_frequency(omega)
    z = soliton_rate(p, omega) * np.asarray(x, dtype=float)
    out = np.exp((math.log(0.5 * p * omega) + 2.0 * log_sech(z)) / (p - 2.0))
    return float(out) if out.ndim == 0 else out


def soliton_derivative(p: float, omega: float, x):
    """phi_omega'(x) = -sqrt(omega) tanh(rate x) phi_omega(x)."""
    x = np.asarray(x, dtype=float)
    out = -math.sqrt(omega) * np.tanh(soliton_rate(p, omega) * x) * soliton_value(p, omega, x)
    return float(out) if out.ndim == 0 else out


def mass_prefactor(p: float) -> float:
    """2 (p/2)^(2/(p-2)) / (p-2): mass of a soliton on [0, inf) per unit profile integral at omega = 1."""
    return 2.0 * (0.5 * p) ** (2.0 / (p - 2.0)) / (p - 2.0)


def mass_exponent(p: float) -> float:
    """Power of omega in the soliton mass, (6-p)/(2(p-2))."""
    return (6.0 - p) / (2.0 * (p - 2.0))


def soliton_mass_line(p: float, omega: float) -> float:
    """||phi_omega||^2 on the whole line; strictly increasing in omega for p < 6."""
    check_power(p, critical=False)
    check_frequency(omega)
    return 2.0 * mass_prefactor(p) * omega ** mass_exponent(p) * full_profile_integral(p)


def critical_mass_line(omega: float) -> float:
    """Mass of the p = 6 soliton; independent of omega."""
    check_frequency(omega)
    return CRITICAL_MASS_LINE


@dataclass(frozen=True)
class UniversalConstants:
    p: float
    beta: float
    omega_of_unit_mass: float
    theta_p: float
    #: phi_mu(x) = C_p mu^(2/(6-p)) sech^(2/(p-2))(c_p mu^beta x)
    C_p: float
    c_p: float
    K6_halfline: float = K6_HALFLINE
    Kinf_line: float = KINF_LINE
    Kinf_halfline: float = KINF_HALFLINE


def beta_exponent(p: float) -> float:
    return (p - 2.0) / (6.0 - p)


@lru_cache(maxsize=256)
def compute_constants(p: float) -> UniversalConstants:
    """Universal constants for 2 < p < 6.

    omega(1) is found by bracketed inversion of the (monotone) line mass at
    mass 1, theta_p from 2 theta_p (2 beta + 1) = omega(1).
    """
    check_power(p, critical=False)
    beta = beta_exponent(p)
    f = lambda w: soliton_mass_line(p, w) - 1.0
    lo = 1e-12
    # the mass grows like omega^((6-p)/(2(p-2))): near p = 6 omega(1) is tiny
    while f(lo) > 0.0 and lo > 1e-290:
        lo *= 1e-8
    lo, hi = expand_upward(f, lo, 1.0)
    w1 = solve_bracketed(f, lo, hi)
    theta = w1 / (2.0 * (2.0 * beta + 1.0))
    return UniversalConstants(
        p=p,
        beta=beta,
        omega_of_unit_mass=w1,
        theta_p=theta,
        C_p=soliton_peak(p, w1),
        c_p=soliton_rate(p, w1),
    )


def theta(p: float) -> float:
    return compute_constants(p).theta_p


def omega_line(p: float, mu: float) -> float:
    """Frequency of the line soliton of mass mu: omega(1) mu^(2 beta)."""
    c = compute_constants(p)
    return c.omega_of_unit_mass * mu ** (2.0 * c.beta)


def _check_mass(mu: float) -> None:
    if not mu > 0.0 or not math.isfinite(mu):
        raise DomainError(f"mu must be positive and finite, got {mu!r}")


def soliton_energy_line(p: float, mu: float) -> float:
    """E(mu, R) = -theta_p mu^(2 beta + 1)."""
    check_power(p, critical=False)
    _check_mass(mu)
    c = compute_constants(p)
    return -c.theta_p * mu ** (2.0 * c.beta + 1.0)


def neumann_halfline_energy(p: float, mu: float) -> float:
    """E(mu, R+) = -theta_p 2^(2 beta) mu^(2 beta + 1), energy of the half soliton of mass 2 mu."""
    check_power(p, critical=False)
    _check_mass(mu)
    c = compute_constants(p)
    return -c.theta_p * 2.0 ** (2.0 * c.beta) * mu ** (2.0 * c.beta + 1.0)
