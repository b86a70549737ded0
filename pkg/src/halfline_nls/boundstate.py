"""Positive bound states of -u'' - u^(p-1) + omega u = 0 on (0, inf) with u'(0) = alpha u(0).

For omega > alpha^2 the unique positive solution is the line soliton translated by

    a = 2 artanh(alpha / sqrt(omega)) / ((p - 2) sqrt(omega)),

and everything else (mass, energy, their frequency derivatives) is explicit up to
the one-dimensional profile integral evaluated in :mod:`halfline_nls.quadrature`.

Most functions here are parametrised internally by the *gap* omega - alpha^2 so
that the branch endpoint omega -> alpha^2 can be approached to full precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import closedform as cf
from .errors import DomainError, NoBoundState
from .quadrature import sine_power_integral


def check_alpha(alpha: float) -> None:
    if alpha == 0.0 or not math.isfinite(alpha):
        raise DomainError(f"alpha must be a nonzero finite real, got {alpha!r}")


def _check(p: float, alpha: float, omega: float) -> float:
    """Validate and return the gap omega - alpha^2."""
    cf.check_power(p)
    check_alpha(alpha)
    cf.check_frequency(omega)
    gap = omega - alpha * alpha
    if not gap > 0.0:
        raise NoBoundState(f"no bound state for omega={omega!r} <= alpha^2={alpha * alpha!r}")
    return gap


def _artanh_ratio(alpha: float, omega: float, gap: float) -> float:
    """artanh(alpha / sqrt(omega)) without cancellation as omega -> alpha^2."""
    r = math.sqrt(omega)
    return math.copysign(math.log((r + abs(alpha)) / math.sqrt(gap)), alpha)


def _shift(p: float, alpha: float, omega: float, gap: float) -> float:
    return 2.0 * _artanh_ratio(alpha, omega, gap) / ((p - 2.0) * math.sqrt(omega))


def shift_a(p: float, alpha: float, omega: float) -> float:
    """Translation a of the soliton; sign(a) = sign(alpha)."""
    return _shift(p, alpha, omega, _check(p, alpha, omega))


@dataclass(frozen=True)
class BoundState:
    p: float
    alpha: float
    omega: float
    shift: float

    def __call__(self, x):
        return evaluate(self, x)

    def derivative(self, x):
        """eta'(x) = -sqrt(omega) tanh(rate (x - a)) eta(x)."""
        x = np.asarray(x, dtype=float)
        out = -math.sqrt(self.omega) * np.tanh(cf.soliton_rate(self.p, self.omega) * (x - self.shift)) \
            * evaluate(self, x)
        return float(out) if out.ndim == 0 else out

    @property
    def mass(self) -> float:
        return mass(self.p, self.alpha, self.omega)

    @property
    def energy(self) -> float:
        return energy(self.p, self.alpha, self.omega)

    def boundary_value_sq(self) -> float:
        return _trace_sq(self.p, self.omega - self.alpha**2)


def bound_state(p: float, alpha: float, omega: float) -> BoundState:
    """The positive bound state eta^{omega, alpha}; NoBoundState if omega <= alpha^2."""
    gap = _check(p, alpha, omega)
    return BoundState(p=p, alpha=alpha, omega=omega, shift=_shift(p, alpha, omega, gap))


def evaluate(state: BoundState, x):
    """eta(x) = phi_omega(x - a), x >= 0.

    Works in log-sech form so that very large shifts (omega close to alpha^2)
    underflow gracefully instead of overflowing cosh.
    """
    x = np.asarray(x, dtype=float)
    if np.any(x < 0.0):
        raise DomainError("bound states live on x >= 0")
    return cf.soliton_value(state.p, state.omega, x - state.shift)


def _trace_sq(p: float, gap: float) -> float:
    """|eta(0)|^2 = ((p/2)(omega - alpha^2))^(2/(p-2))."""
    return (0.5 * p * gap) ** (2.0 / (p - 2.0))


def _profile_integral(p: float, alpha: float, gap: float) -> float:
    """int_{-alpha/sqrt(omega)}^1 (1-s^2)^((4-p)/(p-2)) ds via its arc form."""
    root_gap = math.sqrt(gap)
    arc = math.atan2(root_gap, -alpha)
    arc_complement = math.atan2(root_gap, alpha)
    return sine_power_integral((6.0 - p) / (p - 2.0), arc, arc_complement)


def mass_gap(p: float, alpha: float, gap: float) -> float:
    """M at omega = alpha^2 + gap."""
    omega = alpha * alpha + gap
    if p == cf.P_CRITICAL:
        return 0.5 * math.sqrt(3.0) * math.atan2(math.sqrt(gap), -alpha)
    return cf.mass_prefactor(p) * omega ** cf.mass_exponent(p) * _profile_integral(p, alpha, gap)


def mass(p: float, alpha: float, omega: float) -> float:
    """M(omega, alpha) = ||eta^{omega,alpha}||^2; p = 6 is routed to :func:`mass_critical`."""
    gap = _check(p, alpha, omega)
    return mass_gap(p, alpha, gap)


def mass_critical(alpha: float, omega: float) -> float:
    """p = 6 mass: (sqrt(3)/2) (pi/2 + arcsin(alpha/sqrt(omega)))."""
    _check(cf.P_CRITICAL, alpha, omega)
    return 0.5 * math.sqrt(3.0) * (0.5 * math.pi + math.asin(alpha / math.sqrt(omega)))


def _trace_term(p: float, alpha: float, gap: float) -> float:
    """(p/2)^(2/(p-2)) alpha (omega - alpha^2)^((4-p)/(p-2))."""
    return (0.5 * p) ** (2.0 / (p - 2.0)) * alpha * gap ** ((4.0 - p) / (p - 2.0))


def mass_derivative_gap(p: float, alpha: float, gap: float) -> float:
    omega = alpha * alpha + gap
    return ((6.0 - p) / 2.0 * mass_gap(p, alpha, gap) - _trace_term(p, alpha, gap)) / ((p - 2.0) * omega)


def mass_derivative(p: float, alpha: float, omega: float) -> float:
    """dM/domega in closed form; its sign decides the branch structure."""
    return mass_derivative_gap(p, alpha, _check(p, alpha, omega))


def energy_gap(p: float, alpha: float, gap: float) -> float:
    omega = alpha * alpha + gap
    return (-(6.0 - p) / (2.0 * (p + 2.0)) * omega * mass_gap(p, alpha, gap)
            + alpha * (p - 2.0) / (2.0 * (p + 2.0)) * _trace_sq(p, gap))


def energy(p: float, alpha: float, omega: float) -> float:
    """F(eta^omega), obtained from the Pohozaev and Nehari identities."""
    return energy_gap(p, alpha, _check(p, alpha, omega))


def energy_derivative_gap(p: float, alpha: float, gap: float) -> float:
    omega = alpha * alpha + gap
    pref = (0.5 * p) ** (2.0 / (p - 2.0)) / (2.0 * (p - 2.0))
    bulk = (6.0 - p) / (p - 2.0) * omega ** cf.mass_exponent(p) * _profile_integral(p, alpha, gap)
    return pref * (-bulk + alpha * gap ** ((4.0 - p) / (p - 2.0)))


def energy_derivative_omega(p: float, alpha: float, omega: float) -> float:
    """d/domega F(eta^omega); equals -omega M'(omega) / 2."""
    return energy_derivative_gap(p, alpha, _check(p, alpha, omega))


@dataclass(frozen=True)
class MassEnergySample:
    omega: float
    mass: float
    energy: float
    dmass_domega: float
    denergy_domega: float


def sample(p: float, alpha: float, omega: float) -> MassEnergySample:
    gap = _check(p, alpha, omega)
    return MassEnergySample(
        omega=omega,
        mass=mass_gap(p, alpha, gap),
        energy=energy_gap(p, alpha, gap),
        dmass_domega=mass_derivative_gap(p, alpha, gap),
        denergy_domega=energy_derivative_gap(p, alpha, gap),
    )
