"""Independent spatial-quadrature oracles.

These integrate sampled profiles directly in x with QUADPACK, sharing nothing
with the closed forms except the profile itself.  They back the verification
suite and the tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import quad, solve_ivp

from . import closedform as cf
from .boundstate import BoundState


def _integrate(f: Callable[[float], float], lo: float, hi: float, breaks=()) -> float:
    pts = [lo, *sorted(b for b in breaks if lo < b < hi), hi]
    total = 0.0
    for a, b in zip(pts[:-1], pts[1:]):
        val, _ = quad(f, a, b, epsabs=0.0, epsrel=1e-13, limit=400)
        total += val
    return total


@dataclass(frozen=True)
class Norms:
    """Integral functionals of a profile u on a half-line or the line."""
    mass: float
    kinetic: float  # ||u'||^2
    power: float  # ||u||_p^p
    trace_sq: float  # |u(0)|^2

    def energy(self, p: float, alpha: float = 0.0) -> float:
        return 0.5 * self.kinetic - self.power / p + 0.5 * alpha * self.trace_sq


def decay_length(p: float, omega: float) -> float:
    """Distance past the peak beyond which the profile is below double precision."""
    return 40.0 / cf.soliton_rate(p, omega)


def bound_state_norms(state: BoundState) -> Norms:
    p, w, a = state.p, state.omega, state.shift
    hi = max(a, 0.0) + decay_length(p, w)
    brk = [a, a - 1.0 / cf.soliton_rate(p, w), a + 1.0 / cf.soliton_rate(p, w)]
    u = state
    du = state.derivative
    return Norms(
        mass=_integrate(lambda x: u(x) ** 2, 0.0, hi, brk),
        kinetic=_integrate(lambda x: du(x) ** 2, 0.0, hi, brk),
        power=_integrate(lambda x: u(x) ** p, 0.0, hi, brk),
        trace_sq=u(0.0) ** 2,
    )


def line_soliton_norms(p: float, omega: float) -> Norms:
    """Norms of phi_omega over the whole line (twice the half-line integrals)."""
    hi = decay_length(p, omega)
    brk = [1.0 / cf.soliton_rate(p, omega)]
    u = lambda x: cf.soliton_value(p, omega, x)
    du = lambda x: cf.soliton_derivative(p, omega, x)
    return Norms(
        mass=2.0 * _integrate(lambda x: u(x) ** 2, 0.0, hi, brk),
        kinetic=2.0 * _integrate(lambda x: du(x) ** 2, 0.0, hi, brk),
        power=2.0 * _integrate(lambda x: u(x) ** p, 0.0, hi, brk),
        trace_sq=u(0.0) ** 2,
    )


def pohozaev_residual(p: float, omega: float, n: Norms) -> float:
    """(1/2)||u'||^2 + (1/p)||u||_p^p - (omega/2)||u||^2, relative to the largest term."""
    terms = (0.5 * n.kinetic, n.power / p, 0.5 * omega * n.mass)
    return (terms[0] + terms[1] - terms[2]) / max(abs(t) for t in terms)


def nehari_residual(p: float, alpha: float, omega: float, n: Norms) -> float:
    """||u'||^2 - ||u||_p^p + alpha |u(0)|^2 + omega ||u||^2, relative to the largest term."""
    terms = (n.kinetic, -n.power, alpha * n.trace_sq, omega * n.mass)
    return sum(terms) / max(abs(t) for t in terms)


def shooting_soliton_value(p: float, omega: float, x: float) -> float:
    """phi_omega(x) from integrating -u'' - u^(p-1) + omega u = 0 out of the peak.

    Starts at the maximum u(0) = (p omega / 2)^(1/(p-2)), u'(0) = 0, the only
    initial data producing the decaying even solution.
    """
    peak = cf.soliton_peak(p, omega)
    sol = solve_ivp(
        lambda _x, y: [y[1], omega * y[0] - abs(y[0]) ** (p - 2.0) * y[0]],
        (0.0, abs(x)), [peak, 0.0], method="DOP853", rtol=1e-12, atol=1e-14,
    )
    return float(sol.y[0, -1])


def gn_ratio_inf(values, h: float) -> float:
    """||u||_inf^2 / (||u'||_2 ||u||_2) for samples on a uniform grid (piecewise linear u)."""
    u = np.asarray(values, dtype=float)
    du = np.diff(u) / h
    kin = math.sqrt(float(np.sum(du**2)) * h)
    # exact L2 norm of the piecewise-linear interpolant
    l2 = math.sqrt(float(np.sum(u[:-1] ** 2 + u[:-1] * u[1:] + u[1:] ** 2)) * h / 3.0)
    return float(np.max(np.abs(u))) ** 2 / (kin * l2)
