"""Ground-state existence, the energy level F(mu), and the critical-regime diagnostics.

Regimes, for alpha != 0:

    (a) 2 < p < 6, alpha < 0   ground state for every mu
    (b) 2 < p <= 4, alpha > 0  iff mu > ||phi_{alpha^2}||^2
    (c) 4 < p < 6, alpha > 0   iff mu >= mu_tilde(alpha)
    (d) p = 6, alpha < 0       iff mu < sqrt(3) pi / 4, level -inf from there on
    (e) p = 6, alpha > 0       never; level 0 up to sqrt(3) pi / 4, -inf above

Whenever a ground state exists it is the least-energy bound state of mass mu.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import boundstate as bs
from . import closedform as cf
from . import thresholds as th
from .errors import ConvergenceError, DomainError
from .minimizer import DIVERGENCE_FLOOR
from .oracles import line_soliton_norms


class LevelKind(enum.Enum):
    FINITE = "finite"
    ZERO = "zero"
    MINUS_INFINITY = "minus_infinity"


@dataclass(frozen=True)
class EnergyLevel:
    """F(mu).  A non-attained infimum is FINITE with ``attained`` False."""
    kind: LevelKind
    value: Optional[float] = None
    attained: bool = False

    @classmethod
    def finite(cls, value: float, attained: bool = True) -> "EnergyLevel":
        return cls(LevelKind.FINITE, float(value), attained)

    @classmethod
    def zero(cls) -> "EnergyLevel":
        return cls(LevelKind.ZERO, 0.0, False)

    @classmethod
    def minus_infinity(cls) -> "EnergyLevel":
        return cls(LevelKind.MINUS_INFINITY, None, False)

    @property
    def tag(self) -> str:
        return self.kind.value

    def as_float(self) -> float:
        return -math.inf if self.kind is LevelKind.MINUS_INFINITY else float(self.value)


@dataclass(frozen=True)
class LevelComparison:
    """Least-energy bound-state energy against the line level E(mu, R)."""
    candidate: Optional[float]
    line_energy: Optional[float]

    @property
    def candidate_below_line(self) -> Optional[bool]:
        if self.candidate is None or self.line_energy is None:
            return None
        return self.candidate <= self.line_energy


@dataclass(frozen=True)
class GroundStateReport:
    p: float
    alpha: float
    mu: float
    regime: str
    exists: bool
    at_threshold: bool
    minimizer: Optional[bs.BoundState]
    level: EnergyLevel
    comparison: LevelComparison
    bound_state_count: int


def _check(p: float, alpha: float, mu: float) -> None:
    cf.check_power(p)
    bs.check_alpha(alpha)
    if not mu > 0.0 or not math.isfinite(mu):
        raise DomainError(f"mu must be positive and finite, got {mu!r}")


def regime(p: float, alpha: float) -> str:
    if p == cf.P_CRITICAL:
        return "d" if alpha < 0 else "e"
    if alpha < 0:
        return "a"
    return "b" if p <= 4.0 else "c"


def line_energy(p: float, mu: float) -> Optional[float]:
    """E(mu, R); for p = 6 it is 0 up to the line critical mass and -inf (None) beyond."""
    if p == cf.P_CRITICAL:
        return 0.0 if mu <= cf.CRITICAL_MASS_LINE else None
    return cf.soliton_energy_line(p, mu)


def _two_branch_side(p: float, alpha: float, mu: float, count: int) -> int:
    """Position of mu relative to mu_tilde, as from ``th.compare``.

    For p just above 4 the threshold solve is below double-precision
    resolution; the sign of K + theta_p at mu then decides directly.
    """
    try:
        return th.compare(mu, th.mu_tilde(p, alpha))
    except ConvergenceError:
        if count == 0:
            return -1
        k = th.K_of_mu(p, alpha, mu) + cf.theta(p)
        if abs(k) <= th.THRESHOLD_BAND * cf.theta(p):
            return 0
        return 1 if k < 0.0 else -1


def decide(p: float, alpha: float, mu: float) -> GroundStateReport:
    """Existence, minimizer and level of the ground state of mass mu."""
    _check(p, alpha, mu)
    count = th.count_bound_states(p, alpha, mu)
    reg = regime(p, alpha)
    candidate = th.least_energy_bound_state(p, alpha, mu) if count else None
    e_line = line_energy(p, mu)

    if reg == "a":
        exists, at = True, False
    elif reg == "b":
        side = th.compare(mu, th.soliton_mass_at_alpha_sq(p, alpha))
        exists, at = side > 0, side == 0
    elif reg == "c":
        side = _two_branch_side(p, alpha, mu, count)
        exists, at = side >= 0 and count > 0, side == 0
    elif reg == "d":
        side = th.compare(mu, cf.CRITICAL_MASS_HALFLINE)
        exists, at = side < 0, side == 0
    else:
        side = th.compare(mu, cf.CRITICAL_MASS_HALFLINE)
        exists, at = False, side == 0

    minimizer = candidate if exists else None
    level = _level(p, alpha, mu, reg, minimizer, at)
    return GroundStateReport(
        p=p,
        alpha=alpha,
        mu=mu,
        regime=reg,
        exists=exists,
        at_threshold=at,
        minimizer=minimizer,
        level=level,
        comparison=LevelComparison(None if candidate is None else candidate.energy, e_line),
        bound_state_count=count,
    )


def _level(p, alpha, mu, reg, minimizer, at_threshold) -> EnergyLevel:
    if reg in ("a", "b", "c"):
        e_line = cf.soliton_energy_line(p, mu)
        if minimizer is None:
            return EnergyLevel.finite(e_line, attained=False)
        value = minimizer.energy
        # on the threshold band both levels agree to the band width
        return EnergyLevel.finite(min(value, e_line) if at_threshold else value)
    side = th.compare(mu, cf.CRITICAL_MASS_HALFLINE)
    if reg == "d":
        return EnergyLevel.finite(minimizer.energy) if side < 0 else EnergyLevel.minus_infinity()
    return EnergyLevel.zero() if side <= 0 else EnergyLevel.minus_infinity()


def ground_energy_level(p: float, alpha: float, mu: float) -> EnergyLevel:
    return decide(p, alpha, mu).level


def K_diagnostic(p: float, alpha: float, mu: float) -> float:
    """F(eta^mu) / mu^(2 beta + 1); for alpha > 0 a ground state exists iff this is <= -theta_p."""
    cf.check_power(p, critical=False)
    return th.K_of_mu(p, alpha, mu)


# ------------------------------------------------------------ critical scaling

@dataclass(frozen=True)
class ScalingDemo:
    alpha: float
    mu: float
    omega: float
    lam: float
    nus: tuple
    energies: tuple
    floor: float

    @property
    def strictly_decreasing(self) -> bool:
        return bool(np.all(np.diff(self.energies) < 0.0))

    @property
    def crosses_floor(self) -> bool:
        return self.energies[-1] < self.floor


def default_nu_list() -> tuple:
    return tuple(4.0**k for k in range(13))


def critical_scaling_demo(
    alpha: float,
    mu: float,
    nu_list: Optional[Sequence[float]] = None,
    omega: Optional[float] = None,
    floor: float = DIVERGENCE_FLOOR,
) -> ScalingDemo:
    """Energies of f_nu = sqrt(nu) v(nu x), v = lam phi_omega on the half-line with mass mu.

    Mass is invariant under the scaling, while kinetic and sixth-power terms
    scale like nu^2 and the boundary term like nu, so

        F(f_nu) = nu^2 (||v'||^2/2 - ||v||_6^6/6) + nu alpha |v(0)|^2 / 2.

    The norms of v are computed once by spatial quadrature.  For alpha > 0
    omega is taken four times the anchor (8 alpha / (pi (lam^4 - 1)))^2, which
    makes F(v) negative.
    """
    p = cf.P_CRITICAL
    bs.check_alpha(alpha)
    if not mu > 0.0 or not math.isfinite(mu):
        raise DomainError(f"mu must be positive and finite, got {mu!r}")
    side = th.compare(mu, cf.CRITICAL_MASS_HALFLINE)
    if (alpha < 0 and side < 0) or (alpha > 0 and side <= 0):
        raise DomainError("the energy is bounded below at this mass; no divergent scaling exists")
    lam = math.sqrt(mu / cf.CRITICAL_MASS_HALFLINE)
    if omega is None:
        omega = 1.0 if alpha < 0 else 4.0 * (8.0 * alpha / (math.pi * (lam**4 - 1.0))) ** 2
    nus = default_nu_list() if nu_list is None else tuple(float(v) for v in nu_list)
    if any(not v > 0.0 for v in nus):
        raise DomainError("scaling factors must be positive")

    n = line_soliton_norms(p, omega)  # the half-line carries half of each integral
    quad_part = lam**2 * 0.25 * n.kinetic - lam**6 * n.power / 12.0
    trace_part = 0.5 * alpha * lam**2 * n.trace_sq
    energies = tuple(v * v * quad_part + v * trace_part for v in nus)
    return ScalingDemo(alpha, mu, omega, lam, nus, energies, floor)
