"""Implicit thresholds of the mass map and of ground-state existence.

All solves are bracketed.  Frequencies near the branch endpoint omega = alpha^2
are handled through the gap g = omega - alpha^2, searched on a log scale so
that g can shrink to ~1e-300 without losing relative precision.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple, Optional

from . import boundstate as bs
from . import closedform as cf
from .errors import BranchInvalid, ConvergenceError, DomainError, NoBoundState, OutOfRange
from .quadrature import full_profile_integral
from .roots import solve_bracketed, solve_log

#: Relative band inside which a mass (or strength) is reported as sitting on a threshold.
THRESHOLD_BAND = 1e-9
_GAP_FLOOR = 1e-300


class BranchSelector(enum.Enum):
    LOWER = "lower"
    UPPER = "upper"
    UNIQUE = "unique"


class Threshold(NamedTuple):
    """A threshold value; ``inclusive`` tells whether equality belongs to the existence side."""
    value: float
    inclusive: bool


def compare(x: float, threshold: float, band: float = THRESHOLD_BAND) -> int:
    """-1, 0, +1 for x below, within the relative band of, or above ``threshold``."""
    if abs(x - threshold) <= band * abs(threshold):
        return 0
    return -1 if x < threshold else 1


def is_two_branch(p: float, alpha: float) -> bool:
    return 4.0 < p < 6.0 and alpha > 0.0


def _check_pa(p: float, alpha: float) -> None:
    cf.check_power(p)
    bs.check_alpha(alpha)


def _check_mu(mu: float) -> None:
    if not mu > 0.0 or not math.isfinite(mu):
        raise DomainError(f"mu must be positive and finite, got {mu!r}")


def soliton_mass_at_alpha_sq(p: float, alpha: float) -> float:
    """||phi_{alpha^2}||^2 on the line; for alpha > 0 the limit of M as omega -> alpha^2."""
    if p == cf.P_CRITICAL:
        return cf.CRITICAL_MASS_LINE
    return cf.soliton_mass_line(p, alpha * alpha)


# ---------------------------------------------------------------- omega*, mu*

@lru_cache(maxsize=1024)
def _omega_star_gap(p: float, alpha: float) -> float:
    def f(gap: float) -> float:
        # same sign as M'(omega), increasing in gap
        return (6.0 - p) / 2.0 * bs.mass_gap(p, alpha, gap) - bs._trace_term(p, alpha, gap)

    hi = alpha * alpha
    while f(hi) <= 0.0:
        hi *= 2.0
        if hi > 1e300:
            raise ConvergenceError("M' never becomes positive")
    lo = hi * 1e-8
    while f(lo) >= 0.0:
        lo *= 1e-8
        if lo < _GAP_FLOOR:
            raise ConvergenceError(f"M' does not change sign near alpha^2 (p={p!r} too close to 4?)")
    return solve_log(f, lo, hi)


def omega_star(p: float, alpha: float) -> float:
    """Frequency of the interior minimum of M(., alpha) for 4 < p < 6, alpha > 0."""
    _check_pa(p, alpha)
    if not is_two_branch(p, alpha):
        raise DomainError("omega* exists only for 4 < p < 6 and alpha > 0")
    return alpha * alpha + _omega_star_gap(p, alpha)


def mu_star(p: float, alpha: float) -> float:
    """Bound-state onset mass M(omega*) for 4 < p < 6, alpha > 0."""
    _check_pa(p, alpha)
    if not is_two_branch(p, alpha):
        raise DomainError("mu* exists only for 4 < p < 6 and alpha > 0")
    return bs.mass_gap(p, alpha, _omega_star_gap(p, alpha))


# ------------------------------------------------------------ mass inversion

def default_branch(p: float, alpha: float) -> BranchSelector:
    """Branch carrying the least-energy bound state."""
    return BranchSelector.UPPER if is_two_branch(p, alpha) else BranchSelector.UNIQUE


def _validate_branch(p: float, alpha: float, branch: BranchSelector) -> None:
    two = is_two_branch(p, alpha)
    if two and branch is BranchSelector.UNIQUE:
        raise BranchInvalid("mass map is not monotone for 4 < p < 6, alpha > 0: choose lower or upper")
    if not two and branch is not BranchSelector.UNIQUE:
        raise BranchInvalid(f"mass map is monotone for p={p!r}, alpha={alpha!r}: use the unique branch")


def _gap_for_mass_increasing(p: float, alpha: float, mu: float, lo: float, hi: Optional[float]) -> float:
    """Gap g in (lo, hi) with M = mu, M increasing in g; hi=None means unbounded."""
    g = lambda gap: bs.mass_gap(p, alpha, gap) - mu
    if hi is None:
        hi = max(lo * 2.0, alpha * alpha)
        while g(hi) < 0.0:
            hi *= 4.0
    if lo <= 0.0:
        lo = min(hi, alpha * alpha) * 1e-4
        while g(lo) > 0.0:
            lo *= 1e-8
            if lo < _GAP_FLOOR:
                raise ConvergenceError("mass inversion: lower bracket underflow")
    return solve_log(g, lo, hi)


def _gap_for_mass_decreasing(p: float, alpha: float, mu: float, hi: float) -> float:
    """Gap g in (0, hi) with M = mu on a branch where M decreases in g."""
    g = lambda gap: mu - bs.mass_gap(p, alpha, gap)
    lo = hi * 1e-4
    while g(lo) > 0.0:
        lo *= 1e-8
        if lo < _GAP_FLOOR:
            raise ConvergenceError("mass inversion: lower bracket underflow")
    return solve_log(g, lo, hi)


def invert_mass(p: float, alpha: float, mu: float, branch: Optional[BranchSelector] = None) -> float:
    """Frequency omega with M(omega, alpha) = mu on the selected monotone branch."""
    _check_pa(p, alpha)
    _check_mu(mu)
    branch = default_branch(p, alpha) if branch is None else BranchSelector(branch)
    _validate_branch(p, alpha, branch)
    a2 = alpha * alpha

    if p == cf.P_CRITICAL:
        lo, hi = (0.0, cf.CRITICAL_MASS_HALFLINE) if alpha < 0 else (cf.CRITICAL_MASS_HALFLINE, cf.CRITICAL_MASS_LINE)
        if not lo < mu < hi:
            raise OutOfRange(f"mu={mu!r} outside the mass range ({lo}, {hi}) for p=6")
        s = math.sin(2.0 * mu / math.sqrt(3.0) - 0.5 * math.pi)
        return a2 / (s * s)

    if not is_two_branch(p, alpha):
        if alpha > 0.0:
            floor = soliton_mass_at_alpha_sq(p, alpha)
            if compare(mu, floor) <= 0:
                raise OutOfRange(f"mu={mu!r} must exceed ||phi_alpha^2||^2={floor!r}")
        return a2 + _gap_for_mass_increasing(p, alpha, mu, 0.0, None)

    gstar = _omega_star_gap(p, alpha)
    mstar = bs.mass_gap(p, alpha, gstar)
    c = compare(mu, mstar)
    if c < 0:
        raise OutOfRange(f"mu={mu!r} below the bound-state onset mass mu*={mstar!r}")
    if c == 0:
        return a2 + gstar
    if branch is BranchSelector.UPPER:
        return a2 + _gap_for_mass_increasing(p, alpha, mu, gstar, None)
    ceiling = soliton_mass_at_alpha_sq(p, alpha)
    if compare(mu, ceiling) >= 0:
        raise OutOfRange(f"lower branch only reaches masses below ||phi_alpha^2||^2={ceiling!r}")
    return a2 + _gap_for_mass_decreasing(p, alpha, mu, gstar)


# ------------------------------------------------------------ bound-state counts

def count_bound_states(p: float, alpha: float, mu: float) -> int:
    """Number of positive bound states of mass mu."""
    _check_pa(p, alpha)
    _check_mu(mu)
    if p == cf.P_CRITICAL:
        low, high = cf.CRITICAL_MASS_HALFLINE, cf.CRITICAL_MASS_LINE
        if alpha < 0:
            return 1 if compare(mu, low) < 0 else 0
        return 1 if compare(mu, low) > 0 and compare(mu, high) < 0 else 0
    if alpha < 0:
        return 1
    ceiling = soliton_mass_at_alpha_sq(p, alpha)
    if p <= 4.0:
        return 1 if compare(mu, ceiling) > 0 else 0
    c_star = compare(mu, mu_star(p, alpha))
    if c_star < 0:
        return 0
    if c_star == 0:
        return 1
    return 2 if compare(mu, ceiling) < 0 else 1


def least_energy_bound_state(p: float, alpha: float, mu: float) -> bs.BoundState:
    """The bound state of least energy among those of mass mu (the upper branch when there are two)."""
    if count_bound_states(p, alpha, mu) == 0:
        raise NoBoundState(f"no positive bound state of mass {mu!r} for p={p!r}, alpha={alpha!r}")
    return bs.bound_state(p, alpha, invert_mass(p, alpha, mu, default_branch(p, alpha)))


# ------------------------------------------------------------ existence thresholds

def gamma_p(p: float) -> float:
    """Coefficient of the alpha-threshold alpha < gamma_p mu^((p-2)/(6-p)) for p <= 4."""
    cf.check_power(p, critical=False)
    integral = full_profile_integral(p)
    return (2.0 / p) ** (2.0 / (6.0 - p)) * ((p - 2.0) / (4.0 * integral)) ** ((p - 2.0) / (6.0 - p))


def _upper_branch_K_gap(p: float, alpha: float, gap: float) -> float:
    """K = F(eta)/M^(2 beta + 1) along the upper branch, parametrised by the gap."""
    b = cf.beta_exponent(p)
    return bs.energy_gap(p, alpha, gap) / bs.mass_gap(p, alpha, gap) ** (2.0 * b + 1.0)


@lru_cache(maxsize=1024)
def _mu_tilde_gap(p: float, alpha: float) -> tuple[float, float]:
    theta = cf.theta(p)
    gstar = _omega_star_gap(p, alpha)
    ceiling = soliton_mass_at_alpha_sq(p, alpha)
    ghi = _gap_for_mass_increasing(p, alpha, ceiling, gstar, None)
    k = lambda gap: _upper_branch_K_gap(p, alpha, gap) + theta
    if not (k(gstar) > 0.0 and k(ghi) < 0.0):
        raise ConvergenceError("K + theta_p does not change sign on (mu*, ||phi_alpha^2||^2)")
    gap = solve_log(k, gstar, ghi)
    mu = bs.mass_gap(p, alpha, gap)
    if not (6.0 - p) / 2.0 * mu > bs._trace_term(p, alpha, gap):
        raise ConvergenceError("mu_tilde root is not on the upper branch")
    return mu, gap


def mu_tilde(p: float, alpha: float) -> float:
    """Ground-state onset mass for 4 < p < 6, alpha > 0: K(mu_tilde) = -theta_p on the upper branch.

    K decreases along the upper branch and the upper branch is increasing in
    omega, so the root is located in the frequency gap rather than in mu.
    """
    _check_pa(p, alpha)
    if not is_two_branch(p, alpha):
        raise DomainError("mu_tilde exists only for 4 < p < 6 and alpha > 0")
    return _mu_tilde_gap(p, alpha)[0]


def K_of_mu(p: float, alpha: float, mu: float) -> float:
    """K(mu) = F(eta^mu)/mu^(2 beta + 1) for the least-energy bound state of mass mu."""
    state = least_energy_bound_state(p, alpha, mu)
    return state.energy / mu ** (2.0 * cf.beta_exponent(p) + 1.0)


def mass_threshold(p: float, alpha: float) -> Threshold:
    """Ground states exist iff mu > value (or >= when inclusive); alpha > 0, p < 6 only."""
    if alpha < 0:
        return Threshold(0.0, False)
    if p <= 4.0:
        return Threshold(soliton_mass_at_alpha_sq(p, alpha), False)
    return Threshold(mu_tilde(p, alpha), True)


def alpha_threshold(p: float, mu: float) -> Threshold:
    """Ground states of mass mu exist iff alpha < value (alpha <= value when inclusive).

    For p <= 4 this is gamma_p mu^((p-2)/(6-p)); for p > 4 it is the inverse of
    the increasing map alpha -> mu_tilde(alpha), found by bracketed root finding.
    """
    cf.check_power(p, critical=False)
    _check_mu(mu)
    if p <= 4.0:
        return Threshold(gamma_p(p) * mu ** cf.beta_exponent(p), False)
    f = lambda a: mu_tilde(p, a) - mu
    lo, hi = 1.0, 1.0
    for _ in range(200):
        if f(lo) < 0.0:
            break
        lo /= 2.0
    else:
        raise ConvergenceError("alpha threshold: could not bracket from below")
    for _ in range(200):
        if f(hi) > 0.0:
            break
        hi *= 2.0
    else:
        raise ConvergenceError("alpha threshold: could not bracket from above")
    return Threshold(solve_bracketed(f, lo, hi, xtol=1e-15, rtol=1e-14), True)


def omega_asymptotics_check(p: float, alpha: float, mu: float) -> float:
    """omega(mu) / (2^(2 beta + 1) theta_p (2 beta + 1) mu^(2 beta)) on the least-energy branch; -> 1."""
    c = cf.compute_constants(p)
    w = invert_mass(p, alpha, mu, default_branch(p, alpha))
    lead = 2.0 ** (2.0 * c.beta + 1.0) * c.theta_p * (2.0 * c.beta + 1.0) * mu ** (2.0 * c.beta)
    return w / lead


# ------------------------------------------------------------ report

@dataclass(frozen=True)
class ThresholdReport:
    p: float
    alpha: float
    omega_star: Optional[float]
    mu_star: Optional[float]
    mu_tilde: Optional[float]
    soliton_mass_at_alpha_sq: float
    gamma_p: Optional[float]


def threshold_report(p: float, alpha: float) -> ThresholdReport:
    _check_pa(p, alpha)
    two = is_two_branch(p, alpha)
    return ThresholdReport(
        p=p,
        alpha=alpha,
        omega_star=omega_star(p, alpha) if two else None,
        mu_star=mu_star(p, alpha) if two else None,
        mu_tilde=mu_tilde(p, alpha) if two else None,
        soliton_mass_at_alpha_sq=soliton_mass_at_alpha_sq(p, alpha),
        gamma_p=None if p == cf.P_CRITICAL else gamma_p(p),
    )
