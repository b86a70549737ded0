"""Double-exponential (tanh-sinh) quadrature with endpoint-distance aware integrands.

The bound-state mass integrals have the form

    I(s0) = int_{s0}^{1} (1 - s^2)^k ds,   k = (4 - p) / (p - 2),

which for p > 4 is singular at s = +-1.  Substituting s = -cos(u) turns it into

    J(L) = int_0^L sin(u)^g du,   g = 2k + 1 = (6 - p) / (p - 2) > 0,   L = arccos(s0),

a bounded integrand with power-law behaviour at u = 0 (and at u = pi when L -> pi).
Tanh-sinh converges double-exponentially for such endpoint behaviour, provided the
integrand is evaluated from the *distance* to each endpoint rather than from the
abscissa itself, so the rule below hands both distances to the integrand.
"""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Callable

import numpy as np

_T_MAX = 4.0
_MAX_LEVEL = 9


@lru_cache(maxsize=None)
def _rule(level: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Nodes of the level-`level` rule on [0, 1] as (left distance, right distance, weight)."""
    h = 2.0**-level
    t = np.arange(-_T_MAX, _T_MAX + 0.5 * h, h)
    v = 0.5 * math.pi * np.sinh(t)
    left = 1.0 / (1.0 + np.exp(-2.0 * v))
    right = 1.0 / (1.0 + np.exp(2.0 * v))
    w = 0.25 * math.pi * h * np.cosh(t) / np.cosh(v) ** 2
    for arr in (left, right, w):
        arr.setflags(write=False)
    return left, right, w


def tanh_sinh(
    f: Callable[[np.ndarray, np.ndarray], np.ndarray],
    length: float,
    rtol: float = 1e-14,
    atol: float = 1e-300,
) -> float:
    """Integrate over an interval of the given length.

    ``f(d_left, d_right)`` receives the distances of each node to the two
    endpoints (both strictly positive and accurate to full relative precision)
    and must return the integrand values there.
    """
    if length == 0.0:
        return 0.0
    if length < 0.0:
        raise ValueError("length must be non-negative")
    prev = None
    for level in range(2, _MAX_LEVEL + 1):
        left, right, w = _rule(level)
        total = length * float(np.dot(w, f(length * left, length * right)))
        if prev is not None and abs(total - prev) <= max(rtol * abs(total), atol):
            return total
        prev = total
    return total


def sine_power_integral(g: float, upper: float, upper_complement: float | None = None) -> float:
    """Return int_0^upper sin(u)**g du for g >= 0 and 0 < upper < pi.

    ``upper_complement`` is pi - upper; pass it when upper is close to pi so the
    integrand near the right endpoint keeps full precision.
    """
    if not 0.0 <= upper <= math.pi:
        raise ValueError("upper must lie in [0, pi]")
    if g == 0.0:
        return upper
    if upper_complement is None:
        upper_complement = math.pi - upper

    def integrand(d_left: np.ndarray, d_right: np.ndarray) -> np.ndarray:
        # sin(u) = sin(pi - u); pick whichever argument is small and exact
        to_pi = upper_complement + d_right
        arg = np.where(d_left <= to_pi, d_left, to_pi)
        return np.sin(arg) ** g

    return tanh_sinh(integrand, upper)


def profile_integral(p: float, lower: float | None = None, *, arc: float | None = None,
                     arc_complement: float | None = None) -> float:
    """Return int_{lower}^{1} (1 - s^2)^((4-p)/(p-2)) ds for 2 < p <= 6.

    Either give ``lower`` in [-1, 1] or the arc length ``arc = arccos(lower)``
    (with ``arc_complement = pi - arc``) when the lower limit sits close to -1
    or 1 and must be resolved beyond double precision in s.
    """
    g = (6.0 - p) / (p - 2.0)
    if arc is None:
        if lower is None:
            raise ValueError("give lower or arc")
        if not -1.0 <= lower <= 1.0:
            raise ValueError("lower must lie in [-1, 1]")
        arc = math.acos(lower)
        arc_complement = math.acos(-lower)
    return sine_power_integral(g, arc, arc_complement)


def full_profile_integral(p: float) -> float:
    """int_0^1 (1 - s^2)^((4-p)/(p-2)) ds, the integral appearing in the line soliton mass."""
    return sine_power_integral((6.0 - p) / (p - 2.0), 0.5 * math.pi, 0.5 * math.pi)
