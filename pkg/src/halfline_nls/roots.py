"""Bracketed scalar root finding.

Every target in this package is monotone on its bracket, so Brent's method
(bisection safeguarded secant / inverse quadratic steps) always converges; the
helpers here only take care of locating a sign change first.
"""

from __future__ import annotations

import math
from typing import Callable

from scipy.optimize import brentq

from .errors import ConvergenceError

XTOL = 1e-300
RTOL = 4 * 2.220446049250313e-16


def solve_bracketed(f: Callable[[float], float], lo: float, hi: float,
                    xtol: float = XTOL, rtol: float = RTOL, maxiter: int = 400) -> float:
    """Root of ``f`` in [lo, hi]; raises ConvergenceError without a sign change."""
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if math.copysign(1.0, flo) == math.copysign(1.0, fhi):
        raise ConvergenceError(f"no sign change on [{lo!r}, {hi!r}]: f={flo!r}, {fhi!r}")
    try:
        return brentq(f, lo, hi, xtol=xtol, rtol=rtol, maxiter=maxiter)
    except RuntimeError as exc:  # brentq signals non-convergence this way
        raise ConvergenceError(str(exc)) from exc


def expand_upward(f: Callable[[float], float], lo: float, hi: float,
                  factor: float = 2.0, max_steps: int = 200) -> tuple[float, float]:
    """Grow ``hi`` geometrically until f(lo) and f(hi) differ in sign."""
    flo = f(lo)
    for _ in range(max_steps):
        fhi = f(hi)
        if math.copysign(1.0, fhi) != math.copysign(1.0, flo) or fhi == 0.0:
            return lo, hi
        lo, flo = hi, fhi
        hi *= factor
    raise ConvergenceError("bracket expansion failed")


def solve_log(f: Callable[[float], float], lo: float, hi: float, **kw) -> float:
    """Root of ``f`` on positive [lo, hi], searched in log space.

    Used for frequency gaps that span hundreds of orders of magnitude.
    """
    u = solve_bracketed(lambda s: f(math.exp(s)), math.log(lo), math.log(hi),
                        xtol=kw.pop("xtol", 1e-15), **kw)
    return math.exp(u)
