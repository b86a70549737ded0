"""Finite-difference energy on a truncated half-line and its mass-constrained minimisation.

Discretisation on x_i = i h, i = 0..n, with u_n = 0:

    F_h(u) = 1/2 sum_i ((u_{i+1} - u_i)/h)^2 h - (1/p) sum_i w_i |u_i|^p + (alpha/2) u_0^2,
    M_h(u) = sum_i w_i u_i^2,   w = h (1/2, 1, ..., 1, 1/2)   (trapezoid).

The Robin condition is natural for this functional, so it only enters through
the boundary term.  The minimiser is a normalised gradient flow whose linear
part is taken implicitly (a preconditioned descent step) followed by rescaling
onto the mass sphere; steps that raise the energy are rejected and retried
with half the step.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.linalg import solve_banded

from . import closedform as cf
from . import thresholds as th
from .errors import DomainError, NoBoundState

#: Energies below this value classify a run as unbounded below (critical regime).
DIVERGENCE_FLOOR = -1e6


@dataclass(frozen=True)
class Grid:
    L: float
    n: int

    def __post_init__(self):
        if not self.L > 0.0:
            raise DomainError("grid length must be positive")
        if self.n < 64:
            raise DomainError("grid needs at least 64 intervals")

    @property
    def h(self) -> float:
        return self.L / self.n

    @property
    def x(self) -> np.ndarray:
        return np.linspace(0.0, self.L, self.n + 1)

    @property
    def weights(self) -> np.ndarray:
        w = np.full(self.n + 1, self.h)
        w[0] = w[-1] = 0.5 * self.h
        return w


@dataclass(frozen=True)
class DiscreteField:
    values: np.ndarray
    grid: Grid
    mass: float
    energy: float


def discrete_mass(values: np.ndarray, grid: Grid) -> float:
    u = np.asarray(values, dtype=float)
    return float(np.dot(grid.weights[:-1], u[:-1] ** 2))


def discrete_energy(values: np.ndarray, p: float, alpha: float, grid: Grid) -> float:
    """F_h(u); the last sample is treated as zero."""
    u = np.array(values, dtype=float)
    u[-1] = 0.0
    h = grid.h
    kinetic = 0.5 * float(np.sum(np.diff(u) ** 2)) / h
    potential = float(np.dot(grid.weights, np.abs(u) ** p)) / p
    return kinetic - potential + 0.5 * alpha * u[0] ** 2


def make_field(values: np.ndarray, p: float, alpha: float, grid: Grid) -> DiscreteField:
    u = np.array(values, dtype=float)
    u[-1] = 0.0
    if not np.all(np.isfinite(u)):
        raise FloatingPointError("non-finite samples in field")
    return DiscreteField(u, grid, discrete_mass(u, grid), discrete_energy(u, p, alpha, grid))


def normalize(values: np.ndarray, mu: float, grid: Grid) -> np.ndarray:
    u = np.array(values, dtype=float)
    u[-1] = 0.0
    return u * math.sqrt(mu / discrete_mass(u, grid))


# ------------------------------------------------------------ flow

class FlowStatus(enum.Enum):
    CONVERGED = "converged"
    MAX_ITER = "max_iter"  # non-convergence within the iteration budget
    DIVERGED = "diverged"  # energy fell below the divergence floor


@dataclass
class FlowResult:
    field: DiscreteField
    energy: float
    iterations: int
    status: FlowStatus
    history: list = field(default_factory=list, repr=False)

    @property
    def converged(self) -> bool:
        return self.status is FlowStatus.CONVERGED


def default_length(omega_guess: Optional[float]) -> float:
    if omega_guess is None:
        return 30.0
    return max(30.0, 50.0 / math.sqrt(omega_guess))


def initial_field(p: float, alpha: float, mu: float, grid: Grid, seed: int = 0) -> np.ndarray:
    """Closed-form least-energy bound state sampled on the grid, else a random positive bump."""
    try:
        state = th.least_energy_bound_state(p, alpha, mu)
        u = state(grid.x)
    except (NoBoundState, DomainError):
        rng = np.random.default_rng(seed)
        x = grid.x
        centre = rng.uniform(0.05, 0.25) * grid.L
        width = rng.uniform(0.5, 2.0)
        u = np.exp(-0.5 * ((x - centre) / width) ** 2) * (1.0 + 0.05 * rng.random(x.size))
    return normalize(u, mu, grid)


def _stiffness_bands(grid: Grid, alpha: float) -> np.ndarray:
    """Banded (1, 1) storage of the P1 stiffness matrix on nodes 0..n-1 plus the Robin term."""
    m, h = grid.n, grid.h
    ab = np.zeros((3, m))
    ab[0, 1:] = -1.0 / h
    ab[1, :] = 2.0 / h
    ab[1, 0] = 1.0 / h + alpha
    ab[2, :-1] = -1.0 / h
    return ab


def _nonlinearity(u: np.ndarray, p: float) -> np.ndarray:
    return np.abs(u) ** (p - 2.0) * u


def _nehari_frequency(u: np.ndarray, p: float, alpha: float, grid: Grid) -> float:
    kin = float(np.sum(np.diff(u) ** 2)) / grid.h
    pow_p = float(np.dot(grid.weights, np.abs(u) ** p))
    return (pow_p - kin - alpha * u[0] ** 2) / discrete_mass(u, grid)


def _newton_polish(u, p, alpha, mu, grid, stiff, max_steps=12):
    """Newton on the bordered system A u - W f(u) + lam W u = 0, u^T W u = mu.

    Returns the polished samples, or None if the iteration does not settle.
    """
    w = grid.weights[:-1]
    v = u[:-1].copy()
    lam = _nehari_frequency(u, p, alpha, grid)

    def apply_stiff(x):
        out = stiff[1] * x
        out[:-1] += stiff[0, 1:] * x[1:]
        out[1:] += stiff[2, :-1] * x[:-1]
        return out

    eps = 64.0 * np.finfo(float).eps
    for _ in range(max_steps):
        g = apply_stiff(v) - w * _nonlinearity(v, p) + lam * w * v
        c = float(np.dot(w, v * v)) - mu
        # roundoff floor of the residual evaluation
        vmax = float(np.max(np.abs(v)))
        floor = eps * vmax * (float(np.max(np.abs(stiff[1]))) + grid.h * (abs(lam) + vmax ** (p - 2.0)))
        if np.max(np.abs(g)) <= floor and abs(c) <= eps * mu:
            break
        jac = stiff.copy()
        jac[1] += w * (lam - (p - 1.0) * np.abs(v) ** (p - 2.0))
        wv = w * v
        try:
            rhs = np.column_stack((-g, wv))
            sol = solve_banded((1, 1), jac, rhs)
        except (np.linalg.LinAlgError, ValueError):
            return None
        y, z = sol[:, 0], sol[:, 1]
        denom = 2.0 * float(np.dot(wv, z))
        if denom == 0.0 or not np.isfinite(denom):
            return None
        dlam = (2.0 * float(np.dot(wv, y)) + c) / denom
        v = v + y - dlam * z
        lam += dlam
        if not np.all(np.isfinite(v)):
            return None
    else:
        return None
    out = np.zeros_like(u)
    out[:-1] = v
    return out


def normalized_gradient_flow(
    p: float,
    alpha: float,
    mu: float,
    grid: Grid,
    step: float = 1.0,
    tol: float = 1e-10,
    max_iter: int = 20000,
    initial: Optional[np.ndarray] = None,
    seed: int = 0,
    floor: float = DIVERGENCE_FLOOR,
    polish: bool = True,
) -> FlowResult:
    """Minimise F_h on {M_h = mu} by a normalised, linearly implicit gradient flow.

    Each step solves (W + tau (A + s W)) v = W (u + tau (s u + |u|^(p-2) u)),
    A the stiffness/Robin matrix, W the mass weights, s a positive shift, and
    rescales v to mass mu.  A step is accepted only if it lowers the energy;
    otherwise tau is halved.  The descent stops when the relative energy
    decrease of an accepted step falls below ``tol``.

    Once the energy is flat to roundoff it no longer resolves the remaining
    Euler-Lagrange residual (which carries a 1/h^2), so a converged descent is
    finished by a few Newton steps on the discrete critical-point system.  The
    polished field replaces the descent result only if its energy is not
    larger beyond roundoff.
    """
    cf.check_power(p)
    if not mu > 0.0:
        raise DomainError("mu must be positive")
    w = grid.weights[:-1]
    u = initial_field(p, alpha, mu, grid, seed) if initial is None else normalize(initial, mu, grid)
    stiff = _stiffness_bands(grid, alpha)
    # keeps W + tau (A + s W) positive definite for attractive alpha
    shift = 1.0 + 2.0 * alpha * alpha
    energy = discrete_energy(u, p, alpha, grid)
    history = [energy]
    tau = step
    status = FlowStatus.MAX_ITER
    it = 0
    while it < max_iter:
        it += 1
        un = u[:-1]
        rhs = w * (un + tau * (shift * un + _nonlinearity(un, p)))
        ab = tau * stiff
        ab[1] += w * (1.0 + tau * shift)
        trial = np.zeros_like(u)
        trial[:-1] = solve_banded((1, 1), ab, rhs)
        trial = normalize(trial, mu, grid)
        e_trial = discrete_energy(trial, p, alpha, grid)
        if not e_trial <= energy:
            tau *= 0.5
            if tau < 1e-14:
                # no descent direction left at this precision
                status = FlowStatus.CONVERGED
                break
            continue
        decrease = energy - e_trial
        u, energy = trial, e_trial
        history.append(energy)
        if energy < floor:
            status = FlowStatus.DIVERGED
            break
        if decrease <= tol * max(abs(energy), 1e-300):
            status = FlowStatus.CONVERGED
            break
        tau = min(tau * 1.5, 1e6)
    if polish and status is FlowStatus.CONVERGED:
        polished = _newton_polish(u, p, alpha, mu, grid, stiff)
        if polished is not None:
            polished = normalize(polished, mu, grid)
            e_pol = discrete_energy(polished, p, alpha, grid)
            if e_pol <= energy + 64.0 * np.finfo(float).eps * abs(energy):
                u, energy = polished, e_pol
                history.append(energy)
    return FlowResult(make_field(u, p, alpha, grid), energy, it, status, history)


# ------------------------------------------------------------ diagnostics

@dataclass(frozen=True)
class ELResidual:
    omega_estimate: float
    interior_residual: float
    boundary_residual: float


def el_residual(field: DiscreteField, p: float, alpha: float) -> ELResidual:
    """Frequency from the Nehari quotient and residuals of the discrete Euler-Lagrange system."""
    u, grid = field.values, field.grid
    h = grid.h
    omega = _nehari_frequency(u, p, alpha, grid)
    lap = (u[2:] - 2.0 * u[1:-1] + u[:-2]) / h**2
    interior = -lap - np.abs(u[1:-1]) ** (p - 2.0) * u[1:-1] + omega * u[1:-1]
    boundary = abs((u[1] - u[0]) / h - alpha * u[0])
    return ELResidual(omega, float(np.max(np.abs(interior))), boundary)


@dataclass(frozen=True)
class RefinementRow:
    n: int
    h: float
    energy: float
    iterations: int


@dataclass(frozen=True)
class RefinementTable:
    rows: list
    order: float
    extrapolated: float


def observed_order(e1: float, e2: float, e3: float, ratio: float = 2.0) -> float:
    """Convergence order from three results on grids refined by ``ratio``."""
    return math.log(abs((e1 - e2) / (e2 - e3))) / math.log(ratio)


def refinement_study(p: float, alpha: float, mu: float, grids: Sequence[Grid], **flow_kw) -> RefinementTable:
    """Flow energies on successively doubled grids, observed order and Richardson limit."""
    if len(grids) < 3:
        raise DomainError("need at least three grids")
    rows = []
    for g in grids:
        res = normalized_gradient_flow(p, alpha, mu, g, **flow_kw)
        rows.append(RefinementRow(g.n, g.h, res.energy, res.iterations))
    e1, e2, e3 = (r.energy for r in rows[-3:])
    ratio = grids[-2].h / grids[-1].h
    q = observed_order(e1, e2, e3, ratio)
    extrapolated = e3 + (e3 - e2) / (ratio**q - 1.0)
    return RefinementTable(rows, q, extrapolated)
