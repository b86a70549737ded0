"""Acceptance suite shared by ``halfline-nls verify`` and the test-suite.

Each criterion yields one or more named checks.  A check carries the regimes
it exercises so that a run can be restricted (``critical`` keeps the p = 6
checks only).
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

import numpy as np
from scipy.optimize import brentq

from . import boundstate as bs
from . import closedform as cf
from . import groundstate as gs
from . import minimizer as mn
from . import oracles as orc
from . import thresholds as th
from .errors import DomainError

REGIMES = ("subcritical", "critical")


@dataclass
class CheckResult:
    criterion: int
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"{mark} [{self.criterion}] {self.name}: {self.detail} ({self.seconds:.2f}s)"


@dataclass(frozen=True)
class Criterion:
    number: int
    title: str
    regimes: tuple
    run: Callable[[], list]


@dataclass
class SuiteReport:
    results: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def summary(self) -> dict:
        failed = [r for r in self.results if not r.passed]
        return {
            "checks": len(self.results),
            "passed": len(self.results) - len(failed),
            "failed": len(failed),
            "failed_names": ",".join(r.name for r in failed),
            "status": "pass" if not failed else "fail",
        }


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(abs(b), 1e-300)


def _fmt(x: float) -> str:
    return f"{x:.3e}"


# ------------------------------------------------------------ 1. critical constants

def _critical_constants() -> list:
    out = []
    worst = 0.0
    for a in (-1.0, 1.0, -2.5, 0.7):
        a2 = a * a
        at_far = bs.mass(6.0, a, a2 * 1e30)
        at_near = bs.mass_gap(6.0, a, a2 * 1e-30)
        low, high = (0.0, cf.CRITICAL_MASS_HALFLINE) if a < 0 else (cf.CRITICAL_MASS_HALFLINE, cf.CRITICAL_MASS_LINE)
        got = (at_near, at_far) if a < 0 else (at_far, at_near)
        err = max(abs(got[0] - low), abs(got[1] - high))
        worst = max(worst, err)
    out.append(("critical_mass_range", worst < 1e-9,
                f"max endpoint error {_fmt(worst)}; sqrt3 pi/4={cf.CRITICAL_MASS_HALFLINE:.10f}"))
    exact = cf.K6_HALFLINE == 16.0 / math.pi**2 and cf.compute_constants(3.0).K6_halfline == 16.0 / math.pi**2
    out.append(("K6_halfline_exact", exact, f"K6(R+)={cf.K6_HALFLINE!r}"))
    return out


# ------------------------------------------------------------ 2. p = 4 closed forms

def _p4_closed_forms() -> list:
    worst_m, worst_d = 0.0, 0.0
    for a in (-1.5, -0.3, 0.4, 1.0, 2.0):
        for w in (1.01 * a * a, 2.0 * a * a, 4.0, 37.0):
            if w <= a * a:
                continue
            worst_m = max(worst_m, _rel(bs.mass(4.0, a, w), 2.0 * (math.sqrt(w) + a)))
            worst_d = max(worst_d, _rel(bs.mass_derivative(4.0, a, w), 1.0 / math.sqrt(w)))
    phi = max(_rel(th.soliton_mass_at_alpha_sq(4.0, a), 4.0 * a) for a in (0.25, 1.0, 3.0))
    f = abs(bs.energy(4.0, 1.0, 4.0) + 3.0)
    return [
        ("p4_mass", worst_m < 1e-10, f"max rel error {_fmt(worst_m)}"),
        ("p4_mass_derivative", worst_d < 1e-10, f"max rel error {_fmt(worst_d)}"),
        ("p4_soliton_mass_alpha_sq", phi < 1e-10, f"max rel error {_fmt(phi)}"),
        ("p4_energy_alpha1_omega4", f < 1e-10, f"|F+3|={_fmt(f)}"),
    ]


# ------------------------------------------------------------ 3./4. quadrature and identities

_GRID_P = (2.5, 3.0, 4.5, 5.0, 5.5)
_GRID_A = (-2.0, -0.5, 0.5, 2.0)
_GRID_W = (1.1, 2.0, 10.0)


def _grid_cases():
    for p in _GRID_P:
        for a in _GRID_A:
            for k in _GRID_W:
                yield p, a, k * a * a


def _spatial_oracle() -> list:
    worst_m, worst_e = 0.0, 0.0
    for p, a, w in _grid_cases():
        state = bs.bound_state(p, a, w)
        n = orc.bound_state_norms(state)
        worst_m = max(worst_m, _rel(state.mass, n.mass))
        worst_e = max(worst_e, _rel(state.energy, n.energy(p, a)))
    # line energy law E = -theta_p mu^(2 beta + 1) against quadrature of the soliton
    worst_law = 0.0
    for p in (3.0, 4.0, 5.0):
        for mu in (0.5, 1.0, 2.0):
            nrm = orc.line_soliton_norms(p, cf.omega_line(p, mu))
            law = -cf.theta(p) * mu ** (2.0 * cf.beta_exponent(p) + 1.0)
            worst_law = max(worst_law, _rel(law, nrm.energy(p)))
    return [
        ("mass_vs_spatial_quadrature", worst_m < 1e-7, f"max rel error {_fmt(worst_m)} over 60 cases"),
        ("energy_vs_spatial_quadrature", worst_e < 1e-7, f"max rel error {_fmt(worst_e)} over 60 cases"),
        ("line_energy_law_theta", worst_law < 1e-7, f"max rel error {_fmt(worst_law)}"),
    ]


def _central(f, x, h):
    return (f(x + h) - f(x - h)) / (2.0 * h)


def _identities() -> list:
    worst_poh, worst_neh, worst_dm, worst_df = 0.0, 0.0, 0.0, 0.0
    for p, a, w in _grid_cases():
        state = bs.bound_state(p, a, w)
        n = orc.bound_state_norms(state)
        worst_poh = max(worst_poh, abs(orc.pohozaev_residual(p, w, n)))
        worst_neh = max(worst_neh, abs(orc.nehari_residual(p, a, w, n)))
        h = 1e-4 * (w - a * a)
        dm = _central(lambda x: bs.mass(p, a, x), w, h)
        df = _central(lambda x: bs.energy(p, a, x), w, h)
        worst_dm = max(worst_dm, abs(dm - bs.mass_derivative(p, a, w)) / max(1.0, abs(dm)))
        worst_df = max(worst_df, abs(df - bs.energy_derivative_omega(p, a, w)) / max(1.0, abs(df)))
    return [
        ("pohozaev_identity", worst_poh < 1e-7, f"max residual {_fmt(worst_poh)}"),
        ("nehari_identity", worst_neh < 1e-7, f"max residual {_fmt(worst_neh)}"),
        ("mass_derivative_vs_fd", worst_dm < 1e-6, f"max error {_fmt(worst_dm)}"),
        ("energy_derivative_vs_fd", worst_df < 1e-6, f"max error {_fmt(worst_df)}"),
    ]


# ------------------------------------------------------------ 5. thresholds at p = 5

def _threshold_structure() -> list:
    p, a = 5.0, 1.0
    theta = cf.theta(p)
    w_star = th.omega_star(p, a)
    dm = abs(bs.mass_derivative(p, a, w_star))
    m_star, m_tilde = th.mu_star(p, a), th.mu_tilde(p, a)
    ceiling = th.soliton_mass_at_alpha_sq(p, a)
    k_tilde = abs(th.K_of_mu(p, a, m_tilde) + theta)
    k_star = th.K_of_mu(p, a, m_star)
    k_ceiling = th.K_of_mu(p, a, ceiling)
    return [
        ("omega_star_stationary", dm < 1e-8, f"|M'(omega*)|={_fmt(dm)} at omega*={w_star:.8f}"),
        ("mass_threshold_ordering", m_star < m_tilde < ceiling,
         f"mu*={m_star:.8f} < mu~={m_tilde:.8f} < |phi_1|^2={ceiling:.8f}"),
        ("K_at_mu_tilde", k_tilde < 1e-8, f"|K(mu~)+theta_5|={_fmt(k_tilde)}"),
        ("K_bracket_signs", k_star > -theta > k_ceiling,
         f"K(mu*)={k_star:.6f} > -theta_5={-theta:.6f} > K(|phi_1|^2)={k_ceiling:.6f}"),
    ]


# ------------------------------------------------------------ 6. alpha thresholds

def _alpha_thresholds() -> list:
    worst_root, worst_gamma = 0.0, 0.0
    for p in (3.0, 3.5, 4.0):
        for mu in (0.3, 1.0, 5.0):
            got = th.alpha_threshold(p, mu).value
            root = brentq(lambda a: cf.soliton_mass_line(p, a * a) - mu, 1e-8, 1e4, xtol=1e-15, rtol=1e-15)
            worst_root = max(worst_root, _rel(got, root))
            worst_gamma = max(worst_gamma, _rel(got, th.gamma_p(p) * mu ** cf.beta_exponent(p)))
    above = []
    for mu in (2.0, 3.0, 5.0):
        above.append(th.alpha_threshold(5.0, mu).value > th.gamma_p(5.0) * mu**3)
    tildes = [th.mu_tilde(5.0, a) for a in (0.5, 1.0, 2.0)]
    return [
        ("alpha_threshold_vs_root", worst_root < 1e-8, f"max rel error {_fmt(worst_root)}"),
        ("alpha_threshold_vs_gamma", worst_gamma < 1e-8, f"max rel error {_fmt(worst_gamma)}"),
        ("p5_h_tilde_above_gamma", all(above), f"h~(mu) > gamma_5 mu^3 at mu=2,3,5: {above}"),
        ("p5_mu_tilde_increasing", tildes[0] < tildes[1] < tildes[2],
         "mu~(0.5,1,2)=" + ",".join(f"{t:.6f}" for t in tildes)),
    ]


# ------------------------------------------------------------ 7. counting

def scan_root_count(p: float, alpha: float, mu: float, points: int = 6000) -> int:
    """Sign changes of M(omega) - mu on a dense log grid of omega - alpha^2."""
    a2 = alpha * alpha
    gaps = a2 * np.logspace(-14.0, 14.0, points)
    vals = np.array([bs.mass(p, alpha, a2 + g) - mu for g in gaps])
    return int(np.count_nonzero(np.signbit(vals[1:]) != np.signbit(vals[:-1])))


def counting_cases(n: int = 50, seed: int = 7):
    rng = np.random.default_rng(seed)
    powers = (2.5, 3.0, 3.5, 4.0, 4.5, 5.0, 5.5, 6.0)
    cases = []
    for i in range(n):
        p = powers[i % len(powers)]
        a = float(rng.choice((-1.0, 1.0)) * rng.uniform(0.3, 2.0))
        if p == cf.P_CRITICAL:
            ref = cf.CRITICAL_MASS_HALFLINE
            factor = rng.uniform(0.3, 2.2)
        else:
            ref = th.soliton_mass_at_alpha_sq(p, abs(a))
            factor = rng.uniform(0.6, 1.6)
        cases.append((p, a, float(ref * factor)))
    return cases


def _counting() -> list:
    mismatches = []
    cases = counting_cases()
    for p, a, mu in cases:
        got, want = th.count_bound_states(p, a, mu), scan_root_count(p, a, mu)
        if got != want:
            mismatches.append((p, a, mu, got, want))
    detail = f"{len(cases) - len(mismatches)}/{len(cases)} match"
    if mismatches:
        detail += f"; first mismatch {mismatches[0]}"
    return [("bound_state_count_vs_scan", not mismatches, detail)]


# ------------------------------------------------------------ 8. flow oracle

FLOW_CASES = ((3.0, -1.0, 1.0), (4.0, 1.0, 6.0), (5.0, 1.0, None))
FLOW_N = (2048, 4096, 8192)


def flow_length(state: bs.BoundState, decay_lengths: float = 8.0) -> float:
    """Peak position plus a few decay lengths; eight keep the boundary spacing fine enough."""
    return max(state.shift, 0.0) + decay_lengths / math.sqrt(state.omega)


def _flow_oracle() -> list:
    out = []
    for p, a, mu in FLOW_CASES:
        if mu is None:
            mu = 1.05 * th.mu_tilde(p, a)
        state = th.least_energy_bound_state(p, a, mu)
        L = flow_length(state)
        energies, last = [], None
        for n in FLOW_N:
            last = mn.normalized_gradient_flow(p, a, mu, mn.Grid(L, n))
            energies.append(last.energy)
        order = mn.observed_order(*energies)
        rel = _rel(energies[-1], state.energy)
        el = mn.el_residual(last.field, p, a)
        ok = (last.converged and rel < 1e-3 and 1.8 <= order <= 2.2
              and el.interior_residual < 1e-3 and el.boundary_residual < 1e-2)
        out.append((
            f"flow_p{p:g}_alpha{a:g}",
            ok,
            f"rel energy error {_fmt(rel)}, order {order:.4f}, interior {_fmt(el.interior_residual)}, "
            f"boundary {_fmt(el.boundary_residual)}, status {last.status.value}",
        ))
    return out


# ------------------------------------------------------------ 9. critical dichotomy

PLATEAU_GRID = mn.Grid(120.0, 4096)


def _critical_dichotomy() -> list:
    mu = 0.9 * cf.CRITICAL_MASS_HALFLINE
    res = mn.normalized_gradient_flow(6.0, 1.0, mu, PLATEAU_GRID, max_iter=5000)
    level = gs.ground_energy_level(6.0, 1.0, mu)
    plateau = -1e-3 <= res.energy <= 1e-3 and level.kind is gs.LevelKind.ZERO
    demo = gs.critical_scaling_demo(-1.0, cf.CRITICAL_MASS_HALFLINE)
    return [
        ("critical_plateau_zero", plateau, f"flow energy {_fmt(res.energy)}, level {level.tag}"),
        ("critical_scaling_divergence", demo.strictly_decreasing and demo.crosses_floor,
         f"{len(demo.energies)} energies, last {_fmt(demo.energies[-1])}, floor {_fmt(demo.floor)}"),
    ]


# ------------------------------------------------------------ 10. asymptotics

def _asymptotics() -> list:
    r3 = abs(th.omega_asymptotics_check(3.0, 1.0, 1e3) - 1.0)
    r4 = abs(th.omega_asymptotics_check(3.0, 1.0, 1e4) - 1.0)
    return [
        ("omega_asymptotics_decreasing", r4 < r3, f"|r-1| {_fmt(r3)} at 1e3 -> {_fmt(r4)} at 1e4"),
        ("omega_asymptotics_below_0.05", r4 < 0.05, f"|r-1|={r4:.5f} at mu=1e4"),
    ]


CRITERIA = (
    Criterion(1, "critical constants", ("critical",), _critical_constants),
    Criterion(2, "p=4 closed forms", ("subcritical",), _p4_closed_forms),
    Criterion(3, "quadrature vs spatial oracle", ("subcritical",), _spatial_oracle),
    Criterion(4, "identity suite", ("subcritical",), _identities),
    Criterion(5, "threshold structure", ("subcritical",), _threshold_structure),
    Criterion(6, "alpha thresholds", ("subcritical",), _alpha_thresholds),
    Criterion(7, "bound-state counting", ("subcritical", "critical"), _counting),
    Criterion(8, "minimizer oracle agreement", ("subcritical",), _flow_oracle),
    Criterion(9, "critical dichotomy", ("critical",), _critical_dichotomy),
    Criterion(10, "omega asymptotics", ("subcritical",), _asymptotics),
)


def select(regime: Optional[str] = None, numbers: Optional[Iterable[int]] = None) -> list:
    if regime is not None and regime not in REGIMES:
        raise DomainError(f"unknown regime {regime!r}; choose from {', '.join(REGIMES)}")
    wanted = None if numbers is None else set(numbers)
    return [
        c for c in CRITERIA
        if (regime is None or regime in c.regimes) and (wanted is None or c.number in wanted)
    ]


def run_criterion(criterion: Criterion) -> list:
    start = time.perf_counter()
    try:
        rows = criterion.run()
    except Exception as exc:  # a crash is a failed check, not a crashed suite
        rows = [(criterion.title.replace(" ", "_"), False, f"raised {type(exc).__name__}: {exc}")]
    elapsed = time.perf_counter() - start
    return [CheckResult(criterion.number, name, bool(ok), detail, elapsed) for name, ok, detail in rows]


def run_suite(regime: Optional[str] = None, numbers: Optional[Iterable[int]] = None) -> SuiteReport:
    report = SuiteReport()
    for c in select(regime, numbers):
        report.results.extend(run_criterion(c))
    return report
