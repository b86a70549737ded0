import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from halfline_nls import closedform as cf
from halfline_nls import minimizer as mn
from halfline_nls import thresholds as th
from halfline_nls.acceptance import flow_length
from halfline_nls.errors import DomainError


def bump(grid, centre, width=1.0):
    x = grid.x
    return np.exp(-0.5 * ((x - centre) / width) ** 2)


def test_zero_field_has_zero_energy():
    g = mn.Grid(10.0, 128)
    assert mn.discrete_energy(np.zeros(129), 4.0, 1.0, g) == 0.0
    assert mn.discrete_mass(np.zeros(129), g) == 0.0


def test_sampled_exact_state_energy_converges():
    state = th.least_energy_bound_state(4.0, 1.0, 6.0)
    errs = []
    for n in (4096, 16384):
        g = mn.Grid(20.0, n)
        errs.append(abs(mn.discrete_energy(state(g.x), 4.0, 1.0, g) + 3.0))
    assert errs[0] < 1e-4
    assert errs[1] < 2e-6
    assert errs[0] / errs[1] == pytest.approx(16.0, rel=0.05)


def test_half_soliton_energy_matches_neumann_level():
    # alpha = 0 with the line soliton peaked at the wall: half the line mass and energy
    p, omega = 3.0, 1.0
    g = mn.Grid(40.0, 16384)
    u = cf.soliton_value(p, omega, g.x)
    mass_line = cf.soliton_mass_line(p, omega)
    assert mn.discrete_mass(u, g) == pytest.approx(0.5 * mass_line, rel=1e-6)
    e_line = cf.soliton_energy_line(p, mass_line)
    assert mn.discrete_energy(u, p, 0.0, g) == pytest.approx(0.5 * e_line, rel=1e-6)
    assert 0.5 * e_line == pytest.approx(cf.neumann_halfline_energy(p, 0.5 * mass_line), rel=1e-12)


@given(
    scale=st.floats(0.1, 10.0),
    mu=st.floats(0.05, 50.0),
    centre=st.floats(0.5, 8.0),
)
def test_normalize_hits_the_mass(scale, mu, centre):
    g = mn.Grid(20.0, 256)
    u = mn.normalize(scale * bump(g, centre), mu, g)
    assert mn.discrete_mass(u, g) == pytest.approx(mu, rel=1e-12)
    assert u[-1] == 0.0


def test_grid_validation():
    with pytest.raises(DomainError):
        mn.Grid(0.0, 128)
    with pytest.raises(DomainError):
        mn.Grid(10.0, 8)
    with pytest.raises(DomainError):
        mn.normalized_gradient_flow(4.0, 1.0, -1.0, mn.Grid(10.0, 128))


def test_flow_from_random_data_repulsive_p3():
    g = mn.Grid(30.0, 8192)
    res = mn.normalized_gradient_flow(3.0, -1.0, 1.0, g, initial=bump(g, 6.0, 2.0))
    exact = th.least_energy_bound_state(3.0, -1.0, 1.0).energy
    assert res.converged
    assert res.energy == pytest.approx(exact, rel=1e-4)


def test_history_is_monotone():
    g = mn.Grid(20.0, 2048)
    res = mn.normalized_gradient_flow(4.0, 1.0, 6.0, g, initial=bump(g, 3.0))
    hist = np.array(res.history)
    slack = 64.0 * np.finfo(float).eps * np.abs(hist[:-1])
    assert np.all(np.diff(hist) <= slack)
    assert res.field.mass == pytest.approx(6.0, rel=1e-12)


EXISTENCE_CASES = [
    (3.0, -1.0, 1.0),
    (3.0, -0.5, 2.0),
    (4.0, 1.0, 6.0),
    (4.0, -1.0, 1.0),
    (2.5, -1.0, 1.0),
    (3.5, 1.0, None),
    (3.0, 1.0, 10.0),
    (4.5, -1.0, 1.0),
    (5.0, -1.0, 0.5),
    (5.5, -0.5, 0.3),
]


@pytest.mark.parametrize("p, alpha, mu", EXISTENCE_CASES)
def test_flow_agrees_with_closed_form(p, alpha, mu):
    if mu is None:
        mu = 2.0 * th.soliton_mass_at_alpha_sq(p, alpha)
    state = th.least_energy_bound_state(p, alpha, mu)
    L = flow_length(state, 30.0)
    errs = []
    for n in (1024, 4096):
        g = mn.Grid(L, n)
        start = bump(g, max(state.shift, 0.0) + 0.5 / math.sqrt(state.omega), 1.0 / math.sqrt(state.omega))
        res = mn.normalized_gradient_flow(p, alpha, mu, g, initial=start)
        assert res.converged
        errs.append(abs(res.energy / state.energy - 1.0))
    assert errs[1] < 1e-3
    assert errs[1] < errs[0]


def test_el_residual_on_exact_state():
    state = th.least_energy_bound_state(4.0, 1.0, 6.0)
    L = flow_length(state, 30.0)
    out = []
    for n in (2048, 4096):
        g = mn.Grid(L, n)
        out.append(mn.el_residual(mn.make_field(state(g.x), 4.0, 1.0, g), 4.0, 1.0))
    assert out[0].interior_residual / out[1].interior_residual == pytest.approx(4.0, rel=0.05)
    assert out[0].boundary_residual / out[1].boundary_residual == pytest.approx(2.0, rel=0.05)
    assert out[1].omega_estimate == pytest.approx(state.omega, rel=1e-3)


def test_refinement_order_and_richardson():
    state = th.least_energy_bound_state(4.0, 1.0, 6.0)
    L = flow_length(state, 30.0)
    table = mn.refinement_study(4.0, 1.0, 6.0, [mn.Grid(L, n) for n in (1024, 2048, 4096)])
    assert 1.8 <= table.order <= 2.2
    assert table.extrapolated == pytest.approx(state.energy, abs=1e-6)


def test_refinement_needs_three_grids():
    with pytest.raises(DomainError):
        mn.refinement_study(4.0, 1.0, 6.0, [mn.Grid(10.0, 128)] * 2)


def test_domain_doubling_at_fixed_spacing():
    state = th.least_energy_bound_state(3.0, -1.0, 1.0)
    L = 40.0 / math.sqrt(state.omega)
    h = L / 4096
    e = [mn.normalized_gradient_flow(3.0, -1.0, 1.0, mn.Grid(k * L, int(4096 * k))).energy for k in (1, 2)]
    assert abs(e[1] - e[0]) < 1e-8
    assert mn.Grid(2 * L, 8192).h == pytest.approx(h)


def test_subcritical_energy_below_line_level():
    # alpha > 0, large mass: the bound state beats the line soliton
    g = mn.Grid(20.0, 8192)
    res = mn.normalized_gradient_flow(3.0, 1.0, 20.0, g, initial=bump(g, 2.0))
    assert res.converged
    assert res.energy < cf.soliton_energy_line(3.0, 20.0)


def test_nonexistence_signature_shrinks_with_domain():
    # no bound state of mass 4 at p = 3, alpha = 1: the best field drifts away from the wall
    e_line = cf.soliton_energy_line(3.0, 4.0)
    gaps = []
    for L in (5.0, 10.0, 20.0, 40.0):
        g = mn.Grid(L, int(200 * L))
        res = mn.normalized_gradient_flow(3.0, 1.0, 4.0, g)
        gaps.append(res.energy - e_line)
    assert all(a > b for a, b in zip(gaps, gaps[1:]))
    assert gaps[-1] < 1e-4


def test_critical_plateau_without_ground_state():
    # p = 6, alpha > 0 below the critical mass: infimum 0, never attained
    mu = 0.5 * cf.CRITICAL_MASS_HALFLINE
    energies = []
    for L in (20.0, 60.0):
        res = mn.normalized_gradient_flow(6.0, 1.0, mu, mn.Grid(L, 2048), max_iter=3000)
        assert res.energy > 0.0
        energies.append(res.energy)
    assert energies[1] < energies[0]


def test_critical_supercritical_mass_diverges():
    mu = 1.5 * cf.CRITICAL_MASS_HALFLINE
    res = mn.normalized_gradient_flow(6.0, -1.0, mu, mn.Grid(10.0, 1024), floor=-1e3)
    assert res.status is mn.FlowStatus.DIVERGED
    assert res.energy < -1e3


def test_observed_order_of_exact_quadratic():
    e = [1.0 + 0.5 * h**2 for h in (0.4, 0.2, 0.1)]
    assert mn.observed_order(*e) == pytest.approx(2.0, rel=1e-9)
