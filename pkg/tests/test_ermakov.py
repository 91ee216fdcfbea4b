import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from osc3.errors import DomainError, IntegrationError
from osc3.ermakov import (
    ErmakovState,
    ModeProfile,
    QuenchTrajectory,
    quench_scale,
    solve_ode,
    solve_quench,
)
from osc3.model import CouplingsAt, decompose
from osc3.config import FIGURES
from osc3.oracle import ermakov_residual

positive = st.floats(0.01, 50.0)
nonzero = st.one_of(st.floats(-5.0, -0.01), st.floats(0.01, 50.0))


def test_no_quench_keeps_b_at_one():
    s = solve_quench(4.0, 4.0, 3.7)
    assert (s.b, s.bdot) == (1.0, 0.0)
    assert s.omega_prime == 2.0 and s.v == 2.0


@given(positive, nonzero)
def test_initial_conditions(wi, wf):
    s = solve_quench(wi, wf, 0.0)
    assert s.b == pytest.approx(1.0, abs=1e-15)
    assert s.bdot == 0.0
    assert s.v.imag == 0.0
    assert s.omega_prime == pytest.approx(math.sqrt(wi))


@given(positive, st.floats(0.01, 50.0), st.floats(0.0, 20.0))
def test_b_squared_stays_between_one_and_ratio(wi, wf, t):
    b, _ = quench_scale(wi, wf, t)
    r = wi / wf
    assert min(1.0, r) * (1 - 1e-12) <= b * b <= max(1.0, r) * (1 + 1e-12)


@given(positive, nonzero, st.floats(0.0, 5.0))
def test_real_part_of_v_is_positive(wi, wf, t):
    assert solve_quench(wi, wf, t).v.real > 0


def test_rejected_inputs():
    with pytest.raises(DomainError):
        solve_quench(0.0, 1.0, 1.0)
    with pytest.raises(DomainError):
        solve_quench(1.0, 0.0, 1.0)
    with pytest.raises(DomainError):
        solve_quench(1.0, 2.0, -0.1)
    with pytest.raises(DomainError):
        ModeProfile.quench(-0.1, 1.0)
    with pytest.raises(DomainError):
        solve_ode(ModeProfile.constant(1.0), 1.0, reltol=1e-3)


def test_cosh_branch_matches_integration():
    prof = ModeProfile.quench(0.1, -0.1)
    ode = solve_ode(prof, 2.0)
    b, bdot = quench_scale(0.1, -0.1, 2.0)
    assert float(ode.b(2.0)) == pytest.approx(b, abs=1e-8)
    assert float(ode.bdot(2.0)) == pytest.approx(bdot, abs=1e-6)


def test_constant_profile_stays_at_one():
    ode = solve_ode(ModeProfile.constant(4.0), 10.0)
    ts = np.linspace(0, 10, 101)
    assert np.abs(ode.b(ts) - 1).max() < 1e-10
    assert ermakov_residual(ode, ode.profile) < 1e-12


@pytest.mark.parametrize("name", sorted(FIGURES))
def test_ode_matches_closed_form_for_figure_quenches(name):
    ini, fin = FIGURES[name]
    li = decompose(CouplingsAt(*ini)).eigenvalues
    lf = decompose(CouplingsAt(*fin)).eigenvalues
    ts = np.linspace(0, 10, 1001)
    for a, b in zip(li, lf):
        prof = ModeProfile.quench(a, b)
        ode = solve_ode(prof, 10.0)
        exact = QuenchTrajectory(prof, 10.0)
        assert np.abs(ode.b(ts) - exact.b(ts)).max() < 1e-8
        assert np.abs(ode.bdot(ts) - exact.bdot(ts)).max() < 1e-6
        assert ermakov_residual(exact, prof) < 1e-7 * max(abs(a), abs(b), 1.0)


def test_tabulated_sinusoid_residual():
    ts = np.linspace(0, 10, 2001)
    prof = ModeProfile.tabulated(ts, 4 + np.sin(ts))
    ode = solve_ode(prof, 10.0)
    assert ermakov_residual(ode, prof) < 1e-7 * 5
    # interior knots are segment boundaries, so the trajectory passes them exactly
    assert set(np.round(ts[1:-1], 12)) <= set(np.round(ode.knots, 12))


def test_smooth_function_profile_residual():
    prof = ModeProfile.from_function(lambda t: 4 + math.sin(t))
    ode = solve_ode(prof, 10.0)
    assert ermakov_residual(ode, prof) < 1e-6 * 5


def test_trajectory_domain():
    ode = solve_ode(ModeProfile.constant(1.0), 1.0)
    with pytest.raises(DomainError):
        ode.b(1.5)
    with pytest.raises(DomainError):
        ode.b(-0.1)
    st_ = ode.state(0.0)
    assert isinstance(st_, ErmakovState) and st_.b == 1.0 and st_.bdot == 0.0


def test_collapse_is_reported():
    # an enormous repulsive drive pulls b towards zero faster than the
    # floor allows once the initial frequency is tiny
    prof = ModeProfile.from_function(lambda t: 1e12 if t > 0 else 1e-20, initial=1e-20)
    with pytest.raises(IntegrationError):
        solve_ode(prof, 1.0, reltol=1e-6)


@given(positive, nonzero, st.floats(0.0, 3.0))
def test_matches_literal_cos_cosh_form(wi, wf, t):
    c = math.cos(2 * math.sqrt(wf) * t) if wf > 0 else math.cosh(2 * math.sqrt(-wf) * t)
    b2 = (wf - wi) / (2 * wf) * c + (wf + wi) / (2 * wf)
    b, _ = quench_scale(wi, wf, t)
    assert b * b == pytest.approx(b2, rel=1e-10, abs=1e-12 * max(1.0, abs((wf - wi) / wf) * c))


@given(positive, nonzero, st.floats(0.01, 3.0))
def test_bdot_is_derivative_of_b(wi, wf, t):
    h = 1e-6
    b_hi, _ = quench_scale(wi, wf, t + h)
    b_lo, _ = quench_scale(wi, wf, t - h)
    _, bdot = quench_scale(wi, wf, t)
    assert bdot == pytest.approx((b_hi - b_lo) / (2 * h), rel=1e-5, abs=1e-6 * max(1.0, abs(b_hi)))
