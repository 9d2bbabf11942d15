import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from coupled_kdv.darboux import AnalyticFamily
from coupled_kdv.scheme import Boundary, FieldState, GridSpec, TimeSpec, run, sample_initial, zero_state
from coupled_kdv.stability import (
    DEFAULT_BUDGET,
    BlowupMonitor,
    StabilityConfigError,
    advise_tau,
    exact_step_norm,
    field_extremes,
    growth_exponent,
    step_jacobian,
)
from coupled_kdv.system_model import make_system, preset

KDV = preset("kdv")
K3 = preset("kdv-mkdv-3")


def disp(d):
    return make_system(1, {}, [d], ["w"])


def test_zero_state_exponent_225():
    rep = growth_exponent(disp(0.5), zero_state(disp(0.5), GridSpec.from_step(-1, 1, 0.1)), 1e-4)
    assert rep.a_exponent == pytest.approx(225.0, rel=1e-12)
    assert rep.floor == 0.0 and rep.s_bound == 0.0


@pytest.mark.parametrize("tau,h,d", [(1e-4, 0.1, 0.5), (3e-7, 0.05, 1.3), (1e-2, 0.7, 0.01)])
def test_zero_state_closed_form(tau, h, d):
    spec = disp(d)
    rep = growth_exponent(spec, zero_state(spec, GridSpec(0, 10 * h, 11)), tau, h=h)
    assert rep.a_exponent == pytest.approx(9 * tau * d**2 / h**6, rel=1e-12)
    assert rep.per_step_growth == pytest.approx(math.exp(rep.a_exponent * tau / 2))


def test_no_dispersion_zero_state():
    spec = make_system(1, {(1, 1, 1, 1): 7.0, (5, 1, 1, 1): -2.0}, [0.0], ["w"])
    assert growth_exponent(spec, zero_state(spec, GridSpec(0, 1, 11)), 0.3).a_exponent == 0.0


def test_halving_h_multiplies_by_64():
    spec = disp(0.5)
    a1 = growth_exponent(spec, zero_state(spec, GridSpec(0, 1, 11)), 1e-4, h=0.1).a_exponent
    a2 = growth_exponent(spec, zero_state(spec, GridSpec(0, 1, 11)), 1e-4, h=0.05).a_exponent
    assert a2 / a1 == pytest.approx(64.0, rel=1e-12)


@pytest.mark.parametrize("tau,h", [(0, 0.1), (-1e-3, 0.1), (1e-3, 0), (1e-3, -0.1)])
def test_bad_inputs(tau, h):
    with pytest.raises(StabilityConfigError):
        growth_exponent(KDV, zero_state(KDV, GridSpec(0, 1, 11)), tau, h=h)


def test_advise_tau_zero_state():
    spec = disp(0.5)
    tau = advise_tau(spec, zero_state(spec, GridSpec(0, 1, 11)), h=0.1, budget=1.0)
    assert tau == pytest.approx(1 / 2.25e6, rel=1e-2)


def test_advise_tau_h6_law():
    spec = disp(0.5)
    z = zero_state(spec, GridSpec(0, 1, 11))
    for h in (0.4, 0.2, 0.1, 0.05):
        ratio = advise_tau(spec, z, h=h) / advise_tau(spec, z, h=2 * h)
        assert (1 - 0.02) / 64 <= ratio <= (1 + 0.02) / 64


def test_advise_tau_linear_in_budget():
    spec = disp(0.5)
    z = zero_state(spec, GridSpec(0, 1, 11))
    assert advise_tau(spec, z, budget=2.0) == pytest.approx(2 * advise_tau(spec, z, budget=1.0))


def test_advise_tau_meets_budget_on_fields():
    grid = GridSpec.from_step(-10, 10, 0.1)
    init = sample_initial(AnalyticFamily("r", a=1.0, r=0.5), K3, grid)
    tau = advise_tau(K3, init)
    rep = growth_exponent(K3, init, tau)
    assert rep.dispersive_part == pytest.approx(DEFAULT_BUDGET, rel=1e-12)
    assert rep.stable
    assert not growth_exponent(K3, init, 1.01 * tau).stable


def test_advise_tau_without_any_term():
    spec = make_system(1, {}, [0.0], ["w"])
    assert math.isinf(advise_tau(spec, zero_state(spec, GridSpec(0, 1, 11))))


def test_advise_tau_rejects_bad_budget():
    with pytest.raises(StabilityConfigError):
        advise_tau(KDV, zero_state(KDV, GridSpec(0, 1, 11)), budget=0.0)


def test_field_extremes():
    grid = GridSpec(0, 4, 5)
    state = FieldState(np.array([[0, 1, -3, 1, 0]], float), 0.0, grid)
    ext = field_extremes(KDV, state)
    assert ext.max_theta == 3.0
    assert ext.max_theta_x == 1.5  # (-3 - 0) / 2 beside the dip
    assert ext.g_max == 1.5 and ext.d_max == 0.25


def test_report_fields_nonnegative():
    grid = GridSpec.from_step(-5, 5, 0.1)
    init = sample_initial(AnalyticFamily("r", a=1.0, r=0.5), K3, grid)
    rep = growth_exponent(K3, init, 1e-5)
    for key, val in rep.to_dict().items():
        if isinstance(val, float):
            assert val >= 0, key
    assert rep.per_step_growth >= 1.0


small = st.floats(0.0, 3.0)


@settings(max_examples=60, deadline=None)
@given(st.floats(1e-7, 1e-2), st.floats(0.02, 1.0), small, small, small, st.floats(1.0, 3.0))
def test_monotonicity(tau, h, g, d, amp, factor):
    grid = GridSpec(0, 1, 11)
    rng = np.random.default_rng(0)
    vals = amp * rng.uniform(-1, 1, (1, 11))
    base = make_system(1, {(1, 1, 1, 1): g}, [d], ["w"])

    def a(spec=base, v=vals, t=tau, hh=h):
        return growth_exponent(spec, FieldState(v, 0.0, grid), t, h=hh).a_exponent

    ref = a()
    assert a(t=tau * factor) >= ref
    assert a(spec=make_system(1, {(1, 1, 1, 1): g * factor}, [d], ["w"])) >= ref
    assert a(spec=make_system(1, {(1, 1, 1, 1): g}, [d * factor], ["w"])) >= ref
    assert a(v=vals * factor) >= ref
    assert a(hh=h * factor) <= ref


@pytest.mark.parametrize("a", [1.0, 2.0])
@pytest.mark.parametrize("h", [0.25, 0.15])
@pytest.mark.parametrize("tau", [1e-5, 1e-4, 1e-3, 3e-3])
def test_bound_dominates_exact_norm_scalar(a, h, tau):
    grid = GridSpec.from_step(-4, 4, h)
    init = sample_initial(AnalyticFamily("two-component", a=a), KDV, grid)
    rep = growth_exponent(KDV, init, tau)
    assert exact_step_norm(KDV, init, tau) ** 2 <= 1 + tau * rep.a_exponent


@pytest.mark.parametrize("tau", [1e-5, 1e-3])
def test_bound_dominates_exact_norm_steep_three_component(tau):
    grid = GridSpec.from_step(-6, 6, 0.25)
    init = sample_initial(AnalyticFamily("r", a=2.0, r=0.5), K3, grid)
    rep = growth_exponent(K3, init, tau)
    assert exact_step_norm(K3, init, tau) ** 2 <= 1 + tau * rep.a_exponent


def test_max_coefficient_bound_misses_multi_term_rows():
    """With several terms per equation the single-coefficient bound is not a guarantee."""
    grid = GridSpec.from_step(-6, 6, 0.25)
    init = sample_initial(AnalyticFamily("r", a=1.0, r=0.5), K3, grid)
    tau = 1e-4
    rep = growth_exponent(K3, init, tau)
    gap = exact_step_norm(K3, init, tau) ** 2 - 1
    assert gap > tau * rep.a_exponent
    assert gap < 10 * tau * rep.a_exponent


def test_jacobian_matches_finite_difference():
    grid = GridSpec.from_step(-3, 3, 0.25)
    init = sample_initial(AnalyticFamily("r", a=1.0, r=0.5), K3, grid)
    J = step_jacobian(K3, init, 1e-4, Boundary.PERIODIC)
    from coupled_kdv.scheme import step
    rng = np.random.default_rng(1)
    dv = 1e-6 * rng.normal(size=init.values.shape)
    plus = step(K3, FieldState(init.values + dv, 0, grid), 1e-4, Boundary.PERIODIC).values
    minus = step(K3, FieldState(init.values - dv, 0, grid), 1e-4, Boundary.PERIODIC).values
    np.testing.assert_allclose(J @ dv.ravel(), ((plus - minus) / 2).ravel(), atol=1e-15)


def test_dispersion_jacobian_row():
    """Row of the step Jacobian for pure dispersion: tau d / (2 h^3) * [-1, 2, 0, -2, 1]."""
    d, tau = 0.5, 1e-3
    grid = GridSpec(0, 1, 11)
    J = step_jacobian(disp(d), zero_state(disp(d), grid), tau)
    h = grid.h
    row = J[5, 3:8]
    np.testing.assert_allclose(row - [0, 0, 1, 0, 0], tau * d / (2 * h**3) * np.array([1, -2, 0, 2, -1]))


def test_exact_norm_limited():
    with pytest.raises(StabilityConfigError):
        exact_step_norm(KDV, zero_state(KDV, GridSpec(0, 1, 201)), 1e-4)


def test_monitor_zero_data_never_flags():
    mon = BlowupMonitor()
    run(KDV, zero_state(KDV, GridSpec(-1, 1, 21)), TimeSpec(1e-3, 50), monitors=[mon])
    assert not mon.flagged and len(mon.history) == 51


def test_monitor_stable_and_unstable():
    grid = GridSpec.from_step(-10, 10, 0.1)
    init = sample_initial(AnalyticFamily("two-component", a=1.0), KDV, grid)
    tau = advise_tau(KDV, init)
    ok = BlowupMonitor()
    run(KDV, init, TimeSpec.until(0.02, tau), monitors=[ok])
    assert not ok.flagged
    bad = BlowupMonitor()
    traj = run(KDV, init, TimeSpec.until(0.5, 100 * tau), monitors=[bad])
    assert bad.flagged and traj.error is not None
    assert bad.flagged_step <= traj.steps_taken
