import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ks2d.analysis import estimate_order, linear_exact_solution
from ks2d.imex import (
    ImexCoefficients,
    ImexStepper,
    SingularSolveError,
    StepState,
    exact_coefficients,
    imex_step,
    tabulated_coefficients,
)
from ks2d.spectral import GridSpec, NonlinearTerm, build_linear_symbol, inverse_transform

from conftest import random_real_spectrum
from oracles import amplification_fraction, riccati_exact


def test_explicit_first_weights():
    c = tabulated_coefficients()
    assert c.alpha_explicit[0] == 0.56
    assert c.beta_explicit[0] == 0.0


def test_sum_identities():
    c = tabulated_coefficients()
    assert abs(sum(c.alpha_implicit) + sum(c.beta_implicit) - 1) < 1e-12
    assert abs(sum(c.alpha_explicit) + sum(c.beta_explicit) - 1) < 1e-12


def test_exact_rational_sums_are_within_rounding_of_one():
    ex = exact_coefficients()
    c1 = sum(ex["alpha_implicit"]) + sum(ex["beta_implicit"])
    c2 = sum(ex["alpha_explicit"]) + sum(ex["beta_explicit"])
    assert abs(c1 - 1) < Fraction(1, 10**20)
    assert abs(c2 - 1) < Fraction(1, 10**20)


def test_magnitudes_below_one():
    c = tabulated_coefficients()
    for row in (c.alpha_implicit, c.beta_implicit, c.alpha_explicit, c.beta_explicit):
        assert len(row) == 4
        assert all(abs(v) < 1 for v in row)


def test_zero_operators_leave_state_unchanged(rng):
    u = random_real_spectrum(rng, 8)
    out = imex_step(StepState(u.copy()), 0.1, np.zeros((8, 8)), lambda v: np.zeros_like(v))
    np.testing.assert_array_equal(out.u_hat, u)
    out = imex_step(StepState(u.copy()), 0.1, np.zeros((8, 8)), None)
    np.testing.assert_array_equal(out.u_hat, u)


def test_single_mode_amplification_matches_rational_product():
    lam = np.array([[24.0]])
    out = imex_step(StepState(np.array([[1.0 + 0j]])), 1e-3, lam, None)
    exact = float(amplification_fraction(Fraction(1, 1000), Fraction(24)))
    assert out.u_hat[0, 0].real == pytest.approx(exact, rel=1e-15, abs=0)
    assert out.u_hat[0, 0].imag == 0


@settings(max_examples=30, deadline=None)
@given(lam=st.integers(-50, 5000), dt_inv=st.sampled_from([10, 100, 1000, 4000]))
def test_amplification_closed_form(lam, dt_inv):
    dt = Fraction(1, dt_inv)
    stepper = ImexStepper(float(dt), np.array([float(lam)]), None)
    g = float(amplification_fraction(dt, Fraction(lam)))
    assert stepper.amplification()[0] == pytest.approx(g, rel=1e-13, abs=1e-300)
    out = stepper.step(StepState(np.array([1.0 + 0j])))
    assert out.u_hat[0].real == pytest.approx(g, rel=1e-13, abs=1e-300)


def test_zero_nonlinear_with_nonlinear_path_equals_linear_path(rng):
    g = GridSpec(8)
    sym = build_linear_symbol(g)
    u = random_real_spectrum(rng, 8)
    a = imex_step(StepState(u), 1e-2, sym, None)
    b = imex_step(StepState(u), 1e-2, sym, lambda v: np.zeros_like(v))
    np.testing.assert_allclose(a.u_hat, b.u_hat, rtol=1e-14, atol=1e-12)


def test_linear_order_against_exponential():
    lam = 24.0
    dts = [1e-2, 5e-3, 2.5e-3, 1.25e-3]
    errs = []
    for dt in dts:
        stepper = ImexStepper(dt, np.array([lam]), None)
        s = StepState(np.array([1.0 + 0j]))
        for _ in range(round(0.1 / dt)):
            s = stepper.step(s)
        exact = linear_exact_solution(np.array([1.0]), np.array([lam]), 0.1)[0]
        errs.append(abs(s.u_hat[0] - exact))
    p = estimate_order(errs, dts)
    assert all(a > b for a, b in zip(errs, errs[1:]))
    assert all(2.9 < q < 3.05 for q in p)


def test_nonlinear_order_on_riccati():
    """u' = -3u - u^2 exercises every explicit weight."""
    dts = [0.1, 0.05, 0.025, 0.0125]
    errs = []
    for dt in dts:
        stepper = ImexStepper(dt, np.array([3.0]), lambda u: u * u)
        s = StepState(np.array([0.8 + 0j]))
        for _ in range(round(1.0 / dt)):
            s = stepper.step(s)
        errs.append(abs(s.u_hat[0].real - riccati_exact(3.0, 0.8, 1.0)))
    p = estimate_order(errs, dts)
    # measured 2.81, 2.90, 2.95
    assert p == pytest.approx([2.812, 2.904, 2.952], abs=0.01)


def test_carried_nonlinear_term_is_for_new_state(rng):
    g = GridSpec(12)
    f = NonlinearTerm(g)
    sym = build_linear_symbol(g)
    s = imex_step(StepState(random_real_spectrum(rng, 12) * 1e-3), 1e-3, sym, f)
    np.testing.assert_array_equal(s.prev_nonlinear, f(s.u_hat))


def test_carrying_state_matches_fresh_evaluation(rng):
    g = GridSpec(12)
    f = NonlinearTerm(g, "physical")
    sym = build_linear_symbol(g, scaling_mode="physical")
    stepper = ImexStepper(1e-3, sym, f)
    u = random_real_spectrum(rng, 12) * 1e-2
    carried = StepState(u)
    fresh = StepState(u)
    for _ in range(5):
        carried = stepper.step(carried)
        fresh = stepper.step(StepState(fresh.u_hat))
    np.testing.assert_array_equal(carried.u_hat, fresh.u_hat)


def test_fixed_point_preserved():
    u = np.zeros((8, 8), complex)
    u[0, 1] = 3.0  # a mode with lam = 0 whose nonlinear term we force to zero
    lam = np.zeros((8, 8))
    out = imex_step(StepState(u), 0.5, lam, lambda v: np.zeros_like(v))
    np.testing.assert_array_equal(out.u_hat, u)


def test_conjugate_symmetry_preserved(rng):
    g = GridSpec(16, 0.8, 0.6)
    f = NonlinearTerm(g, "physical")
    sym = build_linear_symbol(g, "full-biharmonic", "physical")
    stepper = ImexStepper(1e-2, sym, f)
    s = StepState(random_real_spectrum(rng, 16) * 0.05)
    for _ in range(50):
        s = stepper.step(s)
    z = inverse_transform(s.u_hat)
    assert np.abs(z.imag).max() < 1e-12


def test_singular_solve_rejected():
    coeffs = ImexCoefficients((0.5, 0.1, 0.1, 0.1), (0.0,) * 4, (0.5,) * 4, (0.0,) * 4)
    with pytest.raises(SingularSolveError):
        ImexStepper(1.0, np.array([-2.0, 1.0]), None, coeffs)


def test_nonpositive_dt_rejected():
    with pytest.raises(ValueError):
        ImexStepper(0.0, np.zeros(2), None)
