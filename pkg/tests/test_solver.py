import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ks2d.solver import (
    DivergenceError,
    SolverConfig,
    initial_condition,
    run,
    save_schedule,
)
from ks2d.spectral import ConfigError, GridSpec, build_physical_grid

from oracles import amplification_fraction


def cfg(n=16, lx1=1.0, lx2=1.0, **kw):
    return SolverConfig(GridSpec(n, lx1, lx2), **kw)


class TestConfig:
    def test_defaults(self):
        c = cfg()
        assert c.n_save == 11
        assert c.operator_mode == "paper" and c.scaling_mode == "paper"
        assert c.n_time == 1000

    @pytest.mark.parametrize("kw,field", [
        (dict(dt=0.0), "dt"),
        (dict(dt=-1e-3), "dt"),
        (dict(t_final=0.0), "t_final"),
        (dict(dt=2.0, t_final=1.0), "dt"),
        (dict(dt=3e-3, t_final=1.0), "t_final"),
        (dict(n_save=1), "n_save"),
        (dict(dt=0.1, t_final=0.5, n_save=7), "n_save"),
        (dict(operator_mode="x"), "operator"),
        (dict(scaling_mode="x"), "scaling"),
    ])
    def test_invalid(self, kw, field):
        with pytest.raises(ConfigError) as exc:
            cfg(**kw)
        assert exc.value.field == field

    def test_accepts_float_noise_in_step_count(self):
        c = cfg(dt=0.1, t_final=0.3, n_save=2)
        assert 0.3 / 0.1 != 3 and c.n_time == 3

    def test_dict_round_trip(self):
        c = cfg(24, 0.2, 1.8, dt=1e-2, t_final=2.0, n_save=5, operator_mode="full-biharmonic",
                scaling_mode="physical", nonlinear_enabled=False)
        assert SolverConfig.from_dict(c.to_dict()) == c

    def test_replace_grid_fields(self):
        c = cfg().replace(n=32, lx2=0.6, dt=1e-2)
        assert c.grid == GridSpec(32, 1.0, 0.6)
        assert c.dt == 1e-2


class TestInitialCondition:
    def test_origin(self):
        assert initial_condition(GridSpec(8))[0, 0] == 0

    def test_quarter_point(self):
        u0 = initial_condition(GridSpec(8, 1.0, 1.0))
        # x1 = pi/2 is column 2, x2 = 0 is row 0
        assert u0[0, 2] == pytest.approx(2.0)

    def test_formula(self):
        g = GridSpec(12, 1.0, 0.6)
        X1, X2 = build_physical_grid(g)
        np.testing.assert_array_equal(initial_condition(g), np.sin(X1 + X2) + np.sin(X1) + np.sin(X2))

    @pytest.mark.parametrize("lx1", [1.0, 0.5, 0.25])
    def test_periodic_when_period_is_whole_multiple(self, lx1):
        """A shift by L1 = 2*pi/lx1 is a whole number of sine periods iff 1/lx1 is an integer."""
        g = GridSpec(16, lx1, 1.0)
        X1, X2 = build_physical_grid(g)
        shifted = np.sin(X1 + g.L1 + X2) + np.sin(X1 + g.L1) + np.sin(X2)
        np.testing.assert_allclose(shifted, initial_condition(g), atol=1e-12)


@given(n_time=st.integers(1, 5000), data=st.data())
def test_save_schedule(n_time, data):
    n_save = data.draw(st.integers(2, min(n_time + 1, 200)))
    s = save_schedule(n_time, n_save)
    assert s[0] == 0 and s[-1] == n_time
    assert len(s) == n_save
    assert all(a < b for a, b in zip(s, s[1:]))


class TestRun:
    def test_trajectory_shape(self):
        c = cfg(16, dt=1e-2, t_final=0.5, n_save=6, scaling_mode="physical")
        tr = run(c)
        assert len(tr.snapshots) == 6 == len(tr.times) == len(tr.l2)
        assert tr.times[0] == 0
        assert abs(tr.times[-1] - 0.5) <= c.dt / 2
        assert all(a < b for a, b in zip(tr.times, tr.times[1:]))
        assert tr.steps == [0, 10, 20, 30, 40, 50]
        assert tr.wall_time > 0
        np.testing.assert_allclose(tr.snapshots[0], initial_condition(c.grid), atol=1e-12)
        assert tr.umin[-1] == tr.final.min()

    @pytest.mark.parametrize("nonlinear", [True, False])
    def test_zero_fixed_point(self, nonlinear):
        c = cfg(16, dt=1e-2, t_final=1.0, nonlinear_enabled=nonlinear)
        tr = run(c, u0=np.zeros((16, 16)))
        assert all(np.all(u == 0) for u in tr.snapshots)

    def test_single_mode_linear_oracle(self):
        g = GridSpec(16, 1.0, 1.0)
        X1, X2 = build_physical_grid(g)
        u0 = np.cos(2 * X1 + 2 * X2)
        c = SolverConfig(g, dt=1e-3, t_final=0.2, n_save=5, nonlinear_enabled=False)
        tr = run(c, u0=u0)
        factor = float(amplification_fraction(Fraction(1, 1000), Fraction(24)))
        for step, u in zip(tr.steps, tr.snapshots):
            np.testing.assert_allclose(u, factor**step * u0, atol=1e-10, rtol=0)

    def test_deterministic(self):
        c = cfg(16, 0.7, 0.4, dt=1e-2, t_final=0.5, scaling_mode="physical")
        a, b = run(c), run(c)
        for x, y in zip(a.snapshots, b.snapshots):
            assert x.tobytes() == y.tobytes()

    def test_custom_save_steps(self):
        c = cfg(16, dt=0.1, t_final=1.0, scaling_mode="physical")
        tr = run(c, save_steps=[0, 3, 10])
        assert tr.steps == [0, 3, 10]
        assert tr.snapshot_at(0.3) is tr.snapshots[1]
        with pytest.raises(KeyError):
            tr.snapshot_at(0.5)
        with pytest.raises(ConfigError):
            run(c, save_steps=[1, 10])

    def test_initial_shape_checked(self):
        with pytest.raises(ValueError):
            run(cfg(16, dt=0.1, t_final=1.0, n_save=2), u0=np.zeros((8, 8)))

    def test_reality_check_recorded(self):
        tr = run(cfg(16, 1.0, 0.6, dt=1e-2, t_final=0.5))
        assert max(tr.max_imag) < 1e-8

    def test_paper_scaling_large_step_diverges_with_report(self):
        c = cfg(64, 1.0, 0.6, dt=0.05, t_final=0.5)
        with pytest.raises(DivergenceError) as exc:
            run(c)
        assert exc.value.step >= 1
        assert exc.value.partial is not None
        assert exc.value.partial.steps[0] == 0

    def test_ceiling_guard(self):
        # lam < 0 for the mode (1, 0) with lx1 = 0.25: exponential growth
        g = GridSpec(8, 0.25, 1.0)
        X1, _ = build_physical_grid(g)
        c = SolverConfig(g, dt=0.1, t_final=100.0, n_save=2, scaling_mode="physical",
                         nonlinear_enabled=False, blowup_ceiling=10.0)
        with pytest.raises(DivergenceError, match="exceeds"):
            run(c, u0=np.cos(0.25 * X1))

    @pytest.mark.filterwarnings("ignore::RuntimeWarning")
    def test_non_finite_guard(self):
        # fastest linear growth (rate 1/4) at physical wavenumber 0.7; overflows from 1e299
        g = GridSpec(8, 0.7, 1.0)
        X1, _ = build_physical_grid(g)
        c = SolverConfig(g, dt=0.1, t_final=100.0, n_save=2, scaling_mode="physical",
                         nonlinear_enabled=False, blowup_ceiling=math.inf)
        with pytest.raises(DivergenceError, match="non-finite") as exc:
            run(c, u0=1e299 * np.cos(0.7 * X1))
        assert exc.value.step > 1

    def test_non_finite_initial_rejected(self):
        u0 = np.zeros((8, 8))
        u0[0, 0] = np.nan
        with pytest.raises(ValueError, match="finite"):
            run(cfg(8, dt=0.1, t_final=1.0, n_save=2), u0=u0)
