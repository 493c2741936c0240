import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dampedqm.analytic import (
    DegenerateSpectrumWarning,
    PhysParams,
    RegimeError,
    apply_gauge,
    claimed_real_eigenvalue,
    complex_eigenvalue,
    eigenfunction,
    hermite,
    hermite_function,
)
from dampedqm.discretize import make_grid

UNIT = PhysParams(m=1, omega=1, lam=0, hbar=1)
DAMPED = PhysParams(m=1, omega=1, lam=0.5, hbar=1)


def hermite_explicit(n, x):
    """Oracle: H_n(x) = n! sum_k (-1)^k (2x)^(n-2k) / (k! (n-2k)!)."""
    return sum((-1) ** k * math.factorial(n) / (math.factorial(k) * math.factorial(n - 2 * k)) * (2 * x) ** (n - 2 * k)
               for k in range(n // 2 + 1))


class TestLevels:
    def test_undamped_ground_state(self):
        assert complex(complex_eigenvalue(0, UNIT)) == 0.5 + 0j

    def test_damped_ground_state(self):
        e = complex_eigenvalue(0, DAMPED)
        assert e.real == pytest.approx(0.4841229182759271, abs=1e-15)
        assert e.imag == 0.125
        assert not e.degenerate

    def test_critical_damping_warns(self):
        crit = PhysParams(m=1, omega=1, lam=2, hbar=1)
        with pytest.warns(DegenerateSpectrumWarning):
            e = complex_eigenvalue(0, crit)
        assert complex(e) == 0.5j and e.degenerate
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", DegenerateSpectrumWarning)
            assert complex(complex_eigenvalue(5, crit)) == 0.5j

    def test_overdamped_is_an_error(self):
        with pytest.raises(RegimeError):
            complex_eigenvalue(0, PhysParams(lam=3))
        with pytest.raises(RegimeError):
            claimed_real_eigenvalue(0, PhysParams(lam=3))

    def test_claimed_real_levels(self):
        assert claimed_real_eigenvalue(0, DAMPED) == pytest.approx(0.4841229182759271, abs=1e-15)
        assert claimed_real_eigenvalue(0, UNIT) == 0.5

    @pytest.mark.parametrize("n", range(10))
    def test_discrepancy_is_constant_imaginary_shift(self, n):
        p = PhysParams(m=1.3, omega=2.0, lam=0.7, hbar=0.9)
        diff = complex_eigenvalue(n, p) - claimed_real_eigenvalue(n, p)
        assert diff == pytest.approx(1j * p.hbar * p.lam / 4, abs=1e-15)

    @settings(max_examples=50)
    @given(st.integers(0, 50), st.floats(0.1, 5), st.floats(0, 0.99), st.floats(0.1, 3), st.floats(0.1, 3))
    def test_spacing_and_offset(self, n, omega, frac, m, hbar):
        p = PhysParams(m=m, omega=omega, lam=2 * omega * frac, hbar=hbar)
        step = complex_eigenvalue(n + 1, p) - complex_eigenvalue(n, p)
        assert step.real == pytest.approx(hbar * p.Omega, rel=1e-12)
        assert step.imag == 0
        assert complex_eigenvalue(n, p).imag == hbar * p.lam / 4

    def test_small_damping_continuity(self):
        for eps in (1e-2, 1e-4, 1e-6):
            e = complex_eigenvalue(3, PhysParams(lam=eps))
            assert abs(e.real - 3.5) <= 3.5 * eps**2
            assert e.imag == eps / 4

    def test_invalid_params(self):
        for kwargs in ({"m": 0}, {"omega": -1}, {"lam": -0.1}, {"hbar": 0}, {"m": float("nan")}):
            with pytest.raises(ValueError):
                PhysParams(**kwargs)


class TestHermite:
    def test_low_orders(self):
        assert hermite(0, 0.3) == 1
        assert hermite(2, 1.0) == 2

    def test_degree_five_against_expansion(self):
        assert hermite(5, 0.7) == pytest.approx(107807 / 3125, rel=1e-14)
        assert hermite(5, 0.7) == pytest.approx(hermite_explicit(5, 0.7), rel=1e-14)

    @pytest.mark.parametrize("n", range(12))
    def test_matches_explicit_sum(self, n):
        x = np.linspace(-2, 2, 9)
        assert np.allclose(hermite(n, x), [hermite_explicit(n, v) for v in x], rtol=1e-12, atol=1e-9)

    @pytest.mark.parametrize("n", [0, 1, 5, 20, 21, 40, 80])
    def test_hermite_functions_orthonormal(self, n):
        # quadrature oracle on a wide fine grid
        x = np.linspace(-20, 20, 40001)
        f = hermite_function(n, x)
        assert np.trapezoid(f * f, x) == pytest.approx(1, abs=1e-10)
        g = hermite_function(n + 1, x)
        assert abs(np.trapezoid(f * g, x)) < 1e-10

    def test_log_space_branch_agrees(self):
        x = np.linspace(-6, 6, 25)
        # degree 20 uses the direct path, 21 the scaled one: both satisfy the recurrence
        h19, h20, h21 = (hermite_function(k, x) for k in (19, 20, 21))
        assert np.allclose(h21, math.sqrt(2 / 21) * x * h20 - math.sqrt(20 / 21) * h19, atol=1e-13)

    def test_no_overflow_far_out(self):
        f = hermite_function(150, np.array([0.0, 10.0, 40.0, 200.0]))
        assert np.all(np.isfinite(f))
        assert f[-1] == 0


class TestEigenfunction:
    grid = make_grid(10, 801)

    def test_modulus_is_oscillator_function(self):
        psi = eigenfunction(3, DAMPED, self.grid)
        alpha = math.sqrt(DAMPED.Omega)
        phi = alpha**0.5 * hermite_function(3, alpha * self.grid.nodes)
        assert np.allclose(np.abs(psi.values), np.abs(phi), atol=1e-15)

    def test_ground_state_at_origin(self):
        psi = eigenfunction(0, DAMPED, self.grid)
        centre = psi.values[self.grid.N // 2]
        assert abs(centre) == pytest.approx(0.7450903546072547, rel=1e-13)
        assert abs(centre) == pytest.approx((math.sqrt(0.9375) / math.pi) ** 0.25, rel=1e-14)

    def test_odd_state_vanishes_at_origin(self):
        psi = eigenfunction(1, DAMPED, self.grid)
        assert abs(psi.values[self.grid.N // 2]) < 1e-15

    def test_unit_norm(self):
        for n in range(6):
            assert eigenfunction(n, DAMPED, self.grid).norm2() == pytest.approx(1, abs=1e-9)

    def test_overdamped_rejected(self):
        with pytest.raises(RegimeError):
            eigenfunction(0, PhysParams(lam=2), self.grid)

    def test_phase_convention(self):
        p = PhysParams(m=1, omega=1, lam=0, hbar=1)
        for n in range(6):
            v = eigenfunction(n, p, self.grid).values.real
            right = v[self.grid.nodes > 0]
            assert right[np.argmax(np.abs(right))] > 0

    def test_gauged_states_orthonormal(self):
        phis = [apply_gauge(eigenfunction(n, DAMPED, self.grid), DAMPED) for n in range(6)]
        gram = np.array([[a.inner(b) for b in phis] for a in phis])
        assert np.allclose(gram, np.eye(6), atol=1e-8)


class TestGauge:
    grid = make_grid(8, 401)

    def test_round_trip(self):
        psi = eigenfunction(2, DAMPED, self.grid)
        back = apply_gauge(apply_gauge(psi, DAMPED, "forward"), DAMPED, "inverse")
        assert np.allclose(back.values, psi.values, atol=1e-15, rtol=0)

    def test_forward_gauge_gives_real_function(self):
        for n in range(5):
            phi = apply_gauge(eigenfunction(n, DAMPED, self.grid), DAMPED, "forward")
            assert np.abs(phi.values.imag).max() < 1e-15

    def test_norm_preserved(self):
        psi = eigenfunction(4, DAMPED, self.grid)
        assert apply_gauge(psi, DAMPED).norm() == pytest.approx(psi.norm(), rel=1e-14)

    def test_bad_direction(self):
        with pytest.raises(ValueError):
            apply_gauge(eigenfunction(0, DAMPED, self.grid), DAMPED, "sideways")
