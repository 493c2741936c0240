import math

import numpy as np
import pytest

from dampedqm.analytic import PhysParams, WaveFunction, eigenfunction
from dampedqm.discretize import OperatorMatrix, assemble, gauge_conjugate_matrix, gauge_unitary, make_grid
from dampedqm.evolve import (
    DegenerateFitError,
    EvolutionSeries,
    SingularSolveError,
    growth_rate,
    propagate,
)

GRID = make_grid(10, 400)
DAMPED = PhysParams(lam=0.5)


def run(params, levels=(0,), dt=1e-3, steps=2000, form="EQ5", grid=GRID):
    m = assemble(params, grid, form)
    values = sum(eigenfunction(n, params, grid).values for n in levels)
    return propagate(m, WaveFunction(grid, values), dt, steps)


def test_undamped_conserves_norm():
    s = run(PhysParams(lam=0))
    assert np.abs(s.norms / s.norms[0] - 1).max() < 1e-12
    assert abs(growth_rate(s)) <= 1e-6


def test_damped_growth_rate_is_half_lambda():
    s = run(DAMPED)
    assert growth_rate(s) == pytest.approx(0.25, rel=1e-3)


@pytest.mark.parametrize("lam", [0.2, 1.0, 1.8])
def test_growth_rate_other_dampings(lam):
    s = run(PhysParams(lam=lam), steps=1000)
    assert growth_rate(s) == pytest.approx(lam / 2, rel=1e-3)


def test_eigenstate_stays_put():
    s = run(DAMPED)
    assert s.overlaps.min() > 0.9999
    assert np.abs(s.positions).max() < 1e-10


def test_rate_independent_of_state():
    # the anti-Hermitian part is a multiple of the identity
    s = run(DAMPED, levels=(0, 1), steps=1000)
    assert growth_rate(s) == pytest.approx(0.25, rel=1e-3)
    # the superposition oscillates in <y> at the level spacing
    assert np.abs(s.positions).max() > 0.1


def test_gauge_covariance():
    m = assemble(DAMPED, GRID, "EQ5")
    psi = eigenfunction(2, DAMPED, GRID)
    u = gauge_unitary(GRID, DAMPED)
    a = propagate(m, psi, 1e-2, 50)
    b = propagate(gauge_conjugate_matrix(m), WaveFunction(GRID, u * psi.values), 1e-2, 50)
    assert np.allclose(b.final.values, u * a.final.values, atol=1e-12)
    assert np.allclose(a.norms, b.norms, rtol=1e-12)


def test_time_step_refinement():
    coarse = growth_rate(run(DAMPED, dt=4e-2, steps=50))
    fine = growth_rate(run(DAMPED, dt=2e-2, steps=100))
    assert abs(fine - 0.25) < abs(coarse - 0.25) or abs(coarse - 0.25) < 1e-12


def test_series_shape_and_csv():
    s = run(DAMPED, steps=3)
    assert len(s) == 4 and s.times[0] == 0 and s.times[-1] == pytest.approx(3e-3)
    lines = s.to_csv().splitlines()
    assert lines[0] == "t,norm2,exp_y,overlap"
    assert len(lines) == 5
    assert float(lines[1].split(",")[3]) == pytest.approx(1, abs=1e-12)


def test_initial_norm_is_quadrature_norm():
    s = run(DAMPED, steps=1)
    assert s.norms[0] == pytest.approx(eigenfunction(0, DAMPED, GRID).norm2(), rel=1e-14)


def test_bad_arguments():
    m = assemble(DAMPED, GRID, "EQ5")
    psi = eigenfunction(0, DAMPED, GRID)
    with pytest.raises(ValueError):
        propagate(m, psi, 0, 10)
    with pytest.raises(ValueError):
        propagate(m, psi, 1e-3, 0)
    with pytest.raises(ValueError):
        propagate(m, WaveFunction(make_grid(10, 401), np.ones(401)), 1e-3, 1)


def test_singular_system_reported():
    # I + i dt A / 2 hbar is singular for A = (2i hbar / dt) I
    dt = 0.1
    bad = OperatorMatrix(np.eye(GRID.N) * (2j * DAMPED.hbar / dt), "EQ5", GRID, DAMPED)
    with pytest.raises(SingularSolveError) as info:
        propagate(bad, eigenfunction(0, DAMPED, GRID), dt, 5)
    assert info.value.step == 1


def test_growth_rate_fit_rules():
    t = np.linspace(0, 1, 30)
    series = EvolutionSeries(t, np.exp(0.7 * t), np.zeros(30), np.ones(30))
    assert growth_rate(series) == pytest.approx(0.7, rel=1e-12)
    # too few samples left after skipping: fit everything
    short = EvolutionSeries(t[:11], np.exp(0.7 * t[:11]), np.zeros(11), np.ones(11))
    assert growth_rate(short) == pytest.approx(0.7, rel=1e-12)
    with pytest.raises(ValueError):
        growth_rate(EvolutionSeries(t[:5], np.ones(5), np.zeros(5), np.ones(5)))
    with pytest.raises(ValueError):
        growth_rate(EvolutionSeries(t, -np.ones(30), np.zeros(30), np.ones(30)))


def test_degenerate_fit():
    series = EvolutionSeries(np.zeros(12), np.ones(12), np.zeros(12), np.ones(12))
    with pytest.raises(DegenerateFitError):
        growth_rate(series, skip=0)
