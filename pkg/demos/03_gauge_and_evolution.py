"""
Gauge transformation and norm growth
====================================

The diagonal gauge unitary turns the matrix into a Hermitian oscillator plus
a constant imaginary shift.  Under Crank-Nicolson stepping that shift makes
|psi|^2 grow at rate lambda/2, whatever the state.
"""
import numpy as np

from dampedqm import PhysParams, WaveFunction, assemble, eigenfunction, make_grid
from dampedqm import gauge_conjugate_matrix, growth_rate, propagate

params = PhysParams(lam=0.5)
grid = make_grid(10, 400)
A = assemble(params, grid, "EQ5")

B = gauge_conjugate_matrix(A)
shift = B.anti_hermitian_part() - 1j * params.hbar * params.lam / 4 * np.eye(grid.N)
print("anti-Hermitian part minus i hbar lam/4:", np.abs(shift).max())

# ground state
series = propagate(A, eigenfunction(0, params, grid), dt=1e-3, steps=2000)
print("growth rate of ln|psi|^2:", growth_rate(series), " lambda/2 =", params.lam / 2)
print("overlap with the initial state stays at", series.overlaps.min())

# a superposition grows at the same rate but its centre oscillates
mix = WaveFunction(grid, eigenfunction(0, params, grid).values + eigenfunction(1, params, grid).values)
series = propagate(A, mix, dt=1e-3, steps=2000)
print("superposition growth rate:", growth_rate(series))
print("<y> range:", series.positions.min(), series.positions.max())
