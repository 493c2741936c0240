"""
Finite-difference spectrum of the damped oscillator
===================================================

Assemble the Hamiltonian on a grid, diagonalize it with the built-in QR
solver and compare with the closed-form levels.  The imaginary parts all sit
at hbar*lambda/4.
"""
import numpy as np

from dampedqm import PhysParams, assemble, complex_eigenvalue, eig, make_grid, match_levels

params = PhysParams(m=1, omega=1, lam=0.5, hbar=1)
grid = make_grid(10, 400)   # coarse enough to run in a couple of seconds

A = assemble(params, grid, "EQ5")
print("bandwidth:", A.bandwidth(), " size:", A.N)

spec = eig(A)
report = match_levels(spec, params, 6, A)

for n in range(report.k):
    print(f"n={n}  numeric {report.numeric[n]:.6f}  exact {complex(complex_eigenvalue(n, params)):.6f}")

# level errors shrink like h^2; the imaginary offset does not depend on h
print("max level error:", report.max_error)
print("mean Im E_n:", report.imag_offset_mean, " hbar*lambda/4 =", params.hbar * params.lam / 4)

# the construction with y*p written out gives nearly the same trusted levels
A2 = assemble(params, grid, "EQ2")
gap = np.abs(eig(A2).eigenvalues[:6] - spec.eigenvalues[:6]).max()
print("EQ2 vs EQ5 gap in the lowest levels:", gap)
