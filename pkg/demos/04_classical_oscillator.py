"""
The classical damped oscillator
===============================

q'' + lambda q' + omega^2 q = 0, integrated with RK4 and compared with the
closed form.  Its oscillation frequency is the quantum level spacing.
"""
import numpy as np

from dampedqm import InitialCondition, PhysParams, closed_form, complex_eigenvalue
from dampedqm import damped_frequency, integrate_rk4, regime

ic = InitialCondition(q0=1.0, v0=0.0)

for lam in (0.5, 2.0, 3.0):
    params = PhysParams(lam=lam)
    traj = integrate_rk4(params, ic, t_max=20.0, h=1e-3)
    q, _ = closed_form(params, ic, traj.times)
    print(f"lambda={lam}: {regime(params).value:12s} max |RK4 - exact| = {np.abs(traj.positions - q).max():.2e}")

params = PhysParams(lam=0.5)
spacing = (complex_eigenvalue(1, params) - complex_eigenvalue(0, params)).real
print("classical omega_d:", damped_frequency(params))
print("quantum spacing:  ", spacing)

# the envelope decays at lambda/2, twice the imaginary part of every level
print("lambda/2 =", params.lam / 2, " 2 Im E_n =", 2 * complex_eigenvalue(3, params).imag)
