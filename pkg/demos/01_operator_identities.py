"""
Exact operator algebra
======================

Build the damped oscillator Hamiltonian three ways and compare them as
normal-ordered polynomials in y and p.  Everything here is exact rational
arithmetic.
"""
from fractions import Fraction

from dampedqm import SymbolicParams, adjoint, build_hamiltonian, gauge_conjugate, generators
from dampedqm import parse_operator, reduced_hamiltonian, split_hermitian

sp = SymbolicParams(m=1, omega=1, lam=Fraction(1, 2), hbar=1)
y, p = generators(sp.hbar)

# the canonical commutator is built into the product
print("y*p - p*y =", y * p - p * y)

# the y*p ordering is not Hermitian
print("(y p)^dagger =", adjoint(y * p))

h2 = build_hamiltonian(sp, "EQ2")
h5 = build_hamiltonian(sp, "EQ5")
print("H =", h2)
print("completed-square form equal:", h2 == h5)

# what is left after removing the Hermitian part is a constant
herm, anti = split_hermitian(h2)
print("anti-Hermitian part:", anti)

# conjugating by exp(i m lam y^2 / 4 hbar) shifts p and leaves a plain oscillator
conj = gauge_conjugate(h2, sp.sigma)
print("gauged H =", conj)
print("equals reduced oscillator:", conj == reduced_hamiltonian(sp))

# the same, typed as text
q = parse_operator("(p + (m*lambda/2)*y)^2", sp)
print("(p + m lam y/2)^2 =", q)
