"""Verification toolkit for the non-Hermitian damped-oscillator Hamiltonian.

Exact operator algebra (:mod:`weyl_algebra`), closed-form levels and
eigenfunctions (:mod:`analytic`), finite-difference matrices
(:mod:`discretize`), a dense complex QR eigensolver (:mod:`eigensolve`),
Crank-Nicolson dynamics (:mod:`evolve`) and the classical oscillator
(:mod:`dynamics`).
"""
from .analytic import (
    ComplexEnergy,
    DegenerateSpectrumWarning,
    PhysParams,
    RegimeError,
    WaveFunction,
    apply_gauge,
    claimed_real_eigenvalue,
    complex_eigenvalue,
    eigenfunction,
    hermite,
)
from .discretize import (
    Grid,
    OperatorMatrix,
    assemble,
    commutator_defect,
    gauge_conjugate_matrix,
    make_grid,
    momentum_matrix,
)
from .dynamics import (
    InitialCondition,
    Regime,
    Trajectory,
    closed_form,
    damped_frequency,
    integrate_rk4,
    regime,
)
from .eigensolve import ConvergenceError, LevelReport, Spectrum, eig, match_levels, residual
from .evolve import EvolutionSeries, growth_rate, propagate
from .opparser import ParseError, parse_operator
from .weyl_algebra import (
    OperatorPoly,
    RationalComplex,
    SymbolicParams,
    adjoint,
    build_hamiltonian,
    gauge_conjugate,
    generators,
    normal_order_mul,
    reduced_hamiltonian,
    split_hermitian,
)

__version__ = "0.1.0"
