"""Crank-Nicolson propagation under the (non-Hermitian) banded Hamiltonian.

Each step solves ``(I + i dt A / 2 hbar) psi_next = (I - i dt A / 2 hbar) psi``
with a banded LU solve.  For Hermitian ``A`` the update is unitary.  For the
completed-square construction, ``A = Hermitian + (i hbar lam/4) I`` and every
eigencomponent picks up the same modulus factor per step,

    |(1 + dt lam/8 - i dt e/2) / (1 - dt lam/8 + i dt e/2)|,   e = Re E / hbar,

which is ``exp(lam dt / 4)`` to second order, so ``|psi|^2`` grows at rate
``lam/2`` regardless of the state.  Norms are reported raw; nothing is
renormalized.
"""
from __future__ import annotations

import numpy as np
from dataclasses import dataclass
from scipy.linalg import LinAlgError, solve_banded

from .analytic import WaveFunction
from .discretize import OperatorMatrix, bandwidth
from ._io import format_csv

FIT_SKIP_STEPS = 10


class SingularSolveError(RuntimeError):
    def __init__(self, step: int):
        super().__init__(f"Crank-Nicolson system is numerically singular at step {step}")
        self.step = step


class DegenerateFitError(ValueError):
    pass


@dataclass
class EvolutionSeries:
    times: np.ndarray
    norms: np.ndarray
    positions: np.ndarray
    overlaps: np.ndarray
    final: WaveFunction | None = None

    def __post_init__(self):
        if not len(self.times) == len(self.norms) == len(self.positions) == len(self.overlaps):
            raise ValueError("evolution series arrays differ in length")

    def __len__(self):
        return len(self.times)

    def to_csv(self) -> str:
        return format_csv(["t", "norm2", "exp_y", "overlap"],
                          [self.times, self.norms, self.positions, self.overlaps])


def _diagonals(a: np.ndarray, lower: int, upper: int) -> dict[int, np.ndarray]:
    return {d: np.diagonal(a, d).copy() for d in range(-lower, upper + 1)}


def _band_storage(diags: dict[int, np.ndarray], n: int, lower: int, upper: int) -> np.ndarray:
    ab = np.zeros((lower + upper + 1, n), dtype=complex)
    for d, vals in diags.items():
        row = upper - d
        if d >= 0:
            ab[row, d:] = vals
        else:
            ab[row, :n + d] = vals
    return ab


def _band_matvec(diags: dict[int, np.ndarray], x: np.ndarray) -> np.ndarray:
    out = diags[0] * x
    n = len(x)
    for d, vals in diags.items():
        if d > 0:
            out[: n - d] += vals * x[d:]
        elif d < 0:
            out[-d:] += vals * x[: n + d]
    return out


def _observables(values, y, ref, ref_norm):
    dens = np.abs(values) ** 2
    norm2 = np.trapezoid(dens, y)
    pos = np.trapezoid(y * dens, y) / norm2
    ov = abs(np.trapezoid(ref.conj() * values, y)) / (ref_norm * np.sqrt(norm2))
    return norm2, pos, ov


def propagate(matrix: OperatorMatrix, psi0: WaveFunction, dt: float, steps: int) -> EvolutionSeries:
    """Evolve ``psi0`` for ``steps`` steps of size ``dt``; observables at every step."""
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt}")
    if steps < 1:
        raise ValueError(f"need at least one step, got {steps}")
    a = np.asarray(matrix.entries, dtype=complex)
    n = a.shape[0]
    if psi0.values.shape != (n,):
        raise ValueError(f"wavefunction has {psi0.values.shape[0]} samples, matrix is {n}x{n}")
    hbar = matrix.params.hbar
    bw = bandwidth(a)
    diags = _diagonals(a, bw, bw)
    c = 1j * dt / (2 * hbar)
    plus = {d: c * v for d, v in diags.items()}
    minus = {d: -c * v for d, v in diags.items()}
    plus[0] = plus[0] + 1
    minus[0] = minus[0] + 1
    ab = _band_storage(plus, n, bw, bw)

    y = psi0.y
    psi = psi0.values.copy()
    ref = psi.copy()
    ref_norm = np.sqrt(np.trapezoid(np.abs(ref) ** 2, y))
    times = dt * np.arange(steps + 1)
    norms = np.empty(steps + 1)
    positions = np.empty(steps + 1)
    overlaps = np.empty(steps + 1)
    norms[0], positions[0], overlaps[0] = _observables(psi, y, ref, ref_norm)
    for k in range(1, steps + 1):
        rhs = _band_matvec(minus, psi)
        try:
            psi = solve_banded((bw, bw), ab, rhs, check_finite=False)
        except LinAlgError as exc:
            raise SingularSolveError(k) from exc
        if not np.all(np.isfinite(psi)):
            raise SingularSolveError(k)
        norms[k], positions[k], overlaps[k] = _observables(psi, y, ref, ref_norm)
    return EvolutionSeries(times, norms, positions, overlaps, WaveFunction(psi0.grid, psi))


def growth_rate(series: EvolutionSeries, skip: int = FIT_SKIP_STEPS) -> float:
    """Least-squares slope of ln |psi|^2 against t, dropping the first ``skip`` steps."""
    if len(series) < 10:
        raise ValueError(f"need at least 10 samples for a growth fit, got {len(series)}")
    if np.any(series.norms <= 0):
        raise ValueError("norms must be positive")
    if len(series) - skip < 2:
        skip = 0
    t = np.asarray(series.times[skip:], dtype=float)
    if np.ptp(t) == 0:
        raise DegenerateFitError("all sample times are equal")
    slope, _ = np.polyfit(t, np.log(series.norms[skip:]), 1)
    return float(slope)
