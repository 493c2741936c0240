"""Closed-form spectrum and eigenfunctions of the damped-oscillator Hamiltonian.

The Hamiltonian ``p^2/2m + m w^2 y^2/2 + (lam/2) y p`` is similar, through the
unimodular gauge factor ``exp(i m lam y^2 / 4 hbar)``, to an ordinary
oscillator of reduced frequency ``Omega = sqrt(w^2 - lam^2/4)`` shifted by the
constant ``i hbar lam / 4``.  Its levels are therefore

    E_n = (n + 1/2) hbar Omega + i hbar lam / 4

and its eigenfunctions are gauge-dressed Hermite functions.

Sign convention: ``Im E_n = +hbar lam/4`` means ``|psi(t)|^2`` grows like
``exp(lam t / 2)`` under ``exp(-i H t / hbar)``.  The sign is reported as
computed; no physical interpretation is attached to it here.

Global phase: the Hermite functions are real and positive on their rightmost
lobe (leading coefficient of ``H_n`` is positive).
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

LOG_SPACE_ABOVE = 20


class RegimeError(ValueError):
    """Parameters outside the regime where a closed form is claimed."""


class DegenerateSpectrumWarning(UserWarning):
    """Critical damping: every level collapses onto i*hbar*lam/4."""


@dataclass(frozen=True)
class PhysParams:
    m: float = 1.0
    omega: float = 1.0
    lam: float = 0.0
    hbar: float = 1.0

    def __post_init__(self):
        for name in ("m", "omega", "lam", "hbar"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise ValueError(f"{name} must be finite, got {v}")
        if self.m <= 0:
            raise ValueError(f"m must be positive, got {self.m}")
        if self.omega <= 0:
            raise ValueError(f"omega must be positive, got {self.omega}")
        if self.lam < 0:
            raise ValueError(f"lambda must be non-negative, got {self.lam}")
        if self.hbar <= 0:
            raise ValueError(f"hbar must be positive, got {self.hbar}")

    @property
    def underdamped(self) -> bool:
        return self.lam < 2 * self.omega

    @property
    def Omega(self) -> float:
        """Reduced frequency sqrt(omega^2 - lambda^2/4); 0 at critical damping."""
        disc = self.omega**2 - self.lam**2 / 4
        if self.lam > 2 * self.omega:
            raise RegimeError(
                f"overdamped (lambda={self.lam} > 2*omega={2 * self.omega}): no reduced frequency"
            )
        return math.sqrt(max(disc, 0.0))

    def as_dict(self) -> dict:
        return {"m": self.m, "omega": self.omega, "lambda": self.lam, "hbar": self.hbar}


class ComplexEnergy(complex):
    """A complex level; ``degenerate`` is set at critical damping."""

    degenerate: bool

    def __new__(cls, re: float, im: float, degenerate: bool = False):
        obj = super().__new__(cls, re, im)
        obj.degenerate = degenerate
        return obj

    @property
    def re(self) -> float:
        return self.real

    @property
    def im(self) -> float:
        return self.imag


def _reduced_frequency(params: PhysParams) -> tuple[float, bool]:
    if params.lam > 2 * params.omega:
        raise RegimeError(
            f"overdamped regime (lambda={params.lam} > 2*omega={2 * params.omega}) has no normalizable closed-form spectrum"
        )
    if params.lam == 2 * params.omega:
        warnings.warn(
            "critical damping: reduced frequency is zero and all levels coincide",
            DegenerateSpectrumWarning,
            stacklevel=3,
        )
        return 0.0, True
    return params.Omega, False


def complex_eigenvalue(n: int, params: PhysParams) -> ComplexEnergy:
    """(n + 1/2) hbar Omega + i hbar lam / 4."""
    if n < 0:
        raise ValueError(f"level index must be >= 0, got {n}")
    Omega, degenerate = _reduced_frequency(params)
    return ComplexEnergy((n + 0.5) * params.hbar * Omega, params.hbar * params.lam / 4, degenerate)


def claimed_real_eigenvalue(n: int, params: PhysParams) -> float:
    """The real spectrum obtained when the non-Hermiticity of y p is ignored.

    Differs from :func:`complex_eigenvalue` by exactly ``i hbar lam / 4``.
    """
    if n < 0:
        raise ValueError(f"level index must be >= 0, got {n}")
    Omega, _ = _reduced_frequency(params)
    return (n + 0.5) * params.hbar * Omega


def hermite(n: int, x):
    """Physicists' Hermite polynomial H_n(x) by the three-term recurrence."""
    if n < 0:
        raise ValueError(f"degree must be >= 0, got {n}")
    x = np.asarray(x, dtype=float)
    h_prev = np.ones_like(x)
    if n == 0:
        return h_prev if h_prev.ndim else float(h_prev)
    h = 2 * x
    for k in range(1, n):
        h_prev, h = h, 2 * x * h - 2 * k * h_prev
    return h if h.ndim else float(h)


def hermite_function(n: int, xi):
    """Normalized Hermite function pi^(-1/4) H_n(xi) exp(-xi^2/2) / sqrt(2^n n!).

    Uses the normalized recurrence; above degree 20 the values are carried
    with a separate log scale so neither the polynomial nor the Gaussian
    over- or underflows before they are combined.
    """
    xi = np.asarray(xi, dtype=float)
    if n <= LOG_SPACE_ABOVE:
        g = np.pi**-0.25 * np.exp(-(xi**2) / 2)
        prev, cur = np.zeros_like(xi), g
        for k in range(n):
            prev, cur = cur, math.sqrt(2 / (k + 1)) * xi * cur - math.sqrt(k / (k + 1)) * prev
        return cur

    log_scale = -(xi**2) / 2
    prev, cur = np.zeros_like(xi), np.full_like(xi, np.pi**-0.25)
    for k in range(n):
        prev, cur = cur, math.sqrt(2 / (k + 1)) * xi * cur - math.sqrt(k / (k + 1)) * prev
        big = np.abs(cur) > 1e150
        if np.any(big):
            cur = np.where(big, cur * 1e-150, cur)
            prev = np.where(big, prev * 1e-150, prev)
            log_scale = np.where(big, log_scale + 150 * math.log(10), log_scale)
    with np.errstate(divide="ignore"):
        mag = np.log(np.abs(cur)) + log_scale
    return np.where(cur == 0, 0.0, np.sign(cur) * np.exp(mag))


def oscillator_eigenfunction(n: int, y, m: float, freq: float, hbar: float):
    """Real normalized eigenfunction of the ordinary oscillator of frequency ``freq``."""
    alpha = math.sqrt(m * freq / hbar)
    return alpha**0.5 * hermite_function(n, alpha * np.asarray(y, dtype=float))


@dataclass
class WaveFunction:
    grid: object
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)
        if self.values.shape != (len(self.grid.nodes),):
            raise ValueError(
                f"expected {len(self.grid.nodes)} samples, got shape {self.values.shape}"
            )
        if not np.all(np.isfinite(self.values)):
            raise ValueError("wavefunction has non-finite samples")

    @property
    def y(self) -> np.ndarray:
        return self.grid.nodes

    def norm2(self) -> float:
        return float(np.trapezoid(np.abs(self.values) ** 2, self.y))

    def norm(self) -> float:
        return math.sqrt(self.norm2())

    def inner(self, other: "WaveFunction") -> complex:
        """Trapezoidal <self|other>."""
        return complex(np.trapezoid(self.values.conj() * other.values, self.y))


def eigenfunction(n: int, params: PhysParams, grid) -> WaveFunction:
    """psi_n(y) = exp(-i m lam y^2 / 4 hbar) * phi_n(y; m, Omega)."""
    if n < 0:
        raise ValueError(f"level index must be >= 0, got {n}")
    if not params.underdamped:
        raise RegimeError(
            f"eigenfunctions need lambda < 2*omega (got lambda={params.lam}, omega={params.omega})"
        )
    y = grid.nodes
    phi = oscillator_eigenfunction(n, y, params.m, params.Omega, params.hbar)
    return WaveFunction(grid, _gauge_factor(y, params, -1) * phi)


def _gauge_factor(y, params: PhysParams, sign: int):
    return np.exp(sign * 1j * params.m * params.lam * y**2 / (4 * params.hbar))


def apply_gauge(psi: WaveFunction, params: PhysParams, direction: str = "forward") -> WaveFunction:
    """Multiply by exp(+i m lam y^2 / 4 hbar) (forward) or its inverse."""
    if direction not in ("forward", "inverse"):
        raise ValueError(f"direction must be 'forward' or 'inverse', got {direction!r}")
    sign = 1 if direction == "forward" else -1
    return WaveFunction(psi.grid, _gauge_factor(psi.y, params, sign) * psi.values)
