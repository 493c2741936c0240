"""Classical damped oscillator q'' + lam q' + w^2 q = 0.

Closed-form solutions for all three regimes and a fixed-step RK4 integrator
used to cross-check them.  Only ``omega`` and ``lam`` of :class:`PhysParams`
matter here.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .analytic import PhysParams
from ._io import format_csv

# |lam - 2w| below this (times w) uses the critical-branch formula
NEAR_CRITICAL = 1e-8


class Regime(enum.Enum):
    UNDERDAMPED = "Underdamped"
    CRITICAL = "Critical"
    OVERDAMPED = "Overdamped"


@dataclass(frozen=True)
class InitialCondition:
    q0: float = 1.0
    v0: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.q0) and math.isfinite(self.v0)):
            raise ValueError(f"initial condition must be finite, got {self}")


@dataclass
class Trajectory:
    times: np.ndarray
    positions: np.ndarray
    velocities: np.ndarray

    def __post_init__(self):
        if not len(self.times) == len(self.positions) == len(self.velocities):
            raise ValueError("trajectory arrays differ in length")
        if np.any(np.diff(self.times) <= 0):
            raise ValueError("trajectory times must be strictly increasing")

    def energy(self, params: PhysParams) -> np.ndarray:
        """(v^2 + w^2 q^2) / 2 per unit mass."""
        return 0.5 * (self.velocities**2 + params.omega**2 * self.positions**2)

    def to_csv(self) -> str:
        return format_csv(["t", "q", "v"], [self.times, self.positions, self.velocities])


def regime(params: PhysParams) -> Regime:
    """Exact float comparison of lam against 2*omega."""
    if params.lam < 2 * params.omega:
        return Regime.UNDERDAMPED
    if params.lam == 2 * params.omega:
        return Regime.CRITICAL
    return Regime.OVERDAMPED


def damped_frequency(params: PhysParams) -> float:
    """sqrt(w^2 - lam^2/4), the classical oscillation frequency."""
    return params.Omega


def closed_form(params: PhysParams, ic: InitialCondition, t):
    """Exact (q, v) at time(s) ``t >= 0``."""
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("closed form is evaluated for t >= 0 only")
    w, lam = params.omega, params.lam
    q0, v0 = ic.q0, ic.v0
    g = lam / 2
    decay = np.exp(-g * t)

    if abs(lam - 2 * w) < NEAR_CRITICAL * w:
        # critical branch; also used just off critical to avoid cancellation
        b = v0 + g * q0
        q = decay * (q0 + b * t)
        v = decay * (b - g * (q0 + b * t))
    elif lam < 2 * w:
        wd = math.sqrt(w * w - g * g)
        b = (v0 + g * q0) / wd
        cos, sin = np.cos(wd * t), np.sin(wd * t)
        q = decay * (q0 * cos + b * sin)
        v = decay * ((b * wd - g * q0) * cos - (q0 * wd + g * b) * sin)
    else:
        s = math.sqrt(g * g - w * w)
        r1, r2 = -g + s, -g - s
        c1 = (v0 - r2 * q0) / (r1 - r2)
        c2 = q0 - c1
        e1, e2 = np.exp(r1 * t), np.exp(r2 * t)
        q = c1 * e1 + c2 * e2
        v = c1 * r1 * e1 + c2 * r2 * e2
    if q.ndim == 0:
        return float(q), float(v)
    return q, v


def integrate_rk4(params: PhysParams, ic: InitialCondition, t_max: float, h: float) -> Trajectory:
    """Classical RK4 for q' = v, v' = -lam v - w^2 q with a fixed step.

    The final step is shortened if ``h`` does not divide ``t_max``.
    """
    if not t_max > 0:
        raise ValueError(f"t_max must be positive, got {t_max}")
    if not 0 < h <= t_max:
        raise ValueError(f"step must satisfy 0 < h <= t_max, got h={h}")
    lam, w2 = params.lam, params.omega**2

    def f(q, v):
        return v, -lam * v - w2 * q

    n = int(round(t_max / h))
    if abs(n * h - t_max) > 1e-12 * t_max:
        n = int(math.ceil(t_max / h))
    times = np.minimum(np.arange(n + 1) * h, t_max)
    times[-1] = t_max
    qs = np.empty(n + 1)
    vs = np.empty(n + 1)
    q, v = ic.q0, ic.v0
    qs[0], vs[0] = q, v
    for k in range(n):
        dt = times[k + 1] - times[k]
        k1q, k1v = f(q, v)
        k2q, k2v = f(q + 0.5 * dt * k1q, v + 0.5 * dt * k1v)
        k3q, k3v = f(q + 0.5 * dt * k2q, v + 0.5 * dt * k2v)
        k4q, k4v = f(q + dt * k3q, v + dt * k3v)
        q += dt / 6 * (k1q + 2 * k2q + 2 * k3q + k4q)
        v += dt / 6 * (k1v + 2 * k2v + 2 * k3v + k4v)
        qs[k + 1], vs[k + 1] = q, v
    return Trajectory(times, qs, vs)


def envelope_decay_rate(params: PhysParams) -> float:
    """Rate of the classical amplitude envelope exp(-lam t / 2)."""
    return params.lam / 2
