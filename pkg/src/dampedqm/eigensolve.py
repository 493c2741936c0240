"""Dense complex eigensolver and level matching against the closed-form spectrum.

The solver is the textbook route for general complex matrices: Householder
reduction to upper Hessenberg form, then single-shift complex QR sweeps
(Givens rotations) with Wilkinson shifts and deflation of negligible
subdiagonal entries.  Input that is already Hessenberg, such as the banded
oscillator matrices, skips the reduction.

Only double precision is used.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import solve_triangular

from .analytic import PhysParams, RegimeError, complex_eigenvalue
from ._io import format_json

MAX_ITER_PER_EIGENVALUE = 40
EXCEPTIONAL_SHIFT_EVERY = 10


class ConvergenceError(RuntimeError):
    """QR iteration failed to deflate an eigenvalue."""

    def __init__(self, index: int, iterations: int):
        super().__init__(
            f"eigenvalue at position {index} did not deflate within {iterations} QR iterations"
        )
        self.index = index
        self.iterations = iterations


class LevelMismatchError(ValueError):
    """Too few trusted levels in a spectrum for the requested comparison."""


@dataclass
class Spectrum:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray | None = None
    iterations: int = 0
    deflations: int = 0

    def __len__(self):
        return len(self.eigenvalues)


def _as_array(matrix) -> np.ndarray:
    a = getattr(matrix, "entries", matrix)
    return np.array(a, dtype=complex)


def sort_order(values: np.ndarray) -> np.ndarray:
    """Indices sorting by ascending real part, ties by ascending imaginary part."""
    values = np.asarray(values)
    return np.lexsort((values.imag, values.real))


def is_hessenberg(a: np.ndarray) -> bool:
    return not np.any(np.tril(a, -2))


def hessenberg(a: np.ndarray, want_q: bool = False):
    """Householder reduction ``a = q h q^H``; returns ``h`` (and ``q``)."""
    h = np.array(a, dtype=complex)
    n = h.shape[0]
    q = np.eye(n, dtype=complex) if want_q else None
    for k in range(n - 2):
        x = h[k + 1:, k]
        alpha = np.linalg.norm(x)
        if alpha == 0.0 or not np.any(x[1:]):
            continue
        phase = x[0] / abs(x[0]) if x[0] != 0 else 1.0
        v = x.copy()
        v[0] += phase * alpha
        v /= np.linalg.norm(v)
        # H <- (I - 2vv^H) H (I - 2vv^H)
        h[k + 1:, k:] -= 2.0 * np.outer(v, v.conj() @ h[k + 1:, k:])
        h[:, k + 1:] -= 2.0 * np.outer(h[:, k + 1:] @ v, v.conj())
        h[k + 2:, k] = 0.0
        if want_q:
            q[:, k + 1:] -= 2.0 * np.outer(q[:, k + 1:] @ v, v.conj())
    return (h, q) if want_q else h


def _givens(a: complex, b: complex):
    # [[c, s], [-conj(s), c]] @ [a, b] = [r, 0]
    if b == 0:
        return 1.0, 0j
    if a == 0:
        return 0.0, b.conjugate() / abs(b)
    na = abs(a)
    nrm = math.hypot(na, abs(b))
    return na / nrm, (a / na) * b.conjugate() / nrm


def _wilkinson_shift(a, b, c, d):
    half_tr = 0.5 * (a + d)
    disc = np.sqrt(0.25 * (a - d) ** 2 + b * c)
    r1, r2 = half_tr + disc, half_tr - disc
    return r1 if abs(r1 - d) <= abs(r2 - d) else r2


def schur_qr(h: np.ndarray, z: np.ndarray | None = None):
    """Reduce Hessenberg ``h`` in place to upper triangular form.

    When ``z`` is given the rotations are accumulated into it and the full
    triangular factor is maintained; otherwise only the active block is
    updated, which is enough for the eigenvalues on the diagonal.
    Returns ``(total_iterations, deflations)``.
    """
    n = h.shape[0]
    want_t = z is not None
    eps = np.finfo(float).eps
    fallback = max(np.abs(h).max(), np.finfo(float).tiny)
    hi = n - 1
    its = 0
    total = 0
    deflations = 0
    while hi >= 0:
        # locate the start of the unreduced block ending at hi
        diag = np.abs(np.diagonal(h)[:hi + 1])
        sub = np.abs(np.diagonal(h, -1)[:hi])
        scale = diag[1:] + diag[:-1]
        scale[scale == 0.0] = fallback
        small = np.flatnonzero(sub <= eps * scale)
        lo = int(small[-1]) + 1 if len(small) else 0
        if lo > 0:
            h[lo, lo - 1] = 0.0
        if lo == hi:
            hi -= 1
            its = 0
            deflations += 1
            continue
        if its >= MAX_ITER_PER_EIGENVALUE:
            raise ConvergenceError(hi, its)
        its += 1
        total += 1

        if its % EXCEPTIONAL_SHIFT_EVERY == 0:
            mu = h[hi, hi] + 0.75 * abs(h[hi, hi - 1].real)
            if hi - 1 > lo:
                mu += 0.75 * abs(h[hi - 1, hi - 2])
        else:
            mu = _wilkinson_shift(h[hi - 1, hi - 1], h[hi - 1, hi], h[hi, hi - 1], h[hi, hi])

        col_end = n if want_t else hi + 1
        row_start = 0 if want_t else lo
        idx = np.arange(lo, hi + 1)
        h[idx, idx] -= mu
        prev = None
        for k in range(lo, hi):
            c, s = _givens(complex(h[k, k]), complex(h[k + 1, k]))
            g = np.array([[c, s], [-s.conjugate(), c]])
            h[k:k + 2, k:col_end] = g @ h[k:k + 2, k:col_end]
            if prev is not None:
                _apply_right(h, z, k - 1, prev, row_start)
            prev = g
        _apply_right(h, z, hi - 1, prev, row_start)
        h[idx, idx] += mu
    return total, deflations


def _apply_right(h, z, k, g, row_start):
    # multiply columns k, k+1 by g^H from the right
    gh = g.conj().T
    r = min(k + 2, h.shape[0])
    h[row_start:r, k:k + 2] = h[row_start:r, k:k + 2] @ gh
    if z is not None:
        z[:, k:k + 2] = z[:, k:k + 2] @ gh


def _triangular_eigenvectors(t: np.ndarray) -> np.ndarray:
    n = t.shape[0]
    small = np.finfo(float).eps * max(np.abs(t).max(), np.finfo(float).tiny)
    x = np.zeros((n, n), dtype=complex)
    for i in range(n):
        x[i, i] = 1.0
        if i == 0:
            continue
        u = t[:i, :i] - t[i, i] * np.eye(i)
        d = np.diagonal(u).copy()
        tiny = np.abs(d) < small
        d[tiny] = small
        np.fill_diagonal(u, d)
        x[:i, i] = solve_triangular(u, -t[:i, i])
    return x


def eig(matrix, vectors: bool = False) -> Spectrum:
    """All eigenvalues of a general complex matrix, sorted by (Re, Im).

    With ``vectors=True`` unit-norm right eigenvectors are returned as the
    columns of ``Spectrum.eigenvectors`` aligned with the sorted values.
    """
    a = _as_array(matrix)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 2:
        raise ValueError(f"need a square matrix of dimension >= 2, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    n = a.shape[0]

    if is_hessenberg(a):
        h = a.copy()
        q = np.eye(n, dtype=complex) if vectors else None
    elif vectors:
        h, q = hessenberg(a, want_q=True)
    else:
        h, q = hessenberg(a), None

    total, deflations = schur_qr(h, q)
    values = np.diagonal(h).copy()
    vecs = None
    if vectors:
        t = np.triu(h)
        vecs = q @ _triangular_eigenvectors(t)
        vecs /= np.linalg.norm(vecs, axis=0)
    order = sort_order(values)
    values = values[order]
    if vecs is not None:
        vecs = vecs[:, order]
    return Spectrum(values, vecs, iterations=total, deflations=deflations)


def trust_threshold(params: PhysParams, half_width: float) -> float:
    """Real-part cutoff below which levels are not box artifacts."""
    return 0.5 * (params.m * params.omega**2 * half_width**2 / 2)


@dataclass
class LevelReport:
    n: np.ndarray
    analytic: np.ndarray
    numeric: np.ndarray
    abs_error: np.ndarray
    residuals: np.ndarray | None
    params: PhysParams
    grid: dict = field(default_factory=dict)
    form: str = ""

    @property
    def k(self) -> int:
        return len(self.n)

    @property
    def imag_offset_mean(self) -> float:
        return float(np.mean(self.numeric.imag))

    @property
    def max_error(self) -> float:
        return float(self.abs_error.max())

    def to_dict(self) -> dict:
        levels = []
        for i in range(self.k):
            row = {
                "n": int(self.n[i]),
                "analytic_re": float(self.analytic[i].real),
                "analytic_im": float(self.analytic[i].imag),
                "numeric_re": float(self.numeric[i].real),
                "numeric_im": float(self.numeric[i].imag),
                "abs_error": float(self.abs_error[i]),
            }
            if self.residuals is not None:
                row["residual"] = float(self.residuals[i])
            levels.append(row)
        return {
            "params": self.params.as_dict(),
            "grid": dict(self.grid),
            "form": self.form,
            "imag_offset_mean": self.imag_offset_mean,
            "levels": levels,
        }

    def to_json(self) -> str:
        return format_json(self.to_dict())


def match_levels(spectrum: Spectrum, params: PhysParams, k: int, matrix=None) -> LevelReport:
    """Pair the k lowest eigenvalues with the closed-form levels n = 0..k-1."""
    if not 1 <= k <= 12:
        raise ValueError(f"trusted level count must be in 1..12, got {k}")
    if params.lam >= 2 * params.omega:
        raise RegimeError(
            f"level matching needs an underdamped oscillator (lambda={params.lam} >= 2*omega={2 * params.omega})"
        )
    grid = getattr(matrix, "grid", None)
    half_width = grid.L if grid is not None else math.inf
    cutoff = trust_threshold(params, half_width)

    values = np.asarray(spectrum.eigenvalues)
    order = sort_order(values)
    values = values[order]
    trusted = values[values.real < cutoff]
    if len(trusted) < k:
        raise LevelMismatchError(
            f"only {len(trusted)} levels below the trust threshold Re E < {cutoff:g}, need {k}"
        )
    numeric = trusted[:k]
    analytic = np.array([complex(complex_eigenvalue(n, params)) for n in range(k)])

    residuals = None
    if spectrum.eigenvectors is not None and matrix is not None:
        a = _as_array(matrix)
        vecs = spectrum.eigenvectors[:, order][:, :k]
        residuals = np.linalg.norm(a @ vecs - vecs * numeric, axis=0)

    report = LevelReport(
        n=np.arange(k),
        analytic=analytic,
        numeric=numeric,
        abs_error=np.abs(numeric - analytic),
        residuals=residuals,
        params=params,
        form=getattr(matrix, "form", "") or "",
    )
    if grid is not None:
        report.grid = {"L": grid.L, "N": grid.N}
    return report


def residual(matrix, psi, energy: complex) -> float:
    """Relative interior residual ``|A psi - E psi| / |psi|``, two nodes trimmed per edge."""
    a = _as_array(matrix)
    values = np.asarray(getattr(psi, "values", psi), dtype=complex)
    if values.shape != (a.shape[0],):
        raise ValueError(f"wavefunction has {values.shape[0]} samples, matrix is {a.shape[0]}x{a.shape[1]}")
    r = (a @ values - energy * values)[2:-2]
    return float(np.linalg.norm(r) / np.linalg.norm(values[2:-2]))


def load_report(text: str) -> dict:
    return json.loads(text)
