"""Finite-difference matrices for the damped-oscillator Hamiltonian.

Uniform grid on [-L, L] with hard walls just outside the end nodes.  The
building blocks are

* ``Y``: diagonal node matrix,
* ``P = -i hbar D`` with ``D`` the central first difference (exactly Hermitian),
* ``T = -hbar^2 Lap`` with ``Lap`` the three-point second difference,

and the two constructions are

* ``"EQ2"``: ``T/2m + (m w^2/2) Y^2 + (lam/2) Y P`` -- the damping term keeps
  the literal ``y p`` ordering, so the matrix is not Hermitian;
* ``"EQ5"``: ``(T + a(PY + YP) + a^2 Y^2)/2m + (m/2)(w^2 - lam^2/4) Y^2 + i hbar lam/4``
  with ``a = m lam/2``, i.e. the completed square built from Hermitian
  blocks plus a constant imaginary shift.

Because ``T`` plays the role of ``P^2`` in both, ``EQ2 - EQ5`` equals
``(lam/4)([Y, P] - i hbar I)`` entry by entry.  All matrices are tridiagonal.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .analytic import PhysParams

FORMS = ("EQ2", "EQ5")
MIN_POINTS = 16


@dataclass(frozen=True)
class Grid:
    L: float
    N: int

    def __post_init__(self):
        if not (isinstance(self.L, (int, float)) and math.isfinite(self.L) and self.L > 0):
            raise ValueError(f"half width L must be a positive finite number, got {self.L!r}")
        if int(self.N) != self.N or self.N < MIN_POINTS:
            raise ValueError(f"need an integer N >= {MIN_POINTS}, got {self.N!r}")
        object.__setattr__(self, "N", int(self.N))
        object.__setattr__(self, "L", float(self.L))

    @property
    def h(self) -> float:
        return 2 * self.L / (self.N - 1)

    @property
    def nodes(self) -> np.ndarray:
        # integer offsets keep the grid exactly symmetric about 0
        return (2 * np.arange(self.N) - (self.N - 1)) * (self.L / (self.N - 1))

    def refined(self) -> "Grid":
        """Same interval with the spacing halved."""
        return Grid(self.L, 2 * self.N - 1)


def make_grid(L: float, N: int) -> Grid:
    return Grid(L, N)


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    entries: np.ndarray
    form: str
    grid: Grid
    params: PhysParams

    @property
    def N(self) -> int:
        return self.entries.shape[0]

    def hermitian_part(self) -> np.ndarray:
        a = self.entries
        return (a + a.conj().T) / 2

    def anti_hermitian_part(self) -> np.ndarray:
        a = self.entries
        return (a - a.conj().T) / 2

    def bandwidth(self) -> int:
        return bandwidth(self.entries)

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)


def bandwidth(a: np.ndarray) -> int:
    rows, cols = np.nonzero(a)
    if len(rows) == 0:
        return 0
    return int(np.abs(rows - cols).max())


def _first_difference(grid: Grid) -> np.ndarray:
    n, h = grid.N, grid.h
    off = np.full(n - 1, 1 / (2 * h))
    return np.diag(off, 1) - np.diag(off, -1)


def _laplacian(grid: Grid) -> np.ndarray:
    n, h = grid.N, grid.h
    return (np.diag(np.full(n - 1, 1.0), 1) + np.diag(np.full(n - 1, 1.0), -1)
            - np.diag(np.full(n, 2.0))) / h**2


def momentum_matrix(grid: Grid, params: PhysParams) -> np.ndarray:
    """-i hbar times the central first difference."""
    return -1j * params.hbar * _first_difference(grid)


def kinetic_square(grid: Grid, params: PhysParams) -> np.ndarray:
    """The Hermitian stand-in for P^2: -hbar^2 times the three-point Laplacian."""
    return (-params.hbar**2 * _laplacian(grid)).astype(complex)


def assemble(params: PhysParams, grid: Grid, form: str = "EQ5") -> OperatorMatrix:
    form = form.upper()
    if form not in FORMS:
        raise ValueError(f"form must be one of {FORMS}, got {form!r}")
    m, w, lam, hbar = params.m, params.omega, params.lam, params.hbar
    y = grid.nodes
    P = momentum_matrix(grid, params)
    T = kinetic_square(grid, params)
    y2 = np.diag(y**2).astype(complex)

    if form == "EQ2":
        YP = y[:, None] * P
        a = T / (2 * m) + (m * w**2 / 2) * y2 + (lam / 2) * YP
    else:
        s = m * lam / 2
        cross = P * (y[:, None] + y[None, :])  # PY + YP
        a = (T + s * cross + s * s * y2) / (2 * m) + (m / 2) * (w**2 - lam**2 / 4) * y2
        a[np.diag_indices_from(a)] += 1j * hbar * lam / 4
    return OperatorMatrix(a, form, grid, params)


def commutator(grid: Grid, params: PhysParams) -> np.ndarray:
    """[Y, P] on the grid."""
    y = grid.nodes
    P = momentum_matrix(grid, params)
    return (y[:, None] - y[None, :]) * P


def commutator_defect(grid: Grid, params: PhysParams, boundary: bool = False) -> float:
    """Largest |row sum| of ``[Y, P] - i hbar I``.

    On interior rows (two trimmed at each edge) the two off-diagonal entries
    ``i hbar/2`` cancel the diagonal ``-i hbar``, so the defect is zero up to
    rounding of the node differences.  ``boundary=True`` inspects the four
    trimmed rows instead, where a neighbour is missing and the defect is
    ``hbar/2``.
    """
    c = commutator(grid, params)
    c[np.diag_indices_from(c)] -= 1j * params.hbar
    sums = np.abs(c.sum(axis=1))
    rows = np.r_[sums[:2], sums[-2:]] if boundary else sums[2:-2]
    return float(rows.max())


def gauge_unitary(grid: Grid, params: PhysParams) -> np.ndarray:
    """Diagonal of exp(i m lam y^2 / 4 hbar) at the nodes."""
    return np.exp(1j * params.m * params.lam * grid.nodes**2 / (4 * params.hbar))


def gauge_conjugate_matrix(matrix: OperatorMatrix) -> OperatorMatrix:
    """U A U^H with U the diagonal gauge unitary (grid analogue of eta H eta^-1)."""
    u = gauge_unitary(matrix.grid, matrix.params)
    a = u[:, None] * matrix.entries * u.conj()[None, :]
    return OperatorMatrix(a, matrix.form, matrix.grid, matrix.params)


def write_matrix(matrix: OperatorMatrix) -> str:
    """Plain-text export: ``# N <N> form <FORM>`` then row-major ``re im`` pairs."""
    lines = [f"# N {matrix.N} form {matrix.form}"]
    for row in matrix.entries:
        lines.append(" ".join(f"{z.real:.17g} {z.imag:.17g}" for z in row))
    return "\n".join(lines) + "\n"


def read_matrix(text: str) -> tuple[np.ndarray, str]:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    head = lines[0].split()
    if len(head) != 5 or head[0] != "#" or head[1] != "N" or head[3] != "form":
        raise ValueError(f"bad matrix header: {lines[0]!r}")
    n, form = int(head[2]), head[4]
    vals = np.array(" ".join(lines[1:]).split(), dtype=float)
    if vals.size != 2 * n * n:
        raise ValueError(f"expected {2 * n * n} numbers for N={n}, found {vals.size}")
    pairs = vals.reshape(n, n, 2)
    return pairs[..., 0] + 1j * pairs[..., 1], form
