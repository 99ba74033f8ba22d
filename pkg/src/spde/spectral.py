"""Sine eigenbasis of the Dirichlet Laplacian on (0,1).

Fields are represented either by coefficients in the orthonormal basis
e_k(x) = sqrt(2) sin(k pi x) or by point values on the interior nodes
x_j = j/(J+1).  All operators of the model (semigroup, fractional powers,
projections) are diagonal in the modal representation; transforms between
the two representations are type-I discrete sine transforms.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.fft


def eigenvalue(k: int) -> float:
    """Eigenvalue (k*pi)**2 of -d2/dx2 with homogeneous Dirichlet BCs."""
    if k < 1:
        raise ValueError(f"mode index must be >= 1, got {k}")
    return float((k * np.pi) ** 2)


def eigenvalues(n: int) -> np.ndarray:
    """Eigenvalues for modes k = 1..n, strictly increasing and positive."""
    if n < 1:
        raise ValueError(f"need at least one mode, got {n}")
    k = np.arange(1, n + 1, dtype=np.float64)
    return (k * np.pi) ** 2


def _frozen_array(x, name: str) -> np.ndarray:
    arr = np.array(x, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError(f"{name} must be a nonempty 1-D array")
    if not np.isfinite(arr).all():
        raise ValueError(f"{name} must be finite")
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class SpectralField:
    """State as modal coefficients c_k, k = 1..n_modes."""

    coeffs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _frozen_array(self.coeffs, "coeffs"))

    @property
    def n_modes(self) -> int:
        return self.coeffs.size


@dataclass(frozen=True, eq=False)
class GridField:
    """Point values v(x_j) at the interior nodes x_j = j/(grid_size+1)."""

    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen_array(self.values, "values"))

    @property
    def grid_size(self) -> int:
        return self.values.size


def grid_nodes(grid_size: int) -> np.ndarray:
    """Interior collocation nodes x_j = j/(grid_size+1), j = 1..grid_size."""
    if grid_size < 1:
        raise ValueError(f"grid_size must be >= 1, got {grid_size}")
    return np.arange(1, grid_size + 1, dtype=np.float64) / (grid_size + 1)


def apply_semigroup(field: SpectralField, t: float) -> SpectralField:
    """Heat semigroup e^{-tA}: multiplies mode k by exp(-lambda_k t)."""
    if t < 0:
        raise ValueError(f"semigroup time must be >= 0, got {t}")
    lam = eigenvalues(field.n_modes)
    return SpectralField(np.exp(-lam * t) * field.coeffs)


def apply_fractional_power(field: SpectralField, alpha: float) -> SpectralField:
    """Fractional power A^alpha: multiplies mode k by lambda_k**alpha."""
    lam = eigenvalues(field.n_modes)
    return SpectralField(lam**alpha * field.coeffs)


def project(field: SpectralField, n: int) -> SpectralField:
    """Truncate or zero-extend to the first n modes."""
    if n < 1:
        raise ValueError(f"projection dimension must be >= 1, got {n}")
    out = np.zeros(n)
    m = min(n, field.n_modes)
    out[:m] = field.coeffs[:m]
    return SpectralField(out)


def h_norm(field: SpectralField) -> float:
    """L2 norm via Parseval: sqrt(sum c_k**2)."""
    c = field.coeffs
    return float(np.sqrt((c * c).sum()))


def sobolev_norm(field: SpectralField, alpha: float) -> float:
    """Norm of A^{alpha/2} applied to the field: sqrt(sum lambda_k**alpha c_k**2)."""
    lam = eigenvalues(field.n_modes)
    c = field.coeffs
    return float(np.sqrt((lam**alpha * c * c).sum()))


def to_grid(field: SpectralField, grid_size: int) -> GridField:
    """Evaluate sum_k c_k e_k at the interior nodes (type-I DST).

    Requires grid_size >= n_modes so the sampled field is alias-free.
    """
    n = field.n_modes
    if grid_size < n:
        raise ValueError(
            f"grid_size {grid_size} would alias a field with {n} modes"
        )
    pad = np.zeros(grid_size)
    pad[:n] = field.coeffs
    values = scipy.fft.dst(pad, type=1, norm="ortho") * np.sqrt(grid_size + 1.0)
    return GridField(values)


def from_grid(grid: GridField, n_modes: int) -> SpectralField:
    """First n_modes sine coefficients of a grid function.

    Realizes <v, e_k> by exact trigonometric quadrature on the nodes; exact
    for band-limited inputs with bandwidth <= grid_size.
    """
    if n_modes < 1:
        raise ValueError(f"n_modes must be >= 1, got {n_modes}")
    if n_modes > grid.grid_size:
        raise ValueError(
            f"cannot recover {n_modes} modes from a grid of size {grid.grid_size}"
        )
    coeffs = scipy.fft.dst(grid.values, type=1, norm="ortho")[:n_modes]
    coeffs /= np.sqrt(grid.grid_size + 1.0)
    return SpectralField(coeffs)


def sup_norm(grid: GridField) -> float:
    """Grid maximum of |v|; a diagnostic proxy for the C(0,1) norm."""
    return float(np.abs(grid.values).max())
