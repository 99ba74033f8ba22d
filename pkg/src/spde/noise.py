"""Modal increments of a Q-Wiener process on a fine time grid.

The covariance Q commutes with the Laplacian, so the driving noise is
sampled mode by mode: entry (m, k) of a path is <W(t_{m+1}) - W(t_m), e_k>
~ Normal(0, q_k tau).  Coarser discretizations consume the same path
through :func:`aggregate`, which sums consecutive fine increments exactly
(no resampling), keeping coarse and fine runs coupled to one Brownian path.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from .spectral import eigenvalue, eigenvalues

COVARIANCE_KINDS = ("white", "inverse_power")


@dataclass(frozen=True)
class CovarianceSpec:
    """Noise covariance: cylindrical white noise or Q = A**(-exponent).

    n_modes_ref is the modal truncation of the driving noise; modes above
    it never enter any scheme that shares the path.
    """

    kind: str
    exponent: float = 0.0
    n_modes_ref: int = 1

    def __post_init__(self):
        if self.kind not in COVARIANCE_KINDS:
            raise ValueError(
                f"unknown covariance kind {self.kind!r}; expected one of {COVARIANCE_KINDS}"
            )
        if self.exponent < 0:
            raise ValueError(f"exponent must be >= 0, got {self.exponent}")
        if self.kind == "white" and self.exponent != 0.0:
            raise ValueError("white noise does not take an exponent")
        if self.n_modes_ref < 1:
            raise ValueError(f"n_modes_ref must be >= 1, got {self.n_modes_ref}")

    @property
    def gamma(self) -> float:
        """Noise regularity driving all convergence rates.

        Largest g in (0,1] with sum_k lambda_k**(g-1) q_k finite; 1/2 for
        white noise (supremum, not attained), min(1, exponent + 1/2) for
        inverse powers.
        """
        if self.kind == "white":
            return 0.5
        return min(1.0, 0.5 + self.exponent)

    def modal_variances(self) -> np.ndarray:
        """q_k for k = 1..n_modes_ref."""
        if self.kind == "white":
            return np.ones(self.n_modes_ref)
        return eigenvalues(self.n_modes_ref) ** (-self.exponent)


def modal_variance(spec: CovarianceSpec, k: int) -> float:
    """Variance q_k of the k-th modal Brownian motion."""
    if not 1 <= k <= spec.n_modes_ref:
        raise ValueError(
            f"mode {k} out of range 1..{spec.n_modes_ref} for this covariance"
        )
    if spec.kind == "white":
        return 1.0
    return float(eigenvalue(k) ** (-spec.exponent))


def sample_stream(master_seed: int, *key: int) -> np.random.Generator:
    """Deterministic random stream derived from (master_seed, *key).

    Streams for distinct keys are independent, and the derivation does not
    depend on scheduling, so parallel sampling is bitwise reproducible.
    """
    return np.random.default_rng(np.random.SeedSequence([master_seed, *key]))


class NoisePath:
    """Matrix of modal Brownian increments on a uniform time grid.

    increments[m, k-1] is the increment of mode k over step m; tau is the
    step size of this path's grid.  Aggregated paths remember the finest
    underlying grid and always recompute from it, so any staging of
    :func:`aggregate` calls yields bitwise-identical increments.
    """

    def __init__(self, increments, tau: float, *, _root=None, _factor: int = 1):
        inc = np.ascontiguousarray(increments, dtype=np.float64)
        if inc.ndim != 2 or inc.size == 0:
            raise ValueError("increments must be a nonempty 2-D array")
        if tau <= 0:
            raise ValueError(f"step size must be positive, got {tau}")
        self.increments = inc
        self.tau = float(tau)
        self._root = inc if _root is None else _root
        self._factor = _factor

    @property
    def n_steps(self) -> int:
        return self.increments.shape[0]

    @property
    def n_modes(self) -> int:
        return self.increments.shape[1]


def sample_path(
    spec: CovarianceSpec, m_ref: int, tau_ref: float, stream: np.random.Generator
) -> NoisePath:
    """Draw an m_ref x n_modes_ref matrix of Normal(0, q_k tau_ref) increments.

    The same stream state yields a bitwise-identical path.
    """
    if m_ref < 1:
        raise ValueError(f"m_ref must be >= 1, got {m_ref}")
    if tau_ref <= 0:
        raise ValueError(f"tau_ref must be positive, got {tau_ref}")
    draws = stream.normal(size=(m_ref, spec.n_modes_ref))
    draws *= np.sqrt(spec.modal_variances() * tau_ref)
    return NoisePath(draws, tau_ref)


def _window_sums(arr: np.ndarray, factor: int) -> np.ndarray:
    """Sum consecutive windows of `factor` rows along axis 0.

    Windows are reduced by pairwise halving while the remaining factor is
    even, then sequentially; all power-of-two stagings of the same total
    factor therefore produce bitwise-identical sums.
    """
    m = arr.shape[0]
    blocks = arr.reshape(m // factor, factor, *arr.shape[1:])
    f = factor
    while f % 2 == 0 and f > 1:
        blocks = blocks[:, 0::2] + blocks[:, 1::2]
        f //= 2
    if f == 1:
        return np.ascontiguousarray(blocks[:, 0])
    acc = blocks[:, 0].copy()
    for i in range(1, f):
        acc += blocks[:, i]
    return acc


def aggregate(path: NoisePath, coarsen_factor: int, n_modes: int) -> NoisePath:
    """Coarsen a path by summing consecutive increments and truncating modes.

    The sums are exact (no resampling); the result is recomputed from the
    finest underlying grid so staged aggregation matches direct aggregation
    bitwise whenever the stage factors are powers of two.
    """
    if coarsen_factor < 1:
        raise ValueError(f"coarsen_factor must be >= 1, got {coarsen_factor}")
    if path.n_steps % coarsen_factor != 0:
        raise ValueError(
            f"coarsen_factor {coarsen_factor} does not divide {path.n_steps} steps"
        )
    if not 1 <= n_modes <= path.n_modes:
        raise ValueError(
            f"n_modes {n_modes} out of range 1..{path.n_modes} for this path"
        )
    total = path._factor * coarsen_factor
    summed = _window_sums(path._root[:, :n_modes], total)
    return NoisePath(
        summed, path.tau * coarsen_factor, _root=path._root, _factor=total
    )


_DUMP_HEADER = struct.Struct("<QQ")


def save_path(path: NoisePath, file) -> None:
    """Binary dump: uint64 LE row count, uint64 LE mode count, then the
    increments as row-major little-endian float64.  Debugging replay aid."""
    payload = np.ascontiguousarray(path.increments, dtype="<f8").tobytes()
    with open(file, "wb") as fh:
        fh.write(_DUMP_HEADER.pack(path.n_steps, path.n_modes))
        fh.write(payload)


def load_path(file, tau: float) -> NoisePath:
    """Read a path written by :func:`save_path`; tau is not stored."""
    with open(file, "rb") as fh:
        header = fh.read(_DUMP_HEADER.size)
        if len(header) != _DUMP_HEADER.size:
            raise ValueError("truncated path dump: missing header")
        m, n = _DUMP_HEADER.unpack(header)
        data = np.frombuffer(fh.read(), dtype="<f8")
    if data.size != m * n:
        raise ValueError(
            f"truncated path dump: expected {m * n} values, found {data.size}"
        )
    return NoisePath(data.reshape(m, n).astype(np.float64), tau)
