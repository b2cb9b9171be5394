"""Chain and grid Hamiltonians, dressed-state analytics and the banded eigensolver."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.linalg import eig_banded

from .model import BasisState, ChainBasis, GridBasis, ModelParams


@dataclass(frozen=True, eq=False)
class HermitianMatrix:
    """Real symmetric Hamiltonian with the basis its rows refer to."""

    entries: np.ndarray
    basis: object = None

    def __post_init__(self):
        a = np.array(self.entries, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"Hamiltonian must be square, got shape {a.shape}")
        if not np.array_equal(a, a.T):
            raise ValueError("Hamiltonian is not exactly symmetric")
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def bandwidth(self) -> int:
        rows, cols = np.nonzero(self.entries)
        return int(np.max(np.abs(rows - cols), initial=0))

    def norm(self) -> float:
        return float(np.linalg.norm(self.entries, 2)) if self.dim else 0.0

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)


@dataclass(frozen=True)
class DressedDoublet:
    n: int
    e_minus: float
    e_plus: float


@dataclass(frozen=True, eq=False)
class Spectrum:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # columns

    def __iter__(self):
        return iter((self.eigenvalues, self.eigenvectors))


def _fill(params: ModelParams, basis) -> np.ndarray:
    h = np.zeros((len(basis), len(basis)))
    kappa = params.kappa
    for i, s in enumerate(basis.states):
        h[i, i] = params.site_energy(s)
        if s.level == 1:
            for m in (s.n - 1, s.n + 1):
                j = basis.locate(BasisState(3, m, s.k)) if m >= 0 else None
                if j is not None:
                    h[i, j] = h[j, i] = params.g1_link(s.n, m)
        elif s.level == 3 and s.k == kappa:
            # RWA: only sigma_32 a_2 + h.c.; the kappa -> kappa+1 link is g2eff
            j = basis.locate(BasisState(2, s.n, kappa + 1))
            if j is not None:
                h[i, j] = h[j, i] = params.g2eff
    return h


def assemble_chain_hamiltonian(params: ModelParams, basis: ChainBasis) -> HermitianMatrix:
    """Hamiltonian restricted to one parity chain (banded, bandwidth <= 2)."""
    if basis.params != params:
        raise ValueError("basis was built from different ModelParams")
    return HermitianMatrix(_fill(params, basis), basis)


def assemble_grid_hamiltonian(params: ModelParams, n_max: int) -> HermitianMatrix:
    """Hamiltonian over the full (level, n, k in {kappa, kappa+1}) product basis.

    Both parity chains and the spectator k-sheets are present; used to check the
    chain construction independently.
    """
    if n_max < 0:
        raise ValueError(f"n_max must be >= 0, got {n_max}")
    basis = GridBasis(params, n_max)
    return HermitianMatrix(_fill(params, basis), basis)


def dressed_doublet(params: ModelParams, n: int) -> DressedDoublet:
    """Autler-Townes split pair of |3,n,kappa>, |2,n,kappa+1>."""
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    centre = params.E3 + n * params.omega1
    return DressedDoublet(n, centre - params.g2eff, centre + params.g2eff)


def tuned_g2eff(params: ModelParams) -> float:
    """Control coupling that puts the lower dressed branch on E1 + n*omega1."""
    if params.E3 < params.E1:
        raise ValueError(f"tuning undefined for E3 < E1 (E1={params.E1}, E3={params.E3})")
    return params.E3 - params.E1


def spectrum(H) -> Spectrum:
    """Ascending eigenvalues and orthonormal eigenvectors via LAPACK banded solver."""
    a = H.entries if isinstance(H, HermitianMatrix) else np.asarray(H, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.array_equal(a, a.T):
        raise ValueError("matrix is not symmetric")
    dim = a.shape[0]
    if dim == 0:
        return Spectrum(np.zeros(0), np.zeros((0, 0)))
    rows, cols = np.nonzero(a)
    u = int(np.max(np.abs(rows - cols), initial=0))
    band = np.zeros((u + 1, dim))
    for d in range(u + 1):
        band[u - d, d:] = np.diagonal(a, d)
    w, v = eig_banded(band, lower=False, check_finite=True)
    return Spectrum(w, v)


def ladder_spacing_deviation(
    eigs: Sequence[float],
    overlaps: Sequence[float],
    omega1: float = 1.0,
    weight_tol: float = 1e-6,
) -> float:
    """Worst distance of the overlap-carrying levels from an omega1 ladder.

    The ladder is anchored at the eigenvalue with the largest overlap; zero
    means the dynamics is exactly periodic with period 2*pi/omega1.
    """
    eigs = np.asarray(eigs, dtype=float)
    overlaps = np.asarray(overlaps, dtype=float)
    if eigs.shape != overlaps.shape:
        raise ValueError("eigs and overlaps must have the same length")
    keep = overlaps > weight_tol
    if not keep.any():
        raise ValueError(f"no eigenvalue carries overlap above weight_tol={weight_tol}")
    e_ref = eigs[np.argmax(overlaps)]
    x = (eigs[keep] - e_ref) / omega1
    return float(np.max(np.abs(x - np.round(x))) * omega1)


def overlaps_with(spec: Spectrum, psi0: np.ndarray) -> np.ndarray:
    """|<v_j|psi0>|^2 for every eigenvector."""
    return np.abs(spec.eigenvectors.T @ np.asarray(psi0)) ** 2

