"""Time evolution: spectral propagator, RK4 cross-check and truncation control."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .hamiltonian import HermitianMatrix, assemble_chain_hamiltonian, spectrum
from .model import BasisState, ModelParams, build_chain_basis
from .observables import observable_series

NORM_TOL = 1e-9
RK4_STABILITY = 0.1
DEFAULT_SPP = 2048


class TruncationError(RuntimeError):
    """Fock-space cutoff did not converge within the allowed n_max."""


@dataclass(frozen=True, eq=False)
class StateVector:
    """Complex amplitudes C over an ordered basis (chain or grid)."""

    basis: object
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (len(self.basis),):
            raise ValueError(f"amplitude vector of shape {amps.shape} does not fit basis of size {len(self.basis)}")
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def basis_state(cls, basis, state: BasisState) -> "StateVector":
        i = basis.locate(state)
        if i is None:
            raise ValueError(f"{state} is not in the basis")
        amps = np.zeros(len(basis), dtype=complex)
        amps[i] = 1.0
        return cls(basis, amps)

    @classmethod
    def initial(cls, basis) -> "StateVector":
        return cls.basis_state(basis, basis.seed)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Sampled evolution; row ``i`` of ``amplitudes`` is the state at ``times[i]``."""

    basis: object
    times: np.ndarray
    amplitudes: np.ndarray

    def __len__(self):
        return len(self.times)

    def __getitem__(self, i) -> StateVector:
        return StateVector(self.basis, self.amplitudes[i])

    @property
    def states(self) -> list:
        return [self[i] for i in range(len(self))]

    def norms(self) -> np.ndarray:
        return np.linalg.norm(self.amplitudes, axis=1)

    def energies(self, H: HermitianMatrix) -> np.ndarray:
        a = self.amplitudes
        return np.einsum("ti,ti->t", a.conj(), a @ H.entries.T).real


def sample_times(t_max: float, samples_per_period: int = DEFAULT_SPP, omega1: float = 1.0) -> np.ndarray:
    """Uniform grid from 0 with spacing (2*pi/omega1)/samples_per_period; t_max is always included."""
    if t_max <= 0:
        raise ValueError(f"t_max must be > 0, got {t_max}")
    step = 2 * np.pi / omega1 / samples_per_period
    count = int(math.floor(t_max / step + 1e-9))
    times = step * np.arange(count + 1)
    if t_max - times[-1] > 1e-9 * step:
        times = np.append(times, t_max)
    return times


def _check_inputs(H: HermitianMatrix, psi0: StateVector):
    if H.dim != len(psi0.amplitudes):
        raise ValueError(f"dimension mismatch: H is {H.dim}x{H.dim}, psi0 has {len(psi0.amplitudes)} amplitudes")
    if abs(psi0.norm() - 1.0) > NORM_TOL:
        raise ValueError(f"psi0 is not normalized (norm {psi0.norm():.15g})")


def _components(a: np.ndarray) -> list:
    count, labels = connected_components(csr_matrix(a != 0), directed=False)
    return [np.flatnonzero(labels == c) for c in range(count)]


def propagate_eigen(H: HermitianMatrix, psi0: StateVector, times: Sequence[float]) -> Trajectory:
    """psi(t) = V exp(-i Lambda t) V^T psi(0), block by block.

    The matrix is split into its connected components first, so amplitudes on
    blocks that start empty stay exactly zero.
    """
    _check_inputs(H, psi0)
    times = np.atleast_1d(np.asarray(times, dtype=float))
    if times.ndim != 1 or np.any(np.diff(times) <= 0):
        raise ValueError("times must be strictly increasing")
    out = np.zeros((len(times), H.dim), dtype=complex)
    a = H.entries
    for idx in _components(a):
        c0 = psi0.amplitudes[idx]
        if not np.any(c0):
            continue
        w, v = spectrum(a[np.ix_(idx, idx)])
        coeff = v.T @ c0
        phases = np.exp(-1j * np.outer(times, w))
        out[:, idx] = (phases * coeff) @ v.T
    return Trajectory(psi0.basis, times, out)


def propagate_rk4(
    H: HermitianMatrix, psi0: StateVector, t_max: float, dt: float, stride: int = 1
) -> Trajectory:
    """Classical fixed-step RK4 on i dC/dt = H C, no renormalization.

    The step is adjusted to t_max / round(t_max / dt) so the grid ends on t_max.
    Every ``stride``-th step (and the last one) is stored.
    """
    if dt <= 0:
        raise ValueError(f"dt must be > 0, got {dt}")
    if t_max <= 0:
        raise ValueError(f"t_max must be > 0, got {t_max}")
    _check_inputs(H, psi0)
    a = H.entries
    max_diag = float(np.max(np.abs(np.diag(a)), initial=0.0))
    if dt * max_diag > RK4_STABILITY:
        raise ValueError(f"dt*max|diag H| = {dt * max_diag:g} exceeds stability guard {RK4_STABILITY}")
    steps = max(1, int(round(t_max / dt)))
    h = t_max / steps
    m = -1j * a

    psi = psi0.amplitudes.copy()
    times, rows = [0.0], [psi.copy()]
    for step in range(1, steps + 1):
        k1 = m @ psi
        k2 = m @ (psi + 0.5 * h * k1)
        k3 = m @ (psi + 0.5 * h * k2)
        k4 = m @ (psi + h * k3)
        psi = psi + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        if step % stride == 0 or step == steps:
            times.append(step * h)
            rows.append(psi.copy())
    return Trajectory(psi0.basis, np.array(times), np.array(rows))


def _chain_series(params: ModelParams, seed: BasisState, n_max: int, times: np.ndarray):
    basis = build_chain_basis(params, seed, n_max)
    H = assemble_chain_hamiltonian(params, basis)
    traj = propagate_eigen(H, StateVector.initial(basis), times)
    edge = np.sum(np.abs(traj.amplitudes[:, -3:]) ** 2, axis=1)
    return observable_series(traj), edge


def converge_truncation(
    params: ModelParams,
    seed: BasisState,
    t_max: float,
    tol: float,
    samples_per_period: int = DEFAULT_SPP,
    n_start: int = 8,
    n_limit: int = 4096,
) -> int:
    """Smallest n_max in n_start * 2^j whose edge weight and observables are below ``tol``.

    Accepted when the top three chain sites hold < tol probability at every
    sample and no observable moves by >= tol on doubling n_max.
    """
    if tol <= 0:
        raise ValueError(f"tol must be > 0, got {tol}")
    if params.g1 == 0:
        return seed.n
    times = sample_times(t_max, samples_per_period, params.omega1)
    n = n_start
    while n < seed.n:
        n *= 2
    series, edge = _chain_series(params, seed, n, times)
    while 2 * n <= n_limit:
        finer, finer_edge = _chain_series(params, seed, 2 * n, times)
        if edge.max() < tol and series.max_abs_difference(finer) < tol:
            return n
        n, series, edge = 2 * n, finer, finer_edge
    raise TruncationError(
        f"truncation not converged to tol={tol:g} by n_max={n_limit} "
        f"(edge weight {edge.max():.3g}); parameters outside the validated regime"
    )
