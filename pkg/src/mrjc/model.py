"""Model parameters and parity-chain basis enumeration.

Units are natural: hbar = 1 and energies are measured in units of hbar*omega1,
times in units of 1/omega1.  The common diagonal offset kappa*omega2 is dropped
everywhere, so only the mode-2 excitation *relative* to kappa enters energies.
"""
from __future__ import annotations

import dataclasses
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

import numpy as np

RESONANCE_TOL = 1e-12

# Sort key at equal n: level 3 precedes level 2 (level 1 never shares n with 3 on a chain).
_LEVEL_ORDER = {1: 0, 3: 1, 2: 2}


@dataclass(frozen=True)
class ModelParams:
    """Physical constants of the mixed Rabi / Jaynes-Cummings Hamiltonian.

    Give either ``omega2`` (E3 is derived from the resonance E3 = E2 + omega2),
    or ``E3`` (omega2 is derived), or both (resonance is checked to 1e-12).

    ``g2eff`` is the |3,n,kappa> <-> |2,n,kappa+1> matrix element itself,
    i.e. hbar*g2*sqrt(kappa).  ``kappa`` only labels the mode-2 Fock numbers.
    """

    E1: float
    E2: float
    omega2: Optional[float] = None
    g1: float = 0.0
    g2eff: float = 0.0
    kappa: int = 0
    E3: Optional[float] = None
    omega1: float = 1.0

    def __post_init__(self):
        if self.omega2 is None and self.E3 is None:
            raise ValueError("ModelParams needs omega2 or E3 (or both)")
        if self.E3 is None:
            object.__setattr__(self, "E3", float(self.E2) + float(self.omega2))
        elif self.omega2 is None:
            object.__setattr__(self, "omega2", float(self.E3) - float(self.E2))
        else:
            mismatch = abs(self.E3 - (self.E2 + self.omega2))
            if mismatch > RESONANCE_TOL * max(1.0, abs(self.E3)):
                raise ValueError(
                    f"resonance E3 = E2 + omega2 violated by {mismatch:g} "
                    f"(E2={self.E2}, omega2={self.omega2}, E3={self.E3})"
                )
        for name in ("E1", "E2", "E3", "omega1", "omega2", "g1", "g2eff"):
            value = float(getattr(self, name))
            if not np.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value}")
            object.__setattr__(self, name, value)
        if self.omega1 <= 0:
            raise ValueError(f"omega1 must be > 0, got {self.omega1}")
        if self.g1 < 0:
            raise ValueError(f"g1 must be >= 0, got {self.g1}")
        if self.g2eff < 0:
            raise ValueError(f"g2eff must be >= 0, got {self.g2eff}")
        if isinstance(self.kappa, bool) or int(self.kappa) != self.kappa or self.kappa < 0:
            raise ValueError(f"kappa must be a non-negative integer, got {self.kappa}")
        object.__setattr__(self, "kappa", int(self.kappa))

    def with_changes(self, **changes) -> "ModelParams":
        """Copy with some fields replaced; E3 is re-derived when E2 or omega2 move."""
        if ("E2" in changes or "omega2" in changes) and "E3" not in changes:
            changes["E3"] = None
            changes.setdefault("omega2", self.omega2)
        elif "E3" in changes and "omega2" not in changes:
            changes["omega2"] = None
        return dataclasses.replace(self, **changes)

    def bare_energy(self, level: int, dk: int) -> float:
        """Atomic + mode-2 energy of |level>|., kappa+dk>, offset kappa*omega2 dropped."""
        if level == 2 and dk == 1:
            # resonance folded in: E2 + omega2 == E3
            return self.E3
        return (self.E1, self.E2, self.E3)[level - 1] + dk * self.omega2

    def site_energy(self, state: "BasisState") -> float:
        return self.bare_energy(state.level, state.k - self.kappa) + state.n * self.omega1

    def g1_link(self, n: int, m: int) -> float:
        """Mode-1 matrix element between Fock numbers n and m = n +/- 1."""
        return self.g1 * np.sqrt(max(n, m))


@dataclass(frozen=True, order=True)
class BasisState:
    """One atom-field configuration |level>_at |n, k>_bos."""

    level: int
    n: int
    k: int

    def __post_init__(self):
        if self.level not in (1, 2, 3):
            raise ValueError(f"level must be 1, 2 or 3, got {self.level}")
        if self.n < 0 or self.k < 0:
            raise ValueError(f"Fock numbers must be non-negative, got n={self.n}, k={self.k}")

    def __str__(self):
        return f"|{self.level}>|{self.n},{self.k}>"

    @property
    def parity(self) -> int:
        """(-1)^n * s(level) with s(1) = +1, s(2) = s(3) = -1."""
        return (-1) ** self.n * (1 if self.level == 1 else -1)


def chain_k(params: ModelParams, level: int) -> int:
    """Mode-2 Fock number a chain state must carry at the given level."""
    return params.kappa + 1 if level == 2 else params.kappa


def chain_neighbors(params: ModelParams, state: BasisState):
    """Structural neighbors of ``state`` under the RWA Hamiltonian couplings."""
    kappa = params.kappa
    if state.level == 1:
        for m in (state.n - 1, state.n + 1):
            if m >= 0:
                yield BasisState(3, m, kappa)
    elif state.level == 3:
        for m in (state.n - 1, state.n + 1):
            if m >= 0:
                yield BasisState(1, m, kappa)
        yield BasisState(2, state.n, kappa + 1)
    else:
        yield BasisState(3, state.n, kappa)


class _IndexedBasis:
    """Shared lookup helpers for ordered bases of BasisStates."""

    states: tuple

    @cached_property
    def _index(self) -> dict:
        return {s: i for i, s in enumerate(self.states)}

    def locate(self, state: BasisState) -> Optional[int]:
        return self._index.get(state)

    def __len__(self):
        return len(self.states)

    @cached_property
    def levels(self) -> np.ndarray:
        return np.array([s.level for s in self.states], dtype=int)

    @cached_property
    def ns(self) -> np.ndarray:
        return np.array([s.n for s in self.states], dtype=float)

    @cached_property
    def ks(self) -> np.ndarray:
        return np.array([s.k for s in self.states], dtype=float)


@dataclass(frozen=True, eq=False)
class ChainBasis(_IndexedBasis):
    """Ordered parity chain reachable from ``states[initial_index]``."""

    params: ModelParams
    states: tuple
    initial_index: int
    n_max: int

    @property
    def seed(self) -> BasisState:
        return self.states[self.initial_index]


@dataclass(frozen=True, eq=False)
class GridBasis(_IndexedBasis):
    """Full product basis l in {1,2,3}, 0 <= n <= n_max, k in {kappa, kappa+1}.

    Contains both parity chains plus the uncoupled k-sheets; ordering is by
    (n, k, level).
    """

    params: ModelParams
    n_max: int
    states: tuple = field(init=False)

    def __post_init__(self):
        if self.n_max < 0:
            raise ValueError(f"n_max must be >= 0, got {self.n_max}")
        kappa = self.params.kappa
        states = tuple(
            BasisState(level, n, k)
            for n in range(self.n_max + 1)
            for k in (kappa, kappa + 1)
            for level in (1, 2, 3)
        )
        object.__setattr__(self, "states", states)


def build_chain_basis(params: ModelParams, seed: BasisState, n_max: int) -> ChainBasis:
    """Breadth-first closure of ``seed`` under the coupling graph, cut at n <= n_max.

    The graph is structural: links are kept even when g1 or g2eff is zero, so
    the chain layout does not depend on coupling values.
    """
    if n_max < seed.n:
        raise ValueError(f"n_max={n_max} is below the seed Fock number n={seed.n}")
    expected_k = chain_k(params, seed.level)
    if seed.k != expected_k:
        raise ValueError(
            f"seed {seed} off-chain: level {seed.level} requires k={expected_k} for kappa={params.kappa}"
        )
    seen = {seed}
    queue = deque([seed])
    while queue:
        state = queue.popleft()
        for nb in chain_neighbors(params, state):
            if nb.n <= n_max and nb not in seen:
                seen.add(nb)
                queue.append(nb)
    states = tuple(sorted(seen, key=lambda s: (s.n, _LEVEL_ORDER[s.level])))
    return ChainBasis(params=params, states=states, initial_index=states.index(seed), n_max=n_max)


def default_seed(params: ModelParams) -> BasisState:
    """|1>_at |0, kappa>_bos."""
    return BasisState(1, 0, params.kappa)


def locate(basis, state: BasisState) -> Optional[int]:
    """Index of ``state`` in ``basis`` or None when it is not on it."""
    return basis.locate(state)
