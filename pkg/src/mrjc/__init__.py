"""Mixed Rabi / Jaynes-Cummings model of a three-level atom and two bosonic modes."""
from .model import BasisState, ChainBasis, GridBasis, ModelParams, build_chain_basis, default_seed, locate
from .hamiltonian import (
    DressedDoublet,
    HermitianMatrix,
    assemble_chain_hamiltonian,
    assemble_grid_hamiltonian,
    dressed_doublet,
    ladder_spacing_deviation,
    spectrum,
    tuned_g2eff,
)
from .dynamics import (
    StateVector,
    Trajectory,
    TruncationError,
    converge_truncation,
    propagate_eigen,
    propagate_rk4,
    sample_times,
)
from .observables import (
    ObservableSeries,
    mean_boson_numbers,
    observable_series,
    populations,
    revival_peaks,
    revival_probability,
)

__version__ = "0.1.0"
