"""Revival period under exact tuning g2eff = E3 - E1 as the dressed splitting grows.

The lower dressed branch sits on E1 + n*omega1, but the upper branch (2*g2eff
above) still shifts the level-1 sites by roughly g1^2 n / (2*g2eff); the first
revival therefore lands at 2*pi*(1 + O(g1^2/g2eff)) and approaches 2*pi only
as g2eff grows.
"""
import math

from mrjc import ModelParams, StateVector, assemble_chain_hamiltonian, build_chain_basis, default_seed
from mrjc import converge_truncation, observable_series, propagate_eigen, revival_peaks, sample_times

T_MAX = 2.5 * 2 * math.pi
print(f"{'g2eff':>8} {'n_max':>6} {'t1/2pi':>10} {'revival':>10}")
for gap in (10, 20, 40, 80, 160):
    p = ModelParams(E1=100 - gap, E2=0, E3=100, g1=1.5, g2eff=gap)
    n_max = converge_truncation(p, default_seed(p), T_MAX, 1e-8)
    basis = build_chain_basis(p, default_seed(p), n_max)
    H = assemble_chain_hamiltonian(p, basis)
    series = observable_series(propagate_eigen(H, StateVector.initial(basis), sample_times(T_MAX, 4096)))
    t, v = revival_peaks(series, 0.5).peaks[0]
    print(f"{gap:8g} {n_max:6d} {t / (2 * math.pi):10.5f} {v:10.6f}")
