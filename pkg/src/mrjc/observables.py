"""Level populations, revival probability, boson numbers and revival-peak analysis."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

SERIES_COLUMNS = ("P1", "P2", "P3", "revival", "n_mean", "k_mean")


def _probs(amps: np.ndarray) -> np.ndarray:
    return np.abs(amps) ** 2


def populations(psi) -> tuple:
    """(P1, P2, P3): summed |C|^2 over sites of each atomic level."""
    p = _probs(psi.amplitudes)
    levels = psi.basis.levels
    return tuple(float(p[levels == lvl].sum()) for lvl in (1, 2, 3))


def revival_probability(psi0, psit) -> float:
    if psi0.basis is not psit.basis and psi0.basis.states != psit.basis.states:
        raise ValueError("states live on different bases")
    return float(abs(np.vdot(psi0.amplitudes, psit.amplitudes)) ** 2)


def mean_boson_numbers(psi) -> tuple:
    """(<n>, <k>) of mode 1 and mode 2."""
    p = _probs(psi.amplitudes)
    return float(p @ psi.basis.ns), float(p @ psi.basis.ks)


@dataclass(frozen=True, eq=False)
class ObservableSeries:
    times: np.ndarray
    P1: np.ndarray
    P2: np.ndarray
    P3: np.ndarray
    revival: np.ndarray
    n_mean: np.ndarray
    k_mean: np.ndarray

    def columns(self) -> dict:
        return {name: getattr(self, name) for name in SERIES_COLUMNS}

    def max_abs_difference(self, other: "ObservableSeries") -> float:
        if not np.array_equal(self.times, other.times):
            raise ValueError("series sampled on different time grids")
        return max(float(np.max(np.abs(a - b))) for a, b in zip(self.columns().values(), other.columns().values()))

    def window_max(self, t_lo: float, t_hi: float) -> float:
        """Largest revival on the half-open window (t_lo, t_hi]."""
        mask = (self.times > t_lo) & (self.times <= t_hi)
        if not mask.any():
            raise ValueError(f"no samples in ({t_lo}, {t_hi}]")
        return float(self.revival[mask].max())


def observable_series(traj, psi0: Optional[np.ndarray] = None) -> ObservableSeries:
    """Evaluate every plotted observable along a trajectory.

    ``psi0`` defaults to the first stored state, which is psi(0) for trajectories
    sampled from t = 0.
    """
    amps = traj.amplitudes
    p = _probs(amps)
    levels = traj.basis.levels
    ref = amps[0] if psi0 is None else np.asarray(psi0)
    return ObservableSeries(
        times=np.asarray(traj.times),
        P1=p[:, levels == 1].sum(axis=1),
        P2=p[:, levels == 2].sum(axis=1),
        P3=p[:, levels == 3].sum(axis=1),
        revival=np.abs(amps @ ref.conj()) ** 2,
        n_mean=p @ traj.basis.ns,
        k_mean=p @ traj.basis.ks,
    )


@dataclass(frozen=True)
class PeakReport:
    """Refined revival maxima and the spacings between successive revivals.

    ``spacings`` starts from the first sample (revival is 1 at t = 0) so a
    single peak already gives a period estimate.
    """

    peaks: list
    spacings: list = field(default_factory=list)
    constant: bool = False

    @property
    def period(self) -> Optional[float]:
        return float(np.mean(self.spacings)) if self.spacings else None

    @property
    def times(self) -> list:
        return [t for t, _ in self.peaks]

    def __iter__(self):
        return iter(self.peaks)

    def __len__(self):
        return len(self.peaks)


def revival_peaks(series: ObservableSeries, threshold: float = 0.5, flat_tol: float = 1e-12) -> PeakReport:
    """Local revival maxima above ``threshold``, refined by a three-point parabola."""
    t = np.asarray(series.times)
    r = np.asarray(series.revival)
    if len(r) and np.ptp(r) <= flat_tol:
        return PeakReport(peaks=[(float(t[0]), float(r[0]))], constant=True)
    peaks = []
    for i in range(1, len(r) - 1):
        if not (r[i] > r[i - 1] and r[i] >= r[i + 1] and r[i] > threshold):
            continue
        y0, y1, y2 = r[i - 1], r[i], r[i + 1]
        h_left, h_right = t[i] - t[i - 1], t[i + 1] - t[i]
        curv = y0 - 2 * y1 + y2
        if np.isclose(h_left, h_right) and curv < 0:
            shift = 0.5 * (y0 - y2) / curv
            peaks.append((float(t[i] + shift * h_left), float(y1 - 0.25 * (y0 - y2) * shift)))
        else:
            peaks.append((float(t[i]), float(y1)))
    origin = [float(t[0])] if len(t) else []
    spacings = list(np.diff(origin + [p[0] for p in peaks])) if peaks else []
    return PeakReport(peaks=peaks, spacings=[float(s) for s in spacings])
