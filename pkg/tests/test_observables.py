import math

import numpy as np
import pytest

from mrjc import (
    BasisState,
    ModelParams,
    StateVector,
    mean_boson_numbers,
    observable_series,
    populations,
    propagate_eigen,
    revival_peaks,
    revival_probability,
    sample_times,
)
from mrjc.observables import ObservableSeries

from conftest import TWO_PI, chain_problem

K = 4


@pytest.fixture
def chain():
    p = ModelParams(E1=90, E2=0, E3=100, g1=1.5, g2eff=10, kappa=K)
    basis, H, psi0 = chain_problem(p, 8)
    return p, basis, H, psi0


def superpose(basis, *indices):
    amps = np.zeros(len(basis), dtype=complex)
    amps[list(indices)] = 1 / math.sqrt(len(indices))
    return StateVector(basis, amps)


class TestPopulations:
    def test_basis_state(self, chain):
        _, basis, _, psi0 = chain
        assert populations(psi0) == (1, 0, 0)

    def test_equal_superposition(self, chain):
        _, basis, _, _ = chain
        np.testing.assert_allclose(populations(superpose(basis, 0, 1, 2)), [1 / 3] * 3, atol=1e-15)

    def test_half_flop(self, chain):
        p, _, _, _ = chain
        p = p.with_changes(g1=0.0)
        basis, H, psi0 = chain_problem(p, 3, seed=BasisState(3, 1, K))
        psi = propagate_eigen(H, psi0, [math.pi / (4 * p.g2eff)])[0]
        np.testing.assert_allclose(populations(psi), [0, 0.5, 0.5], atol=1e-12)


class TestRevival:
    def test_identity(self, chain):
        assert revival_probability(chain[3], chain[3]) == pytest.approx(1.0, abs=1e-15)

    def test_orthogonal(self, chain):
        _, basis, _, psi0 = chain
        assert revival_probability(psi0, superpose(basis, 3)) == 0

    def test_half(self, chain):
        _, basis, _, psi0 = chain
        assert revival_probability(psi0, superpose(basis, 0, 5)) == pytest.approx(0.5, abs=1e-15)

    def test_basis_mismatch(self, chain):
        p, basis, _, psi0 = chain
        other, _, _ = chain_problem(p, 4)
        with pytest.raises(ValueError):
            revival_probability(psi0, StateVector.initial(other))


class TestBosonNumbers:
    def test_fock(self, chain):
        assert mean_boson_numbers(chain[3]) == (0, K)

    def test_average(self, chain):
        _, basis, _, _ = chain
        assert mean_boson_numbers(superpose(basis, 0, 3)) == pytest.approx((1, K))

    def test_fig3_bound(self, fig3_params):
        _, H, psi0 = chain_problem(fig3_params, 32)
        s = observable_series(propagate_eigen(H, psi0, sample_times(3 * TWO_PI)))
        # regression constant from the converged (n_max = 32) run
        assert s.n_mean.max() == pytest.approx(5.3662611521756345, abs=1e-8)
        assert fig3_params.g1 * math.sqrt(s.n_mean.max()) < fig3_params.g2eff


class TestSeriesInvariants:
    @pytest.fixture
    def series(self, chain):
        p, basis, H, psi0 = chain
        return observable_series(propagate_eigen(H, psi0, sample_times(2 * TWO_PI, 256)))

    def test_normalisation_and_ranges(self, series):
        assert np.max(np.abs(series.P1 + series.P2 + series.P3 - 1)) <= 1e-9
        assert np.all(series.revival >= 0) and np.all(series.revival <= 1 + 1e-12)
        assert np.all(series.n_mean >= 0)

    def test_k_tracks_level_two(self, series):
        np.testing.assert_allclose(series.k_mean, K + series.P2, rtol=0, atol=1e-12)

    def test_matches_pointwise_functions(self, chain, series):
        p, basis, H, psi0 = chain
        traj = propagate_eigen(H, psi0, series.times[[0, 100, 300]])
        for row, i in enumerate([0, 100, 300]):
            psi = traj[row]
            assert populations(psi) == pytest.approx((series.P1[i], series.P2[i], series.P3[i]), abs=1e-12)
            assert revival_probability(psi0, psi) == pytest.approx(series.revival[i], abs=1e-12)
            assert mean_boson_numbers(psi) == pytest.approx((series.n_mean[i], series.k_mean[i]), abs=1e-12)

    def test_revival_time_symmetry(self, chain):
        _, _, H, psi0 = chain
        t = np.linspace(0.1, 12, 40)
        fwd = observable_series(propagate_eigen(H, psi0, t), psi0.amplitudes).revival
        bwd = observable_series(propagate_eigen(H, psi0, -t[::-1]), psi0.amplitudes).revival[::-1]
        np.testing.assert_allclose(fwd, bwd, rtol=0, atol=1e-9)


def _series(times, revival):
    z = np.zeros_like(times)
    return ObservableSeries(times, z, z, z, revival, z, z)


class TestRevivalPeaks:
    def test_constant_series(self, fig3_params):
        p = fig3_params.with_changes(g1=0.0, g2eff=0.0)
        _, H, psi0 = chain_problem(p, 4)
        s = observable_series(propagate_eigen(H, psi0, sample_times(TWO_PI, 256)))
        report = revival_peaks(s)
        assert report.constant
        assert report.peaks == [(0.0, pytest.approx(1.0))]

    def test_parabola_refinement_is_exact_for_quadratics(self):
        t = np.linspace(0, 4, 41)
        r = 0.9 - (t - 1.234) ** 2
        report = revival_peaks(_series(t, r), threshold=0.5)
        ((tp, vp),) = report.peaks
        assert tp == pytest.approx(1.234, abs=1e-12)
        assert vp == pytest.approx(0.9, abs=1e-12)
        assert report.period == pytest.approx(1.234, abs=1e-12)

    def test_cosine_train_period(self):
        t = np.linspace(0, 10, 2001)
        r = 0.5 + 0.5 * np.cos(2 * np.pi * t / 2.5)
        report = revival_peaks(_series(t, r), threshold=0.5)
        assert report.times == pytest.approx([2.5, 5.0, 7.5], abs=1e-9)
        assert report.period == pytest.approx(2.5, abs=1e-9)

    def test_threshold_and_empty(self):
        t = np.linspace(0, 10, 2001)
        r = 0.2 + 0.1 * np.cos(t)
        assert len(revival_peaks(_series(t, r), threshold=0.5)) == 0
        assert revival_peaks(_series(t, r), threshold=0.5).period is None

    @pytest.mark.parametrize("g1", [0.5, 1.5])
    def test_degenerate_rabi_revivals(self, g1):
        p = ModelParams(E1=0.0, E2=0.0, E3=0.0, g1=g1, g2eff=0.0)
        _, H, psi0 = chain_problem(p, 64)
        s = observable_series(propagate_eigen(H, psi0, sample_times(3 * TWO_PI)))
        report = revival_peaks(s, threshold=0.5)
        assert report.times == pytest.approx([TWO_PI, 2 * TWO_PI, 3 * TWO_PI][: len(report)], abs=1e-6)
        assert len(report) == 2  # the third revival sits on the last sample
        for _, v in report.peaks:
            assert v == pytest.approx(1.0, abs=1e-6)

    def test_fig3_first_peak(self, fig3_params):
        _, H, psi0 = chain_problem(fig3_params, 32)
        s = observable_series(propagate_eigen(H, psi0, sample_times(3 * TWO_PI)))
        report = revival_peaks(s)
        assert report.times[0] == pytest.approx(TWO_PI, rel=0.05)

    def test_tuned_beats_detuned(self, fig3_params, fig4_params):
        best = []
        for p in (fig3_params, fig4_params):
            _, H, psi0 = chain_problem(p, 32)
            s = observable_series(propagate_eigen(H, psi0, sample_times(3 * TWO_PI)))
            best.append(s.window_max(0.5 * TWO_PI, 1.5 * TWO_PI))
        assert best[0] > best[1]
