import numpy as np
import pytest

from kiq.ensemble import RateModelParams, fit_decay_tau, simulate_decay, simulate_excitation, steady_state_map
from kiq.ensemble.dynamics import decay_monte_carlo, excitation_family, pump_rate, steady_fraction
from kiq.errors import DecayFitError, DomainError
from kiq.physics import esr_field, esr_frequency


def _map_grids():
	return np.linspace(9.835e9, 9.845e9, 101), np.linspace(0.3826, 0.3858, 161)


def test_zero_drive_gives_empty_map(ensemble):
	f, B = _map_grids()
	spin_map = steady_state_map(ensemble.model_copy(update={'g': 1.83}), RateModelParams(drive_strength=0.0), f, B)
	assert spin_map.dM.shape == (101, 161)
	assert np.all(spin_map.dM == 0.0)


def test_map_peaks_where_ridge_meets_drive_resonator(ensemble, rates):
	f, B = _map_grids()
	spins = ensemble.model_copy(update={'g': 1.83})
	spin_map = steady_state_map(spins, rates, f, B)
	i, j = np.unravel_index(int(np.argmax(spin_map.dM)), spin_map.dM.shape)
	assert abs(f[i] - rates.f_drive_res) <= f[1] - f[0]
	assert abs(B[j] - esr_field(rates.f_drive_res, 1.83)) <= B[1] - B[0]
	assert esr_field(rates.f_drive_res, 1.83) == pytest.approx(0.384, abs=1e-3)


def test_ridge_follows_esr_line_near_drive_resonator(ensemble, rates):
	f, B = _map_grids()
	spin_map = steady_state_map(ensemble.model_copy(update={'g': 1.83}), rates, f, B)
	line = esr_frequency(B, 1.83)
	near = np.abs(line - rates.f_drive_res) <= rates.kappa
	assert np.sum(near) >= 5
	assert np.all(np.abs(spin_map.ridge()[near] - line[near]) <= 1.001 * (f[1] - f[0]))


def test_detuned_spins_stay_polarized(ensemble, rates):
	spins = ensemble.model_copy(update={'g': 1.83})
	f = np.array([float(esr_frequency(0.36, 1.83)), rates.f_drive_res])
	spin_map = steady_state_map(spins, rates, f, [0.36])
	assert np.max(spin_map.dM) < 1e-3


def test_steady_fraction_bounds(ensemble, rates):
	W = pump_rate(ensemble, rates, np.linspace(9.83e9, 9.85e9, 11), esr_field(9.84e9, ensemble.g))
	fraction = steady_fraction(W, rates.T1)
	assert np.all((fraction >= 0.0) & (fraction < 1.0))
	assert steady_fraction(np.asarray(10.0 / rates.T1), rates.T1) == pytest.approx(10.0 / 10.5)


def test_map_rejects_empty_axis(ensemble, rates):
	with pytest.raises(DomainError, match='empty sweep axis'):
		steady_state_map(ensemble, rates, [], [0.38])


def test_excitation_rise(rates):
	W = 10.0 / rates.T1
	tau_rise = 1.0 / (W + 1.0 / rates.T1)
	t = np.array([0.0, tau_rise, 50.0 * tau_rise])
	trace = simulate_excitation(rates, W, t, m_eq=0.9)
	dM_ss = 0.9 * 10.0 / 10.5
	assert trace[0] == 0.0
	assert trace[1] == pytest.approx(dM_ss * (1.0 - np.exp(-1.0)), rel=1e-12)
	assert trace[2] == pytest.approx(dM_ss, rel=1e-12)


def test_stronger_pump_saturates_deeper_and_faster(rates):
	W = 2.0 / rates.T1
	tau_weak = 1.0 / (W + 1.0 / rates.T1)
	t = np.array([0.0, tau_weak, 100.0 * tau_weak])
	weak = simulate_excitation(rates, W, t)
	strong = simulate_excitation(rates, 2.0 * W, t)
	assert strong[-1] > weak[-1]
	assert strong[1] / strong[-1] > weak[1] / weak[-1]


def test_excitation_family_grows_with_drive(rates):
	t = np.linspace(0.0, 2.0, 51)
	family = excitation_family(rates, [1.0, 3.0, 10.0], t)
	final = [trace[-1] for trace in family.values()]
	assert final == sorted(final)
	assert list(family) == [1.0, 3.0, 10.0]


def test_excitation_input_checks(rates):
	with pytest.raises(DomainError):
		simulate_excitation(rates, -1.0, [0.0, 1.0])
	with pytest.raises(DomainError):
		simulate_excitation(rates, 1.0, [0.0, 0.5, 0.4])


def test_decay_one_over_e_time():
	rates = RateModelParams(T1=0.38, stretch_beta=0.7)
	assert simulate_decay(rates, [0.0, 0.38]).tolist() == pytest.approx([1.0, np.exp(-1.0)], rel=1e-15)


def test_stretched_decay_lies_above_exponential_after_one_over_e():
	t = np.linspace(0.0, 2.0, 201)
	stretched = simulate_decay(RateModelParams(T1=0.38, stretch_beta=0.7), t)
	plain = simulate_decay(RateModelParams(T1=0.38, stretch_beta=1.0), t)
	late = t > 0.38
	assert np.all(stretched[late] > plain[late])
	assert np.all(np.diff(stretched) < 0)


def test_decay_fit_noise_free():
	rates = RateModelParams(T1=0.38, stretch_beta=0.7)
	t = np.linspace(0.0, 2.0, 201)
	fit = fit_decay_tau(t, simulate_decay(rates, t))
	assert fit.tau_1e == pytest.approx(0.38, rel=1e-3)
	assert fit.stretch_beta == pytest.approx(0.7, rel=1e-3)
	assert not fit.extrapolated


def test_decay_fit_exponential_limit():
	rates = RateModelParams(T1=0.38, stretch_beta=1.0)
	t = np.linspace(0.0, 2.0, 201)
	fit = fit_decay_tau(t, simulate_decay(rates, t))
	assert abs(fit.stretch_beta - 1.0) < 1e-3


def test_decay_fit_flags_extrapolation():
	rates = RateModelParams(T1=0.38, stretch_beta=0.7)
	t = np.linspace(0.0, 0.2, 41)
	fit = fit_decay_tau(t, simulate_decay(rates, t))
	assert fit.extrapolated
	assert fit.tau_1e == pytest.approx(0.38, rel=1e-3)


def test_decay_fit_rejects_degenerate_input():
	with pytest.raises(DecayFitError):
		fit_decay_tau(np.linspace(0, 1, 5), np.linspace(1, 0.5, 5))
	with pytest.raises(DecayFitError):
		fit_decay_tau(np.linspace(0, 1, 20), np.ones(20))


@pytest.mark.slow
def test_noisy_decay_median_error():
	rates = RateModelParams(T1=0.38, stretch_beta=0.7)
	t = np.linspace(0.0, 2.0, 201)
	fits = decay_monte_carlo(rates, t, noise_rel=0.02, seeds=range(50))
	taus = [fit.tau_1e for fit in fits.values() if fit is not None]
	assert len(taus) >= 45
	assert abs(np.median(taus) / 0.38 - 1.0) < 0.02
