"""
Phenomenological spin dynamics under a filtered two-tone drive.

Pump rate W(f_d, B) = drive_strength / T1 * Lor(f_d; f_drive_res, kappa) * Gauss(f_d - g mu_B B / h; sigma_inh),
both bells unit-peak. Steady-state depolarization: delta M / M_eq = W / (W + 1 / (2 T1)).
Free decay after the drive is a stretched exponential exp(-(t/T1)^stretch_beta), so T1 is the 1/e time.
"""

import logging
from typing import Dict, Optional, Sequence

import lmfit
import numpy as np

from kiq.config import MIN_DECAY_SAMPLES, MULTI_START_COUNT, fit_kws, max_nfev
from kiq.errors import DecayFitError, DomainError, FitError
from kiq.ensemble.views import DecayFit, EnsembleParams, RateModelParams, TwoToneMap
from kiq.physics.service import esr_frequency, paramagnetic_magnetization

logger = logging.getLogger(__name__)


def _check_time_grid(t_grid: Sequence[float]) -> np.ndarray:
	t = np.asarray(t_grid, dtype=float)
	if t.ndim != 1 or len(t) == 0:
		raise DomainError('time grid must be a non-empty 1-D sequence')
	if t[0] < 0 or np.any(np.diff(t) <= 0):
		raise DomainError('time grid must start at or after 0 and increase strictly')
	return t


def lorentzian(f: np.ndarray, center: float, fwhm: float) -> np.ndarray:
	return 1.0 / (1.0 + (2.0 * (f - center) / fwhm) ** 2)


def gaussian(df: np.ndarray, sigma: float) -> np.ndarray:
	return np.exp(-0.5 * (df / sigma) ** 2)


def pump_rate(ensemble: EnsembleParams, rates: RateModelParams, f_drive, B_par) -> np.ndarray:
	"""W in 1/s; broadcasts f_drive against B_par."""
	f_drive = np.asarray(f_drive, dtype=float)
	detuning = f_drive - esr_frequency(np.asarray(B_par, dtype=float), ensemble.g)
	filtered = lorentzian(f_drive, rates.f_drive_res, rates.kappa)
	return rates.drive_strength / rates.T1 * filtered * gaussian(detuning, ensemble.sigma_inh)


def steady_fraction(W: np.ndarray, T1: float) -> np.ndarray:
	return W / (W + 1.0 / (2.0 * T1))


def steady_state_map(
	ensemble: EnsembleParams,
	rates: RateModelParams,
	f_drive_grid: Sequence[float],
	B_grid: Sequence[float],
) -> TwoToneMap:
	f = np.asarray(f_drive_grid, dtype=float)
	B = np.asarray(B_grid, dtype=float)
	if f.size == 0 or B.size == 0:
		raise DomainError('empty sweep axis')
	m_eq = np.abs(paramagnetic_magnetization(B, ensemble.g, ensemble.T_S, ensemble.M_S)) / ensemble.M_S
	W = pump_rate(ensemble, rates, f[:, None], B[None, :])
	dM = steady_fraction(W, rates.T1) * m_eq[None, :]
	logger.info(f'Two-tone map {f.size} x {B.size}, peak dM/M_S = {float(np.max(dM)):.4g}')
	return TwoToneMap(f_drive=f, B_par=B, dM=dM)


def simulate_excitation(rates: RateModelParams, W: float, t_grid: Sequence[float], m_eq: float = 1.0) -> np.ndarray:
	"""Depolarization after switching on a pump of rate W at t = 0."""
	if W < 0:
		raise DomainError(f'pump rate must be non-negative, got {W}')
	t = _check_time_grid(t_grid)
	tau_rise = 1.0 / (W + 1.0 / rates.T1)
	dM_ss = m_eq * float(steady_fraction(np.asarray(W), rates.T1))
	return dM_ss * -np.expm1(-t / tau_rise)


def excitation_family(
	rates: RateModelParams,
	drive_strengths: Sequence[float],
	t_grid: Sequence[float],
	m_eq: float = 1.0,
) -> Dict[float, np.ndarray]:
	"""Excitation traces at several resonant drive strengths (W = s / T1)."""
	return {float(s): simulate_excitation(rates, float(s) / rates.T1, t_grid, m_eq) for s in drive_strengths}


def simulate_decay(rates: RateModelParams, t_grid: Sequence[float]) -> np.ndarray:
	t = _check_time_grid(t_grid)
	return np.exp(-((t / rates.T1) ** rates.stretch_beta))


def _stretched(t, tau, beta):
	return np.exp(-((t / tau) ** beta))


def fit_decay_tau(t, y, n_starts: int = MULTI_START_COUNT) -> DecayFit:
	"""
	Stretched-exponential fit of a normalized decay trace.

	The model's 1/e crossing is tau itself. `extrapolated` is set when the data
	never cross 1/e.
	"""
	t = np.asarray(t, dtype=float)
	y = np.asarray(y, dtype=float)
	if t.shape != y.shape or t.ndim != 1:
		raise DecayFitError('t and y must be 1-D of equal length')
	if len(t) < MIN_DECAY_SAMPLES:
		raise DecayFitError(f'need at least {MIN_DECAY_SAMPLES} samples, got {len(t)}')
	if np.ptp(y) <= 1e-12 * max(float(np.max(np.abs(y))), 1e-300):
		raise DecayFitError('constant trace, no decay to fit')

	extrapolated = not (np.min(y) < np.exp(-1.0) < np.max(y))
	if extrapolated:
		logger.warning('Decay trace does not cross 1/e; tau is extrapolated')

	model = lmfit.Model(_stretched, independent_vars=['t'])
	t_pos = t[t > 0]
	lo, hi = (t_pos[0], t[-1]) if len(t_pos) else (1e-9, 1.0)
	best = None
	for start in np.geomspace(lo, 2.0 * hi, max(n_starts, 5)):
		params = model.make_params(tau=dict(value=start, min=1e-12), beta=dict(value=0.8, min=0.05, max=2.0))
		try:
			result = model.fit(y, params, t=t, method='leastsq', fit_kws=fit_kws(), max_nfev=max_nfev(2))
		except (ValueError, FloatingPointError) as e:
			logger.debug(f'Decay fit from tau={start:.4g} s failed: {e}')
			continue
		if result.success and (best is None or result.chisqr < best.chisqr):
			best = result
	if best is None:
		raise FitError('stretched-exponential fit did not converge from any start')

	tau, beta = best.params['tau'], best.params['beta']
	return DecayFit(
		tau_1e=float(tau.value),
		stretch_beta=float(beta.value),
		tau_err=None if tau.stderr is None else float(tau.stderr),
		beta_err=None if beta.stderr is None else float(beta.stderr),
		extrapolated=bool(extrapolated),
		redchi=float(best.redchi),
	)


def decay_monte_carlo(
	rates: RateModelParams,
	t_grid: Sequence[float],
	noise_rel: float,
	seeds: Sequence[int],
) -> Dict[int, Optional[DecayFit]]:
	"""Refit the decay under seeded multiplicative noise, one generator per seed."""
	clean = simulate_decay(rates, t_grid)
	fits: Dict[int, Optional[DecayFit]] = {}
	for seed in seeds:
		rng = np.random.default_rng(seed)
		noisy = clean * (1.0 + noise_rel * rng.standard_normal(clean.shape))
		try:
			fits[int(seed)] = fit_decay_tau(t_grid, noisy)
		except FitError as e:
			logger.warning(f'Decay fit for seed {seed} failed: {e}')
			fits[int(seed)] = None
	return fits
