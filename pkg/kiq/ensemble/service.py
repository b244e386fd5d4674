"""
Field-sweep synthesis and magnetization extraction for the spin ensemble.

Forward model of the readout-resonator shift:

	delta_f(B) = c2 B^2 - beta f_r0 (M/M_S)^2 + sum(avoided-crossing pulls) + noise

Inverse pipeline (extract_magnetization):
	1. weighted linear fit c0 + c2 B^2 on the saturated tail
	2. zero-field baseline a anchored at the lowest-field point, c_M = c0 - a
	3. M/M_S = sqrt(clamp((delta_f - a - c2 B^2) / c_M, 0, inf))
	4. exclusion window flagged and left out of the fits
	5. multi-start tanh fit for T_S at fixed g
	6. joint refinement of (a, c2, c_M, T_S) on all retained points
"""

import logging
from typing import Iterable, List, Optional, Sequence, Tuple

import lmfit
import numpy as np

from kiq.config import (
	DEFAULT_EXCLUSION_T,
	DEFAULT_G,
	DEFAULT_TAIL_START_T,
	MIN_TAIL_POINTS,
	MULTI_START_COUNT,
	T_S_START_RANGE_K,
	fit_kws,
	max_nfev,
)
from kiq.errors import DomainError, ExtractionError
from kiq.ensemble.views import AvoidedCrossing, EnsembleParams, ExtractionResult, MagnetizationPoint, SweepTrace
from kiq.physics.constants import CONSTANTS
from kiq.physics.service import esr_frequency, paramagnetic_magnetization

logger = logging.getLogger(__name__)


def crossing_pull(B: np.ndarray, f_r0: float, crossing: AvoidedCrossing) -> np.ndarray:
	"""Dispersive pull (Hz) of the resonator by a spin line crossing it at hf_r0 = g mu_B B."""
	detuning = esr_frequency(np.asarray(B, dtype=float), crossing.g) - f_r0
	return -np.sign(detuning) * (np.sqrt(detuning**2 / 4.0 + crossing.coupling_Hz**2) - np.abs(detuning) / 2.0)


def synthesize_sweep(
	params: EnsembleParams,
	B_grid: Sequence[float],
	noise_sigma: float = 0.0,
	seed: int = 0,
	artifacts: Iterable[AvoidedCrossing] = (),
) -> SweepTrace:
	B = np.asarray(B_grid, dtype=float)
	if len(B) > 1 and np.any(np.diff(B) <= 0):
		raise DomainError('B grid must be strictly increasing')
	if noise_sigma < 0:
		raise DomainError('noise_sigma must be non-negative')

	m = paramagnetic_magnetization(B, params.g, params.T_S, params.M_S) / params.M_S
	delta_f = params.c2 * B**2 - params.beta * params.f_r0 * m**2
	for crossing in artifacts:
		delta_f = delta_f + crossing_pull(B, params.f_r0, crossing)
	if noise_sigma > 0:
		rng = np.random.default_rng(seed)
		delta_f = delta_f + rng.normal(0.0, noise_sigma, size=B.shape)

	return SweepTrace(B_par=B, delta_f=delta_f, sigma_f=np.full(B.shape, float(noise_sigma)), f_r0=params.f_r0)


# ── Extraction ──────────────────────────────────────────────────────────────


def _tanh_sq(B: np.ndarray, g: float, T_S: float) -> np.ndarray:
	return np.tanh(g * CONSTANTS.mu_B * B / (2.0 * CONSTANTS.k_B * T_S)) ** 2


def _abs_tanh(B, T_S, g):
	return np.abs(np.tanh(g * CONSTANTS.mu_B * B / (2.0 * CONSTANTS.k_B * T_S)))


def _weights(sigma: np.ndarray) -> Optional[np.ndarray]:
	"""1/sigma, or None when every sigma is zero. Zero entries borrow the smallest positive sigma."""
	if not np.any(sigma > 0):
		return None
	floor = np.min(sigma[sigma > 0])
	return 1.0 / np.where(sigma > 0, sigma, floor)


def _fit_tail(B: np.ndarray, y: np.ndarray, sigma: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
	"""Weighted linear least squares y = c0 + c2 B^2; returns coefficients and standard errors."""
	design = np.column_stack([np.ones_like(B), B**2])
	w = _weights(sigma)
	w = np.ones_like(B) if w is None else w
	A = design * w[:, None]
	coef, *_ = np.linalg.lstsq(A, y * w, rcond=None)
	cov = np.linalg.pinv(A.T @ A)
	if not np.any(sigma > 0):
		dof = max(len(B) - 2, 1)
		cov = cov * float(np.sum((design @ coef - y) ** 2)) / dof
	return coef, np.sqrt(np.clip(np.diag(cov), 0.0, None))


def _magnetization(
	B: np.ndarray,
	delta_f: np.ndarray,
	sigma_f: np.ndarray,
	baseline: float,
	c2: float,
	c_M: float,
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
	ratio = (delta_f - baseline - c2 * B**2) / c_M
	clamped = ratio < 0
	m = np.sqrt(np.clip(ratio, 0.0, None))
	sigma_ratio = sigma_f / abs(c_M)
	# clamped or near-zero points take the uncertainty of sqrt at the noise floor
	floor = np.sqrt(sigma_ratio)
	sigma_m = np.where(m > floor, sigma_ratio / (2.0 * np.where(m > 0, m, 1.0)), floor)
	return m, sigma_m, clamped


def _fit_temperature(
	B: np.ndarray,
	m: np.ndarray,
	sigma_m: np.ndarray,
	g: float,
	n_starts: int,
) -> lmfit.model.ModelResult:
	"""Multi-start tanh fit; starts on a log grid in T_S, best chi-square wins."""
	model = lmfit.Model(_abs_tanh, independent_vars=['B'])
	weights = _weights(sigma_m)
	best = None
	for start in np.geomspace(*T_S_START_RANGE_K, max(n_starts, 5)):
		params = model.make_params(T_S=dict(value=start, min=1e-6), g=dict(value=g, vary=False))
		try:
			result = model.fit(m, params, B=B, weights=weights, method='leastsq', fit_kws=fit_kws(), max_nfev=max_nfev(1))
		except (ValueError, FloatingPointError) as e:
			logger.debug(f'tanh fit from T_S={start:.4g} K failed: {e}')
			continue
		logger.debug(f'tanh fit from T_S={start:.4g} K -> {result.params["T_S"].value:.6g} K, chisqr {result.chisqr:.4g}')
		if best is None or result.chisqr < best.chisqr:
			best = result
	if best is None:
		raise ExtractionError('tanh fit failed from every start')
	return best


def _joint_residual(params: lmfit.Parameters, B: np.ndarray, y: np.ndarray, w: np.ndarray, g: float) -> np.ndarray:
	v = params.valuesdict()
	model = v['a'] + v['c2'] * B**2 + v['c_M'] * _tanh_sq(B, g, v['T_S'])
	return (model - y) * w


def _refine(
	B: np.ndarray,
	delta_f: np.ndarray,
	sigma_f: np.ndarray,
	start: dict,
	g: float,
) -> Optional[lmfit.minimizer.MinimizerResult]:
	"""
	Joint fit of the full sweep model in units of |c_M| so all parameters are O(1).

	The anchored baseline is removed before fitting and `a` only carries the
	residual offset, so a constant shift of the trace leaves the fit unchanged.
	"""
	scale = abs(start['c_M'])
	anchor = start['a']
	w = _weights(sigma_f)
	w = np.ones_like(B) if w is None else w * scale
	params = lmfit.Parameters()
	params.add('a', value=0.0)
	params.add('c2', value=start['c2'] / scale)
	params.add('c_M', value=start['c_M'] / scale)
	params.add('T_S', value=start['T_S'], min=1e-6)
	result = lmfit.minimize(
		_joint_residual,
		params,
		args=(B, (delta_f - anchor) / scale, w, g),
		method='leastsq',
		max_nfev=max_nfev(4),
		**fit_kws(),
	)
	if not result.success or result.params['c_M'].value >= 0:
		logger.warning(f'Joint sweep refinement rejected: {result.message}')
		return None
	for name in ('a', 'c2', 'c_M'):
		par = result.params[name]
		par.value *= scale
		if par.stderr is not None:
			par.stderr *= scale
	result.params['a'].value += anchor
	return result


def extract_magnetization(
	trace: SweepTrace,
	tail_start: float = DEFAULT_TAIL_START_T,
	exclusion: Optional[Tuple[float, float]] = DEFAULT_EXCLUSION_T,
	tail_stop: Optional[float] = None,
	g_fixed: float = DEFAULT_G,
	refine: bool = True,
	n_starts: int = MULTI_START_COUNT,
) -> ExtractionResult:
	B, delta_f, sigma_f = trace.B_par, trace.delta_f, trace.sigma_f

	excluded = np.zeros(len(B), dtype=bool)
	if exclusion is not None:
		lo, hi = sorted(exclusion)
		if lo < B[0] or hi > B[-1]:
			raise DomainError(f'exclusion window ({lo}, {hi}) T outside sweep range ({B[0]}, {B[-1]}) T')
		excluded = (B >= lo) & (B <= hi)
		exclusion = (lo, hi)

	tail = (B >= tail_start) & ~excluded
	if tail_stop is not None:
		tail &= B <= tail_stop
	n_tail = int(np.sum(tail))
	if n_tail < MIN_TAIL_POINTS:
		raise ExtractionError(f'need at least {MIN_TAIL_POINTS} tail points beyond {tail_start} T, got {n_tail}')

	(c0, c2), (c0_err, c2_err) = _fit_tail(B[tail], delta_f[tail], sigma_f[tail])
	baseline = float(delta_f[0] - c2 * B[0] ** 2)
	c_M = float(c0 - baseline)
	logger.info(f'Tail fit over {n_tail} points: c2 = {c2:.6g} Hz/T^2, saturation offset = {c_M:.6g} Hz')

	uncertainties = {'c0': float(c0_err), 'c2': float(c2_err)}
	if c_M >= 0:
		logger.warning(f'Non-negative saturation offset {c_M:.4g} Hz: no magnetization signal')
		curve = [MagnetizationPoint(float(b), 0.0, 0.0, bool(x), True) for b, x in zip(B, excluded)]
		return ExtractionResult(
			c2_fit=float(c2),
			offset_fit=c_M,
			baseline_fit=baseline,
			magnetization_curve=curve,
			T_S_fit=None,
			g_fit=g_fixed,
			excluded_window=exclusion,
			degenerate=True,
			uncertainties=uncertainties,
			n_tail=n_tail,
		)

	keep = ~excluded
	m, sigma_m, clamped = _magnetization(B, delta_f, sigma_f, baseline, c2, c_M)
	tanh_fit = _fit_temperature(B[keep], m[keep], sigma_m[keep], g_fixed, n_starts)
	T_S = float(tanh_fit.params['T_S'].value)
	T_S_err = tanh_fit.params['T_S'].stderr
	redchi = float(tanh_fit.redchi)

	if refine:
		joint = _refine(B[keep], delta_f[keep], sigma_f[keep], {'a': baseline, 'c2': c2, 'c_M': c_M, 'T_S': T_S}, g_fixed)
		if joint is not None:
			baseline = float(joint.params['a'].value)
			c2 = float(joint.params['c2'].value)
			c_M = float(joint.params['c_M'].value)
			T_S = float(joint.params['T_S'].value)
			T_S_err = joint.params['T_S'].stderr
			redchi = float(joint.redchi)
			for name in ('a', 'c2', 'c_M'):
				if joint.params[name].stderr is not None:
					uncertainties[name] = float(joint.params[name].stderr)
			m, sigma_m, clamped = _magnetization(B, delta_f, sigma_f, baseline, c2, c_M)

	if T_S_err is not None:
		uncertainties['T_S'] = float(T_S_err)
	if np.any(clamped & keep):
		logger.warning(f'{int(np.sum(clamped & keep))} magnetization points clamped to zero')

	curve = [
		MagnetizationPoint(float(b), float(mi), float(si), bool(x), bool(c))
		for b, mi, si, x, c in zip(B, m, sigma_m, excluded, clamped)
	]
	logger.info(f'Extracted T_S = {T_S * 1e3:.4f} mK at g = {g_fixed} (reduced chi-square {redchi:.4g})')
	return ExtractionResult(
		c2_fit=float(c2),
		offset_fit=c_M,
		baseline_fit=baseline,
		magnetization_curve=curve,
		T_S_fit=T_S,
		g_fit=g_fixed,
		excluded_window=exclusion,
		uncertainties=uncertainties,
		redchi=redchi,
		n_tail=n_tail,
	)


def sweep_model(result: ExtractionResult, B: np.ndarray) -> np.ndarray:
	"""Frequency shift predicted by an extraction result."""
	B = np.asarray(B, dtype=float)
	if result.T_S_fit is None:
		return result.baseline_fit + result.c2_fit * B**2
	return result.baseline_fit + result.c2_fit * B**2 + result.offset_fit * _tanh_sq(B, result.g_fit, result.T_S_fit)


def locate_avoided_crossing(
	trace: SweepTrace,
	result: ExtractionResult,
	window: Optional[Tuple[float, float]] = None,
	threshold: float = 5.0,
) -> Optional[Tuple[float, float]]:
	"""
	Field of the strongest residual inside the window and the g factor it implies.

	Returns None when the window holds fewer than three points or no residual
	exceeds `threshold` times the typical uncertainty.
	"""
	window = window or result.excluded_window
	if window is None or result.T_S_fit is None:
		return None
	lo, hi = window
	inside = (trace.B_par >= lo) & (trace.B_par <= hi)
	if np.sum(inside) < 3:
		return None
	B = trace.B_par[inside]
	residual = trace.delta_f[inside] - sweep_model(result, B)
	noise = float(np.median(trace.sigma_f[inside]))
	floor = max(threshold * noise, 1e-9 * abs(result.offset_fit))
	i_max = int(np.argmax(np.abs(residual)))
	if abs(residual[i_max]) <= floor:
		return None
	B_star = float(B[i_max])
	f_res = trace.f_r0 + float(sweep_model(result, B_star))
	g_crossing = CONSTANTS.h * f_res / (CONSTANTS.mu_B * B_star)
	logger.info(f'Avoided crossing at {B_star:.5f} T implies g = {g_crossing:.4f}')
	return B_star, g_crossing


def analyze_sweep(trace: SweepTrace, **kwargs) -> ExtractionResult:
	"""extract_magnetization plus the avoided-crossing check inside the exclusion window."""
	result = extract_magnetization(trace, **kwargs)
	crossing = locate_avoided_crossing(trace, result)
	if crossing is not None:
		result.crossing_field, result.g_crossing = crossing
	return result


def magnetization_rows(result: ExtractionResult) -> List[tuple]:
	return [(p.B_par, p.m, p.sigma, int(p.excluded), int(p.clamped)) for p in result.magnetization_curve]
