"""
Notch-resonator transmission model, complex fitting and field tracking.

	S21(f) = amp e^{i alpha} e^{-2 pi i f delay} [1 - (Q_l/Q_c) e^{i phi0} / (1 + 2i Q_l (f/f_r - 1))]

The fit references the cable-delay phase to the trace center, which decorrelates
alpha from delay; alpha is converted back to the unreferenced convention on return.
Uncertainties are covariance based and do not include Fano-interference systematics.
"""

import logging
from pathlib import Path
from typing import List, Optional, Tuple

import lmfit
import numpy as np

from kiq.config import fit_kws, max_nfev, resolve_threads
from kiq.ensemble.views import SweepTrace
from kiq.errors import ConfigError, DomainError, FitError, KiqError, NoDipError
from kiq.parallel import run_ordered, split_chunks
from kiq.spectro.views import ComplexTrace, FieldTraces, ResonanceFit, ResonanceModel, TrackingResult
from kiq.storage import read_numeric_csv, render_csv

logger = logging.getLogger(__name__)

TRACE_HEADER = ('freq_Hz', 're', 'im')
MIN_LINEWIDTHS = 3.0
MIN_DIP_DEPTH = 1e-3


def _wrap(angle: float) -> float:
	return float(np.angle(np.exp(1j * angle)))


def s21_model(m: ResonanceModel, f) -> np.ndarray:
	f = np.asarray(f, dtype=float)
	env = m.amp * np.exp(1j * m.alpha) * np.exp(-2j * np.pi * f * m.delay)
	return env * (1.0 - (m.Q_l / m.Q_c) * np.exp(1j * m.phi0) / (1.0 + 2j * m.Q_l * (f / m.f_r - 1.0)))


def _notch(f, f_r, Q_i, Q_c, phi0, amp, alpha, delay_ns, f_ref):
	Q_l = 1.0 / (1.0 / Q_i + 1.0 / Q_c)
	env = amp * np.exp(1j * alpha) * np.exp(-2j * np.pi * (f - f_ref) * delay_ns * 1e-9)
	return env * (1.0 - (Q_l / Q_c) * np.exp(1j * phi0) / (1.0 + 2j * Q_l * (f / f_r - 1.0)))


class ResonatorModel(lmfit.Model):
	"""Notch resonator with delay in ns and phase referenced to f_ref."""

	def __init__(self, **kwargs):
		super().__init__(_notch, independent_vars=['f', 'f_ref'], **kwargs)

	def params_from(self, m: ResonanceModel, f_ref: float) -> lmfit.Parameters:
		return self.make_params(
			f_r=m.f_r,
			Q_i=m.Q_i,
			Q_c=m.Q_c,
			phi0=m.phi0,
			amp=m.amp,
			alpha=_wrap(m.alpha - 2.0 * np.pi * f_ref * m.delay),
			delay_ns=m.delay * 1e9,
		)

	def guess(self, data: np.ndarray, f: np.ndarray, f_ref: float) -> ResonanceModel:
		"""
		Self-initialization: delay from the off-resonant phase slope, environment from the
		edge baseline, f_r at the |S21| minimum, Q_l from the 3 dB width, Q_c from the depth.
		"""
		n = len(f)
		n_edge = max(3, n // 10)
		edge = np.r_[0:n_edge, n - n_edge : n]
		phase = np.unwrap(np.angle(data))
		slope = np.polyfit(f[edge] - f_ref, phase[edge], 1)[0]
		delay = -slope / (2.0 * np.pi)

		z = data * np.exp(2j * np.pi * (f - f_ref) * delay)
		baseline = np.mean(z[edge])
		zn = z / baseline
		power = np.abs(zn) ** 2
		i_min = int(np.argmin(power))
		depth = 1.0 - float(np.sqrt(power[i_min]))

		steps = np.concatenate([np.diff(zn[:n_edge]), np.diff(zn[n - n_edge :])])
		noise = float(np.std(steps) / np.sqrt(2.0))
		if depth < max(MIN_DIP_DEPTH, 6.0 * noise):
			raise NoDipError(f'no dip detected (depth {depth:.3g}, noise {noise:.3g})')

		half = 0.5 * (1.0 + power[i_min])
		left = i_min
		while left > 0 and power[left - 1] < half:
			left -= 1
		right = i_min
		while right < n - 1 and power[right + 1] < half:
			right += 1
		step = float(np.median(np.diff(f)))
		width = max(float(f[right] - f[left]) + step, step)
		f_r = float(f[i_min])
		Q_l = f_r / width

		span = float(f[-1] - f[0])
		if span < MIN_LINEWIDTHS * width:
			raise DomainError(f'trace spans {span / width:.2f} linewidths, need at least {MIN_LINEWIDTHS}')

		ratio = min(max(depth, MIN_DIP_DEPTH), 0.95)
		Q_c = Q_l / ratio
		Q_i = 1.0 / (1.0 / Q_l - 1.0 / Q_c)
		alpha_ref = float(np.angle(baseline))
		logger.debug(f'Resonance guess: f_r={f_r:.9g} Hz, Q_l={Q_l:.4g}, depth={depth:.3f}, delay={delay:.3e} s')
		return ResonanceModel(
			f_r=f_r,
			Q_i=Q_i,
			Q_c=Q_c,
			amp=float(np.abs(baseline)),
			alpha=_wrap(alpha_ref + 2.0 * np.pi * f_ref * delay),
			delay=delay,
		)


def fit_resonance(trace: ComplexTrace, initial_guess: Optional[ResonanceModel] = None) -> ResonanceFit:
	"""Complex least squares on stacked (Re, Im) residuals with uniform weights."""
	f, data = trace.freq, trace.s21
	if len(f) < 10:
		raise DomainError(f'trace has {len(f)} points, need at least 10')
	f_ref = 0.5 * (f[0] + f[-1])
	model = ResonatorModel()
	start = initial_guess if initial_guess is not None else model.guess(data, f, f_ref)
	params = model.params_from(start, f_ref)

	result = model.fit(data, params, f=f, f_ref=f_ref, method='leastsq', fit_kws=fit_kws(), max_nfev=max_nfev(7))
	if result.success:
		# polish: the scaled step test stops early on the weakly determined Q_i
		result = model.fit(data, result.params, f=f, f_ref=f_ref, method='leastsq', fit_kws=fit_kws(), max_nfev=max_nfev(7))
	if not result.success:
		raise FitError(f'resonance fit did not converge: {result.message}')
	values = result.params.valuesdict()
	if min(values['f_r'], values['Q_i'], values['Q_c'], values['amp']) <= 0:
		raise FitError('resonance fit converged to non-physical parameters')

	delay = values['delay_ns'] * 1e-9
	fitted = ResonanceModel(
		f_r=values['f_r'],
		Q_i=values['Q_i'],
		Q_c=values['Q_c'],
		phi0=_wrap(values['phi0']),
		amp=values['amp'],
		alpha=_wrap(values['alpha'] + 2.0 * np.pi * f_ref * delay),
		delay=delay,
	)
	stderr = {name: result.params[name].stderr for name in ('f_r', 'Q_i', 'Q_c', 'phi0', 'amp', 'alpha')}
	delay_err = result.params['delay_ns'].stderr
	stderr['delay'] = None if delay_err is None else delay_err * 1e-9
	logger.debug(f'Resonance fit: f_r={fitted.f_r:.10g} Hz, Q_i={fitted.Q_i:.5g}, Q_c={fitted.Q_c:.5g}, nfev={result.nfev}')
	return ResonanceFit(model=fitted, stderr=stderr, redchi=float(result.redchi), nfev=int(result.nfev))


def track_resonance(traces: FieldTraces, threads: Optional[int] = None) -> TrackingResult:
	"""
	Fit every field point, warm-starting from the previous success.

	With several threads the sweep is cut into contiguous chunks; the first point
	of each chunk starts cold.
	"""
	if len(traces) == 0:
		raise DomainError('empty sweep axis')
	fields = np.array([float(b) for b, _ in traces])
	if np.any(np.diff(fields) <= 0):
		raise DomainError('field points must be strictly increasing')

	def run_chunk(indices: range) -> List[Tuple[int, Optional[ResonanceFit], Optional[str]]]:
		out = []
		previous: Optional[ResonanceFit] = None
		for i in indices:
			trace = traces[i][1]
			try:
				try:
					fit = fit_resonance(trace, previous.model if previous else None)
				except FitError:
					if previous is None:
						raise
					fit = fit_resonance(trace)
				previous = fit
				out.append((i, fit, None))
			except KiqError as e:
				logger.warning(f'Field point {i} (B = {fields[i]} T) failed: {e}')
				out.append((i, None, str(e)))
		return out

	chunks = split_chunks(len(traces), resolve_threads(threads))
	outcomes = [item for chunk in run_ordered(run_chunk, chunks, threads) for item in chunk]

	first = outcomes[0]
	if first[1] is None:
		raise FitError(f'first field point failed: {first[2]}')
	f0 = first[1].model.f_r
	s0 = first[1].stderr.get('f_r') or 0.0

	rows, fits, failures = [], [], []
	for i, fit, error in outcomes:
		fits.append(fit)
		if fit is None:
			failures.append((i, float(fields[i]), error or 'fit failed'))
			continue
		if i == 0:
			rows.append((fields[i], 0.0, 0.0))
		else:
			s_i = fit.stderr.get('f_r') or 0.0
			rows.append((fields[i], fit.model.f_r - f0, float(np.hypot(s_i, s0))))
	logger.info(f'Tracked {len(rows)} of {len(traces)} field points')
	return TrackingResult(sweep=SweepTrace.from_points(rows, f_r0=f0), fits=fits, failures=failures)


def track_frequency(traces: FieldTraces, threads: Optional[int] = None) -> SweepTrace:
	return track_resonance(traces, threads).sweep


def read_complex_trace(path: Path) -> ComplexTrace:
	rows = read_numeric_csv(path, TRACE_HEADER)
	if len(rows) == 0:
		raise DomainError(f'{path}: no data rows')
	arr = np.asarray(rows, dtype=float)
	freq = arr[:, 0]
	bad = np.nonzero(np.diff(freq) <= 0)[0]
	if len(bad):
		raise ConfigError('freq_Hz not strictly increasing', location=f'{Path(path).name}:{int(bad[0]) + 3}')
	return ComplexTrace(freq=freq, s21=arr[:, 1] + 1j * arr[:, 2])


def render_complex_trace(trace: ComplexTrace) -> bytes:
	return render_csv(TRACE_HEADER, ((f, z.real, z.imag) for f, z in zip(trace.freq.tolist(), trace.s21.tolist())))
