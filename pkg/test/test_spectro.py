import numpy as np
import pytest

from kiq.errors import ConfigError, DomainError, FitError, NoDipError
from kiq.spectro import ComplexTrace, ResonanceModel, fit_resonance, read_complex_trace, s21_model, track_frequency, track_resonance
from kiq.spectro.service import render_complex_trace


def _trace(model: ResonanceModel, span: float = 3e6, points: int = 401) -> ComplexTrace:
	f = np.linspace(model.f_r - span / 2, model.f_r + span / 2, points)
	return ComplexTrace(freq=f, s21=s21_model(model, f))


def test_model_is_unity_far_from_resonance():
	m = ResonanceModel(f_r=7.8e9, Q_i=1e5, Q_c=5e4)
	assert abs(s21_model(m, [7.0e9])[0]) == pytest.approx(1.0, abs=1e-3)
	assert abs(s21_model(m, [7.8e9])[0]) == pytest.approx(1.0 - m.Q_l / m.Q_c, rel=1e-12)


def test_noise_free_round_trip(resonance):
	fit = fit_resonance(_trace(resonance))
	for name in ('f_r', 'Q_i', 'Q_c', 'phi0', 'amp', 'alpha', 'delay'):
		assert getattr(fit.model, name) == pytest.approx(getattr(resonance, name), rel=1e-8), name


def test_round_trip_at_40_db_snr(resonance):
	trace = _trace(resonance, points=2001)
	rng = np.random.default_rng(2024)
	n = len(trace.freq)
	noise = 1e-2 * resonance.amp * (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / np.sqrt(2.0)
	fit = fit_resonance(ComplexTrace(freq=trace.freq, s21=trace.s21 + noise))
	assert fit.model.f_r == pytest.approx(resonance.f_r, rel=1e-7)
	assert fit.model.Q_i == pytest.approx(resonance.Q_i, rel=0.05)
	assert fit.model.Q_c == pytest.approx(resonance.Q_c, rel=0.02)


def test_fit_from_explicit_guess(resonance):
	guess = resonance.model_copy(update={'f_r': resonance.f_r + 20e3, 'Q_i': 8e4})
	fit = fit_resonance(_trace(resonance), guess)
	assert fit.model.f_r == pytest.approx(resonance.f_r, rel=1e-9)


def test_global_rescaling_invariance(resonance):
	trace = _trace(resonance)
	plain = fit_resonance(trace)
	scaled = fit_resonance(trace.scaled(0.5 * np.exp(0.7j)))
	assert scaled.model.f_r == pytest.approx(plain.model.f_r, rel=1e-9)
	assert scaled.model.Q_i == pytest.approx(plain.model.Q_i, rel=1e-9)
	assert scaled.model.Q_c == pytest.approx(plain.model.Q_c, rel=1e-9)
	assert scaled.model.amp == pytest.approx(0.5 * plain.model.amp, rel=1e-6)


def test_flat_trace_has_no_dip():
	f = np.linspace(7.79e9, 7.81e9, 201)
	flat = ComplexTrace(freq=f, s21=0.8 * np.exp(1j * (0.3 - 2 * np.pi * f * 40e-9)))
	with pytest.raises(NoDipError, match='no dip detected'):
		fit_resonance(flat)


def test_too_few_points(resonance):
	with pytest.raises(DomainError):
		fit_resonance(_trace(resonance, points=8))


def test_span_must_cover_several_linewidths():
	model = ResonanceModel(f_r=7.8e9, Q_i=1e5, Q_c=5e4)
	linewidth = model.f_r / model.Q_l
	with pytest.raises(DomainError, match='linewidths'):
		fit_resonance(_trace(model, span=0.4 * linewidth, points=101))


def test_tracking_recovers_shifts(resonance):
	shifts = np.array([0.0, -1e3, -5e3, -20e3, -60e3])
	fields = np.linspace(0.0, 0.4, len(shifts))
	traces = [(B, _trace(resonance.model_copy(update={'f_r': resonance.f_r + s}))) for B, s in zip(fields, shifts)]
	result = track_resonance(traces)
	np.testing.assert_allclose(result.sweep.delta_f, shifts, atol=10.0)
	assert result.sweep.f_r0 == pytest.approx(resonance.f_r, rel=1e-9)
	assert result.failures == []
	np.testing.assert_allclose(result.q_internal, resonance.Q_i, rtol=1e-4)

	threaded = track_frequency(traces, threads=2)
	np.testing.assert_allclose(threaded.delta_f, result.sweep.delta_f, atol=10.0)


def test_tracking_fails_on_first_point(resonance):
	f = np.linspace(7.79e9, 7.81e9, 201)
	flat = ComplexTrace(freq=f, s21=np.ones_like(f, dtype=complex))
	with pytest.raises(FitError, match='first field point'):
		track_resonance([(0.0, flat), (0.1, _trace(resonance))])


def test_tracking_rejects_empty_and_unsorted(resonance):
	with pytest.raises(DomainError):
		track_resonance([])
	with pytest.raises(DomainError):
		track_resonance([(0.2, _trace(resonance)), (0.1, _trace(resonance))])


def test_complex_trace_csv(tmp_path, resonance):
	trace = _trace(resonance, points=51)
	path = tmp_path / 'trace.csv'
	path.write_bytes(render_complex_trace(trace))
	loaded = read_complex_trace(path)
	np.testing.assert_array_equal(loaded.freq, trace.freq)
	np.testing.assert_array_equal(loaded.s21, trace.s21)


def test_complex_trace_csv_rejects_unsorted(tmp_path):
	path = tmp_path / 'trace.csv'
	path.write_text('freq_Hz,re,im\n1.0,1.0,0.0\n3.0,1.0,0.0\n2.0,1.0,0.0\n')
	with pytest.raises(ConfigError, match='trace.csv:4'):
		read_complex_trace(path)
