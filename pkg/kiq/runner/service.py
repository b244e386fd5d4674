"""
Command services behind the CLI.

Each run_* function takes a validated config and returns a CommandOutcome:
payload files (bytes), the JSON payload section, per-row errors and the exit
code. Writing files and the envelope is left to write_outcome so the services
stay free of I/O beyond reading their declared inputs.
"""

import logging
import math
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Type, TypeVar

import numpy as np
import orjson
from pydantic import ValidationError

from kiq import __version__
from kiq.ensemble.dynamics import decay_monte_carlo, excitation_family, fit_decay_tau, simulate_decay, steady_state_map
from kiq.ensemble.service import analyze_sweep, magnetization_rows, synthesize_sweep
from kiq.ensemble.views import SweepTrace
from kiq.errors import ConfigError, FitError
from kiq.fluxonium.service import fig4c_sweep
from kiq.physics.service import esr_field, esr_frequency
from kiq.schema.views import (
	AlignConfig,
	DecayConfig,
	ExciteConfig,
	ExtractConfig,
	Fig4Config,
	FitresConfig,
	RunConfig,
	SynthesizeConfig,
	TwoToneConfig,
)
from kiq.spectro.alignment import compensation_map, misaligned_resonator
from kiq.spectro.service import fit_resonance, read_complex_trace, render_complex_trace, s21_model
from kiq.storage import atomic_write_bytes, dumps_json, read_numeric_csv, render_csv

logger = logging.getLogger(__name__)

C = TypeVar('C', bound=RunConfig)

SWEEP_HEADER = ('B_par_T', 'delta_f_Hz', 'sigma_f_Hz')
EXIT_OK = 0
EXIT_PARTIAL = 2
EXIT_FIT = 3


@dataclass
class CommandOutcome:
	command: str
	files: Dict[str, bytes]
	payload: dict
	errors: List[dict] = field(default_factory=list)
	exit_code: int = EXIT_OK


# ── Config ingestion ────────────────────────────────────────────────────────


def format_validation_error(error: ValidationError) -> str:
	parts = []
	for item in error.errors():
		key = '.'.join(str(p) for p in item['loc']) or '<root>'
		parts.append(f'{key}: {item["msg"]}')
	return '; '.join(parts)


def parse_config(text: str, model: Type[C], source: str = '<config>') -> C:
	try:
		raw = orjson.loads(text)
	except orjson.JSONDecodeError as e:
		raise ConfigError(f'invalid JSON: {e.msg}', location=f'{source}:{e.lineno}:{e.colno}') from None
	if not isinstance(raw, dict):
		raise ConfigError('config must be a JSON object', location=source)
	try:
		return model.model_validate(raw)
	except ValidationError as e:
		raise ConfigError(format_validation_error(e), location=source) from None


def load_config(path: Path, model: Type[C]) -> Tuple[C, str]:
	"""Parse a config file; returns the record and the raw text for the envelope echo."""
	path = Path(path)
	if not path.is_file():
		raise ConfigError(f'config file not found: {path}')
	text = path.read_text(encoding='utf-8')
	return parse_config(text, model, source=path.name), text


def _resolve_input(name: str, config_dir: Path) -> Path:
	path = Path(name)
	return path if path.is_absolute() else config_dir / path


def read_sweep_csv(path: Path, f_r0: float) -> SweepTrace:
	rows = read_numeric_csv(path, SWEEP_HEADER)
	if len(rows) == 0:
		raise ConfigError('no data rows', location=Path(path).name)
	for i in range(len(rows)):
		if i > 0 and not rows[i][0] > rows[i - 1][0]:
			raise ConfigError(f'row {i + 2}: B_par_T not strictly increasing', location=f'{Path(path).name}:{i + 2}')
		if rows[i][2] < 0:
			raise ConfigError(f'row {i + 2}: negative sigma_f_Hz', location=f'{Path(path).name}:{i + 2}')
	try:
		return SweepTrace.from_points(rows, f_r0=f_r0)
	except ValueError as e:
		raise ConfigError(str(e), location=Path(path).name) from None


def render_sweep(trace: SweepTrace) -> bytes:
	return render_csv(SWEEP_HEADER, zip(trace.B_par.tolist(), trace.delta_f.tolist(), trace.sigma_f.tolist()))


# ── Commands ────────────────────────────────────────────────────────────────


def run_fig4(config: Fig4Config, threads: Optional[int] = None) -> CommandOutcome:
	try:
		scenario = config.scenario()
	except ValidationError as e:
		raise ConfigError(format_validation_error(e)) from None
	rows = fig4c_sweep(
		scenario,
		[d * 1e-9 for d in config.d_nm],
		[B * 1e-3 for B in config.B_par_mT],
		threads=threads,
		method=config.method,
	)
	labels = [(d, B) for d in config.d_nm for B in config.B_par_mT]
	table = [(d, B, row.delta_fq) for (d, B), row in zip(labels, rows)]
	errors = [{'d_nm': d, 'B_par_mT': B, 'error': row.error} for (d, B), row in zip(labels, rows) if row.error]
	shifts = [abs(row.delta_fq) for row in rows if row.error is None]
	payload = {
		'rows': len(rows),
		'failed_rows': len(errors),
		'method': config.method,
		'max_abs_delta_fq_Hz': max(shifts) if shifts else None,
	}
	return CommandOutcome(
		command='fig4',
		files={'fig4.csv': render_csv(('d_nm', 'B_par_mT', 'delta_fq_Hz'), table)},
		payload=payload,
		errors=errors,
		exit_code=EXIT_PARTIAL if errors else EXIT_OK,
	)


def run_synthesize(config: SynthesizeConfig, seed: Optional[int] = None) -> CommandOutcome:
	seed = config.seed if seed is None else seed
	trace = synthesize_sweep(
		config.ensemble(),
		config.B_grid(),
		noise_sigma=config.noise_sigma_Hz,
		seed=seed,
		artifacts=[a.crossing() for a in config.artifacts],
	)
	payload = {
		'seed': seed,
		'points': len(trace),
		'f_r0_Hz': trace.f_r0,
		'saturation_shift_Hz': -config.beta * trace.f_r0,
	}
	return CommandOutcome(command='synthesize', files={'synthesize.csv': render_sweep(trace)}, payload=payload)


def run_extract(config: ExtractConfig, config_dir: Path) -> CommandOutcome:
	trace = read_sweep_csv(_resolve_input(config.input_csv, config_dir), config.f_r0_GHz * 1e9)
	result = analyze_sweep(
		trace,
		tail_start=config.tail_start_T,
		exclusion=config.exclusion_T,
		tail_stop=config.tail_stop_T,
		g_fixed=config.g_fixed,
		refine=config.refine,
	)
	errors = []
	if result.degenerate:
		errors.append({'error': f'no magnetization signal: saturation offset {result.offset_fit} Hz is not a red shift'})
	curve = render_csv(('B_par_T', 'M_over_MS', 'sigma_M', 'excluded', 'clamped'), magnetization_rows(result))
	return CommandOutcome(
		command='extract',
		files={'extract.csv': curve},
		payload=result.to_dict(),
		errors=errors,
		exit_code=EXIT_FIT if result.degenerate else EXIT_OK,
	)


def run_twotone(config: TwoToneConfig) -> CommandOutcome:
	ensemble, rates = config.ensemble(), config.rates()
	spin_map = steady_state_map(ensemble, rates, config.f_grid(), config.B_grid())
	rows = (
		(f, B, dM)
		for i, f in enumerate(spin_map.f_drive.tolist())
		for B, dM in zip(spin_map.B_par.tolist(), spin_map.dM[i].tolist())
	)
	ridge = esr_frequency(spin_map.B_par, ensemble.g)
	observed = spin_map.ridge() if np.any(spin_map.dM > 0) else None
	payload = {
		'crossing_field_T': esr_field(rates.f_drive_res, ensemble.g),
		'ridge': [{'B_par_T': B, 'f_esr_Hz': f} for B, f in zip(spin_map.B_par.tolist(), ridge.tolist())],
		'column_max_f_drive_Hz': None if observed is None else observed.tolist(),
		'max_dM_over_MS': float(np.max(spin_map.dM)),
	}
	return CommandOutcome(
		command='twotone',
		files={'twotone.csv': render_csv(('f_drive_Hz', 'B_par_T', 'dM_over_MS'), rows)},
		payload=payload,
	)


def run_decay(config: DecayConfig, seed: Optional[int] = None) -> CommandOutcome:
	seed = config.seed if seed is None else seed
	rates = config.rates()
	t = config.t_grid()
	clean = simulate_decay(rates, t)
	payload: dict = {'truth': {'tau_1e_s': config.tau_1e_s, 'stretch_beta': config.stretch_beta}, 'seed': seed}
	errors: List[dict] = []

	if config.noise_rel == 0:
		trace = clean
		fit = fit_decay_tau(t, clean)
		payload['fit'] = fit.to_dict()
		fits = [fit]
	else:
		seeds = list(range(seed, seed + config.n_seeds))
		by_seed = decay_monte_carlo(rates, t, config.noise_rel, seeds)
		trace = clean * (1.0 + config.noise_rel * np.random.default_rng(seed).standard_normal(clean.shape))
		payload['fits'] = [{'seed': s, **(f.to_dict() if f else {'error': 'fit failed'})} for s, f in by_seed.items()]
		errors = [{'seed': s, 'error': 'fit failed'} for s, f in by_seed.items() if f is None]
		fits = [f for f in by_seed.values() if f is not None]
		if not fits:
			raise FitError('decay fit failed for every seed')

	taus = np.array([f.tau_1e for f in fits])
	payload['median_tau_1e_s'] = float(np.median(taus))
	payload['median_relative_error'] = float(np.median(np.abs(taus / config.tau_1e_s - 1.0)))
	payload['median_stretch_beta_fit'] = float(np.median([f.stretch_beta for f in fits]))
	return CommandOutcome(
		command='decay',
		files={'decay.csv': render_csv(('t_s', 'dM_over_dM0'), zip(t.tolist(), trace.tolist()))},
		payload=payload,
		errors=errors,
		exit_code=EXIT_PARTIAL if errors else EXIT_OK,
	)


def run_fitres(config: FitresConfig, config_dir: Path) -> CommandOutcome:
	trace = read_complex_trace(_resolve_input(config.input_csv, config_dir))
	guess = config.initial_guess.model() if config.initial_guess else None
	fit = fit_resonance(trace, guess)
	model_trace = type(trace)(freq=trace.freq, s21=s21_model(fit.model, trace.freq))
	return CommandOutcome(command='fitres', files={'fitres.csv': render_complex_trace(model_trace)}, payload=fit.to_dict())


def run_align(config: AlignConfig) -> CommandOutcome:
	tilt = math.radians(config.tilt_deg)

	def frequency(B_par: float, B_perp: float) -> float:
		return misaligned_resonator(config.f0_GHz * 1e9, config.c_par_Hz_per_T2, config.c_perp_Hz_per_T2, tilt, B_par)(B_perp)

	search = (config.search_mT[0] * 1e-3, config.search_mT[1] * 1e-3)
	points = compensation_map(frequency, config.B_par_T, search, config.tol_uT * 1e-6)
	rows = [(p.B_par, p.B_perp_comp, p.f_max) for p in points]
	payload = {
		'tilt_deg': config.tilt_deg,
		'expected_slope': -math.tan(tilt),
		'iterations': [p.iterations for p in points],
	}
	return CommandOutcome(command='align', files={'align.csv': render_csv(('B_par_T', 'B_perp_comp_T', 'f_max_Hz'), rows)}, payload=payload)


def run_excite(config: ExciteConfig) -> CommandOutcome:
	rates = config.rates()
	t = config.t_grid()
	family = excitation_family(rates, config.drive_strengths, t, config.m_eq)
	rows = ((ti, s, value) for s, trace in family.items() for ti, value in zip(t.tolist(), trace.tolist()))
	payload = {
		'steady_state': {repr(s): float(trace[-1]) for s, trace in family.items()},
		'tau_rise_s': {repr(s): 1.0 / ((s + 1.0) / rates.T1) for s in family},
	}
	return CommandOutcome(command='excite', files={'excite.csv': render_csv(('t_s', 'drive_strength', 'dM_over_MS'), rows)}, payload=payload)


# ── Persistence ─────────────────────────────────────────────────────────────


def envelope(outcome: CommandOutcome, config_text: str) -> dict:
	return {
		'version': __version__,
		'command': outcome.command,
		'config_echo': config_text,
		'timestamp_utc': datetime.now(timezone.utc).isoformat(),
		'payload': outcome.payload,
		'errors': outcome.errors,
		'exit_code': outcome.exit_code,
	}


def write_outcome(outcome: CommandOutcome, config_text: str, out_dir: Path) -> List[Path]:
	out_dir = Path(out_dir)
	written = [atomic_write_bytes(out_dir / name, data) for name, data in sorted(outcome.files.items())]
	written.append(atomic_write_bytes(out_dir / f'{outcome.command}.json', dumps_json(envelope(outcome, config_text))))
	logger.info(f'{outcome.command}: wrote {", ".join(p.name for p in written)} (exit {outcome.exit_code})')
	return written


__all__ = [
	'CommandOutcome',
	'load_config',
	'parse_config',
	'read_sweep_csv',
	'run_align',
	'run_decay',
	'run_excite',
	'run_extract',
	'run_fig4',
	'run_fitres',
	'run_synthesize',
	'run_twotone',
	'write_outcome',
]
