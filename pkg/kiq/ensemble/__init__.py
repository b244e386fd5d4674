from kiq.ensemble.dynamics import (
	excitation_family,
	fit_decay_tau,
	pump_rate,
	simulate_decay,
	simulate_excitation,
	steady_state_map,
)
from kiq.ensemble.service import (
	analyze_sweep,
	crossing_pull,
	extract_magnetization,
	locate_avoided_crossing,
	synthesize_sweep,
)
from kiq.ensemble.views import (
	AvoidedCrossing,
	DecayFit,
	EnsembleParams,
	ExtractionResult,
	MagnetizationPoint,
	RateModelParams,
	SweepTrace,
	TwoToneMap,
)

__all__ = [
	'AvoidedCrossing',
	'DecayFit',
	'EnsembleParams',
	'ExtractionResult',
	'MagnetizationPoint',
	'RateModelParams',
	'SweepTrace',
	'TwoToneMap',
	'analyze_sweep',
	'crossing_pull',
	'excitation_family',
	'extract_magnetization',
	'fit_decay_tau',
	'locate_avoided_crossing',
	'pump_rate',
	'simulate_decay',
	'simulate_excitation',
	'steady_state_map',
	'synthesize_sweep',
]
