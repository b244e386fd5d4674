from kiq.runner.service import (
	CommandOutcome,
	load_config,
	parse_config,
	read_sweep_csv,
	run_align,
	run_decay,
	run_excite,
	run_extract,
	run_fig4,
	run_fitres,
	run_synthesize,
	run_twotone,
	write_outcome,
)

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
