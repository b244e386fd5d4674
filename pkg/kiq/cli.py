import logging
from pathlib import Path
from typing import Callable, Optional, Type

import typer
from pydantic import ValidationError

from kiq.config import default_log_level
from kiq.errors import ConfigError, KiqError
from kiq.logging_setup import new_run_id, setup_logging
from kiq.runner.service import (
	CommandOutcome,
	format_validation_error,
	load_config,
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

logger = logging.getLogger(__name__)

app = typer.Typer(
	name='kiq',
	help='Kinetic-inductance spin toolkit: synthesize, extract and simulate field sweeps.',
	add_completion=False,
	no_args_is_help=True,
)

ConfigOption = typer.Option(..., '--config', '-c', help='JSON run configuration.', dir_okay=False)
OutDirOption = typer.Option(Path('out'), '--out-dir', '-o', help='Directory for the CSV payload and JSON envelope.', file_okay=False)
SeedOption = typer.Option(None, '--seed', help='Overrides the seed given in the config.')
ThreadsOption = typer.Option(None, '--threads', envvar='KIQ_THREADS', min=1, help='Worker threads for parallel sweeps.')


@app.callback()
def main(
	log_level: str = typer.Option(default_log_level(), '--log-level', envvar='KIQ_LOG_LEVEL', help='Logging level.'),
	json_logs: bool = typer.Option(True, '--json-logs/--plain-logs', help='JSON lines or plain text on stderr.'),
) -> None:
	setup_logging(log_level, json_output=json_logs)
	run_id = new_run_id()
	logger.debug(f'Run id {run_id}')


def _execute(
	command: str,
	config_path: Path,
	out_dir: Path,
	model: Type[RunConfig],
	service: Callable[[RunConfig], CommandOutcome],
) -> None:
	"""Load, run, persist; maps every toolkit error onto its exit code."""
	logger.info(f'{command}: starting with {config_path}')
	try:
		config, text = load_config(config_path, model)
		try:
			outcome = service(config)
		except ValidationError as e:
			raise ConfigError(format_validation_error(e)) from None
		write_outcome(outcome, text, out_dir)
	except KiqError as e:
		logger.error(f'{command} failed: {e}')
		typer.secho(f'Error: {e}', fg=typer.colors.RED, err=True)
		raise typer.Exit(code=e.exit_code)

	for error in outcome.errors:
		typer.secho(f'Warning: {error}', fg=typer.colors.YELLOW, err=True)
	color = typer.colors.GREEN if outcome.exit_code == 0 else typer.colors.YELLOW
	typer.secho(f'{command}: results written to {out_dir}', fg=color)
	if outcome.exit_code:
		raise typer.Exit(code=outcome.exit_code)


@app.command(name='fig4', help='Qubit frequency shift on a spin flip versus distance and in-plane field.')
def fig4(config: Path = ConfigOption, out_dir: Path = OutDirOption, threads: Optional[int] = ThreadsOption) -> None:
	_execute('fig4', config, out_dir, Fig4Config, lambda c: run_fig4(c, threads=threads))


@app.command(name='synthesize', help='Synthetic resonator field sweep from an ensemble model.')
def synthesize(config: Path = ConfigOption, out_dir: Path = OutDirOption, seed: Optional[int] = SeedOption) -> None:
	_execute('synthesize', config, out_dir, SynthesizeConfig, lambda c: run_synthesize(c, seed=seed))


@app.command(name='extract', help='Magnetization curve and spin temperature from a field sweep CSV.')
def extract(config: Path = ConfigOption, out_dir: Path = OutDirOption) -> None:
	_execute('extract', config, out_dir, ExtractConfig, lambda c: run_extract(c, config.parent))


@app.command(name='twotone', help='Steady-state two-tone depolarization map.')
def twotone(config: Path = ConfigOption, out_dir: Path = OutDirOption) -> None:
	_execute('twotone', config, out_dir, TwoToneConfig, run_twotone)


@app.command(name='decay', help='Simulate a decay from saturation and refit its 1/e time.')
def decay(config: Path = ConfigOption, out_dir: Path = OutDirOption, seed: Optional[int] = SeedOption) -> None:
	_execute('decay', config, out_dir, DecayConfig, lambda c: run_decay(c, seed=seed))


@app.command(name='fitres', help='Fit a notch resonator to a complex transmission trace.')
def fitres(config: Path = ConfigOption, out_dir: Path = OutDirOption) -> None:
	_execute('fitres', config, out_dir, FitresConfig, lambda c: run_fitres(c, config.parent))


@app.command(name='align', help='Perpendicular-field compensation map for a tilted chip.')
def align(config: Path = ConfigOption, out_dir: Path = OutDirOption) -> None:
	_execute('align', config, out_dir, AlignConfig, run_align)


@app.command(name='excite', help='Excitation traces for several drive strengths.')
def excite(config: Path = ConfigOption, out_dir: Path = OutDirOption) -> None:
	_execute('excite', config, out_dir, ExciteConfig, run_excite)


if __name__ == '__main__':
	app()
