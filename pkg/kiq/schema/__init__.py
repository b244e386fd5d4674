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

__all__ = [
	'AlignConfig',
	'DecayConfig',
	'ExciteConfig',
	'ExtractConfig',
	'Fig4Config',
	'FitresConfig',
	'RunConfig',
	'SynthesizeConfig',
	'TwoToneConfig',
]
