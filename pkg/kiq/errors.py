"""
Exception hierarchy for the kiq toolkit.

Every exception carries the CLI exit code it maps to:
- 1: configuration, schema and physical-domain errors
- 3: fit non-convergence and degenerate fits

Conditions that are flagged but still computed (out-of-regime inductance,
unconverged basis, extrapolated decay) are result fields, not exceptions.
"""

from typing import Optional


class KiqError(Exception):
	"""Base class for all toolkit errors."""

	exit_code: int = 1


class DomainError(KiqError, ValueError):
	"""A physical precondition is violated (singular field, field above B_c, ...)."""


class ConfigError(KiqError):
	"""Run configuration or input-file schema violation."""

	def __init__(self, message: str, *, location: Optional[str] = None) -> None:
		self.location = location
		super().__init__(f'{location}: {message}' if location else message)


class ExtractionError(KiqError):
	"""Magnetization extraction cannot start (e.g. too few tail points)."""


class FitError(KiqError):
	"""A nonlinear least-squares fit did not converge."""

	exit_code = 3


class NoDipError(FitError):
	"""No resonance dip detected in a complex trace."""


class DecayFitError(FitError):
	"""Decay trace is degenerate (constant, too short)."""


class AlignmentError(KiqError):
	"""Golden-section search found no interior maximum."""

	exit_code = 3
