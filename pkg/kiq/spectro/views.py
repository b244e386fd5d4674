from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from kiq.ensemble.views import SweepTrace


class ResonanceModel(BaseModel):
	"""Notch-type resonance; alpha and amp describe the environment, delay is the cable delay (s)."""

	model_config = ConfigDict(frozen=True)

	f_r: float = Field(..., gt=0)
	Q_i: float = Field(..., gt=0)
	Q_c: float = Field(..., gt=0)
	phi0: float = 0.0
	amp: float = Field(1.0, gt=0)
	alpha: float = 0.0
	delay: float = 0.0

	@property
	def Q_l(self) -> float:
		return 1.0 / (1.0 / self.Q_i + 1.0 / self.Q_c)


@dataclass(frozen=True)
class ComplexTrace:
	freq: np.ndarray  # Hz
	s21: np.ndarray  # complex

	def __post_init__(self) -> None:
		freq = np.asarray(self.freq, dtype=float)
		s21 = np.asarray(self.s21, dtype=complex)
		object.__setattr__(self, 'freq', freq)
		object.__setattr__(self, 's21', s21)
		if freq.ndim != 1 or freq.shape != s21.shape:
			raise ValueError('freq and s21 must be 1-D of equal length')
		if len(freq) > 1 and np.any(np.diff(freq) <= 0):
			raise ValueError('frequencies must be strictly increasing')

	@property
	def points(self) -> List[Tuple[float, complex]]:
		return list(zip(self.freq.tolist(), self.s21.tolist()))

	def scaled(self, factor: complex) -> 'ComplexTrace':
		return ComplexTrace(self.freq, self.s21 * factor)


@dataclass(frozen=True)
class ResonanceFit:
	model: ResonanceModel
	stderr: Dict[str, Optional[float]]
	redchi: float
	nfev: int

	def to_dict(self) -> dict:
		return {
			'f_r_Hz': self.model.f_r,
			'Q_i': self.model.Q_i,
			'Q_c': self.model.Q_c,
			'Q_l': self.model.Q_l,
			'phi0_rad': self.model.phi0,
			'amp': self.model.amp,
			'alpha_rad': self.model.alpha,
			'delay_s': self.model.delay,
			'stderr': dict(sorted(self.stderr.items())),
			'redchi': self.redchi,
			'nfev': self.nfev,
		}


@dataclass
class TrackingResult:
	sweep: SweepTrace
	fits: List[Optional[ResonanceFit]]
	failures: List[Tuple[int, float, str]] = field(default_factory=list)

	@property
	def q_internal(self) -> List[Optional[float]]:
		return [None if fit is None else fit.model.Q_i for fit in self.fits]


@dataclass(frozen=True)
class SearchResult:
	x: float
	value: float
	iterations: int
	evaluations: int


@dataclass(frozen=True)
class AlignmentPoint:
	B_par: float  # T
	B_perp_comp: float  # T
	f_max: float  # Hz
	iterations: int


FieldTraces = Sequence[Tuple[float, ComplexTrace]]
