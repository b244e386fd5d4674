from dataclasses import dataclass, field
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from kiq.config import (
	DEFAULT_BETA,
	DEFAULT_C2_HZ_PER_T2,
	DEFAULT_DRIVE_STRENGTH,
	DEFAULT_F_DRIVE_RES_HZ,
	DEFAULT_F_R0_HZ,
	DEFAULT_G,
	DEFAULT_KAPPA_HZ,
	DEFAULT_SIGMA_INH_HZ,
	DEFAULT_STRETCH_BETA,
	DEFAULT_T1_S,
	DEFAULT_T_S_K,
)


class FieldPoint(NamedTuple):
	B_par: float  # T
	delta_f: float  # Hz
	sigma_f: float  # Hz


@dataclass(frozen=True)
class SweepTrace:
	"""Resonator frequency shift versus in-plane field."""

	B_par: np.ndarray
	delta_f: np.ndarray
	sigma_f: np.ndarray
	f_r0: float

	def __post_init__(self) -> None:
		B, df, sf = (np.asarray(a, dtype=float) for a in (self.B_par, self.delta_f, self.sigma_f))
		object.__setattr__(self, 'B_par', B)
		object.__setattr__(self, 'delta_f', df)
		object.__setattr__(self, 'sigma_f', sf)
		if not (B.ndim == df.ndim == sf.ndim == 1 and len(B) == len(df) == len(sf)):
			raise ValueError('B_par, delta_f and sigma_f must be 1-D of equal length')
		if len(B) > 1 and np.any(np.diff(B) <= 0):
			raise ValueError('B_par must be strictly increasing')
		if np.any(sf < 0):
			raise ValueError('sigma_f must be non-negative')
		if not self.f_r0 > 0:
			raise ValueError('f_r0 must be positive')
		if not (np.all(np.isfinite(B)) and np.all(np.isfinite(df)) and np.all(np.isfinite(sf))):
			raise ValueError('sweep values must be finite')

	@classmethod
	def from_points(cls, points: Sequence[Tuple[float, float, float]], f_r0: float) -> 'SweepTrace':
		arr = np.asarray(points, dtype=float).reshape(-1, 3)
		return cls(B_par=arr[:, 0], delta_f=arr[:, 1], sigma_f=arr[:, 2], f_r0=f_r0)

	@property
	def points(self) -> List[FieldPoint]:
		return [FieldPoint(float(b), float(d), float(s)) for b, d, s in zip(self.B_par, self.delta_f, self.sigma_f)]

	def shifted(self, offset: float) -> 'SweepTrace':
		return SweepTrace(self.B_par, self.delta_f + offset, self.sigma_f, self.f_r0)

	def __len__(self) -> int:
		return len(self.B_par)


class EnsembleParams(BaseModel):
	model_config = ConfigDict(frozen=True)

	g: float = Field(DEFAULT_G, gt=0)
	T_S: float = Field(DEFAULT_T_S_K, gt=0, description='Spin temperature (K)')
	M_S: float = Field(1.0, gt=0)
	beta: float = Field(DEFAULT_BETA, ge=0, description='Saturation red shift in units of f_r0')
	c2: float = Field(DEFAULT_C2_HZ_PER_T2, lt=0, description='Bare-resonator curvature (Hz/T^2)')
	sigma_inh: float = Field(DEFAULT_SIGMA_INH_HZ, gt=0, description='Inhomogeneous ESR linewidth (Hz)')
	f_r0: float = Field(DEFAULT_F_R0_HZ, gt=0, description='Zero-field resonator frequency (Hz)')


class AvoidedCrossing(BaseModel):
	"""A spin species crossing the resonator with transverse coupling g_perp."""

	model_config = ConfigDict(frozen=True)

	g: float = Field(..., gt=0)
	coupling_Hz: float = Field(..., gt=0)


@dataclass(frozen=True)
class MagnetizationPoint:
	B_par: float
	m: float  # M/M_S
	sigma: float
	excluded: bool = False
	clamped: bool = False


@dataclass
class ExtractionResult:
	c2_fit: float
	offset_fit: float  # c_M, Hz; negative for a red shift
	baseline_fit: float  # a, Hz
	magnetization_curve: List[MagnetizationPoint]
	T_S_fit: Optional[float]
	g_fit: float
	excluded_window: Optional[Tuple[float, float]]
	degenerate: bool = False
	uncertainties: Dict[str, float] = field(default_factory=dict)
	redchi: Optional[float] = None
	n_tail: int = 0
	crossing_field: Optional[float] = None
	g_crossing: Optional[float] = None

	def to_dict(self) -> dict:
		return {
			'c2_fit_Hz_per_T2': self.c2_fit,
			'offset_fit_Hz': self.offset_fit,
			'baseline_fit_Hz': self.baseline_fit,
			'T_S_fit_K': self.T_S_fit,
			'g_fit': self.g_fit,
			'excluded_window_T': list(self.excluded_window) if self.excluded_window else None,
			'degenerate': self.degenerate,
			'uncertainties': dict(sorted(self.uncertainties.items())),
			'redchi': self.redchi,
			'n_tail': self.n_tail,
			'crossing_field_T': self.crossing_field,
			'g_crossing': self.g_crossing,
		}


class RateModelParams(BaseModel):
	"""Two-tone drive through a filtering resonator and phenomenological relaxation.

	drive_strength is the peak pump rate in units of 1/T1.
	"""

	model_config = ConfigDict(frozen=True)

	f_drive_res: float = Field(DEFAULT_F_DRIVE_RES_HZ, gt=0)
	kappa: float = Field(DEFAULT_KAPPA_HZ, gt=0)
	drive_strength: float = Field(DEFAULT_DRIVE_STRENGTH, ge=0)
	T1: float = Field(DEFAULT_T1_S, gt=0, description='Relaxation time scale, equal to the 1/e time (s)')
	stretch_beta: float = Field(DEFAULT_STRETCH_BETA, gt=0, le=1)


@dataclass(frozen=True)
class TwoToneMap:
	f_drive: np.ndarray  # Hz, rows
	B_par: np.ndarray  # T, columns
	dM: np.ndarray  # (len(f_drive), len(B_par)), delta M / M_S

	def ridge(self) -> np.ndarray:
		"""Drive frequency of each column's maximum."""
		return self.f_drive[np.argmax(self.dM, axis=0)]


@dataclass(frozen=True)
class DecayFit:
	tau_1e: float  # s
	stretch_beta: float
	tau_err: Optional[float]
	beta_err: Optional[float]
	extrapolated: bool
	redchi: float

	def to_dict(self) -> dict:
		return {
			'tau_1e_s': self.tau_1e,
			'stretch_beta_fit': self.stretch_beta,
			'tau_err_s': self.tau_err,
			'beta_err': self.beta_err,
			'extrapolated': self.extrapolated,
			'redchi': self.redchi,
		}
