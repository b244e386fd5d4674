"""
Run configurations, one record per CLI command.

Every physical key carries its unit in the name; unknown keys are rejected.
"""

from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from kiq import config as defaults
from kiq.ensemble.views import AvoidedCrossing, EnsembleParams, RateModelParams
from kiq.fluxonium.views import FluxoniumParams, NanojunctionGeometry, ShiftMethod, SpinReadoutScenario
from kiq.physics.views import DipoleMoment, MaterialParams
from kiq.spectro.views import ResonanceModel


def _non_empty(values: List[float]) -> List[float]:
	if len(values) == 0:
		raise ValueError('empty sweep axis')
	return values


class RunConfig(BaseModel):
	model_config = ConfigDict(extra='forbid', frozen=True)


class Fig4Config(RunConfig):
	moment_muB: float = Field(defaults.DEFAULT_MOMENT_MUB, gt=0)
	moment_axis: Tuple[float, float, float] = (1.0, 0.0, 0.0)
	d_nm: List[float] = [10.0, 20.0, 30.0, 40.0, 50.0, 60.0, 70.0, 80.0, 90.0, 100.0]
	B_par_mT: List[float] = [100.0, 200.0, 500.0]
	B_c_T: float = Field(defaults.DEFAULT_B_C_T, gt=0)
	E_J_GHz: float = Field(defaults.DEFAULT_E_J_HZ / 1e9, ge=0)
	E_C_GHz: float = Field(defaults.DEFAULT_E_C_HZ / 1e9, gt=0)
	E_L_GHz: float = Field(defaults.DEFAULT_E_L_HZ / 1e9, gt=0)
	phi_ext_frac: float = defaults.DEFAULT_PHI_EXT_FRAC
	junction_edge_nm: float = Field(defaults.DEFAULT_JUNCTION_EDGE_M * 1e9, gt=0)
	grid_n: int = Field(defaults.DEFAULT_GRID_N, ge=2)
	lateral_offset_nm: Tuple[float, float] = (0.0, 0.0)
	basis_dim: int = Field(defaults.DEFAULT_BASIS_DIM, ge=defaults.MIN_BASIS_DIM)
	method: ShiftMethod = 'hellmann-feynman'

	@field_validator('d_nm', 'B_par_mT')
	@classmethod
	def _axes(cls, values: List[float]) -> List[float]:
		return _non_empty(values)

	@field_validator('d_nm')
	@classmethod
	def _distances(cls, values: List[float]) -> List[float]:
		if any(v < 0 for v in values):
			raise ValueError('distances must be non-negative')
		return values

	def scenario(self) -> SpinReadoutScenario:
		return SpinReadoutScenario(
			moment=DipoleMoment(magnitude=self.moment_muB, axis=self.moment_axis),
			distance_d=self.d_nm[0] * 1e-9,
			B_par=self.B_par_mT[0] * 1e-3,
			mat=MaterialParams(B_c=self.B_c_T),
			circuit=FluxoniumParams(
				E_J=self.E_J_GHz * 1e9,
				E_C=self.E_C_GHz * 1e9,
				E_L=self.E_L_GHz * 1e9,
				phi_ext_frac=self.phi_ext_frac,
			),
			junction=NanojunctionGeometry(edge=self.junction_edge_nm * 1e-9, grid_n=self.grid_n),
			lateral_offset=(self.lateral_offset_nm[0] * 1e-9, self.lateral_offset_nm[1] * 1e-9),
			basis_dim=self.basis_dim,
		)


class ArtifactConfig(RunConfig):
	g: float = Field(..., gt=0)
	coupling_MHz: float = Field(..., gt=0)

	def crossing(self) -> AvoidedCrossing:
		return AvoidedCrossing(g=self.g, coupling_Hz=self.coupling_MHz * 1e6)


class SynthesizeConfig(RunConfig):
	g: float = Field(defaults.DEFAULT_G, gt=0)
	T_S_mK: float = Field(defaults.DEFAULT_T_S_K * 1e3, gt=0)
	M_S: float = Field(1.0, gt=0)
	beta: float = Field(defaults.DEFAULT_BETA, ge=0)
	c2_Hz_per_T2: float = Field(defaults.DEFAULT_C2_HZ_PER_T2, lt=0)
	f_r0_GHz: float = Field(defaults.DEFAULT_F_R0_HZ / 1e9, gt=0)
	B_start_T: float = 0.0
	B_stop_T: float = 0.6
	B_points: int = Field(241, ge=2)
	noise_sigma_Hz: float = Field(0.0, ge=0)
	seed: int = 0
	artifacts: List[ArtifactConfig] = []

	@model_validator(mode='after')
	def _grid(self) -> 'SynthesizeConfig':
		if not self.B_stop_T > self.B_start_T:
			raise ValueError('B_stop_T must exceed B_start_T')
		return self

	def ensemble(self) -> EnsembleParams:
		return EnsembleParams(
			g=self.g,
			T_S=self.T_S_mK * 1e-3,
			M_S=self.M_S,
			beta=self.beta,
			c2=self.c2_Hz_per_T2,
			f_r0=self.f_r0_GHz * 1e9,
		)

	def B_grid(self) -> np.ndarray:
		return np.linspace(self.B_start_T, self.B_stop_T, self.B_points)


class ExtractConfig(RunConfig):
	input_csv: str
	f_r0_GHz: float = Field(defaults.DEFAULT_F_R0_HZ / 1e9, gt=0)
	tail_start_T: float = defaults.DEFAULT_TAIL_START_T
	tail_stop_T: Optional[float] = None
	exclusion_T: Optional[Tuple[float, float]] = defaults.DEFAULT_EXCLUSION_T
	g_fixed: float = Field(defaults.DEFAULT_G, gt=0)
	refine: bool = True


class TwoToneConfig(RunConfig):
	g: float = Field(defaults.DEFAULT_G_ESR, gt=0)
	T_S_mK: float = Field(defaults.DEFAULT_T_S_K * 1e3, gt=0)
	sigma_inh_MHz: float = Field(defaults.DEFAULT_SIGMA_INH_HZ / 1e6, gt=0)
	f_drive_res_GHz: float = Field(defaults.DEFAULT_F_DRIVE_RES_HZ / 1e9, gt=0)
	kappa_MHz: float = Field(defaults.DEFAULT_KAPPA_HZ / 1e6, gt=0)
	drive_strength: float = Field(defaults.DEFAULT_DRIVE_STRENGTH, ge=0)
	T1_s: float = Field(defaults.DEFAULT_T1_S, gt=0)
	f_start_GHz: float = 9.835
	f_stop_GHz: float = 9.845
	f_points: int = Field(101, ge=1)
	B_start_T: float = 0.3826
	B_stop_T: float = 0.3858
	B_points: int = Field(161, ge=1)

	def ensemble(self) -> EnsembleParams:
		return EnsembleParams(g=self.g, T_S=self.T_S_mK * 1e-3, sigma_inh=self.sigma_inh_MHz * 1e6)

	def rates(self) -> RateModelParams:
		return RateModelParams(
			f_drive_res=self.f_drive_res_GHz * 1e9,
			kappa=self.kappa_MHz * 1e6,
			drive_strength=self.drive_strength,
			T1=self.T1_s,
		)

	def f_grid(self) -> np.ndarray:
		return np.linspace(self.f_start_GHz * 1e9, self.f_stop_GHz * 1e9, self.f_points)

	def B_grid(self) -> np.ndarray:
		return np.linspace(self.B_start_T, self.B_stop_T, self.B_points)


class DecayConfig(RunConfig):
	tau_1e_s: float = Field(defaults.DEFAULT_T1_S, gt=0)
	stretch_beta: float = Field(0.7, gt=0, le=1)
	t_stop_s: float = Field(2.0, gt=0)
	t_points: int = Field(201, ge=defaults.MIN_DECAY_SAMPLES)
	noise_rel: float = Field(0.0, ge=0)
	seed: int = 0
	n_seeds: int = Field(1, ge=1)

	def rates(self) -> RateModelParams:
		return RateModelParams(T1=self.tau_1e_s, stretch_beta=self.stretch_beta)

	def t_grid(self) -> np.ndarray:
		return np.linspace(0.0, self.t_stop_s, self.t_points)


class ResonanceGuessConfig(RunConfig):
	f_r_GHz: float = Field(..., gt=0)
	Q_i: float = Field(..., gt=0)
	Q_c: float = Field(..., gt=0)
	phi0_rad: float = 0.0
	amp: float = Field(1.0, gt=0)
	alpha_rad: float = 0.0
	delay_ns: float = 0.0

	def model(self) -> ResonanceModel:
		return ResonanceModel(
			f_r=self.f_r_GHz * 1e9,
			Q_i=self.Q_i,
			Q_c=self.Q_c,
			phi0=self.phi0_rad,
			amp=self.amp,
			alpha=self.alpha_rad,
			delay=self.delay_ns * 1e-9,
		)


class FitresConfig(RunConfig):
	input_csv: str
	initial_guess: Optional[ResonanceGuessConfig] = None


class AlignConfig(RunConfig):
	f0_GHz: float = Field(defaults.DEFAULT_F_R0_HZ / 1e9, gt=0)
	c_par_Hz_per_T2: float = defaults.DEFAULT_C2_HZ_PER_T2
	c_perp_Hz_per_T2: float = Field(-1.0e9, lt=0)
	tilt_deg: float = 1.0
	B_par_T: List[float] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6]
	search_mT: Tuple[float, float] = (-20.0, 20.0)
	tol_uT: float = Field(1.0, gt=0)

	@field_validator('B_par_T')
	@classmethod
	def _axis(cls, values: List[float]) -> List[float]:
		return _non_empty(values)


class ExciteConfig(RunConfig):
	T1_s: float = Field(defaults.DEFAULT_T1_S, gt=0)
	drive_strengths: List[float] = [1.0, 3.0, 10.0, 30.0]
	t_stop_s: float = Field(2.0, gt=0)
	t_points: int = Field(201, ge=2)
	m_eq: float = Field(1.0, ge=0, le=1)

	@field_validator('drive_strengths')
	@classmethod
	def _axis(cls, values: List[float]) -> List[float]:
		if any(v < 0 for v in values):
			raise ValueError('drive strengths must be non-negative')
		return _non_empty(values)

	def rates(self) -> RateModelParams:
		return RateModelParams(T1=self.T1_s)

	def t_grid(self) -> np.ndarray:
		return np.linspace(0.0, self.t_stop_s, self.t_points)
