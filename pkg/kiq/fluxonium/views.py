from dataclasses import dataclass
from typing import Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from kiq.config import (
	DEFAULT_BASIS_DIM,
	DEFAULT_E_C_HZ,
	DEFAULT_E_J_HZ,
	DEFAULT_E_L_HZ,
	DEFAULT_GRID_N,
	DEFAULT_JUNCTION_EDGE_M,
	DEFAULT_MOMENT_MUB,
	DEFAULT_PHI_EXT_FRAC,
	MIN_BASIS_DIM,
)
from kiq.physics.views import DipoleMoment, MaterialParams


class FluxoniumParams(BaseModel):
	"""Circuit energies in Hz (E/h). E_J = 0 is accepted and gives the bare oscillator."""

	model_config = ConfigDict(frozen=True)

	E_J: float = Field(DEFAULT_E_J_HZ, ge=0)
	E_C: float = Field(DEFAULT_E_C_HZ, gt=0)
	E_L: float = Field(DEFAULT_E_L_HZ, gt=0)
	phi_ext_frac: float = Field(DEFAULT_PHI_EXT_FRAC, allow_inf_nan=False)

	@property
	def phi_ext(self) -> float:
		return 2.0 * np.pi * self.phi_ext_frac

	@property
	def plasma_frequency(self) -> float:
		"""sqrt(8 E_C E_L): level spacing of the quadratic part."""
		return float(np.sqrt(8.0 * self.E_C * self.E_L))


class NanojunctionGeometry(BaseModel):
	model_config = ConfigDict(frozen=True)

	edge: float = Field(DEFAULT_JUNCTION_EDGE_M, gt=0, description='Cube edge (m)')
	center: Tuple[float, float, float] = (0.0, 0.0, 0.0)
	grid_n: int = Field(DEFAULT_GRID_N, ge=2)


class SpinReadoutScenario(BaseModel):
	"""
	A single spin above a grAl nanojunction that closes a fluxonium loop.

	The spin sits at height `distance_d` above the top face of the junction cube,
	shifted laterally by `lateral_offset` (x, y) from the face center. B_par points
	along x, the strip direction.
	"""

	model_config = ConfigDict(frozen=True)

	moment: DipoleMoment = DipoleMoment(magnitude=DEFAULT_MOMENT_MUB)
	distance_d: float = Field(10e-9, ge=0, description='Spin height above the junction top face (m)')
	B_par: float = Field(0.2, description='In-plane bias field (T)')
	mat: MaterialParams = MaterialParams()
	circuit: FluxoniumParams = FluxoniumParams()
	junction: NanojunctionGeometry = NanojunctionGeometry()
	lateral_offset: Tuple[float, float] = (0.0, 0.0)
	basis_dim: int = Field(DEFAULT_BASIS_DIM, ge=MIN_BASIS_DIM)

	def spin_position(self) -> np.ndarray:
		cx, cy, cz = self.junction.center
		return np.array(
			[
				cx + self.lateral_offset[0],
				cy + self.lateral_offset[1],
				cz + self.junction.edge / 2.0 + self.distance_d,
			]
		)


@dataclass(frozen=True)
class Spectrum:
	eigenvalues: np.ndarray  # ascending, Hz
	basis_dim: int
	converged: bool = True
	convergence_delta: Optional[float] = None

	def __post_init__(self) -> None:
		if len(self.eigenvalues) < 2:
			raise ValueError('spectrum needs at least two levels')

	@property
	def f_q(self) -> float:
		return float(self.eigenvalues[1] - self.eigenvalues[0])


ShiftMethod = Literal['hellmann-feynman', 'direct']


@dataclass(frozen=True)
class Fig4Row:
	d: float  # m
	B_par: float  # T
	delta_fq: float  # Hz, NaN when the row failed
	error: Optional[str] = None
