from dataclasses import dataclass
from typing import Literal, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from kiq.config import DEFAULT_B_C_T


@dataclass(frozen=True)
class Vec3Field:
	"""Magnetic field vector (T) in the chip frame: x along the strip (B_par), z out of plane (B_perp)."""

	x: float = 0.0
	y: float = 0.0
	z: float = 0.0

	def __post_init__(self) -> None:
		if not all(np.isfinite((self.x, self.y, self.z))):
			raise ValueError('field components must be finite')

	@classmethod
	def from_array(cls, values) -> 'Vec3Field':
		x, y, z = (float(v) for v in np.asarray(values, dtype=float).reshape(3))
		return cls(x, y, z)

	def as_array(self) -> np.ndarray:
		return np.array([self.x, self.y, self.z])

	def magnitude(self) -> float:
		return float(np.linalg.norm(self.as_array()))

	def __add__(self, other: 'Vec3Field') -> 'Vec3Field':
		return Vec3Field(self.x + other.x, self.y + other.y, self.z + other.z)

	def __neg__(self) -> 'Vec3Field':
		return Vec3Field(-self.x, -self.y, -self.z)


class DipoleMoment(BaseModel):
	"""Point magnetic moment. `magnitude` is in Bohr magnetons."""

	model_config = ConfigDict(frozen=True)

	magnitude: float = Field(..., gt=0)
	axis: Tuple[float, float, float] = (1.0, 0.0, 0.0)
	polarity: Literal[1, -1] = 1

	@field_validator('axis')
	@classmethod
	def _unit_axis(cls, axis: Tuple[float, float, float]) -> Tuple[float, float, float]:
		if abs(float(np.linalg.norm(axis)) - 1.0) > 1e-12:
			raise ValueError('axis must have unit norm')
		return axis

	def flipped(self) -> 'DipoleMoment':
		return self.model_copy(update={'polarity': -self.polarity})


class MaterialParams(BaseModel):
	"""grAl film parameters. L_kin0 and I_star only enter the inductance law."""

	model_config = ConfigDict(frozen=True)

	B_c: float = Field(DEFAULT_B_C_T, gt=0, description='Critical field (T)')
	L_kin0: float = Field(1.0e-9, gt=0, description='Unperturbed kinetic inductance (H)')
	I_star: float = Field(1.0e-6, gt=0, description='Nonlinearity current scale (A)')
	alpha: float = Field(1.0, gt=0, le=1, description='Kinetic inductance fraction')


@dataclass(frozen=True)
class InductanceResult:
	value: float  # H
	perturbative: bool  # False when |I_p| > I_star
