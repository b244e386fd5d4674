"""
Closed-form material laws and magnetostatics.

All functions are pure; the *_array variants evaluate the same laws on
arrays of shape (..., 3) and are what the quadrature code uses.
"""

import logging
from typing import Union

import numpy as np

from kiq.errors import DomainError
from kiq.physics.constants import CONSTANTS
from kiq.physics.views import DipoleMoment, InductanceResult, MaterialParams, Vec3Field

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]


def moment_vector(m: DipoleMoment) -> np.ndarray:
	"""Moment in A m^2, sign carried by polarity."""
	return m.polarity * m.magnitude * CONSTANTS.mu_B * np.asarray(m.axis, dtype=float)


def dipole_field_array(m: DipoleMoment, r: np.ndarray) -> np.ndarray:
	r = np.asarray(r, dtype=float)
	norm = np.linalg.norm(r, axis=-1, keepdims=True)
	if np.any(norm == 0.0):
		raise DomainError('dipole singularity: zero displacement')
	m_vec = moment_vector(m)
	r_hat = r / norm
	m_dot_r = np.sum(r_hat * m_vec, axis=-1, keepdims=True)
	return CONSTANTS.mu0_over_4pi * (3.0 * m_dot_r * r_hat - m_vec) / norm**3


def dipole_field(m: DipoleMoment, r) -> Vec3Field:
	"""Field of a point dipole at displacement r (m) from the moment."""
	return Vec3Field.from_array(dipole_field_array(m, np.asarray(r, dtype=float).reshape(1, 3))[0])


def gap_suppression_array(b_sq: np.ndarray, B_c: float) -> np.ndarray:
	"""Delta(B)/Delta(0) from squared field magnitudes."""
	ratio_sq = np.asarray(b_sq, dtype=float) / B_c**2
	if np.any(ratio_sq > 1.0):
		raise DomainError('field exceeds critical field')
	return np.sqrt(1.0 - ratio_sq)


def gap_suppression_ratio(B_total: Vec3Field, B_c: float) -> float:
	B = B_total.magnitude()
	if B > B_c:
		raise DomainError(f'field exceeds critical field: |B| = {B} T > B_c = {B_c} T')
	return float(np.sqrt(1.0 - (B / B_c) ** 2))


def kinetic_inductance(I_p: float, mat: MaterialParams) -> InductanceResult:
	perturbative = abs(I_p) <= mat.I_star
	if not perturbative:
		logger.warning(f'Persistent current {I_p} A beyond perturbative regime (I* = {mat.I_star} A)')
	return InductanceResult(value=mat.L_kin0 * (1.0 + (I_p / mat.I_star) ** 2), perturbative=perturbative)


def resonator_frequency_shift(I_p: float, mat: MaterialParams, f_r0: float) -> float:
	"""Frequency shift (Hz) of a resonator whose inductance is a fraction alpha kinetic."""
	if f_r0 <= 0:
		raise DomainError('f_r0 must be positive')
	return f_r0 * ((1.0 + mat.alpha * (I_p / mat.I_star) ** 2) ** -0.5 - 1.0)


def paramagnetic_magnetization(B_par: ArrayLike, g: float, T_S: float, M_S: float = 1.0) -> ArrayLike:
	"""M = M_S tanh(g mu_B B / 2 k_B T_S) for a spin-1/2 paramagnet."""
	if not T_S > 0:
		raise DomainError(f'spin temperature must be positive, got {T_S}')
	if not M_S > 0:
		raise DomainError(f'saturation magnetization must be positive, got {M_S}')
	x = g * CONSTANTS.mu_B * np.asarray(B_par, dtype=float) / (2.0 * CONSTANTS.k_B * T_S)
	result = M_S * np.tanh(x)
	return float(result) if np.ndim(result) == 0 else result


def _check_g(g: float) -> None:
	if not g > 0:
		raise DomainError(f'g factor must be positive, got {g}')


def esr_field(f: ArrayLike, g: float) -> ArrayLike:
	"""Resonance field hf / (g mu_B)."""
	_check_g(g)
	f_arr = np.asarray(f, dtype=float)
	if np.any(f_arr <= 0):
		raise DomainError('ESR frequency must be positive')
	result = CONSTANTS.h * f_arr / (g * CONSTANTS.mu_B)
	return float(result) if np.ndim(result) == 0 else result


def esr_frequency(B: ArrayLike, g: float) -> ArrayLike:
	_check_g(g)
	result = g * CONSTANTS.mu_B * np.asarray(B, dtype=float) / CONSTANTS.h
	return float(result) if np.ndim(result) == 0 else result


def longitudinal_coupling(delta_omega: float) -> float:
	return delta_omega / 2.0
