import numpy as np
import pytest
from pydantic import ValidationError

from kiq.errors import DomainError
from kiq.physics import (
	CONSTANTS,
	DipoleMoment,
	MaterialParams,
	Vec3Field,
	dipole_field,
	dipole_field_array,
	esr_field,
	esr_frequency,
	gap_suppression_array,
	gap_suppression_ratio,
	kinetic_inductance,
	longitudinal_coupling,
	paramagnetic_magnetization,
	resonator_frequency_shift,
)


def test_dipole_field_on_axis():
	m = DipoleMoment(magnitude=10.0)
	d = 15e-9
	field = dipole_field(m, (d, 0.0, 0.0))
	expected = CONSTANTS.mu0_over_4pi * 2.0 * 10.0 * CONSTANTS.mu_B / d**3
	assert field.x == pytest.approx(expected, rel=1e-12)
	assert field.y == pytest.approx(0.0, abs=1e-30)
	assert field.z == pytest.approx(0.0, abs=1e-30)


def test_dipole_field_equatorial_and_polarity():
	m = DipoleMoment(magnitude=10.0)
	d = 15e-9
	below = dipole_field(m, (0.0, 0.0, -d))
	flipped = dipole_field(m.flipped(), (0.0, 0.0, -d))
	assert below.x == pytest.approx(-CONSTANTS.mu0_over_4pi * 10.0 * CONSTANTS.mu_B / d**3, rel=1e-12)
	assert flipped.x == -below.x


def test_dipole_field_array_matches_scalar():
	m = DipoleMoment(magnitude=3.0, axis=(0.0, 0.6, 0.8))
	r = np.array([[1e-8, 2e-8, -3e-8], [-4e-8, 1e-9, 5e-9]])
	arr = dipole_field_array(m, r)
	for row, vec in zip(r, arr):
		np.testing.assert_allclose(dipole_field(m, row).as_array(), vec, rtol=1e-14)


def test_dipole_singularity():
	with pytest.raises(DomainError, match='dipole singularity'):
		dipole_field(DipoleMoment(magnitude=1.0), (0.0, 0.0, 0.0))


def test_moment_axis_must_be_unit():
	with pytest.raises(ValidationError):
		DipoleMoment(magnitude=1.0, axis=(1.0, 1.0, 0.0))


def test_vec3_field_algebra():
	a = Vec3Field(3.0, 0.0, 0.0)
	b = Vec3Field(0.0, 4.0, 0.0)
	assert (a + b).magnitude() == pytest.approx(5.0)
	assert (-a).x == -3.0
	with pytest.raises(ValueError):
		Vec3Field(float('nan'), 0.0, 0.0)


def test_gap_suppression_limits():
	assert gap_suppression_ratio(Vec3Field(), 1.5) == 1.0
	assert gap_suppression_ratio(Vec3Field(1.5, 0.0, 0.0), 1.5) == 0.0
	assert gap_suppression_ratio(Vec3Field(0.9, 0.0, 0.0), 1.5) == pytest.approx(0.8, rel=1e-12)


def test_gap_suppression_above_critical_field():
	with pytest.raises(DomainError, match='field exceeds critical field'):
		gap_suppression_ratio(Vec3Field(1.6, 0.0, 0.0), 1.5)
	with pytest.raises(DomainError):
		gap_suppression_array(np.array([0.1, 4.0]), 1.5)


def test_kinetic_inductance_regimes():
	mat = MaterialParams()
	assert kinetic_inductance(0.0, mat).value == mat.L_kin0
	assert kinetic_inductance(0.0, mat).perturbative
	strong = kinetic_inductance(2.0 * mat.I_star, mat)
	assert strong.value == pytest.approx(5.0 * mat.L_kin0)
	assert not strong.perturbative


def test_resonator_shift_is_quadratic_red_shift():
	mat = MaterialParams(alpha=0.5)
	f_r0 = 7.8e9
	I_p = 0.01 * mat.I_star
	assert resonator_frequency_shift(I_p, mat, f_r0) == pytest.approx(-0.25 * 1e-4 * f_r0, rel=1e-3)
	assert resonator_frequency_shift(-I_p, mat, f_r0) == resonator_frequency_shift(I_p, mat, f_r0)


def test_paramagnetic_saturation_value():
	assert paramagnetic_magnetization(0.32, 1.8, 0.070) == pytest.approx(0.992, abs=1e-3)


def test_paramagnetic_is_odd_and_bounded():
	B = np.linspace(-1.0, 1.0, 41)
	m = paramagnetic_magnetization(B, 1.8, 0.07, M_S=2.0)
	np.testing.assert_allclose(m, -m[::-1], atol=1e-15)
	assert np.all(np.abs(m) <= 2.0)


def test_paramagnetic_rejects_non_positive_temperature():
	with pytest.raises(DomainError):
		paramagnetic_magnetization(0.1, 1.8, 0.0)


@pytest.mark.parametrize(
	'f, g, expected',
	[
		(7.8e9, 2.0, 0.279),
		(9.84e9, 1.83, 0.384),
	],
)
def test_esr_field_values(f, g, expected):
	assert esr_field(f, g) == pytest.approx(expected, abs=1e-3)


def test_esr_frequency_inverts_esr_field():
	B = esr_field(9.84e9, 1.83)
	assert esr_frequency(B, 1.83) == pytest.approx(9.84e9, rel=1e-12)


def test_esr_domain_errors():
	with pytest.raises(DomainError):
		esr_field(9.84e9, 0.0)
	with pytest.raises(DomainError):
		esr_field(-1.0, 2.0)
	with pytest.raises(DomainError):
		esr_frequency(0.3, -1.0)


def test_longitudinal_coupling_is_half_the_shift():
	assert longitudinal_coupling(2.0e6) == 1.0e6
