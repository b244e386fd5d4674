from kiq.physics.constants import CONSTANTS, Constants
from kiq.physics.service import (
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
from kiq.physics.views import DipoleMoment, InductanceResult, MaterialParams, Vec3Field

__all__ = [
	'CONSTANTS',
	'Constants',
	'DipoleMoment',
	'InductanceResult',
	'MaterialParams',
	'Vec3Field',
	'dipole_field',
	'dipole_field_array',
	'esr_field',
	'esr_frequency',
	'gap_suppression_array',
	'gap_suppression_ratio',
	'kinetic_inductance',
	'longitudinal_coupling',
	'paramagnetic_magnetization',
	'resonator_frequency_shift',
]
