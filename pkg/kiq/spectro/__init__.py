from kiq.spectro.alignment import compensate_perp_field, compensation_map, golden_section_maximize, misaligned_resonator
from kiq.spectro.service import fit_resonance, read_complex_trace, s21_model, track_frequency, track_resonance
from kiq.spectro.views import AlignmentPoint, ComplexTrace, ResonanceFit, ResonanceModel, SearchResult, TrackingResult

__all__ = [
	'AlignmentPoint',
	'ComplexTrace',
	'ResonanceFit',
	'ResonanceModel',
	'SearchResult',
	'TrackingResult',
	'compensate_perp_field',
	'compensation_map',
	'fit_resonance',
	'golden_section_maximize',
	'misaligned_resonator',
	'read_complex_trace',
	's21_model',
	'track_frequency',
	'track_resonance',
]
