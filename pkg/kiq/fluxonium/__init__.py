from kiq.fluxonium.oracle import solve_fluxonium_grid
from kiq.fluxonium.service import (
	fig4c_sweep,
	fluxonium_hamiltonian,
	nanojunction_ej,
	solve_fluxonium,
	spin_flip_shift,
	transition_frequency,
)
from kiq.fluxonium.views import Fig4Row, FluxoniumParams, NanojunctionGeometry, Spectrum, SpinReadoutScenario

__all__ = [
	'Fig4Row',
	'FluxoniumParams',
	'NanojunctionGeometry',
	'Spectrum',
	'SpinReadoutScenario',
	'fig4c_sweep',
	'fluxonium_hamiltonian',
	'nanojunction_ej',
	'solve_fluxonium',
	'solve_fluxonium_grid',
	'spin_flip_shift',
	'transition_frequency',
]
