import itertools

import numpy as np
import pytest

from kiq.errors import DomainError
from kiq.fluxonium import (
	FluxoniumParams,
	NanojunctionGeometry,
	SpinReadoutScenario,
	fig4c_sweep,
	fluxonium_hamiltonian,
	nanojunction_ej,
	solve_fluxonium,
	solve_fluxonium_grid,
	spin_flip_shift,
	transition_frequency,
)
from kiq.physics import DipoleMoment

GRID_FACTORS = (10**-0.5, 1.0, 10**0.5)


def test_linear_limit_spacing_is_plasma_frequency():
	p = FluxoniumParams(E_J=0.0, E_C=2e9, E_L=1e9)
	spectrum = solve_fluxonium(p, basis_dim=40)
	spacing = np.diff(spectrum.eigenvalues[:6])
	np.testing.assert_allclose(spacing, np.sqrt(8 * 1e9 * 2e9), rtol=1e-10)
	assert p.plasma_frequency == pytest.approx(np.sqrt(8 * 1e9 * 2e9), rel=1e-15)


def test_hamiltonian_is_real_symmetric():
	h = fluxonium_hamiltonian(FluxoniumParams(phi_ext_frac=0.3), 60)
	assert np.isrealobj(h)
	np.testing.assert_allclose(h, h.T, atol=1e-6)


def test_default_circuit_converged_between_80_and_100():
	spectrum = solve_fluxonium(FluxoniumParams(), basis_dim=80)
	assert spectrum.converged
	assert spectrum.convergence_delta < 1e-9
	f_q, converged = transition_frequency(FluxoniumParams())
	assert converged
	assert f_q == spectrum.f_q


def test_default_circuit_matches_phase_grid():
	p = FluxoniumParams()
	basis = solve_fluxonium(p, basis_dim=80)
	grid = solve_fluxonium_grid(p)
	assert basis.f_q == pytest.approx(grid.f_q, rel=1e-6)


@pytest.mark.slow
@pytest.mark.parametrize('fj, fc, fl', list(itertools.product(GRID_FACTORS, repeat=3)))
def test_basis_solver_matches_phase_grid(fj, fc, fl):
	p = FluxoniumParams(E_J=20e9 * fj, E_C=2e9 * fc, E_L=1e9 * fl, phi_ext_frac=0.25)
	basis = solve_fluxonium(p, basis_dim=250, check_convergence=False)
	grid = solve_fluxonium_grid(p)
	assert basis.f_q == pytest.approx(grid.f_q, rel=1e-6)


def test_flux_periodicity():
	a = solve_fluxonium(FluxoniumParams(phi_ext_frac=0.2), check_convergence=False).f_q
	b = solve_fluxonium(FluxoniumParams(phi_ext_frac=-0.2), check_convergence=False).f_q
	assert a == pytest.approx(b, rel=1e-9)


def test_basis_too_small():
	with pytest.raises(DomainError):
		solve_fluxonium(FluxoniumParams(), basis_dim=10)


def test_phase_grid_rejects_coarse_grid():
	with pytest.raises(DomainError):
		solve_fluxonium_grid(FluxoniumParams(), n_points=1000)


def test_far_spin_leaves_ej_nominal(scenario):
	far = scenario.model_copy(update={'distance_d': 1e-3})
	assert nanojunction_ej(far, +1) == pytest.approx(scenario.circuit.E_J, rel=1e-12)
	assert nanojunction_ej(far, -1) == pytest.approx(scenario.circuit.E_J, rel=1e-12)


def test_spin_polarity_must_be_unit(scenario):
	with pytest.raises(DomainError):
		nanojunction_ej(scenario, 0)


def test_bias_above_critical_field(scenario):
	with pytest.raises(DomainError, match='critical field'):
		nanojunction_ej(scenario.model_copy(update={'B_par': 1.6}), +1)


def test_huge_moment_names_offending_node(scenario):
	close = scenario.model_copy(update={'moment': DipoleMoment(magnitude=1e9), 'distance_d': 0.0})
	with pytest.raises(DomainError, match='grid node'):
		nanojunction_ej(close, +1)


def test_spin_flip_shift_is_antisymmetric(scenario):
	flipped = scenario.model_copy(update={'moment': scenario.moment.flipped()})
	shift = spin_flip_shift(scenario)
	assert shift != 0.0
	assert spin_flip_shift(flipped) == -shift


def test_spin_flip_shift_kilohertz_order(strong_scenario):
	shift = spin_flip_shift(strong_scenario)
	assert 100.0 < abs(shift) < 100e3


def test_direct_and_perturbative_shifts_agree(strong_scenario):
	direct = spin_flip_shift(strong_scenario, method='direct')
	perturbative = spin_flip_shift(strong_scenario)
	assert direct == pytest.approx(perturbative, rel=1e-4)


def test_sweep_is_monotone():
	scenario = SpinReadoutScenario(junction=NanojunctionGeometry(grid_n=8))
	d_list = [d * 1e-9 for d in range(10, 101, 10)]
	B_list = [0.1, 0.2, 0.5]
	rows = fig4c_sweep(scenario, d_list, B_list)
	table = np.abs(np.array([row.delta_fq for row in rows]).reshape(len(d_list), len(B_list)))
	assert all(row.error is None for row in rows)
	assert np.all(np.diff(table, axis=0) < 0)
	assert np.all(np.diff(table, axis=1) > 0)


def test_sweep_order_independent_of_threads():
	scenario = SpinReadoutScenario(junction=NanojunctionGeometry(grid_n=4))
	d_list = [10e-9, 30e-9, 60e-9]
	B_list = [0.1, 0.5]
	serial = fig4c_sweep(scenario, d_list, B_list, threads=1)
	parallel = fig4c_sweep(scenario, d_list, B_list, threads=3)
	assert [(r.d, r.B_par) for r in serial] == [(d, B) for d in d_list for B in B_list]
	assert [r.delta_fq for r in serial] == [r.delta_fq for r in parallel]


def test_sweep_records_row_failures():
	scenario = SpinReadoutScenario(junction=NanojunctionGeometry(grid_n=4))
	rows = fig4c_sweep(scenario, [10e-9], [0.2, 2.0])
	assert rows[0].error is None
	assert np.isnan(rows[1].delta_fq)
	assert 'critical field' in rows[1].error


def test_sweep_empty_axis(scenario):
	with pytest.raises(DomainError, match='empty sweep axis'):
		fig4c_sweep(scenario, [], [0.2])


def test_small_basis_is_flagged_unconverged():
	spectrum = solve_fluxonium(FluxoniumParams(), basis_dim=20)
	assert not spectrum.converged
	assert spectrum.convergence_delta >= 1e-9


def test_midpoint_grid_refinement(scenario):
	fine = scenario.model_copy(update={'junction': scenario.junction.model_copy(update={'grid_n': 2 * scenario.junction.grid_n})})
	for polarity in (+1, -1):
		assert nanojunction_ej(fine, polarity) == pytest.approx(nanojunction_ej(scenario, polarity), rel=1e-6)
	assert spin_flip_shift(fine) == pytest.approx(spin_flip_shift(scenario), rel=1e-6)


def test_zero_bias_makes_ej_polarity_independent(scenario):
	unbiased = scenario.model_copy(update={'B_par': 0.0})
	assert nanojunction_ej(unbiased, +1) == pytest.approx(nanojunction_ej(unbiased, -1), rel=1e-12)


def test_distant_spin_has_no_measurable_shift(scenario):
	assert abs(spin_flip_shift(scenario.model_copy(update={'distance_d': 10e-6}))) < 1e-3


def test_shift_is_linear_in_moment(scenario):
	base = scenario.model_copy(update={'distance_d': 50e-9, 'B_par': 0.2})
	doubled = base.model_copy(update={'moment': base.moment.model_copy(update={'magnitude': 2.0 * base.moment.magnitude})})
	assert spin_flip_shift(doubled) / spin_flip_shift(base) == pytest.approx(2.0, rel=0.05)


def test_reversed_bias_with_swapped_polarity(scenario):
	reversed_bias = scenario.model_copy(update={'B_par': -scenario.B_par, 'moment': scenario.moment.flipped()})
	assert spin_flip_shift(reversed_bias) == pytest.approx(spin_flip_shift(scenario), rel=1e-10)


def test_ej_invariant_under_rigid_translation(scenario):
	moved = scenario.model_copy(update={'junction': scenario.junction.model_copy(update={'center': (1e-6, -2e-6, 3e-7)})})
	for polarity in (+1, -1):
		assert nanojunction_ej(moved, polarity) == pytest.approx(nanojunction_ej(scenario, polarity), rel=1e-12)
	assert spin_flip_shift(moved) == pytest.approx(spin_flip_shift(scenario), rel=1e-6)
