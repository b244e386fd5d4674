"""
Fluxonium spectrum and the spin-dependent nanojunction Josephson energy.

The Hamiltonian H = 4E_C n^2 + E_L/2 (phi - phi_ext)^2 - E_J cos(phi) is written
in the eigenbasis of its quadratic part. With theta = phi - phi_ext = l (a + a^dag),
l = (8E_C/E_L)^(1/4) / sqrt(2), the displacement elements are exact:

	<m|exp(i l (a + a^dag))|n> = i^k l^k sqrt(n_<!/n_>!) exp(-l^2/2) L_{n_<}^{(k)}(l^2),  k = |m - n|

so cos(theta) and sin(theta) keep the even and odd k diagonals.
"""

import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import eigh, eigvalsh
from scipy.special import eval_genlaguerre, gammaln

from kiq.config import BASIS_STEP, BASIS_TOLERANCE, MIN_BASIS_DIM
from kiq.errors import DomainError, KiqError
from kiq.fluxonium.views import FluxoniumParams, Fig4Row, ShiftMethod, Spectrum, SpinReadoutScenario
from kiq.parallel import run_ordered
from kiq.physics.service import dipole_field_array

logger = logging.getLogger(__name__)


def _displacement_blocks(dim: int, l: float) -> Tuple[np.ndarray, np.ndarray]:
	"""Matrices of cos(theta) and sin(theta) in the oscillator basis."""
	idx = np.arange(dim)
	m, n = np.meshgrid(idx, idx, indexing='ij')
	k = np.abs(m - n)
	n_min = np.minimum(m, n)
	x = l * l
	log_pref = 0.5 * (gammaln(n_min + 1) - gammaln(n_min + k + 1)) + k * np.log(l) - 0.5 * x
	elements = np.exp(log_pref) * eval_genlaguerre(n_min, k, x)

	# i^k: real part for even k, imaginary part for odd k
	quarter = k % 4
	cos_sign = np.select([quarter == 0, quarter == 2], [1.0, -1.0], 0.0)
	sin_sign = np.select([quarter == 1, quarter == 3], [1.0, -1.0], 0.0)
	return elements * cos_sign, elements * sin_sign


def _hamiltonian_parts(p: FluxoniumParams, dim: int) -> Tuple[np.ndarray, np.ndarray]:
	"""H = H0 - E_J * V with V the matrix of cos(phi)."""
	l = (8.0 * p.E_C / p.E_L) ** 0.25 / np.sqrt(2.0)
	cos_theta, sin_theta = _displacement_blocks(dim, l)
	cos_phi = cos_theta * np.cos(p.phi_ext) - sin_theta * np.sin(p.phi_ext)
	h0 = np.diag(p.plasma_frequency * (np.arange(dim) + 0.5))
	return h0, cos_phi


def fluxonium_hamiltonian(p: FluxoniumParams, basis_dim: int) -> np.ndarray:
	h0, cos_phi = _hamiltonian_parts(p, basis_dim)
	return h0 - p.E_J * cos_phi


def _levels(p: FluxoniumParams, dim: int) -> np.ndarray:
	return eigvalsh(fluxonium_hamiltonian(p, dim))


def _check_basis(basis_dim: int) -> None:
	if basis_dim < MIN_BASIS_DIM:
		raise DomainError(f'basis_dim must be at least {MIN_BASIS_DIM}, got {basis_dim}')


def _relative_change(f_small: float, f_large: float) -> float:
	return abs(f_large - f_small) / abs(f_large) if f_large != 0 else abs(f_large - f_small)


def solve_fluxonium(p: FluxoniumParams, basis_dim: int = 80, check_convergence: bool = True) -> Spectrum:
	"""Diagonalize the circuit; the convergence flag compares f_q against basis_dim + 20."""
	_check_basis(basis_dim)
	levels = _levels(p, basis_dim)
	converged, delta = True, None
	if check_convergence:
		larger = _levels(p, basis_dim + BASIS_STEP)
		delta = _relative_change(levels[1] - levels[0], larger[1] - larger[0])
		converged = delta < BASIS_TOLERANCE
		if not converged:
			logger.warning(f'Fluxonium basis not converged at dim {basis_dim}: relative f_q change {delta:.3e}')
	return Spectrum(eigenvalues=levels, basis_dim=basis_dim, converged=converged, convergence_delta=delta)


def transition_frequency(p: FluxoniumParams, basis_dim: int = 80) -> Tuple[float, bool]:
	spectrum = solve_fluxonium(p, basis_dim)
	return spectrum.f_q, spectrum.converged


# ── Nanojunction ────────────────────────────────────────────────────────────


def _junction_nodes(scenario: SpinReadoutScenario) -> np.ndarray:
	"""Midpoint grid of the junction cube, shape (n, n, n, 3), absolute positions (m)."""
	junction = scenario.junction
	n = junction.grid_n
	offsets = (np.arange(n) + 0.5) / n * junction.edge - junction.edge / 2.0
	gx, gy, gz = np.meshgrid(offsets, offsets, offsets, indexing='ij')
	return np.stack([gx, gy, gz], axis=-1) + np.asarray(junction.center, dtype=float)


def nanojunction_ej(scenario: SpinReadoutScenario, spin_polarity: int) -> float:
	"""
	E_J with the spin in the given polarity.

	E_J = E_J_nom * <Delta(B_par x + B_spin(r))> / Delta(B_par), the average taken on the
	grid_n^3 midpoint grid of the cube.
	"""
	if spin_polarity not in (1, -1):
		raise DomainError(f'spin polarity must be +1 or -1, got {spin_polarity}')
	B_c = scenario.mat.B_c
	if abs(scenario.B_par) >= B_c:
		raise DomainError(f'field exceeds critical field: B_par = {scenario.B_par} T >= B_c = {B_c} T')

	nodes = _junction_nodes(scenario)
	moment = scenario.moment.model_copy(update={'polarity': spin_polarity * scenario.moment.polarity})
	b_spin = dipole_field_array(moment, nodes - scenario.spin_position())
	b_spin[..., 0] += scenario.B_par
	b_sq = np.sum(b_spin * b_spin, axis=-1)

	over = b_sq > B_c**2
	if np.any(over):
		node = np.unravel_index(int(np.argmax(over)), over.shape)
		position = nodes[node]
		raise DomainError(
			f'field exceeds critical field at grid node {tuple(int(i) for i in node)} '
			f'(position {position.tolist()} m, |B| = {float(np.sqrt(b_sq[node]))} T)'
		)

	local = np.sqrt(1.0 - b_sq / B_c**2)
	nominal = np.sqrt(1.0 - (scenario.B_par / B_c) ** 2)
	return scenario.circuit.E_J * float(np.mean(local)) / nominal


def _shift_hellmann_feynman(scenario: SpinReadoutScenario, e_up: float, e_down: float) -> float:
	"""
	Central difference through dE_k/dE_J = -<k|cos(phi)|k> at the mean E_J.

	Exact to third order in E_up - E_down, which stays well below 1e-6 relative
	for any field below B_c.
	"""
	circuit = scenario.circuit.model_copy(update={'E_J': 0.5 * (e_up + e_down)})
	h0, cos_phi = _hamiltonian_parts(circuit, scenario.basis_dim)
	_, vectors = eigh(h0 - circuit.E_J * cos_phi, subset_by_index=[0, 1])
	expect = np.einsum('ik,ij,jk->k', vectors, cos_phi, vectors)
	return -(e_up - e_down) * float(expect[1] - expect[0])


def spin_flip_shift(scenario: SpinReadoutScenario, method: ShiftMethod = 'hellmann-feynman') -> float:
	"""Qubit frequency shift f_q(E_J up) - f_q(E_J down), Hz."""
	e_up = nanojunction_ej(scenario, +1)
	e_down = nanojunction_ej(scenario, -1)
	if method == 'direct':
		f_up = solve_fluxonium(scenario.circuit.model_copy(update={'E_J': e_up}), scenario.basis_dim).f_q
		f_down = solve_fluxonium(scenario.circuit.model_copy(update={'E_J': e_down}), scenario.basis_dim).f_q
		return f_up - f_down
	return _shift_hellmann_feynman(scenario, e_up, e_down)


def fig4c_sweep(
	scenario: SpinReadoutScenario,
	d_list: Sequence[float],
	B_par_list: Sequence[float],
	threads: Optional[int] = None,
	method: ShiftMethod = 'hellmann-feynman',
) -> List[Fig4Row]:
	"""One row per (d, B_par), d-major order. Row failures are recorded, not raised."""
	if len(d_list) == 0 or len(B_par_list) == 0:
		raise DomainError('empty sweep axis')
	grid = [(float(d), float(B)) for d in d_list for B in B_par_list]
	logger.info(f'Spin-flip shift sweep over {len(d_list)} distances x {len(B_par_list)} fields')

	def evaluate(point: Tuple[float, float]) -> Fig4Row:
		d, B = point
		try:
			row_scenario = scenario.model_copy(update={'distance_d': d, 'B_par': B})
			return Fig4Row(d=d, B_par=B, delta_fq=spin_flip_shift(row_scenario, method))
		except KiqError as e:
			logger.warning(f'Row d={d} m, B_par={B} T failed: {e}')
			return Fig4Row(d=d, B_par=B, delta_fq=float('nan'), error=str(e))

	return run_ordered(evaluate, grid, threads)
