"""
Phase-grid cross-check for the oscillator-basis solver.

Second-order central differences for n^2 = -d^2/dphi^2 on a uniform grid with
hard walls at phi_ext +- half_width. The two grids (n and 2n + 1 interior points)
halve the step exactly, so Richardson extrapolation removes the O(h^2) error.
"""

import logging

import numpy as np
from scipy.linalg import eigh_tridiagonal

from kiq.config import ORACLE_HALF_WIDTH, ORACLE_POINTS
from kiq.errors import DomainError
from kiq.fluxonium.views import FluxoniumParams, Spectrum

logger = logging.getLogger(__name__)


def _grid_levels(p: FluxoniumParams, n_points: int, half_width: float, n_levels: int) -> np.ndarray:
	step = 2.0 * half_width / (n_points + 1)
	theta = -half_width + step * np.arange(1, n_points + 1)
	diagonal = 8.0 * p.E_C / step**2 + 0.5 * p.E_L * theta**2 - p.E_J * np.cos(theta + p.phi_ext)
	off_diagonal = np.full(n_points - 1, -4.0 * p.E_C / step**2)
	return eigh_tridiagonal(diagonal, off_diagonal, eigvals_only=True, select='i', select_range=(0, n_levels - 1))


def solve_fluxonium_grid(
	p: FluxoniumParams,
	n_points: int = ORACLE_POINTS,
	half_width: float = ORACLE_HALF_WIDTH,
	n_levels: int = 2,
	richardson: bool = True,
) -> Spectrum:
	if n_points < 4096:
		raise DomainError(f'phase grid needs at least 4096 points, got {n_points}')
	if n_levels < 2:
		raise DomainError('need at least two levels')
	coarse = _grid_levels(p, n_points, half_width, n_levels)
	if not richardson:
		return Spectrum(eigenvalues=coarse, basis_dim=n_points)
	fine = _grid_levels(p, 2 * n_points + 1, half_width, n_levels)
	levels = (4.0 * fine - coarse) / 3.0
	logger.debug(f'Phase-grid oracle: Richardson correction on f_q {abs((levels[1] - levels[0]) - (fine[1] - fine[0])):.3e} Hz')
	return Spectrum(eigenvalues=levels, basis_dim=2 * n_points + 1)
