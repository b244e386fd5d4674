"""
Perpendicular-field compensation for a tilted chip.

The resonator frequency is maximal when the net out-of-plane field vanishes;
a golden-section search over the applied B_perp finds that point for each B_par.
"""

import logging
import math
from typing import Callable, List, Sequence, Tuple

import numpy as np

from kiq.errors import AlignmentError, DomainError
from kiq.spectro.views import AlignmentPoint, SearchResult

logger = logging.getLogger(__name__)

INV_PHI = (math.sqrt(5) - 1) / 2  # 1 / phi
INV_PHI_SQUARE = (3 - math.sqrt(5)) / 2  # 1 / phi^2


def golden_section_maximize(f: Callable[[float], float], lo: float, hi: float, tol: float) -> SearchResult:
	"""
	Golden-section search for the maximum of a unimodal f on [lo, hi].

	Returns the midpoint of the final bracket (width <= tol). Raises AlignmentError
	when that point lies within tol of either end, i.e. no interior maximum.
	"""
	if not tol > 0:
		raise DomainError('tol must be positive')
	a, b = min(lo, hi), max(lo, hi)
	start_a, start_b = a, b
	h = b - a
	if h <= tol:
		raise AlignmentError('search range narrower than tolerance')

	n = int(math.ceil(math.log(tol / h) / math.log(INV_PHI)))

	c = a + INV_PHI_SQUARE * h
	d = a + INV_PHI * h
	yc = f(c)
	yd = f(d)
	evaluations = 2

	for _ in range(n - 1):
		if yc > yd:
			b = d
			d = c
			yd = yc
			h = INV_PHI * h
			c = a + INV_PHI_SQUARE * h
			yc = f(c)
		else:
			a = c
			c = d
			yc = yd
			h = INV_PHI * h
			d = a + INV_PHI * h
			yd = f(d)
		evaluations += 1

	lo_end, hi_end = (a, d) if yc > yd else (c, b)
	x = 0.5 * (lo_end + hi_end)
	if x - start_a < tol or start_b - x < tol:
		raise AlignmentError(f'no interior maximum in [{start_a}, {start_b}] (search ended at {x})')
	value = f(x)
	evaluations += 1
	logger.debug(f'Golden-section maximum at {x} after {n} iterations')
	return SearchResult(x=x, value=float(value), iterations=n, evaluations=evaluations)


def compensate_perp_field(f_of_Bperp: Callable[[float], float], search_range: Tuple[float, float], tol: float) -> float:
	"""Applied B_perp (T) that maximizes the resonator frequency."""
	return golden_section_maximize(f_of_Bperp, search_range[0], search_range[1], tol).x


def misaligned_resonator(
	f0: float,
	c_par: float,
	c_perp: float,
	tilt_rad: float,
	B_par: float,
) -> Callable[[float], float]:
	"""
	f(B_perp) for a chip whose plane is tilted by tilt_rad against the applied in-plane field.

	The chip sees B_n = B_perp cos(tilt) + B_par sin(tilt) out of plane, so the
	maximum sits at B_perp = -B_par tan(tilt). c_perp must be negative.
	"""
	if not c_perp < 0:
		raise DomainError('c_perp must be negative for a frequency maximum')
	sin_t, cos_t = math.sin(tilt_rad), math.cos(tilt_rad)

	def frequency(B_perp: float) -> float:
		B_n = B_perp * cos_t + B_par * sin_t
		return f0 + c_par * B_par**2 + c_perp * B_n**2

	return frequency


def compensation_map(
	f_of: Callable[[float, float], float],
	B_par_list: Sequence[float],
	search_range: Tuple[float, float],
	tol: float,
) -> List[AlignmentPoint]:
	if len(B_par_list) == 0:
		raise DomainError('empty sweep axis')
	points = []
	for B_par in np.asarray(B_par_list, dtype=float).tolist():
		result = golden_section_maximize(lambda B_perp: f_of(B_par, B_perp), search_range[0], search_range[1], tol)
		points.append(AlignmentPoint(B_par=B_par, B_perp_comp=result.x, f_max=result.value, iterations=result.iterations))
	logger.info(f'Compensation map over {len(points)} in-plane fields')
	return points
