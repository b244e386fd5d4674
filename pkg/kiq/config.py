"""
kiq Configuration

Centralized defaults for the simulation and data-reduction layers.
Physical defaults follow the measured device (grAl readout resonator,
Nb drive resonator, {Cr7Ni} ensemble); circuit defaults for the single-spin
readout are plumbing values and are user-overridable through run configs.

Environment (a `.env` file in the working directory is honoured):
- KIQ_THREADS: worker count for parallel sweeps when --threads is absent
- KIQ_LOG_LEVEL: default log level for the CLI
"""

import logging
import math
import os
from pathlib import Path
from typing import Optional

from dotenv import load_dotenv

logger = logging.getLogger(__name__)

load_dotenv(dotenv_path=Path.cwd() / '.env')

# ── Fluxonium / nanojunction ────────────────────────────────────────────────
DEFAULT_E_J_HZ = 20.0e9
DEFAULT_E_C_HZ = 2.0e9
DEFAULT_E_L_HZ = 1.0e9
DEFAULT_PHI_EXT_FRAC = 0.5
DEFAULT_BASIS_DIM = 80
MIN_BASIS_DIM = 20
BASIS_STEP = 20  # convergence check compares basis_dim and basis_dim + BASIS_STEP
BASIS_TOLERANCE = 1e-9

DEFAULT_B_C_T = 1.5
DEFAULT_JUNCTION_EDGE_M = 20e-9
DEFAULT_GRID_N = 16
DEFAULT_MOMENT_MUB = 10.0

# Phase-grid oracle
ORACLE_POINTS = 8192
ORACLE_HALF_WIDTH = 12.0 * math.pi

# ── Spin ensemble / readout resonator ───────────────────────────────────────
DEFAULT_F_R0_HZ = 7.8e9
DEFAULT_G = 1.8
DEFAULT_G_ESR = 1.83
DEFAULT_T_S_K = 0.070
DEFAULT_BETA = 1.0e6 / DEFAULT_F_R0_HZ  # 1 MHz saturation red shift
DEFAULT_C2_HZ_PER_T2 = -5.0e6
DEFAULT_SIGMA_INH_HZ = 0.1e6  # << kappa: column maxima stay on the ESR line

DEFAULT_TAIL_START_T = 0.32
DEFAULT_EXCLUSION_T = (0.244, 0.302)
MIN_TAIL_POINTS = 5

# ── Drive resonator / dynamics ──────────────────────────────────────────────
DEFAULT_F_DRIVE_RES_HZ = 9.84e9
DEFAULT_KAPPA_HZ = 2.0e6
DEFAULT_DRIVE_STRENGTH = 10.0
DEFAULT_T1_S = 0.38
DEFAULT_STRETCH_BETA = 1.0
MIN_DECAY_SAMPLES = 8

# ── Fitting ─────────────────────────────────────────────────────────────────
FIT_XTOL = 1e-10
FIT_FTOL = 1e-10
FIT_MAX_ITERATIONS = 500
MULTI_START_COUNT = 7
T_S_START_RANGE_K = (5e-3, 2.0)


def fit_kws() -> dict:
	"""Keyword arguments handed to MINPACK through lmfit."""
	return {'xtol': FIT_XTOL, 'ftol': FIT_FTOL}


def max_nfev(n_params: int) -> int:
	"""Function-evaluation budget matching FIT_MAX_ITERATIONS Jacobian iterations."""
	return FIT_MAX_ITERATIONS * (n_params + 1)


def resolve_threads(threads: Optional[int] = None) -> int:
	"""Explicit value wins, then KIQ_THREADS, then a single worker."""
	if threads is not None:
		return max(1, int(threads))
	raw = os.getenv('KIQ_THREADS')
	if raw:
		try:
			return max(1, int(raw))
		except ValueError:
			logger.warning(f'Ignoring non-integer KIQ_THREADS={raw!r}')
	return 1


def default_log_level() -> str:
	return os.getenv('KIQ_LOG_LEVEL', 'INFO').upper()


__all__ = [
	'fit_kws',
	'max_nfev',
	'resolve_threads',
	'default_log_level',
]
