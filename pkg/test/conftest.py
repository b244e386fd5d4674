from pathlib import Path

import numpy as np
import orjson
import pytest

from kiq.ensemble.views import EnsembleParams, RateModelParams
from kiq.fluxonium.views import FluxoniumParams, NanojunctionGeometry, SpinReadoutScenario
from kiq.spectro.views import ResonanceModel


@pytest.fixture
def ensemble() -> EnsembleParams:
	return EnsembleParams()


@pytest.fixture
def B_grid() -> np.ndarray:
	return np.linspace(0.0, 0.6, 241)


@pytest.fixture
def rates() -> RateModelParams:
	return RateModelParams()


@pytest.fixture
def scenario() -> SpinReadoutScenario:
	return SpinReadoutScenario()


@pytest.fixture
def strong_scenario() -> SpinReadoutScenario:
	"""Lighter circuit at high field, where a single spin flip shifts f_q by kHz."""
	return SpinReadoutScenario(
		circuit=FluxoniumParams(E_J=10e9, E_C=4e9, E_L=1e9),
		B_par=1.0,
		junction=NanojunctionGeometry(grid_n=8),
	)


@pytest.fixture
def resonance() -> ResonanceModel:
	return ResonanceModel(f_r=7.8e9, Q_i=1e5, Q_c=2.5e4, phi0=0.1, amp=0.8, alpha=0.5, delay=50e-9)


@pytest.fixture
def write_config(tmp_path: Path):
	"""Write a JSON config into tmp_path and return its path."""

	def _write(data: dict, name: str = 'config.json') -> Path:
		path = tmp_path / name
		path.write_bytes(orjson.dumps(data, option=orjson.OPT_INDENT_2))
		return path

	return _write
