"""CODATA-2018 constants in SI units. Fixed at build time, never configurable."""

from dataclasses import dataclass

_H = 6.62607015e-34
_E = 1.602176634e-19


@dataclass(frozen=True)
class Constants:
	mu_B: float = 9.2740100783e-24  # J/T
	k_B: float = 1.380649e-23  # J/K
	h: float = _H  # J s
	mu_0: float = 1.25663706212e-6  # T m/A
	e: float = _E  # C
	Phi_0: float = _H / (2 * _E)  # Wb

	def __post_init__(self) -> None:
		for name, value in vars(self).items():
			if not value > 0:
				raise ValueError(f'constant {name} must be positive')

	@property
	def mu0_over_4pi(self) -> float:
		return self.mu_0 / (4.0 * 3.141592653589793)


CONSTANTS = Constants()
