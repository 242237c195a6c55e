"""Entangled coherent channel ``N (cos(t/2)|a,a> + sin(t/2) e^{i phi}|-a,-a>)``."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .cat_algebra import CoherentAlpha, as_alpha
from .errors import DomainError, NormError

TWO_PI = 2.0 * math.pi


def check_channel_angles(theta: float, phi: float) -> None:
    if not (math.isfinite(theta) and 0.0 <= theta <= math.pi):
        raise DomainError(f"theta must lie in [0, pi], got {theta}")
    # 2pi is accepted so that sweeps can include the closing edge of the plot
    if not (math.isfinite(phi) and 0.0 <= phi <= TWO_PI):
        raise DomainError(f"phi must lie in [0, 2pi], got {phi}")


@dataclass(frozen=True)
class EcsParams:
    alpha: CoherentAlpha
    theta: float
    phi: float

    def __post_init__(self):
        object.__setattr__(self, "alpha", as_alpha(self.alpha))
        object.__setattr__(self, "theta", float(self.theta))
        object.__setattr__(self, "phi", float(self.phi))
        check_channel_angles(self.theta, self.phi)

    @classmethod
    def from_mean_photon_number(cls, alpha_sq: float, theta: float, phi: float) -> "EcsParams":
        return cls(CoherentAlpha.from_mean_photon_number(alpha_sq), theta, phi)

    @property
    def x(self) -> float:
        return self.alpha.x

    @property
    def weights(self) -> tuple[float, complex]:
        """Coefficients of ``|a,a>`` and ``|-a,-a>`` before normalization."""
        return math.cos(self.theta / 2), math.sin(self.theta / 2) * cmath.exp(1j * self.phi)


@dataclass(frozen=True)
class EcsQubitAmplitudes:
    """Two-mode channel state on the cat basis ``|++>, |+->, |-+>, |-->``."""

    a_pp: complex
    a_pm: complex
    a_mp: complex
    a_mm: complex

    def as_array(self) -> np.ndarray:
        return np.array([self.a_pp, self.a_pm, self.a_mp, self.a_mm], dtype=complex)

    @property
    def norm_sq(self) -> float:
        return float(np.sum(np.abs(self.as_array()) ** 2))


def c_coefficients(theta: float, phi: float) -> tuple[complex, complex]:
    """``C+- = cos(theta/2) +- sin(theta/2) e^{i phi}``."""
    c = math.cos(theta / 2)
    s = math.sin(theta / 2) * cmath.exp(1j * phi)
    return c + s, c - s


def norm_constant(p: EcsParams) -> float:
    # |a,a> and |-a,-a> overlap as x^4, so only the cross term Re(e^{i phi}) survives
    x4 = p.x**4
    return 1.0 / math.sqrt(1.0 + x4 * math.sin(p.theta) * math.cos(p.phi))


def qubit_amplitudes(p: EcsParams) -> EcsQubitAmplitudes:
    """Expand the channel on the product cat basis."""
    n = norm_constant(p)
    x2 = p.x**2
    c_plus, c_minus = c_coefficients(p.theta, p.phi)
    one_minus_x2 = p.alpha.one_minus_x2
    cross = 0.5 * n * c_minus * math.sqrt(one_minus_x2 * (1.0 + x2))
    return EcsQubitAmplitudes(
        a_pp=0.5 * n * c_plus * (1.0 + x2),
        a_pm=cross,
        a_mp=cross,
        a_mm=0.5 * n * c_plus * one_minus_x2,
    )


def concurrence_closed(p: EcsParams) -> float:
    """Closed-form concurrence ``(1 - x^4) sin(theta) / (1 + x^4 sin(theta) cos(phi))``."""
    x4 = p.x**4
    one_minus_x4 = -math.expm1(-4.0 * p.alpha.mean_photon_number)
    st = math.sin(p.theta)
    return one_minus_x4 * st / (1.0 + x4 * st * math.cos(p.phi))


def concurrence_numeric(a: EcsQubitAmplitudes, tol: float = 1e-9) -> float:
    """Pure-state concurrence ``|<psi| sigma_y x sigma_y |psi*>|``."""
    if abs(a.norm_sq - 1.0) > tol:
        raise NormError(f"two-qubit state norm^2 = {a.norm_sq!r}, expected 1")
    psi = a.as_array()
    sy = np.array([[0.0, -1j], [1j, 0.0]])
    flipped = np.kron(sy, sy) @ psi.conj()
    return float(abs(np.vdot(psi, flipped)))
