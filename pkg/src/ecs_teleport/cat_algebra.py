"""Coherent-state and even/odd cat-basis algebra.

The cat basis is

    |+> = (|a> + |-a>) / sqrt(2 (1 + x^2))
    |-> = (|a> - |-a>) / sqrt(2 (1 - x^2))

with overlap parameter ``x = exp(-|a|^2)`` so that ``<a|-a> = x^2``.
A superposed coherent state ``e+|a> + e-|-a>`` is then the qubit
``A+|+> + A-|->``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import DegenerateAlpha, DomainError, NormError

NORM_TOL = 1e-12


@dataclass(frozen=True)
class CoherentAlpha:
    """Complex coherent amplitude with ``|alpha|^2 > 0``."""

    alpha: complex

    def __post_init__(self):
        a = complex(self.alpha)
        if not (math.isfinite(a.real) and math.isfinite(a.imag)):
            raise DomainError(f"alpha must be finite, got {self.alpha!r}")
        if abs(a) == 0.0:
            raise DegenerateAlpha("alpha = 0: the odd cat state is undefined")
        object.__setattr__(self, "alpha", a)

    @classmethod
    def from_mean_photon_number(cls, alpha_sq: float) -> "CoherentAlpha":
        """Real, non-negative amplitude with the given ``|alpha|^2``."""
        if not math.isfinite(alpha_sq) or alpha_sq < 0:
            raise DomainError(f"|alpha|^2 must be finite and >= 0, got {alpha_sq}")
        return cls(complex(math.sqrt(alpha_sq)))

    @property
    def mean_photon_number(self) -> float:
        return abs(self.alpha) ** 2

    @property
    def x(self) -> float:
        return overlap_x(self)

    @property
    def one_minus_x2(self) -> float:
        """``1 - x^2`` without cancellation at small amplitude."""
        return -math.expm1(-2.0 * self.mean_photon_number)


def as_alpha(alpha) -> CoherentAlpha:
    if isinstance(alpha, CoherentAlpha):
        return alpha
    return CoherentAlpha(alpha)


def overlap_x(alpha) -> float:
    """Return ``x = exp(-|alpha|^2)``; ``<alpha|-alpha> = x**2``."""
    a = as_alpha(alpha)
    return math.exp(-a.mean_photon_number)


def _cat_norms(a: CoherentAlpha) -> tuple[float, float]:
    # p = (1 + x^2)^(-1/2), q = (1 - x^2)^(-1/2)
    x2 = a.x**2
    return 1.0 / math.sqrt(1.0 + x2), 1.0 / math.sqrt(a.one_minus_x2)


@dataclass(frozen=True)
class CatQubit:
    """Coordinates ``(A+, A-)`` on the even/odd cat basis."""

    a_plus: complex
    a_minus: complex
    normalized: bool = True

    def __post_init__(self):
        object.__setattr__(self, "a_plus", complex(self.a_plus))
        object.__setattr__(self, "a_minus", complex(self.a_minus))
        if self.normalized:
            self.check_norm()

    @property
    def norm_sq(self) -> float:
        return abs(self.a_plus) ** 2 + abs(self.a_minus) ** 2

    def check_norm(self, tol: float = NORM_TOL) -> None:
        if abs(self.norm_sq - 1.0) > tol:
            raise NormError(f"cat qubit norm^2 = {self.norm_sq!r}, expected 1")

    def as_tuple(self) -> tuple[complex, complex]:
        return self.a_plus, self.a_minus


@dataclass(frozen=True)
class ScsCoefficients:
    """Superposed coherent state ``eps_plus |alpha> + eps_minus |-alpha>``."""

    eps_plus: complex
    eps_minus: complex
    alpha: CoherentAlpha
    normalized: bool = True

    def __post_init__(self):
        object.__setattr__(self, "eps_plus", complex(self.eps_plus))
        object.__setattr__(self, "eps_minus", complex(self.eps_minus))
        object.__setattr__(self, "alpha", as_alpha(self.alpha))
        if self.normalized:
            self.check_norm()

    @property
    def norm_sq(self) -> float:
        """``|e+|^2 + |e-|^2 + 2 x^2 Re(conj(e+) e-)``."""
        ep, em = self.eps_plus, self.eps_minus
        x2 = self.alpha.x**2
        return abs(ep) ** 2 + abs(em) ** 2 + 2.0 * x2 * (ep.conjugate() * em).real

    def check_norm(self, tol: float = NORM_TOL) -> None:
        # the quadratic form cancels heavily as alpha -> 0; scale by the raw size
        scale = max(1.0, abs(self.eps_plus) ** 2 + abs(self.eps_minus) ** 2)
        if abs(self.norm_sq - 1.0) > tol * scale:
            raise NormError(f"SCS norm^2 = {self.norm_sq!r}, expected 1")


def angles_to_qubit(omega: float, xi: float) -> CatQubit:
    """``A+ = cos(omega/2)``, ``A- = sin(omega/2) e^{i xi}``."""
    if not 0.0 <= omega <= math.pi:
        raise DomainError(f"omega must lie in [0, pi], got {omega}")
    if not 0.0 <= xi < 2.0 * math.pi:
        raise DomainError(f"xi must lie in [0, 2pi), got {xi}")
    return CatQubit(math.cos(omega / 2), math.sin(omega / 2) * cmath.exp(1j * xi))


def epsilon_to_qubit(s: ScsCoefficients) -> CatQubit:
    """Convert coherent-superposition coefficients to cat-qubit coordinates."""
    if not s.normalized:
        s.check_norm()
    p, q = _cat_norms(s.alpha)
    a_plus = (s.eps_plus + s.eps_minus) / (p * math.sqrt(2.0))
    a_minus = (s.eps_plus - s.eps_minus) / (q * math.sqrt(2.0))
    return CatQubit(a_plus, a_minus)


def qubit_to_epsilon(q: CatQubit, alpha) -> ScsCoefficients:
    """Inverse of :func:`epsilon_to_qubit` at amplitude ``alpha``."""
    a = as_alpha(alpha)
    if not q.normalized:
        q.check_norm()
    p, qq = _cat_norms(a)
    ep = (q.a_plus * p + q.a_minus * qq) / math.sqrt(2.0)
    em = (q.a_plus * p - q.a_minus * qq) / math.sqrt(2.0)
    return ScsCoefficients(ep, em, a)
