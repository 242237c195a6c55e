"""Brute-force teleportation in a truncated photon-number basis.

Everything here is computed from Fock amplitudes alone: coherent states are
expanded term by term, the beam splitter is the exponential of its
two-mode generator on each fixed-photon-number block, and photon counting
zeroes the non-matching slices of the state tensor. None of the closed-form
branch algebra from :mod:`ecs_teleport.protocol` is used, which makes this
module an independent check on it.
"""

from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np
from scipy.stats import poisson

from .cat_algebra import CatQubit, ScsCoefficients, as_alpha
from .ecs import EcsParams, norm_constant
from .errors import CutoffTooSmall, DomainError, ModeIndexError

TAIL_TOL = 1e-12
MAX_CUTOFF = 200


def poisson_tail(mean: float, cutoff: int) -> float:
    """Probability of more than ``cutoff`` photons in a coherent state."""
    return float(poisson.sf(cutoff, mean))


def cutoff_for(amplitude_sq: float, tol: float = TAIL_TOL) -> int:
    """Smallest cutoff whose Poisson tail at mean ``amplitude_sq`` is below ``tol``."""
    n = 1
    while poisson_tail(amplitude_sq, n) >= tol:
        n += 1
        if n > MAX_CUTOFF:
            raise CutoffTooSmall(f"no cutoff <= {MAX_CUTOFF} reaches tail {tol} at mean {amplitude_sq}")
    return n


def network_cutoff(alpha, tol: float = TAIL_TOL) -> int:
    """Cutoff for the teleportation network, set by the ``sqrt(2) alpha`` output mode."""
    return cutoff_for(2.0 * as_alpha(alpha).mean_photon_number, tol)


@dataclass(frozen=True)
class FockVector:
    cutoff: int
    amps: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amps, dtype=complex)
        if self.cutoff < 1 or amps.shape != (self.cutoff + 1,):
            raise DomainError(f"expected {self.cutoff + 1} amplitudes, got shape {amps.shape}")
        object.__setattr__(self, "amps", amps)

    @property
    def norm_sq(self) -> float:
        return float(np.vdot(self.amps, self.amps).real)

    def inner(self, other: "FockVector") -> complex:
        """``<self|other>``."""
        return complex(np.vdot(self.amps, other.amps))

    def __add__(self, other: "FockVector") -> "FockVector":
        return FockVector(self.cutoff, self.amps + other.amps)

    def __sub__(self, other: "FockVector") -> "FockVector":
        return FockVector(self.cutoff, self.amps - other.amps)

    def __mul__(self, c: complex) -> "FockVector":
        return FockVector(self.cutoff, c * self.amps)

    __rmul__ = __mul__


def coherent_fock(alpha: complex, cutoff: int, tol: float = TAIL_TOL) -> FockVector:
    """Truncated expansion ``exp(-|a|^2/2) a^n / sqrt(n!)``."""
    alpha = complex(alpha)
    mean = abs(alpha) ** 2
    if cutoff < 1:
        raise CutoffTooSmall(f"cutoff must be >= 1, got {cutoff}")
    if mean > 0 and poisson_tail(mean, cutoff) >= tol:
        raise CutoffTooSmall(
            f"cutoff {cutoff} drops {poisson_tail(mean, cutoff):.3g} of |alpha|^2 = {mean:g}"
        )
    amps = np.empty(cutoff + 1, dtype=complex)
    amps[0] = math.exp(-mean / 2)
    for n in range(1, cutoff + 1):
        amps[n] = amps[n - 1] * alpha / math.sqrt(n)
    return FockVector(cutoff, amps)


def cat_fock(alpha, cutoff: int) -> tuple[FockVector, FockVector]:
    """Normalized even and odd cat vectors ``|+>``, ``|->`` at amplitude ``alpha``."""
    a = as_alpha(alpha)
    coh = coherent_fock(a.alpha, cutoff).amps
    n = np.arange(cutoff + 1)
    even = np.where(n % 2 == 0, coh, 0.0)
    odd = np.where(n % 2 == 1, coh, 0.0)
    # (|a> +- |-a>) doubles the matching parity slice
    plus = 2.0 * even / math.sqrt(2.0 * (1.0 + a.x**2))
    minus = 2.0 * odd / math.sqrt(2.0 * a.one_minus_x2)
    return FockVector(cutoff, plus), FockVector(cutoff, minus)


def scs_fock(s: ScsCoefficients, cutoff: int) -> FockVector:
    a = s.alpha.alpha
    return s.eps_plus * coherent_fock(a, cutoff) + s.eps_minus * coherent_fock(-a, cutoff)


def ecs_fock(p: EcsParams, cutoff: int, cutoff2: int | None = None) -> np.ndarray:
    """Two-mode channel tensor indexed ``[n1, n2]``; mode 2 may use its own cutoff."""
    a = p.alpha.alpha
    cutoff2 = cutoff if cutoff2 is None else cutoff2
    w_same, w_flip = p.weights
    n = norm_constant(p)
    return n * (
        w_same * np.outer(coherent_fock(a, cutoff).amps, coherent_fock(a, cutoff2).amps)
        + w_flip * np.outer(coherent_fock(-a, cutoff).amps, coherent_fock(-a, cutoff2).amps)
    )


@dataclass(frozen=True)
class ModeRegister:
    """State tensor over 1-3 labelled modes; axis ``k`` is truncated at ``shape[k] - 1``."""

    modes: tuple[str, ...]
    amps: np.ndarray

    def __post_init__(self):
        modes = tuple(str(m) for m in self.modes)
        amps = np.asarray(self.amps, dtype=complex)
        if not 1 <= len(modes) <= 3 or len(set(modes)) != len(modes):
            raise DomainError(f"need 1-3 distinct mode labels, got {modes}")
        if amps.ndim != len(modes) or min(amps.shape) < 2:
            raise DomainError(f"amplitude tensor shape {amps.shape} does not fit modes {modes}")
        object.__setattr__(self, "modes", modes)
        object.__setattr__(self, "amps", amps)

    @property
    def cutoffs(self) -> tuple[int, ...]:
        return tuple(d - 1 for d in self.amps.shape)

    @property
    def cutoff(self) -> int:
        if len(set(self.cutoffs)) != 1:
            raise DomainError(f"modes have different cutoffs {self.cutoffs}")
        return self.cutoffs[0]

    def cutoff_of(self, label) -> int:
        return self.cutoffs[self.axis(label)]

    @property
    def norm_sq(self) -> float:
        return float(np.vdot(self.amps, self.amps).real)

    def axis(self, label) -> int:
        try:
            return self.modes.index(str(label))
        except ValueError:
            raise ModeIndexError(f"mode {label!r} not in {self.modes}") from None

    def relabel(self, mapping: dict) -> "ModeRegister":
        mapping = {str(k): str(v) for k, v in mapping.items()}
        return ModeRegister(tuple(mapping.get(m, m) for m in self.modes), self.amps)


def product_register(modes: Sequence[str], vectors: Sequence[np.ndarray]) -> ModeRegister:
    amps = np.asarray(vectors[0])
    for v in vectors[1:]:
        amps = np.multiply.outer(amps, v)
    return ModeRegister(tuple(modes), amps)


def apply_phase_flip(r: ModeRegister, i) -> ModeRegister:
    """Multiply by ``(-1)^n`` on mode ``i``, mapping ``|a>`` to ``|-a>``."""
    ax = r.axis(i)
    shape = [1] * r.amps.ndim
    shape[ax] = r.amps.shape[ax]
    sign = np.where(np.arange(r.amps.shape[ax]) % 2 == 0, 1.0, -1.0)
    return ModeRegister(r.modes, r.amps * sign.reshape(shape))


@functools.lru_cache(maxsize=512)
def beam_splitter_block(total: int) -> np.ndarray:
    """Splitter restricted to ``total`` photons, on basis ``|k, total - k>``.

    A phase flip on the second mode followed by
    ``exp(-pi/4 (a_i^+ a_j - a_j^+ a_i))``; together they send
    ``|a, b>`` to ``|(a+b)/sqrt2, (a-b)/sqrt2>``.
    """
    k = np.arange(total + 1)
    hop = np.sqrt((k[:-1] + 1.0) * (total - k[:-1]))
    gen = np.diag(hop, -1) - np.diag(hop, 1)
    # i*gen is Hermitian; exponentiating through its eigenbasis keeps the block unitary to rounding
    lam, vec = np.linalg.eigh(1j * gen)
    u = (vec * np.exp(0.25j * math.pi * lam)) @ vec.conj().T
    return u * np.where((total - k) % 2 == 0, 1.0, -1.0)


def apply_beam_splitter(r: ModeRegister, i, j, cutoff: int | None = None) -> ModeRegister:
    """Mix modes ``i`` and ``j``: ``|a>_i |b>_j -> |(a+b)/sqrt2>_i |(a-b)/sqrt2>_j``.

    Photon number is conserved, so every output component with at most
    ``cutoff`` photons per mode is exact as long as the input register holds
    all components of the same total. Pass inputs truncated at ``2 * cutoff``
    to get an output free of truncation error.
    """
    ai, aj = r.axis(i), r.axis(j)
    if ai == aj:
        raise ModeIndexError(f"beam splitter needs two distinct modes, got {i!r} twice")
    moved = np.moveaxis(r.amps, (ai, aj), (0, 1))
    di, dj = moved.shape[:2]
    rest = moved.shape[2:]
    src = moved.reshape(di, dj, -1)
    ei = ej = (min(di, dj) - 1 if cutoff is None else cutoff) + 1
    out = np.zeros((ei, ej, src.shape[2]), dtype=complex)
    for total in range(min(di + dj, ei + ej) - 1):
        k_in = np.arange(max(0, total - dj + 1), min(total, di - 1) + 1)
        k_out = np.arange(max(0, total - ej + 1), min(total, ei - 1) + 1)
        if k_out.size == 0:
            continue
        u = beam_splitter_block(total)[np.ix_(k_out, k_in)]
        out[k_out, total - k_out] = u @ src[k_in, total - k_in]
    out = np.moveaxis(out.reshape((ei, ej) + rest), (0, 1), (ai, aj))
    return ModeRegister(r.modes, out)


def run_network(s: ScsCoefficients, p: EcsParams, cutoff: int | None = None) -> ModeRegister:
    """Send input mode 0 and channel modes 1, 2 through the splitter.

    Returns the register over modes ``("3", "4", "2")``, where 3 and 4 are the
    splitter outputs that Alice counts and 2 is Bob's mode, all truncated at
    ``cutoff``.
    """
    if cutoff is None:
        cutoff = network_cutoff(p.alpha)
    mean_out = 2.0 * p.alpha.mean_photon_number
    if cutoff < 1 or poisson_tail(mean_out, cutoff) >= TAIL_TOL:
        raise CutoffTooSmall(
            f"cutoff {cutoff} too small for output amplitude^2 {mean_out:g} "
            f"(need >= {cutoff_for(mean_out)})"
        )
    source = scs_fock(s, 2 * cutoff).amps
    channel = ecs_fock(p, 2 * cutoff, cutoff)
    r = ModeRegister(("0", "1", "2"), np.multiply.outer(source, channel))
    r = apply_beam_splitter(r, "0", "1", cutoff)
    return r.relabel({"0": "3", "1": "4"})


class CountProjector(enum.Enum):
    VAC = "0"
    NZE = "NZE"
    ODD = "ODD"

    def mask(self, cutoff: int) -> np.ndarray:
        n = np.arange(cutoff + 1)
        if self is CountProjector.VAC:
            return n == 0
        if self is CountProjector.NZE:
            return (n % 2 == 0) & (n > 0)
        return n % 2 == 1


VAC, NZE, ODD = CountProjector.VAC, CountProjector.NZE, CountProjector.ODD

LEGAL_OUTCOMES = ((VAC, VAC), (NZE, VAC), (VAC, NZE), (ODD, VAC), (VAC, ODD))


class BranchMeasurement(NamedTuple):
    prob: float
    bob: FockVector
    impurity: float


def measure_branch(r: ModeRegister, c3: CountProjector, c4: CountProjector) -> BranchMeasurement:
    """Project modes 3, 4 onto the count classes and extract Bob's conditional state.

    The conditional state of mode 2 is obtained from the SVD of the projected
    tensor reshaped to ``(counts, n2)``. ``bob`` is the leading singular
    vector scaled so that its squared norm is the branch probability
    (up to the mixed remainder reported as ``impurity``).
    """
    a3, a4, a2 = r.axis("3"), r.axis("4"), r.axis("2")
    t = np.moveaxis(r.amps, (a3, a4, a2), (0, 1, 2))
    n3, n4, n2 = t.shape
    t = t[c3.mask(n3 - 1)][:, c4.mask(n4 - 1)]
    m = t.reshape(-1, n2)
    prob = float(np.vdot(m, m).real)
    if prob == 0.0:
        return BranchMeasurement(0.0, FockVector(n2 - 1, np.zeros(n2)), 0.0)
    _, sv, vh = np.linalg.svd(m, full_matrices=False)
    bob = sv[0] * vh[0]
    # fix the arbitrary SVD phase: largest component real and positive
    k = int(np.argmax(np.abs(bob)))
    bob = bob * (abs(bob[k]) / bob[k])
    impurity = float(np.sum(sv[1:] ** 2))
    return BranchMeasurement(prob, FockVector(n2 - 1, bob), impurity)


def fock_to_cat_qubit(v: FockVector, alpha) -> tuple[complex, complex, float]:
    """Overlaps of ``v`` with ``|+>`` and ``|->`` plus the norm^2 left outside their span."""
    plus, minus = cat_fock(alpha, v.cutoff)
    b_plus, b_minus = plus.inner(v), minus.inner(v)
    residual = v.norm_sq - abs(b_plus) ** 2 - abs(b_minus) ** 2
    return b_plus, b_minus, max(residual, 0.0)


@dataclass(frozen=True)
class OracleBranch:
    outcome: tuple[CountProjector, CountProjector]
    prob: float
    cat_state: np.ndarray
    residual: float
    impurity: float


@dataclass(frozen=True)
class OracleRun:
    """All five measured branches plus the input read back from its Fock vector."""

    target: np.ndarray
    branches: list[OracleBranch]
    cutoff: int

    def branch_fidelities(self, strategy) -> list[float]:
        from .protocol import OutcomeLabel, correction_unitary

        out = []
        for b in self.branches:
            norm_sq = float(np.vdot(b.cat_state, b.cat_state).real)
            if norm_sq == 0.0:
                out.append(0.0)
                continue
            t = correction_unitary(strategy, OutcomeLabel.from_counts(*b.outcome)) @ b.cat_state
            out.append(abs(np.vdot(self.target, t)) ** 2 / (norm_sq * np.vdot(self.target, self.target).real))
        return out

    def average_fidelity(self, strategy) -> float:
        fids = self.branch_fidelities(strategy)
        return float(sum(b.prob * f for b, f in zip(self.branches, fids)))


def input_cat_qubit(s: ScsCoefficients, cutoff: int) -> CatQubit:
    """Cat-basis coordinates of the input, read off its Fock vector."""
    b_plus, b_minus, _ = fock_to_cat_qubit(scs_fock(s, cutoff), s.alpha)
    return CatQubit(b_plus, b_minus, normalized=False)


def oracle_run(s: ScsCoefficients, p: EcsParams, cutoff: int | None = None) -> OracleRun:
    """Run the network and measure all five legal outcomes."""
    r = run_network(s, p, cutoff)
    target = np.array(input_cat_qubit(s, r.cutoff).as_tuple())
    branches = []
    for c3, c4 in LEGAL_OUTCOMES:
        m = measure_branch(r, c3, c4)
        b_plus, b_minus, residual = fock_to_cat_qubit(m.bob, p.alpha)
        branches.append(OracleBranch((c3, c4), m.prob, np.array([b_plus, b_minus]), residual, m.impurity))
    return OracleRun(target, branches, r.cutoff)


def oracle_average_fidelity(s: ScsCoefficients, p: EcsParams, strategy, cutoff: int | None = None) -> float:
    """``sum_i P_i F_i`` over the five outcomes, computed in the Fock basis."""
    return oracle_run(s, p, cutoff).average_fidelity(strategy)
