"""Analytic teleportation: branch decomposition, Bob's corrections and fidelities.

After the splitter, Alice counts photons in both output modes. One count is
always zero, leaving five outcomes: both vacuum, or a nonzero even (NZE) or
odd (ODD) count in exactly one mode. Each outcome leaves Bob's mode in a
known cat-qubit state that he rotates with one of four Pauli-like unitaries.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .cat_algebra import CatQubit, angles_to_qubit, qubit_to_epsilon
from .ecs import EcsParams, c_coefficients, norm_constant
from .errors import ZeroBranch

ZERO_PROB = 1e-300


class OutcomeLabel(enum.Enum):
    OO = "0,0"
    NZE_O = "NZE,0"
    O_NZE = "0,NZE"
    ODD_O = "ODD,0"
    O_ODD = "0,ODD"

    @classmethod
    def from_counts(cls, c3, c4) -> "OutcomeLabel":
        return cls(f"{c3.value},{c4.value}")


class StrategyId(enum.Enum):
    S1 = 1
    S2 = 2


IDENTITY = np.eye(2, dtype=complex)
PARITY = np.diag([1.0, -1.0]).astype(complex)
SWAP = np.array([[0, 1], [1, 0]], dtype=complex)
SIGNED_SWAP = np.array([[0, 1], [-1, 0]], dtype=complex)

_CORRECTIONS = {
    StrategyId.S1: {
        OutcomeLabel.OO: IDENTITY,
        OutcomeLabel.NZE_O: IDENTITY,
        OutcomeLabel.O_NZE: PARITY,
        OutcomeLabel.ODD_O: SWAP,
        OutcomeLabel.O_ODD: SIGNED_SWAP,
    },
    StrategyId.S2: {
        OutcomeLabel.OO: IDENTITY,
        OutcomeLabel.ODD_O: IDENTITY,
        OutcomeLabel.O_ODD: PARITY,
        OutcomeLabel.NZE_O: SWAP,
        OutcomeLabel.O_NZE: SIGNED_SWAP,
    },
}


def select_strategy(phi: float) -> StrategyId:
    """S1 when ``|C+| >= |C-|``, i.e. ``cos(phi) >= 0``."""
    # cos(pi/2) evaluates to 6e-17, and the boundary belongs to S1 anyway
    return StrategyId.S1 if math.cos(phi) >= -1e-15 else StrategyId.S2


def correction_unitary(s: StrategyId, o: OutcomeLabel) -> np.ndarray:
    return _CORRECTIONS[StrategyId(s)][OutcomeLabel(o)].copy()


@dataclass(frozen=True)
class Branch:
    """Bob's unnormalized mode-2 state on ``(|+>, |->)`` for one outcome."""

    label: OutcomeLabel
    raw_state: np.ndarray

    @property
    def prob(self) -> float:
        return float(np.vdot(self.raw_state, self.raw_state).real)


def decompose_branches(q: CatQubit, p: EcsParams) -> list[Branch]:
    """Bob's conditional states for the five outcomes, in ``OutcomeLabel`` order.

    Each raw state is the coefficient of the normalized count state
    ``|0,0>``, ``|NZE,0>``, ... so its squared norm is the outcome probability.
    """
    x = p.x
    pp = 1.0 / math.sqrt(1.0 + x * x)
    qq = 1.0 / math.sqrt(p.alpha.one_minus_x2)
    c_plus, c_minus = c_coefficients(p.theta, p.phi)
    a_plus, a_minus = q.a_plus, q.a_minus
    eps = qubit_to_epsilon(q, p.alpha)
    g = norm_constant(p) / math.sqrt(2.0)

    pa, qa = a_plus * pp, a_minus * qq
    same_plus = c_plus * pa + c_minus * qa  # C+ A+ p + C- A- q
    same_minus = c_plus * pa - c_minus * qa
    cross_plus = c_minus * pa + c_plus * qa  # C- A+ p + C+ A- q
    cross_minus = c_minus * pa - c_plus * qa

    nze = 0.5 * g / qq**2
    odd = 0.5 * g / (pp * qq)
    rows = {
        OutcomeLabel.OO: g * x * (eps.eps_plus + eps.eps_minus) * np.array([c_plus / pp, c_minus / qq]),
        OutcomeLabel.NZE_O: nze * np.array([same_plus / pp, cross_plus / qq]),
        OutcomeLabel.O_NZE: nze * np.array([same_minus / pp, cross_minus / qq]),
        OutcomeLabel.ODD_O: odd * np.array([cross_plus / pp, same_plus / qq]),
        OutcomeLabel.O_ODD: odd * np.array([cross_minus / pp, same_minus / qq]),
    }
    return [Branch(label, np.asarray(v, dtype=complex)) for label, v in rows.items()]


@dataclass(frozen=True)
class TeleportedState:
    raw: np.ndarray
    normalized: np.ndarray


def teleported_state(b: Branch, u: np.ndarray) -> TeleportedState:
    if b.prob < ZERO_PROB:
        raise ZeroBranch(f"branch {b.label.value} has probability {b.prob:g}")
    raw = u @ b.raw_state
    return TeleportedState(raw, raw / math.sqrt(b.prob))


def branch_fidelity(t: TeleportedState, q: CatQubit) -> float:
    """``|<I|T>|^2`` against the normalized teleported state."""
    overlap = np.vdot(np.array(q.as_tuple()), t.normalized)
    return float(abs(overlap) ** 2)


def assembled_average_fidelity(q: CatQubit, p: EcsParams, s: StrategyId) -> float:
    """``sum_i P_i F_i`` built branch by branch; impossible branches contribute 0."""
    total = 0.0
    for b in decompose_branches(q, p):
        try:
            t = teleported_state(b, correction_unitary(s, b.label))
        except ZeroBranch:
            continue
        total += b.prob * branch_fidelity(t, q)
    return total


def fidelity_terms(x: float, theta: float, phi: float, s: StrategyId):
    """Return ``f(cos w, sin w, cos xi, sin xi)`` giving the closed-form average fidelity.

    The returned callable only does arithmetic, so it accepts floats or
    broadcastable numpy arrays alike.
    """
    x2, x4 = x * x, x**4
    one_minus_x4 = 1.0 - x4
    sc = math.sin(theta) * math.cos(phi)
    ct = math.cos(theta)
    ssp = math.sin(theta) * math.sin(phi)
    pref = 0.25 / (1.0 + x4 * sc)
    root = math.sqrt(one_minus_x4)
    vac = 2.0 * x2 / (1.0 + x2)
    nze = (1.0 - x2) ** 2
    strategy = StrategyId(s)

    def f(cw, sw, cx, sx):
        vacuum = vac * (1.0 + cw) * (1.0 + x2 * sc + cw * (sc + x2) + root * sw * (ct * cx - ssp * sx))
        sw2 = sw * sw
        mix = cx * cx + x4 * sx * sx
        if strategy is StrategyId.S1:
            rest = (
                (1.0 + sc) * (1.0 - x2 * cw) ** 2
                + nze * (1.0 + sc + sw2 * (1.0 - sc) * mix / one_minus_x4)
                + one_minus_x4 * (1.0 - sc) * sw2 * cx * cx
            )
        else:
            rest = (
                nze * ((1.0 - sc) * (1.0 - x2 * cw) ** 2 / one_minus_x4 + (1.0 + sc) * sw2 * cx * cx)
                + one_minus_x4 * (1.0 - sc)
                + sw2 * (1.0 + sc) * mix
            )
        return pref * (vacuum + rest)

    return f


def average_fidelity(omega: float, xi: float, p: EcsParams, s: StrategyId) -> float:
    """Closed-form average fidelity for input angles ``(omega, xi)`` under strategy ``s``."""
    angles_to_qubit(omega, xi % (2.0 * math.pi))
    f = fidelity_terms(p.x, p.theta, p.phi, s)
    return float(f(math.cos(omega), math.sin(omega), math.cos(xi), math.sin(xi)))
