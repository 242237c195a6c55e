"""Randomized cross-checks between the closed forms, branch algebra and Fock oracle."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .analysis import fidelity_gap, fmin_mecs_closed, fmin_nmecs_closed
from .cat_algebra import angles_to_qubit, qubit_to_epsilon
from .ecs import EcsParams, concurrence_closed, concurrence_numeric, qubit_amplitudes
from .errors import CutoffTooSmall
from .fock_oracle import ecs_fock, network_cutoff, oracle_run, run_network
from .protocol import StrategyId, assembled_average_fidelity, average_fidelity, decompose_branches

DEFAULT_COUNT = 100
ALPHA_SQ_RANGE = (0.1, 3.0)


@dataclass(frozen=True)
class Sample:
    alpha_sq: float
    theta: float
    phi: float
    omega: float
    xi: float

    def params(self) -> EcsParams:
        return EcsParams.from_mean_photon_number(self.alpha_sq, self.theta, self.phi)

    def describe(self) -> str:
        return (
            f"alpha_sq={self.alpha_sq:.12g} theta={self.theta:.12g} phi={self.phi:.12g} "
            f"omega={self.omega:.12g} xi={self.xi:.12g}"
        )


def random_samples(seed: int, count: int, alpha_sq: float | None = None) -> list[Sample]:
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        a2 = rng.uniform(*ALPHA_SQ_RANGE)
        th, ph = rng.uniform(0, math.pi), rng.uniform(0, 2 * math.pi)
        w, xi = rng.uniform(0, math.pi), rng.uniform(0, 2 * math.pi)
        out.append(Sample(a2 if alpha_sq is None else alpha_sq, th, ph, w, xi))
    return out


def phase_aligned_distance(a: np.ndarray, b: np.ndarray) -> float:
    """``min_g |a - e^{ig} b|``."""
    ov = np.vdot(b, a)
    phase = ov / abs(ov) if abs(ov) > 0 else 1.0
    return float(np.linalg.norm(a - phase * b))


@dataclass
class SuiteResult:
    name: str
    tol: float
    max_error: float = 0.0
    worst: str = ""
    failure: str = ""
    extra: dict = field(default_factory=dict)

    def record(self, err: float, where: str) -> None:
        if err > self.max_error or not self.worst:
            self.max_error, self.worst = err, where

    @property
    def passed(self) -> bool:
        return not self.failure and self.max_error <= self.tol

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = f"{status} {self.name:<20} max_error={self.max_error:.3e} tol={self.tol:.0e}"
        for k, v in self.extra.items():
            text += f" {k}={v:.3e}"
        if self.failure:
            text += f" :: {self.failure}"
        elif not self.passed:
            text += f" :: worst at {self.worst}"
        return text


@dataclass
class VerificationReport:
    seed: int
    count: int
    suites: list[SuiteResult]

    @property
    def passed(self) -> bool:
        return all(s.passed for s in self.suites)

    def lines(self) -> list[str]:
        head = f"verify seed={self.seed} tuples={self.count}"
        return [head] + [s.line() for s in self.suites] + ["OK" if self.passed else "FAILED"]


def run_verification(
    seed: int = 0,
    count: int = DEFAULT_COUNT,
    cutoff: int | None = None,
    alpha_sq: float | None = None,
    oracle_tol: float = 1e-8,
) -> VerificationReport:
    samples = random_samples(seed, count, alpha_sq)
    norm = SuiteResult("normalization", 1e-10)
    complete = SuiteResult("completeness", 1e-12)
    closed = SuiteResult("closed_vs_branches", 1e-12)
    oracle = SuiteResult("analytic_vs_oracle", oracle_tol)
    oracle.extra["branch_error"] = 0.0
    conc = SuiteResult("concurrence", 1e-12)
    gap = SuiteResult("gap_identity", 1e-12)
    cutoff_failed = False

    for smp in samples:
        p = smp.params()
        q = angles_to_qubit(smp.omega, smp.xi)
        s = qubit_to_epsilon(q, p.alpha)
        where = smp.describe()

        norm.record(abs(s.norm_sq - 1.0), where)
        branches = decompose_branches(q, p)
        complete.record(abs(sum(b.prob for b in branches) - 1.0), where)
        for strat in StrategyId:
            err = abs(average_fidelity(smp.omega, smp.xi, p, strat) - assembled_average_fidelity(q, p, strat))
            closed.record(err, f"{where} strategy={strat.name}")
        conc.record(abs(concurrence_closed(p) - concurrence_numeric(qubit_amplitudes(p))), where)

        if cutoff_failed:
            continue
        try:
            c = network_cutoff(p.alpha) if cutoff is None else cutoff
            channel = ecs_fock(p, c)
            norm.record(abs(np.vdot(channel, channel).real - 1.0), where)
            norm.record(abs(run_network(s, p, c).norm_sq - 1.0), where)
            run = oracle_run(s, p, c)
        except CutoffTooSmall as exc:
            msg = f"CutoffTooSmall: {exc} at {where}"
            norm.failure = oracle.failure = msg
            cutoff_failed = True
            continue
        norm.record(abs(sum(b.prob for b in run.branches) - 1.0), where)
        for strat in StrategyId:
            err = abs(average_fidelity(smp.omega, smp.xi, p, strat) - run.average_fidelity(strat))
            oracle.record(err, f"{where} strategy={strat.name}")
        for b, ob in zip(branches, run.branches):
            err = max(abs(b.prob - ob.prob), phase_aligned_distance(b.raw_state, ob.cat_state))
            if err > oracle.extra["branch_error"]:
                oracle.extra["branch_error"] = err
            if err > oracle_tol / 10 and not oracle.failure:
                oracle.failure = f"branch {b.label.value} differs by {err:.3e} at {where}"

    for a2 in np.linspace(0.01, 5.0, 500):
        err = abs(fidelity_gap(a2) - (fmin_nmecs_closed(a2) - fmin_mecs_closed(a2)))
        gap.record(err, f"alpha_sq={a2:.12g}")

    return VerificationReport(seed, count, [norm, complete, closed, oracle, conc, gap])
