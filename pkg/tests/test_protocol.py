import math

import numpy as np
import pytest
from hypothesis import given, settings

from ecs_teleport.cat_algebra import CatQubit, angles_to_qubit, qubit_to_epsilon
from ecs_teleport.ecs import EcsParams, c_coefficients
from ecs_teleport.errors import ZeroBranch
from ecs_teleport.fock_oracle import oracle_run
from ecs_teleport.protocol import (
    Branch,
    OutcomeLabel,
    StrategyId,
    TeleportedState,
    assembled_average_fidelity,
    average_fidelity,
    branch_fidelity,
    correction_unitary,
    decompose_branches,
    select_strategy,
    teleported_state,
)
from ecs_teleport.verify import phase_aligned_distance

from conftest import F_MECS, P00_MECS_AT_1, alpha_sq, omega, phi, random_case, theta, xi

HALF_PI = math.pi / 2
ALL_PAIRS = [(s, o) for s in StrategyId for o in OutcomeLabel]


def parallel(u, v, tol=1e-12):
    """Two complex 2-vectors span the same ray."""
    return abs(u[0] * v[1] - u[1] * v[0]) <= tol * max(1.0, np.linalg.norm(u) * np.linalg.norm(v))


@pytest.mark.parametrize(
    "phi, expected",
    [(0.0, StrategyId.S1), (math.pi, StrategyId.S2), (HALF_PI, StrategyId.S1),
     (3 * HALF_PI, StrategyId.S1), (HALF_PI + 1e-9, StrategyId.S2), (1.9 * math.pi, StrategyId.S1)],
)
def test_select_strategy(phi, expected):
    assert select_strategy(phi) is expected


@pytest.mark.parametrize("s, o", ALL_PAIRS)
def test_corrections_are_unitary(s, o):
    u = correction_unitary(s, o)
    assert np.max(np.abs(u.conj().T @ u - np.eye(2))) < 1e-14


def test_correction_examples():
    assert np.array_equal(correction_unitary(StrategyId.S1, OutcomeLabel.OO), np.eye(2))
    assert np.array_equal(correction_unitary(StrategyId.S1, OutcomeLabel.O_ODD), [[0, 1], [-1, 0]])
    assert np.array_equal(correction_unitary(StrategyId.S2, OutcomeLabel.NZE_O), [[0, 1], [1, 0]])
    assert np.array_equal(correction_unitary(StrategyId.S2, OutcomeLabel.ODD_O), np.eye(2))


def test_correction_returns_copy():
    u = correction_unitary(StrategyId.S1, OutcomeLabel.OO)
    u[0, 0] = 5
    assert correction_unitary(StrategyId.S1, OutcomeLabel.OO)[0, 0] == 1


def test_outcome_labels():
    assert [o.value for o in OutcomeLabel] == ["0,0", "NZE,0", "0,NZE", "ODD,0", "0,ODD"]


@settings(max_examples=100, deadline=None)
@given(alpha_sq, theta, phi, omega, xi)
def test_probabilities_complete(a2, t, ph, w, x):
    p = EcsParams.from_mean_photon_number(a2, t, ph)
    branches = decompose_branches(angles_to_qubit(w, x), p)
    assert [b.label for b in branches] == list(OutcomeLabel)
    assert abs(sum(b.prob for b in branches) - 1) < 1e-12


@pytest.mark.parametrize("a2", [0.3, 1.0, 2.0])
def test_mecs_vacuum_branch(a2):
    p = EcsParams.from_mean_photon_number(a2, HALF_PI, math.pi)
    oo = decompose_branches(angles_to_qubit(0.0, 0.0), p)[0]
    x2 = p.x**2
    assert oo.prob == pytest.approx(2 * x2 / (1 + x2) ** 2, abs=1e-14)
    assert abs(oo.raw_state[0]) < 1e-15 and abs(oo.raw_state[1]) > 0.1


def test_mecs_vacuum_branch_at_one():
    p = EcsParams.from_mean_photon_number(1.0, HALF_PI, math.pi)
    assert decompose_branches(angles_to_qubit(0.0, 0.0), p)[0].prob == pytest.approx(P00_MECS_AT_1, abs=1e-14)


def test_teleported_rows(rng):
    for _ in range(20):
        p, w, x, q = random_case(rng)
        pp, qq = 1 / math.sqrt(1 + p.x**2), 1 / math.sqrt(1 - p.x**2)
        cp, cm = c_coefficients(p.theta, p.phi)
        a_p, a_m = q.a_plus, q.a_minus
        b = {br.label: br for br in decompose_branches(q, p)}
        t = teleported_state(b[OutcomeLabel.OO], correction_unitary(StrategyId.S1, OutcomeLabel.OO)).raw
        assert parallel(t, [cp / pp, cm / qq])
        t = teleported_state(b[OutcomeLabel.ODD_O], correction_unitary(StrategyId.S2, OutcomeLabel.ODD_O)).raw
        row = [(cm * a_p * pp + cp * a_m * qq) / pp, (cm * a_m * qq + cp * a_p * pp) / qq]
        assert parallel(t, row)


def test_mecs_s2_vacuum_fidelity_zero():
    p = EcsParams.from_mean_photon_number(1.0, HALF_PI, math.pi)
    q = angles_to_qubit(0.0, 0.0)
    oo = decompose_branches(q, p)[0]
    t = teleported_state(oo, correction_unitary(StrategyId.S2, OutcomeLabel.OO))
    assert parallel(t.normalized, [0, 1])
    assert branch_fidelity(t, q) == pytest.approx(0.0, abs=1e-28)


def test_branch_fidelity_extremes():
    q = angles_to_qubit(1.0, 2.0)
    same = TeleportedState(np.array(q.as_tuple()), np.array(q.as_tuple()))
    assert branch_fidelity(same, q) == pytest.approx(1.0, abs=1e-15)
    orth = np.array([-np.conj(q.a_minus), np.conj(q.a_plus)])
    assert branch_fidelity(TeleportedState(orth, orth), q) == pytest.approx(0.0, abs=1e-15)


def test_zero_branch():
    b = Branch(OutcomeLabel.OO, np.zeros(2, dtype=complex))
    with pytest.raises(ZeroBranch):
        teleported_state(b, np.eye(2))


def test_zero_branch_contributes_nothing():
    # e+ + e- = 0 makes the vacuum branch impossible; the average stays finite
    p = EcsParams.from_mean_photon_number(0.8, 1.0, 0.5)
    q = angles_to_qubit(math.pi, 0.0)  # pure odd cat: e+ = -e-
    assert decompose_branches(q, p)[0].prob < 1e-30
    for s in StrategyId:
        f = assembled_average_fidelity(q, p, s)
        assert math.isfinite(f)
        assert f == pytest.approx(average_fidelity(math.pi, 0.0, p, s), abs=1e-12)


@pytest.mark.parametrize("a2", [0.5, 1.0, 1.5])
@pytest.mark.parametrize("w", [0.0, 0.4, HALF_PI, 2.5, math.pi])
def test_reduced_forms(a2, w):
    x2 = math.exp(-2 * a2)
    x4 = x2 * x2
    nm = EcsParams.from_mean_photon_number(a2, HALF_PI, 0.0)
    f1 = 1 - x2 * (1 + x2) * math.sin(w) ** 2 / (2 * (1 + x4))
    assert average_fidelity(w, 1.3, nm, StrategyId.S1) == pytest.approx(f1, abs=1e-13)
    me = EcsParams.from_mean_photon_number(a2, HALF_PI, math.pi)
    c2, s2 = math.cos(w / 2) ** 2, math.sin(w / 2) ** 2
    f2 = 1 - 2 * x2 * c2 * (c2 + x2 * s2) / (1 + x2) ** 2
    assert average_fidelity(w, 1.3, me, StrategyId.S2) == pytest.approx(f2, abs=1e-13)


def test_mecs_omega_zero_value():
    p = EcsParams.from_mean_photon_number(1.0, HALF_PI, math.pi)
    assert average_fidelity(0.0, 0.0, p, StrategyId.S2) == pytest.approx(F_MECS[1.0], abs=1e-14)


@pytest.mark.parametrize("a2", [0.1, 1.0, 3.0])
def test_perfect_poles(a2):
    nm = EcsParams.from_mean_photon_number(a2, HALF_PI, 0.0)
    assert abs(average_fidelity(0.0, 0.7, nm, StrategyId.S1) - 1) < 1e-12
    me = EcsParams.from_mean_photon_number(a2, HALF_PI, math.pi)
    assert abs(average_fidelity(math.pi, 0.7, me, StrategyId.S2) - 1) < 1e-12


@settings(max_examples=200, deadline=None)
@given(alpha_sq, theta, phi, omega, xi)
def test_closed_form_matches_branch_assembly(a2, t, ph, w, x):
    p = EcsParams.from_mean_photon_number(a2, t, ph)
    q = angles_to_qubit(w, x)
    for s in StrategyId:
        f = average_fidelity(w, x, p, s)
        assert abs(f - assembled_average_fidelity(q, p, s)) < 1e-12
        assert -1e-15 <= f <= 1 + 1e-12


@settings(max_examples=100, deadline=None)
@given(alpha_sq, theta, phi, omega, xi)
def test_xi_reflection_symmetry(a2, t, ph, w, x):
    p = EcsParams.from_mean_photon_number(a2, t, ph)
    mirror = EcsParams.from_mean_photon_number(a2, t, 2 * math.pi - ph)
    for s in StrategyId:
        a = average_fidelity(w, x, p, s)
        b = average_fidelity(w, (2 * math.pi - x) % (2 * math.pi), mirror, s)
        assert abs(a - b) < 1e-12


def test_branches_match_oracle(rng):
    for _ in range(15):
        p, w, x, q = random_case(rng)
        run = oracle_run(qubit_to_epsilon(q, p.alpha), p)
        for b, ob in zip(decompose_branches(q, p), run.branches):
            assert OutcomeLabel.from_counts(*ob.outcome) is b.label
            assert abs(b.prob - ob.prob) < 1e-9
            assert phase_aligned_distance(b.raw_state, ob.cat_state) < 1e-9
        for s in StrategyId:
            assert abs(average_fidelity(w, x, p, s) - run.average_fidelity(s)) < 1e-8


def test_branch_fidelity_matches_oracle(rng):
    for _ in range(10):
        p, w, x, q = random_case(rng)
        run = oracle_run(qubit_to_epsilon(q, p.alpha), p)
        for s in StrategyId:
            fids = run.branch_fidelities(s)
            for b, f_oracle in zip(decompose_branches(q, p), fids):
                f = branch_fidelity(teleported_state(b, correction_unitary(s, b.label)), q)
                assert abs(f - f_oracle) < 1e-10


def test_catqubit_input_is_respected():
    q = CatQubit(0.6, 0.8j)
    p = EcsParams.from_mean_photon_number(1.0, 0.8, 0.3)
    assert sum(b.prob for b in decompose_branches(q, p)) == pytest.approx(1.0, abs=1e-12)
