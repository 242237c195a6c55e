import math

import numpy as np
import pytest
from hypothesis import given, settings

from ecs_teleport.ecs import (
    EcsParams,
    EcsQubitAmplitudes,
    c_coefficients,
    concurrence_closed,
    concurrence_numeric,
    norm_constant,
    qubit_amplitudes,
)
from ecs_teleport.errors import DomainError, NormError
from ecs_teleport.fock_oracle import cat_fock, ecs_fock, network_cutoff

from conftest import C_NMECS_AT_1, N_MECS_AT_1, alpha_sq, phi, theta

HALF_PI = math.pi / 2


@pytest.mark.parametrize(
    "t, ph, expected",
    [
        (0.0, 1.234, (1.0, 1.0)),
        (HALF_PI, math.pi, (0.0, math.sqrt(2))),
        (HALF_PI, 0.0, (math.sqrt(2), 0.0)),
    ],
)
def test_c_coefficients(t, ph, expected):
    cp, cm = c_coefficients(t, ph)
    assert abs(cp - expected[0]) < 1e-15
    assert abs(cm - expected[1]) < 1e-15
    assert abs(cp) ** 2 + abs(cm) ** 2 == pytest.approx(2.0, abs=1e-14)


def test_norm_constant_values():
    assert norm_constant(EcsParams.from_mean_photon_number(1.0, 0.0, 2.0)) == 1.0
    mecs = EcsParams.from_mean_photon_number(1.0, HALF_PI, math.pi)
    assert norm_constant(mecs) == pytest.approx(N_MECS_AT_1, abs=1e-14)


def test_param_domain():
    with pytest.raises(DomainError):
        EcsParams.from_mean_photon_number(1.0, -0.1, 0.0)
    with pytest.raises(DomainError):
        EcsParams.from_mean_photon_number(1.0, 1.0, 7.0)


def test_mecs_amplitudes_are_bell_like():
    a = qubit_amplitudes(EcsParams.from_mean_photon_number(0.7, HALF_PI, math.pi))
    assert abs(a.a_pp) < 1e-16 and abs(a.a_mm) < 1e-16
    assert a.a_pm == a.a_mp


def test_separable_channel_amplitudes():
    p = EcsParams.from_mean_photon_number(1.0, 0.0, 0.0)
    x2 = p.x**2
    single = np.array([math.sqrt((1 + x2) / 2), math.sqrt((1 - x2) / 2)])
    a = qubit_amplitudes(p).as_array()
    assert np.allclose(a, np.kron(single, single), atol=1e-15)


@settings(max_examples=100, deadline=None)
@given(alpha_sq, theta, phi)
def test_amplitudes_unit_norm(a2, t, ph):
    a = qubit_amplitudes(EcsParams.from_mean_photon_number(a2, t, ph))
    assert abs(a.norm_sq - 1) < 1e-12


@settings(max_examples=25, deadline=None)
@given(alpha_sq, theta, phi)
def test_amplitudes_match_fock_projection(a2, t, ph):
    p = EcsParams.from_mean_photon_number(a2, t, ph)
    c = network_cutoff(p.alpha)
    psi = ecs_fock(p, c)
    assert abs(np.vdot(psi, psi).real - 1) < 1e-10
    plus, minus = cat_fock(p.alpha, c)
    basis = [plus.amps, minus.amps]
    proj = [np.vdot(np.outer(u, v), psi) for u in basis for v in basis]
    assert np.max(np.abs(np.array(proj) - qubit_amplitudes(p).as_array())) < 1e-10


def test_concurrence_closed_values():
    for a2 in (0.1, 1.0, 3.0):
        assert concurrence_closed(EcsParams.from_mean_photon_number(a2, HALF_PI, math.pi)) == pytest.approx(1.0, abs=1e-15)
        assert concurrence_closed(EcsParams.from_mean_photon_number(a2, 0.0, 1.0)) == 0.0
    nm = EcsParams.from_mean_photon_number(1.0, HALF_PI, 0.0)
    assert concurrence_closed(nm) == pytest.approx(C_NMECS_AT_1, abs=1e-15)


def test_concurrence_numeric_trivial_states():
    s = 1 / math.sqrt(2)
    assert concurrence_numeric(EcsQubitAmplitudes(0, s, s, 0)) == pytest.approx(1.0, abs=1e-15)
    assert concurrence_numeric(EcsQubitAmplitudes(1, 0, 0, 0)) == 0.0
    with pytest.raises(NormError):
        concurrence_numeric(EcsQubitAmplitudes(1, 1, 0, 0))


def test_concurrence_numeric_equals_two_det():
    a = qubit_amplitudes(EcsParams.from_mean_photon_number(0.4, 1.1, 2.2))
    assert concurrence_numeric(a) == pytest.approx(2 * abs(a.a_pp * a.a_mm - a.a_pm * a.a_mp), abs=1e-15)


@settings(max_examples=200, deadline=None)
@given(alpha_sq, theta, phi)
def test_concurrence_closed_matches_numeric(a2, t, ph):
    p = EcsParams.from_mean_photon_number(a2, t, ph)
    assert abs(concurrence_closed(p) - concurrence_numeric(qubit_amplitudes(p))) < 1e-12


@settings(max_examples=100, deadline=None)
@given(alpha_sq, theta, phi)
def test_concurrence_phi_reflection(a2, t, ph):
    c1 = concurrence_closed(EcsParams.from_mean_photon_number(a2, t, ph))
    c2 = concurrence_closed(EcsParams.from_mean_photon_number(a2, t, 2 * math.pi - ph))
    assert c1 == pytest.approx(c2, abs=1e-14)


def test_nmecs_concurrence_increases_to_one():
    cs = [concurrence_closed(EcsParams.from_mean_photon_number(a2, HALF_PI, 0.0)) for a2 in np.linspace(0.05, 6, 60)]
    assert all(b > a for a, b in zip(cs, cs[1:]))
    assert 1 - cs[-1] < 1e-9
