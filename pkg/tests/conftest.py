import math

import numpy as np
import pytest
from hypothesis import strategies as st

from ecs_teleport import EcsParams, angles_to_qubit

# high-precision (mpmath, 30 digits) evaluations of the closed forms
X_AT_1 = 0.367879441171442321595523770161
N_MECS_AT_1 = 1.00928556928342834992946047604
C_NMECS_AT_1 = 0.964027580075816883946413724101
F_NMECS = {0.5: 0.778384970572969872136, 1.0: 0.924556337810434297956, 1.5: 0.973931706566824310876}
F_MECS = {0.5: 0.606776133517036294925, 1.0: 0.790012829192986965303, 1.5: 0.909646680538175734701}
GAP_AT_06 = 0.176130994477099032137
GAP_AT_1 = 0.134543508617447332654
P00_MECS_AT_1 = 0.209987170807013034697

alpha_sq = st.floats(0.1, 3.0)
theta = st.floats(0.0, math.pi)
phi = st.floats(0.0, 2 * math.pi, exclude_max=True)
omega = st.floats(0.0, math.pi)
xi = st.floats(0.0, 2 * math.pi, exclude_max=True)


def random_case(rng, lo=0.1, hi=3.0):
    p = EcsParams.from_mean_photon_number(rng.uniform(lo, hi), rng.uniform(0, math.pi), rng.uniform(0, 2 * math.pi))
    w, x = rng.uniform(0, math.pi), rng.uniform(0, 2 * math.pi)
    return p, w, x, angles_to_qubit(w, x)


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


# filled by tests/test_acceptance.py, echoed once at the end of the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
