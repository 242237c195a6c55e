"""Teleportation of cat-state qubits over entangled coherent channels.

Closed-form branch probabilities and fidelities, a truncated Fock-space
oracle that recomputes them from scratch, and worst-case fidelity sweeps
over the channel parameters.
"""

from .analysis import (
    MinFidelityResult,
    SweepRecord,
    compare_strategies,
    fidelity_gap,
    fmin_mecs_closed,
    fmin_nmecs_closed,
    gap_curve,
    min_average_fidelity,
    sweep_surface,
)
from .cat_algebra import (
    CatQubit,
    CoherentAlpha,
    ScsCoefficients,
    angles_to_qubit,
    epsilon_to_qubit,
    overlap_x,
    qubit_to_epsilon,
)
from .ecs import (
    EcsParams,
    EcsQubitAmplitudes,
    c_coefficients,
    concurrence_closed,
    concurrence_numeric,
    norm_constant,
    qubit_amplitudes,
)
from .errors import CutoffTooSmall, DegenerateAlpha, DomainError, EcsError, ModeIndexError, NormError, ZeroBranch
from .protocol import (
    Branch,
    OutcomeLabel,
    StrategyId,
    assembled_average_fidelity,
    average_fidelity,
    branch_fidelity,
    correction_unitary,
    decompose_branches,
    select_strategy,
    teleported_state,
)

__version__ = "0.1.0"
