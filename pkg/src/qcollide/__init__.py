"""Collision-model simulator for a qubit refreshed by queued ancillas.

Ancillas arrive by a renewal process and are served one at a time; the
waiting room is infinite. Each served ancilla collides with the system
qubit, and the random idle, waiting and service durations of the queue
set the exposure times of the idle, memory and interaction channels.
"""

from .collision_engine import (
    FIXED_POINT_MODES,
    EnsembleStats,
    ModelSpec,
    TrajectoryRecord,
    averaged_map_fixed_point,
    collision_step,
    deterministic_map_step,
    ensemble_average,
    long_run_stats,
    run_trajectory,
)
from .distributions import (
    Deterministic,
    Distribution,
    Exponential,
    RngStream,
    cdf_difference,
    distribution_from_config,
    pdf_difference,
)
from .errors import (
    AmbiguousFixedPointError,
    ConvergenceError,
    NoStationaryDistributionError,
    NumericalError,
    QcollideError,
    StateInvariantError,
    UnsupportedPairError,
    ValidationError,
)
from .lindley_numeric import (
    CdfGrid,
    GridSpec,
    default_grid,
    empirical_cdf,
    idle_cdf,
    lindley_fixed_point,
    lindley_iterate,
    sup_distance,
)
from .quantum_core import (
    Channel,
    Dephasing,
    Identity,
    PartialSwapUnitary,
    XxzDephasing,
    assert_density_matrix,
    channel_from_config,
    choi_matrix,
    coherence,
    cptp_defect,
    dephasing_factor,
    excited_state,
    ground_state,
    maximally_mixed,
    partial_trace_ancilla,
    partial_swap_unitary,
    plus_state,
    propagate,
    repair_state,
    vec,
    unvec,
    xxz_hamiltonian,
    xxz_liouvillian,
)
from .queue_core import (
    QueueTrace,
    lindley_step,
    queue_length_trace,
    simulate_queue,
    utilization,
)

__version__ = "0.1.0"

__all__ = [
    "AmbiguousFixedPointError",
    "CdfGrid",
    "Channel",
    "ConvergenceError",
    "Dephasing",
    "Deterministic",
    "Distribution",
    "EnsembleStats",
    "Exponential",
    "FIXED_POINT_MODES",
    "GridSpec",
    "Identity",
    "ModelSpec",
    "NoStationaryDistributionError",
    "NumericalError",
    "PartialSwapUnitary",
    "QcollideError",
    "QueueTrace",
    "RngStream",
    "StateInvariantError",
    "TrajectoryRecord",
    "UnsupportedPairError",
    "ValidationError",
    "XxzDephasing",
    "assert_density_matrix",
    "averaged_map_fixed_point",
    "cdf_difference",
    "channel_from_config",
    "choi_matrix",
    "coherence",
    "collision_step",
    "cptp_defect",
    "default_grid",
    "dephasing_factor",
    "deterministic_map_step",
    "distribution_from_config",
    "empirical_cdf",
    "ensemble_average",
    "excited_state",
    "ground_state",
    "idle_cdf",
    "lindley_fixed_point",
    "lindley_iterate",
    "lindley_step",
    "long_run_stats",
    "maximally_mixed",
    "partial_swap_unitary",
    "partial_trace_ancilla",
    "plus_state",
    "propagate",
    "queue_length_trace",
    "repair_state",
    "run_trajectory",
    "simulate_queue",
    "sup_distance",
    "unvec",
    "utilization",
    "vec",
    "xxz_hamiltonian",
    "xxz_liouvillian",
]
