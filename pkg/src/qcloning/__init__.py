"""Unified 1->2 probabilistic / state-dependent qubit cloner.

Closed-form fidelities and correlations of the clones, a brute-force linear
algebra oracle to check them against, and sweeps for the fidelity-versus-
correlation curves.
"""
from .correlations import (
    DiscordOptions,
    concurrence_closed,
    concurrence_eigen,
    measure_correlations,
    quantum_discord,
    tangle_closed,
    tangle_from_state,
)
from .errors import (
    CloningError,
    DomainError,
    InfeasibleError,
    InvariantError,
    SingularInputError,
    UndefinedFidelityError,
)
from .fidelity import (
    branch_fidelities,
    fidelity_general,
    optimal_b,
    optimal_fidelity,
    partially_optimal_fidelity,
)
from .machine import (
    BRANCHES,
    Branch,
    InputPair,
    MachineParams,
    apply_machine,
    feasible_b_range,
    output_density,
    solve_machine,
    success_probability,
)
from .nocorr import nocorr_fidelity, nocorr_minimum, nocorr_params, verify_product_output
from .oracle import cross_check, oracle_clone
from .states import ThreeQubitState, TwoModeState
from .sweep import SweepRecord, SweepSpec, figure_sweep
from .verify import run_verification

__version__ = "0.1.0"

__all__ = [
    "BRANCHES",
    "Branch",
    "CloningError",
    "DiscordOptions",
    "DomainError",
    "InfeasibleError",
    "InputPair",
    "InvariantError",
    "MachineParams",
    "SingularInputError",
    "SweepRecord",
    "SweepSpec",
    "ThreeQubitState",
    "TwoModeState",
    "UndefinedFidelityError",
    "apply_machine",
    "branch_fidelities",
    "concurrence_closed",
    "concurrence_eigen",
    "cross_check",
    "feasible_b_range",
    "fidelity_general",
    "figure_sweep",
    "measure_correlations",
    "nocorr_fidelity",
    "nocorr_minimum",
    "nocorr_params",
    "optimal_b",
    "optimal_fidelity",
    "oracle_clone",
    "output_density",
    "partially_optimal_fidelity",
    "quantum_discord",
    "run_verification",
    "solve_machine",
    "success_probability",
    "tangle_closed",
    "tangle_from_state",
    "verify_product_output",
]
