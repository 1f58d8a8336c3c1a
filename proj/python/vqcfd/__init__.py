"""Python bindings for the vqcfd statevector emulator."""

from ._core import (
    AnsatzCircuit,
    ConfigError,
    Frame,
    Grid,
    Trajectory,
    adjoint,
    analytic_hump,
    build_ansatz,
    chi_99,
    encode,
    evolve,
    fd_trajectory,
    full_expressivity_depth,
    interscale_entropy,
    operator_matrix,
    pauli_decompose,
    prepare,
    resolve_config,
    run_acceptance,
    schmidt_values,
)

__all__ = [
    "AnsatzCircuit",
    "ConfigError",
    "Frame",
    "Grid",
    "Trajectory",
    "adjoint",
    "analytic_hump",
    "build_ansatz",
    "chi_99",
    "encode",
    "evolve",
    "fd_trajectory",
    "full_expressivity_depth",
    "interscale_entropy",
    "operator_matrix",
    "pauli_decompose",
    "prepare",
    "resolve_config",
    "run_acceptance",
    "schmidt_values",
]
