"""EIT two-qubit phase gate simulator."""

from ._core import (
    EitgateError,
    LadderParams,
    MSchemeParams,
    basis_names,
    build_hamiltonian,
    build_jump_channels,
    cell_geometry,
    chsh_value,
    coincidence_fock,
    cps_eigenvalue,
    cps_from_fringes,
    cps_perturbative,
    dark_eigenvalue,
    group_velocity_steady,
    group_velocity_transient,
    ladder,
    run_simulate,
    simulate,
    susceptibility,
)

__all__ = [
    "EitgateError",
    "LadderParams",
    "MSchemeParams",
    "basis_names",
    "build_hamiltonian",
    "build_jump_channels",
    "cell_geometry",
    "chsh_value",
    "coincidence_fock",
    "cps_eigenvalue",
    "cps_from_fringes",
    "cps_perturbative",
    "dark_eigenvalue",
    "group_velocity_steady",
    "group_velocity_transient",
    "ladder",
    "run_simulate",
    "simulate",
    "susceptibility",
]
