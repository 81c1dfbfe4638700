"""Statevector VQE toolkit: spin-chain benchmarks for small-angle Gaussian
initialization versus uniform hardware-efficient baselines."""

__version__ = "0.1.0"

from .paulis import (
    Hamiltonian,
    PauliTerm,
    apply_term,
    build_tfim,
    build_xxz,
    expectation,
    ground_space,
    ground_state,
)
from .states import (
    DensityMatrix,
    GateOp,
    Statevector,
    apply_gate,
    effective_dimension,
    entanglement_entropy,
    fidelity,
    hamming_mass,
    purity,
    reduced_density_matrix,
    zero_state,
)

__all__ = [
    "Hamiltonian",
    "PauliTerm",
    "apply_term",
    "build_tfim",
    "build_xxz",
    "expectation",
    "ground_space",
    "ground_state",
    "DensityMatrix",
    "GateOp",
    "Statevector",
    "apply_gate",
    "effective_dimension",
    "entanglement_entropy",
    "fidelity",
    "hamming_mass",
    "purity",
    "reduced_density_matrix",
    "zero_state",
    "__version__",
]
