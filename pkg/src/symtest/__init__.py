"""Desk-scale simulation and verification of quantum symmetry tests.

Builds the symmetry-test circuits for finite groups, simulates them on
density matrices, and cross-checks the simulated acceptance probabilities
against their closed forms (cycle index polynomials, commutator series,
trace identities, Fourier/OTOC relations).
"""

from .linalg import (
    DensityMatrix,
    DimensionError,
    PureState,
    expm_hermitian,
    fidelity,
    maximally_entangled,
    maximally_mixed,
    nested_commutator,
    partial_trace,
    purify,
    random_density,
    random_unitary,
    schatten_norm,
    tensor,
)
from .groups import (
    CycleIndexPolynomial,
    FiniteGroup,
    Permutation,
    PermutationRep,
    UnitaryRepTable,
    apply_perm_rep,
    cycle_index,
    cycle_type,
    cyclic_group,
    cyclic_power,
    dihedral_group,
    eval_cycle_index,
    group_projector,
    symmetric_group,
    twirl,
)
from .report import AcceptanceReport, OptimizationOutcome, SeriesReport

__all__ = [
    "AcceptanceReport",
    "CycleIndexPolynomial",
    "DensityMatrix",
    "DimensionError",
    "FiniteGroup",
    "OptimizationOutcome",
    "Permutation",
    "PermutationRep",
    "PureState",
    "SeriesReport",
    "UnitaryRepTable",
    "apply_perm_rep",
    "cycle_index",
    "cycle_type",
    "cyclic_group",
    "cyclic_power",
    "dihedral_group",
    "eval_cycle_index",
    "expm_hermitian",
    "fidelity",
    "group_projector",
    "maximally_entangled",
    "maximally_mixed",
    "nested_commutator",
    "partial_trace",
    "purify",
    "random_density",
    "random_unitary",
    "schatten_norm",
    "symmetric_group",
    "tensor",
    "twirl",
]

__version__ = "0.1.0"
