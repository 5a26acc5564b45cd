"""Exact desk-scale simulator of MBQC gate fidelity on noisy AKLT chains."""

from .aklt import (
    DensityMpo,
    MpsChain,
    ProjectiveRep,
    build_aklt,
    check_canonical,
    edge_string_correlator,
    extract_projective_rep,
    string_order,
    to_dense,
)
from .channels import (
    GroupRep,
    KrausChannel,
    SymmetryReport,
    apply_dense,
    apply_mpo,
    canonical_rep,
    catalog_noise,
    classify_table1,
    is_strongly_symmetric,
    is_weakly_symmetric,
    projector_commutation_check,
    rotated_rep,
    symmetry_report,
    time_reversal_rep,
)
from .evolution import TrajectoryRow, evolve, noise1_asymptote, write_csv
from .mbqc import (
    FidelityBreakdown,
    GateSpec,
    MeasurementBasis,
    MeasurementRecord,
    assemble_rho_U,
    basis,
    byproduct,
    fidelity_via_strings,
    gate_fidelity,
    identity_fidelity,
    pure_fidelity_closed_form,
    single_measurement_action,
)
from .mpo_analysis import diagonal_invariance_check, mpo_tensor_wire, wire_basis

__all__ = [
    "DensityMpo",
    "FidelityBreakdown",
    "GateSpec",
    "GroupRep",
    "KrausChannel",
    "MeasurementBasis",
    "MeasurementRecord",
    "MpsChain",
    "ProjectiveRep",
    "SymmetryReport",
    "TrajectoryRow",
    "apply_dense",
    "apply_mpo",
    "assemble_rho_U",
    "basis",
    "build_aklt",
    "byproduct",
    "canonical_rep",
    "catalog_noise",
    "check_canonical",
    "classify_table1",
    "diagonal_invariance_check",
    "edge_string_correlator",
    "evolve",
    "extract_projective_rep",
    "fidelity_via_strings",
    "gate_fidelity",
    "identity_fidelity",
    "is_strongly_symmetric",
    "is_weakly_symmetric",
    "mpo_tensor_wire",
    "noise1_asymptote",
    "projector_commutation_check",
    "pure_fidelity_closed_form",
    "rotated_rep",
    "single_measurement_action",
    "string_order",
    "symmetry_report",
    "time_reversal_rep",
    "to_dense",
    "wire_basis",
    "write_csv",
]

__version__ = "0.1.0"
