"""Collision-model thermalization of finite-dimensional quantum states and the
work needed to keep states with coherences out of equilibrium."""

from .channel import PartialSwapChannel, ThermalizationPath, iterate, steps_to_equilibrium
from .coherence import BlockStructure, block_structure, coherence, contraction_factor, dephase, l1_distance
from .gto import (
    GtoDiagnostics,
    StabilizerPlan,
    apply_plan,
    build_block_diagonal_stabilizer,
    build_coherent_stabilizer,
    check_gto,
    verify_stabilizability,
)
from .states import DensityMatrix, Hamiltonian, effective_hamiltonian, gibbs_state, validate_state
from .work import WorkReport, relative_entropy, symm_relative_entropy, work_closed_form, work_direct, work_report

__version__ = "0.1.0"
