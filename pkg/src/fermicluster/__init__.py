"""Exact numerics for a double-well fermion lattice whose half-filled ground
state is a cluster state: model builders, encoded-qubit operators,
measurement-based protocols, and interaction-pulse gate synthesis."""

from .encoded import (
    EncodedRegisterMap,
    MeasurementRecord,
    encoded_hadamard,
    encoded_pauli,
    encoded_projector,
    encoded_rotation,
    encoded_x,
    encoded_y,
    encoded_z,
    measure_encoded,
    project_encoded,
)
from .fock import (
    FockState,
    ModeIndex,
    ModeSpace,
    SectorBasis,
    apply_annihilation,
    apply_creation,
    build_sector,
    hopping_element,
)
from .mbqc import (
    PauliFrame,
    ProtocolTranscript,
    byproduct_table,
    run_chain,
    run_subgraph,
    teleport_step,
)
from .model import (
    OperatorMatrix,
    PulseSchedule,
    cluster_hamiltonian,
    cluster_state,
    dressed_cluster_state,
    encoded_hamiltonian,
    gate_ham_a,
    gate_ham_b,
    leapfrog_1d,
    product_ground_state,
    spin_hamiltonian,
    subgraph_2d,
)
from .spectral import Spectrum, diagonalize, evolve_schedule, expm, ground_state
from .synth import (
    GateReport,
    synth_cz,
    synth_hadamard_attempt,
    synth_rx90_attempt,
    synth_rz,
    synth_sandwich,
    verify_obstruction,
)

__version__ = "0.1.0"
