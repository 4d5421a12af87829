"""Gate synthesis by time evolution under the two gate pulses.

The single-well pulse splits into two 2x2 blocks labelled by the position
of the neighboring qubit's fermion: hopping across an occupied site 3
flips the tunneling sign, so any pulse sequence produces some U in one
block and Z U Z in the other.  Stitched together that is exactly a
CZ-conjugated single-qubit gate, never a bare one: the obstruction this
module quantifies.  The interaction pulse cancels the statistical CZ and
yields a true entangling gate, after which sandwiching recovers clean
local gates.

Reported fidelities are phase invariant, |tr(U_ref^dag U_syn)| / d.  Every
report also carries the fidelity with the two register<->block
assignments exchanged (conjugation by X on the spectator qubit): the
source text labels blocks ordinally and not consistently across its
claims, so the validating assignment is detected numerically and recorded
rather than assumed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .encoded import EncodedRegisterMap
from .fock import build_sector
from .model import (
    OperatorMatrix,
    PulseSchedule,
    gate_ham_a,
    gate_ham_a_pulse,
    gate_ham_b,
    pulse_basis,
    qubit_operator,
    qubits_tag,
)
from .spectral import evolve_schedule, expm

GATE_TOL = 1e-9
TWO_PI = 2 * np.pi

HADAMARD_PULSE = {"v1": -1 + np.sqrt(2), "v4": 1 + np.sqrt(2)}
CZ_PULSE = {"g": 4 / np.sqrt(3), "v3": -1 / np.sqrt(3), "v4": 1 / np.sqrt(3)}

H2 = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


def gate_fidelity(reference: np.ndarray, synthesized: np.ndarray) -> float:
    """Phase-invariant unitary overlap |tr(ref^dag syn)| / d."""
    d = reference.shape[0]
    return float(abs(np.trace(reference.conj().T @ synthesized)) / d)


def rotation_gate(axis: str, theta: float) -> np.ndarray:
    pauli = qubit_operator({0: axis}, 1)
    return np.cos(theta / 2) * np.eye(2) - 1j * np.sin(theta / 2) * pauli


@dataclass
class GateReport:
    """Outcome of one synthesis: target, fidelities, validated assignment."""

    gate: str
    fidelity: float
    passed: bool
    block_assignment: str | None
    fidelity_plain: float
    fidelity_swapped: float | None
    parameters: dict
    blocks: dict = field(default_factory=dict)
    checks: dict = field(default_factory=dict)
    tolerance: float = GATE_TOL
    synthesized: np.ndarray | None = None
    reference: np.ndarray | None = None

    def to_dict(self) -> dict:
        return {
            "gate": self.gate,
            "fidelity": self.fidelity,
            "passed": bool(self.passed),
            "block_assignment": self.block_assignment,
            "fidelity_plain": self.fidelity_plain,
            "fidelity_swapped": self.fidelity_swapped,
            "parameters": self.parameters,
            "blocks": self.blocks,
            "checks": self.checks,
            "tolerance": self.tolerance,
        }


def _encoded_unitary(op: OperatorMatrix) -> np.ndarray:
    """Map a sector unitary of the N=2 chain to the encoded register basis."""
    reg = EncodedRegisterMap(build_sector(2))
    return reg.operator_to_encoded(op).entries


def _blocks_by_site3(u_encoded: np.ndarray):
    """(occupied, empty) 2x2 blocks of a two-qubit operator over qubit 0.

    Register value 0 of qubit 1 puts its fermion on site 3; encoded indices
    {0, 2} therefore form the site-3-occupied block and {1, 3} the empty one.
    """
    occupied = u_encoded[np.ix_([0, 2], [0, 2])]
    empty = u_encoded[np.ix_([1, 3], [1, 3])]
    return occupied, empty


def _assess(name: str, synthesized: np.ndarray, reference: np.ndarray,
            parameters: dict) -> GateReport:
    """Fidelity under both register<->block assignments; keep the better."""
    swap = qubit_operator({1: "X"}, 2)
    plain = gate_fidelity(reference, synthesized)
    swapped = gate_fidelity(swap @ reference @ swap, synthesized)
    if plain >= swapped:
        fidelity, assignment = plain, "plain"
    else:
        fidelity, assignment = swapped, "swapped"
    occupied, empty = _blocks_by_site3(synthesized)
    report = GateReport(
        gate=name,
        fidelity=fidelity,
        passed=fidelity >= 1 - GATE_TOL,
        block_assignment=assignment,
        fidelity_plain=plain,
        fidelity_swapped=swapped,
        parameters=parameters,
        synthesized=synthesized,
        reference=reference,
    )
    report.blocks = {
        "site3_occupied": occupied.tolist(),
        "site3_empty": empty.tolist(),
    }
    return report


def cz_conjugate(u_local: np.ndarray) -> np.ndarray:
    """CZ (U x I) CZ on two qubits."""
    cz = np.diag([1.0, 1.0, 1.0, -1.0]).astype(complex)
    return cz @ np.kron(u_local, np.eye(2)) @ cz


# ---------------------------------------------------------------------------
# the four pulse syntheses

def synth_rz(theta: float, tau14: float = 1.0) -> GateReport:
    """Encoded Z rotation from the hopping-suppressed pulse.

    With tunneling gated off only the scaled site-4 potential acts; running
    H_a(tau14, 0, V4) for time t gives R_Z(-tau14 V4 t) up to phase.  Both
    site-3 blocks see the identical diagonal, so this gate is truly local.
    """
    v4 = 1.0
    t = (-theta) % TWO_PI / (tau14 * v4)
    hamiltonian = gate_ham_a(tau14, 0.0, v4, num_qubits=2, suppress_hopping=True)
    synthesized = _encoded_unitary(expm(hamiltonian, t))
    reference = np.kron(rotation_gate("Z", theta), np.eye(2))
    report = _assess("rz", synthesized, reference,
                     {"theta": theta, "tau14": tau14, "v4": v4, "t": t})
    occupied, empty = _blocks_by_site3(synthesized)
    report.checks["blocks_identical"] = bool(np.max(np.abs(occupied - empty)) < 1e-12)
    return report


def synth_hadamard_attempt(tau14: float = 1.0) -> GateReport:
    """Hadamard pulse: H_a(tau14, -1+sqrt2, 1+sqrt2) for t = pi/(sqrt8 tau14).

    Produces the encoded Hadamard in the site-3-occupied block but its
    Z-conjugate in the other, i.e. CZ H1 CZ instead of H1 x I.
    """
    t = np.pi / (np.sqrt(8.0) * tau14)
    hamiltonian = gate_ham_a(tau14, HADAMARD_PULSE["v1"], HADAMARD_PULSE["v4"])
    synthesized = _encoded_unitary(expm(hamiltonian, t))
    report = _assess("hadamard_attempt", synthesized, cz_conjugate(H2),
                     {"tau14": tau14, "t": t, **HADAMARD_PULSE})
    report.checks["separable_target_fidelity"] = gate_fidelity(
        np.kron(H2, np.eye(2)), synthesized)
    report.checks["not_separable_hadamard"] = bool(
        report.checks["separable_target_fidelity"] < 1 - 1e-3)
    return report


def synth_rx90_attempt(tau14: float = 1.0) -> GateReport:
    """Quarter-turn pulse: bare hopping H_a(tau14, 0, 0) for t = pi/(4 tau14).

    The synthesized operator is the CZ conjugate of a quarter X turn.  With
    the hopping sign as printed the occupied block turns by -pi/2, which is
    the stated target under the exchanged block assignment (equivalently,
    its adjoint); the report records which assignment validated.
    """
    t = np.pi / (4.0 * tau14)
    hamiltonian = gate_ham_a(tau14, 0.0, 0.0)
    synthesized = _encoded_unitary(expm(hamiltonian, t))
    reference = cz_conjugate(rotation_gate("X", np.pi / 2))
    report = _assess("rx90_attempt", synthesized, reference,
                     {"tau14": tau14, "t": t})
    report.checks["separable_target_fidelity"] = gate_fidelity(
        np.kron(rotation_gate("X", np.pi / 2), np.eye(2)), synthesized)
    report.checks["not_separable_rx90"] = bool(
        report.checks["separable_target_fidelity"] < 1 - 1e-3)
    return report


def _register_restriction(u_pulse: np.ndarray):
    """Restrict a pulse-basis unitary to the four register states.

    Register order (q0 q1) = 00, 01, 10, 11 corresponds to the pulse-basis
    states (sigma@1, sigma'@3), (1, 6'), (4, 3'), (4, 6').  Returns the 4x4
    block and the worst-case leakage out of the register subspace.
    """
    register_idx = [0, 3, 2, 5]
    block = u_pulse[np.ix_(register_idx, register_idx)]
    leakage = np.max(np.abs(
        block.conj().T @ block - np.eye(4)))
    return block, float(leakage)


def synth_cz(tau34: float = 1.0) -> GateReport:
    """Entangling pulse: H_b(tau34, 4/sqrt3, -1/sqrt3, 1/sqrt3), t = sqrt3 pi/(2 tau34).

    Qubit 0's fermion tunnels onto site 3 and back; the double-occupancy
    block closes a full cycle (identity) while the single-occupancy block
    picks up a minus sign on the moving branch, i.e. encoded Z.  Together
    that is exactly the encoded CZ.
    """
    t = np.sqrt(3.0) * np.pi / (2.0 * tau34)
    hamiltonian = gate_ham_b(tau34, CZ_PULSE["g"], CZ_PULSE["v3"], CZ_PULSE["v4"])
    u_pulse = expm(hamiltonian, t).entries
    synthesized, leakage = _register_restriction(u_pulse)
    reference = np.diag([1.0, 1.0, 1.0, -1.0]).astype(complex)
    report = _assess("cz", synthesized, reference,
                     {"tau34": tau34, "t": t, **CZ_PULSE})
    report.checks["register_leakage"] = leakage
    # per-block structure: sigma' on 3 -> identity, sigma' on 6 -> encoded Z
    occupied = u_pulse[np.ix_([0, 2], [0, 2])]
    empty = u_pulse[np.ix_([3, 5], [3, 5])]
    report.blocks = {"site3_doubly_occupied": occupied.tolist(),
                     "site3_single": empty.tolist()}
    report.checks["occupied_block_is_identity"] = gate_fidelity(np.eye(2), occupied)
    report.checks["empty_block_is_z"] = gate_fidelity(np.diag([1.0, -1.0]), empty)
    return report


def synth_sandwich(tau14: float = 1.0, tau34: float = 1.0) -> GateReport:
    """Interaction pulse before and after the Hadamard pulse: a clean H1.

    The two CZ pulses cancel the statistical CZ of the bare attempt, so the
    full schedule acts as the separable encoded Hadamard on qubit 0.
    """
    t_b = np.sqrt(3.0) * np.pi / (2.0 * tau34)
    t_a = np.pi / (np.sqrt(8.0) * tau14)
    h_b = gate_ham_b(tau34, CZ_PULSE["g"], CZ_PULSE["v3"], CZ_PULSE["v4"])
    h_a = gate_ham_a_pulse(tau14, HADAMARD_PULSE["v1"], HADAMARD_PULSE["v4"])
    schedule = PulseSchedule(((h_b, t_b), (h_a, t_a), (h_b, t_b)))
    u_pulse = evolve_schedule(schedule).entries
    synthesized, leakage = _register_restriction(u_pulse)
    reference = np.kron(H2, np.eye(2))
    report = _assess("hadamard_sandwich", synthesized, reference,
                     {"tau14": tau14, "tau34": tau34, "t_a": t_a, "t_b": t_b})
    report.checks["register_leakage"] = leakage
    return report


# ---------------------------------------------------------------------------
# obstruction analysis

def euler_zxz(u: np.ndarray):
    """Angles (alpha, beta, gamma) with R_Z(alpha) R_X(beta) R_Z(gamma) ~ u."""
    u = np.asarray(u, dtype=complex)
    su = u / np.sqrt(np.linalg.det(u))
    a, b = su[0, 0], su[0, 1]
    beta = 2.0 * np.arctan2(abs(b), abs(a))
    if abs(a) < 1e-12:
        alpha = -2.0 * (np.angle(b) + np.pi / 2)
        gamma = 0.0
    elif abs(b) < 1e-12:
        alpha = -2.0 * np.angle(a)
        gamma = 0.0
    else:
        sum_ag = -2.0 * np.angle(a)
        diff_ag = -2.0 * (np.angle(b) + np.pi / 2)
        alpha = (sum_ag + diff_ag) / 2
        gamma = (sum_ag - diff_ag) / 2
    composed = rotation_gate("Z", alpha) @ rotation_gate("X", beta) @ rotation_gate("Z", gamma)
    if gate_fidelity(composed, u) < 1 - 1e-9:
        raise ValueError("ZXZ decomposition failed to reproduce the unitary")
    return float(alpha), float(beta), float(gamma)


def hopping_pulse_schedule(u_local: np.ndarray, tau14: float = 1.0) -> PulseSchedule:
    """Single-well pulses realizing ``u_local`` in the site-3-occupied block.

    Z rotations come from hopping-suppressed potential pulses (identical in
    both blocks); the X rotation from a bare hopping pulse, whose sign in
    the occupied block is negative, hence the reversed duration.
    """
    alpha, beta, gamma = euler_zxz(u_local)
    steps = []
    for angle, kind in ((gamma, "z"), (beta, "x"), (alpha, "z")):
        if kind == "z":
            t = (-angle) % TWO_PI / tau14
            if t > 0:
                steps.append((gate_ham_a(tau14, 0.0, 1.0, suppress_hopping=True), t))
        else:
            t = (-angle) % (2 * TWO_PI) / (2 * tau14)
            if t > 0:
                steps.append((gate_ham_a(tau14, 0.0, 0.0), t))
    return PulseSchedule(tuple(steps))


def operator_schmidt_rank(u: np.ndarray, tol: float = 1e-9) -> int:
    """Schmidt rank of a two-qubit operator across the encoded cut."""
    folded = u.reshape(2, 2, 2, 2).transpose(0, 2, 1, 3).reshape(4, 4)
    singular = np.linalg.svd(folded, compute_uv=False)
    return int(np.sum(singular > tol * singular[0]))


_AXIS_STATES = [
    np.array([1, 0], dtype=complex),
    np.array([0, 1], dtype=complex),
    np.array([1, 1], dtype=complex) / np.sqrt(2),
    np.array([1, -1], dtype=complex) / np.sqrt(2),
    np.array([1, 1j], dtype=complex) / np.sqrt(2),
    np.array([1, -1j], dtype=complex) / np.sqrt(2),
]


def entangling_power(u: np.ndarray) -> float:
    """Mean linear entropy generated on the 36 stabilizer product states.

    The six single-qubit stabilizer states form a projective 2-design, so
    this average equals the Haar-average entangling power.
    """
    total = 0.0
    for a in _AXIS_STATES:
        for b in _AXIS_STATES:
            psi = (u @ np.kron(a, b)).reshape(2, 2)
            rho = psi @ psi.conj().T
            total += 1.0 - float(np.trace(rho @ rho).real)
    return total / 36.0


def verify_obstruction(u_local: np.ndarray, name: str = "u",
                       tau14: float = 1.0) -> GateReport:
    """Synthesize ``u_local`` with single-well pulses only and analyze it.

    Whatever the pulses, the combined two-qubit operator equals the CZ
    conjugate of the local target; it is separable exactly when the target
    is diagonal, and genuinely entangling otherwise.
    """
    schedule = hopping_pulse_schedule(u_local, tau14)
    if schedule.steps:
        synthesized = _encoded_unitary(evolve_schedule(schedule))
    else:
        synthesized = np.eye(4, dtype=complex)
    reference = cz_conjugate(u_local)
    report = _assess(f"obstruction[{name}]", synthesized, reference,
                     {"tau14": tau14, "pulses": len(schedule.steps)})
    rank = operator_schmidt_rank(synthesized)
    power = entangling_power(synthesized)
    diagonal = bool(np.max(np.abs(u_local - np.diag(np.diag(u_local)))) < 1e-12)
    report.checks.update({
        "schmidt_rank": rank,
        "entangling_power": power,
        "target_diagonal": diagonal,
        "separable": rank == 1,
    })
    return report
