"""Encoded-qubit layer: register bijection, encoded operators, measurement.

Each double well (a, b) holding exactly one fermion encodes a qubit:
``|0>`` register = fermion on the first site, ``|1>`` = fermion on the
second.  Encoded bitstrings map to sector Fock states with coefficient +1
(both bases use the increasing-mode-order creation convention), so the
register bijection is a pure permutation.

Encoded X (and everything built from it) multiplies the bare well hopping
by parity factors ``(1 - 2 n_m)`` over every mode lying strictly between
the two well sites in the mode ordering.  Those factors cancel the
Jordan-Wigner string of the hop, which is what makes the operator act as a
plain single-qubit X on the register space even though its fermionic form
touches intervening sites.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fock import SectorBasis
from .model import OperatorMatrix, num_matrix, bond_matrix, qubit_operator, qubits_tag

PROBABILITY_TOL = 1e-12


class ZeroNormError(ValueError):
    """Measurement attempted on a state with no weight in either branch."""


class EncodedRegisterMap:
    """Bijection between encoded bitstrings and half-filled sector states.

    Qubit ``q`` is the q-th declared well; encoded basis index
    ``sum_q b_q 2^(N-1-q)`` (qubit 0 leading, matching the usual tensor
    ordering).
    """

    def __init__(self, basis: SectorBasis):
        if any(len(g) != 2 for g in basis.groups):
            raise ValueError("register map needs two-mode wells")
        self.basis = basis
        self.n = len(basis.groups)
        dim = 1 << self.n
        enc_to_sec = np.empty(dim, dtype=np.intp)
        for bits in range(dim):
            occupied = [well[(bits >> (self.n - 1 - q)) & 1]
                        for q, well in enumerate(basis.groups)]
            enc_to_sec[bits] = basis.index(basis.space.state_with(occupied))
        self._enc_to_sec = enc_to_sec
        self._sec_to_enc = np.empty(dim, dtype=np.intp)
        self._sec_to_enc[enc_to_sec] = np.arange(dim)

    def sector_index(self, bits: int) -> int:
        return int(self._enc_to_sec[bits])

    def encoded_index(self, sector_index: int) -> int:
        return int(self._sec_to_enc[sector_index])

    def to_encoded(self, sector_vector: np.ndarray) -> np.ndarray:
        return np.asarray(sector_vector)[self._enc_to_sec]

    def to_sector(self, encoded_vector: np.ndarray) -> np.ndarray:
        return np.asarray(encoded_vector)[self._sec_to_enc]

    def operator_to_encoded(self, op: OperatorMatrix) -> OperatorMatrix:
        if op.basis_tag != self.basis.tag:
            raise ValueError(f"operator lives on {op.basis_tag}, not {self.basis.tag}")
        entries = op.entries[np.ix_(self._enc_to_sec, self._enc_to_sec)]
        return OperatorMatrix(entries, qubits_tag(self.n), op.role)

    def operator_to_sector(self, op: OperatorMatrix) -> OperatorMatrix:
        if op.basis_tag != qubits_tag(self.n):
            raise ValueError(f"operator lives on {op.basis_tag}, not {qubits_tag(self.n)}")
        entries = op.entries[np.ix_(self._sec_to_enc, self._sec_to_enc)]
        return OperatorMatrix(entries, self.basis.tag, op.role)


def _well(basis: SectorBasis, j: int):
    if not 0 <= j < len(basis.groups):
        raise IndexError(f"qubit {j} out of range for {len(basis.groups)} wells")
    well = basis.groups[j]
    if len(well) != 2:
        raise ValueError("encoded operators need a two-mode well")
    return well


def encoded_z(basis: SectorBasis, j: int) -> OperatorMatrix:
    """Diagonal +1/-1 on the sector: 1 - 2 n_(second site of well j)."""
    _, second = _well(basis, j)
    entries = np.eye(basis.dim, dtype=complex) - 2 * num_matrix(basis, second)
    return OperatorMatrix(entries, basis.tag, "hermitian")


def _intervening_parity(basis: SectorBasis, j: int) -> np.ndarray:
    first, second = _well(basis, j)
    lo, hi = sorted((basis.space.position(first), basis.space.position(second)))
    parity = np.eye(basis.dim, dtype=complex)
    for pos in range(lo + 1, hi):
        parity = parity @ (np.eye(basis.dim) - 2 * num_matrix(basis, basis.space.modes[pos]))
    return parity


def encoded_x(basis: SectorBasis, j: int) -> OperatorMatrix:
    """Well hop dressed with intervening-density parity factors."""
    first, second = _well(basis, j)
    entries = _intervening_parity(basis, j) @ bond_matrix(basis, first, second)
    return OperatorMatrix(entries, basis.tag, "hermitian")


def encoded_y(basis: SectorBasis, j: int) -> OperatorMatrix:
    entries = -1j * encoded_z(basis, j).entries @ encoded_x(basis, j).entries
    return OperatorMatrix(entries, basis.tag, "hermitian")


_PAULI_BUILDERS = {"X": encoded_x, "Y": encoded_y, "Z": encoded_z}


def encoded_pauli(basis: SectorBasis, axis: str, j: int) -> OperatorMatrix:
    return _PAULI_BUILDERS[axis.upper()](basis, j)


def encoded_rotation(basis: SectorBasis, axis: str, theta: float, j: int) -> OperatorMatrix:
    """exp(-i theta/2 * encoded Pauli) = cos(theta/2) I - i sin(theta/2) P."""
    pauli = encoded_pauli(basis, axis, j)
    entries = (np.cos(theta / 2) * np.eye(basis.dim)
               - 1j * np.sin(theta / 2) * pauli.entries)
    return OperatorMatrix(entries, basis.tag, "unitary")


def encoded_hadamard(basis: SectorBasis, j: int) -> OperatorMatrix:
    """Encoded Hadamard: Z followed by a -pi/2 rotation about encoded Y."""
    entries = encoded_z(basis, j).entries @ encoded_rotation(basis, "Y", -np.pi / 2, j).entries
    return OperatorMatrix(entries, basis.tag, "unitary")


def encoded_projector(basis: SectorBasis, j: int, outcome: int) -> OperatorMatrix:
    """Projector onto register value ``outcome`` of qubit j.

    Outcome 0 detects the fermion on the well's first site, outcome 1 on
    the second; on the sector these are the corresponding number operators.
    """
    if outcome not in (0, 1):
        raise ValueError("outcome must be 0 or 1")
    site = _well(basis, j)[outcome]
    return OperatorMatrix(num_matrix(basis, site), basis.tag, "projector")


@dataclass(frozen=True)
class MeasurementRecord:
    """One projective register measurement: outcome, its Born probability,
    and the pre-normalization norm of the projected branch."""

    qubit: int
    outcome: int
    probability: float
    post_state_norm: float
    seed: int | None = None


def as_rng(seed_or_rng) -> np.random.Generator:
    if isinstance(seed_or_rng, np.random.Generator):
        return seed_or_rng
    return np.random.default_rng(seed_or_rng)


def born_probabilities(state: np.ndarray, basis: SectorBasis, j: int):
    """(p0, p1) for measuring qubit j of a normalized sector state."""
    weights = [0.0, 0.0]
    first_pos = basis.space.position(_well(basis, j)[0])
    for k, basis_state in enumerate(basis.states):
        branch = 0 if basis_state.occupied(first_pos) else 1
        weights[branch] += abs(state[k]) ** 2
    return float(weights[0]), float(weights[1])


def project_encoded(state: np.ndarray, basis: SectorBasis, j: int, outcome: int,
                    seed: int | None = None):
    """Deterministically project qubit j onto ``outcome`` and renormalize."""
    p0, p1 = born_probabilities(state, basis, j)
    if p0 + p1 < PROBABILITY_TOL:
        raise ZeroNormError("state has no support on either branch")
    probability = (p0, p1)[outcome]
    if probability < PROBABILITY_TOL:
        raise ZeroNormError(f"outcome {outcome} has zero weight on qubit {j}")
    projected = encoded_projector(basis, j, outcome).entries @ state
    norm = float(np.linalg.norm(projected))
    record = MeasurementRecord(j, outcome, probability, norm, seed)
    return record, projected / norm


def measure_encoded(state: np.ndarray, basis: SectorBasis, j: int, rng):
    """Sample a register measurement of qubit j with Born probabilities.

    ``rng`` is a seed or a numpy Generator; the outcome is chosen by
    comparing a single uniform draw against p0, so runs are reproducible
    bit for bit given the seed.
    """
    seed = rng if isinstance(rng, (int, np.integer)) else None
    generator = as_rng(rng)
    p0, _ = born_probabilities(state, basis, j)
    outcome = 0 if generator.random() < p0 else 1
    return project_encoded(state, basis, j, outcome, seed=seed)
