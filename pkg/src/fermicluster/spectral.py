"""Exact dense Hermitian eigendecomposition and unitary time evolution.

Eigenvector phases are fixed deterministically: the largest-magnitude
component of each eigenvector (first such index on ties) is made real and
positive, so repeated runs produce identical spectra.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import OperatorMatrix, PulseSchedule

DEGENERACY_TOL = 1e-8


class NotHermitianError(ValueError):
    """Operation requires an operator with the hermitian role."""


@dataclass(frozen=True)
class Spectrum:
    """Full eigendecomposition: ascending eigenvalues, orthonormal columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    basis_tag: str

    def __post_init__(self):
        for arr in (self.eigenvalues, self.eigenvectors):
            arr.flags.writeable = False


@dataclass(frozen=True)
class GroundState:
    """Lowest eigenvalue data; ``vector`` is None when quasi-degenerate."""

    energy: float
    vector: np.ndarray | None
    degeneracy: int
    gap: float


def _require_hermitian(op: OperatorMatrix):
    if op.role not in ("hermitian", "projector"):
        raise NotHermitianError(f"need a hermitian operator, got role {op.role!r}")


def diagonalize(op: OperatorMatrix) -> Spectrum:
    _require_hermitian(op)
    values, vectors = np.linalg.eigh(op.entries)
    vectors = np.array(vectors)
    for k in range(vectors.shape[1]):
        column = vectors[:, k]
        lead = int(np.argmax(np.abs(column)))
        phase = column[lead] / abs(column[lead])
        vectors[:, k] = column * np.conj(phase)
    return Spectrum(values, vectors, op.basis_tag)


def ground_state(op: OperatorMatrix) -> GroundState:
    """Ground energy, eigenvector (unique case), degeneracy, and gap."""
    spec = diagonalize(op)
    values = spec.eigenvalues
    if len(values) == 1:
        return GroundState(float(values[0]), spec.eigenvectors[:, 0].copy(), 1, np.inf)
    degeneracy = int(np.sum(values - values[0] < DEGENERACY_TOL))
    gap = float(values[1] - values[0])
    vector = spec.eigenvectors[:, 0].copy() if degeneracy == 1 else None
    return GroundState(float(values[0]), vector, degeneracy, gap)


def expm(op: OperatorMatrix, t: float) -> OperatorMatrix:
    """U = exp(-i t H) through the spectral decomposition of hermitian H."""
    _require_hermitian(op)
    spec = diagonalize(op)
    phases = np.exp(-1j * t * spec.eigenvalues)
    u = (spec.eigenvectors * phases) @ spec.eigenvectors.conj().T
    return OperatorMatrix(u, op.basis_tag, "unitary")


def evolve_schedule(schedule: PulseSchedule) -> OperatorMatrix:
    """Unitary for a pulse sequence, first pulse applied first."""
    if not schedule.steps:
        raise ValueError("empty pulse schedule")
    total = None
    for hamiltonian, duration in schedule.steps:
        u = expm(hamiltonian, duration)
        total = u if total is None else u @ total
    return total
