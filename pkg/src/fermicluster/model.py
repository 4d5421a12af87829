"""Hamiltonian builders for the leapfrog lattice and its gate pulses.

All builders return :class:`OperatorMatrix` values: dense complex matrices
tagged with the basis they act on, with their declared role (hermitian,
unitary, projector) validated at construction.  Dense is deliberate; the
largest space used anywhere is 1024-dimensional.

Three representations of the same chain Hamiltonian are provided and are
checked against each other entrywise by the test suite:

* ``leapfrog_1d``      -- fermionic hopping on the half-filled sector,
* ``spin_hamiltonian`` -- the Jordan-Wigner four-local spin form, restricted
                          to the sector,
* ``encoded_hamiltonian`` -- the qubit-register form with Z-X-Z neighbor
                          structure on the 2^N encoded space.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .fock import ModeIndex, SectorBasis, build_sector, hopping_element

HERMITIAN_TOL = 1e-12
UNITARY_TOL = 1e-10
PROJECTOR_TOL = 1e-12

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

#: Double wells of the two-dimensional subgraph: two horizontal two-qubit
#: chains {1,4}-{3,5} and {6,9}-{8,10} coupled by the vertical well {2,7}.
SUBGRAPH_WELLS = ((1, 4), (3, 5), (2, 7), (6, 9), (8, 10))


class BasisMismatchError(ValueError):
    """Operands act on different bases."""


class RoleViolationError(ValueError):
    """Matrix entries do not satisfy the declared role invariant."""


@dataclass(frozen=True)
class OperatorMatrix:
    """Dense operator tagged with its basis and validated role."""

    entries: np.ndarray
    basis_tag: str
    role: str = "general"

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=complex)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise ValueError("entries must be a square matrix")
        entries.flags.writeable = False
        object.__setattr__(self, "entries", entries)
        if self.role == "hermitian":
            err = np.max(np.abs(entries - entries.conj().T))
            if err >= HERMITIAN_TOL:
                raise RoleViolationError(f"not hermitian: max deviation {err:.3e}")
        elif self.role == "unitary":
            err = np.max(np.abs(entries.conj().T @ entries - np.eye(len(entries))))
            if err >= UNITARY_TOL:
                raise RoleViolationError(f"not unitary: max deviation {err:.3e}")
        elif self.role == "projector":
            err = max(np.max(np.abs(entries - entries.conj().T)),
                      np.max(np.abs(entries @ entries - entries)))
            if err >= PROJECTOR_TOL:
                raise RoleViolationError(f"not a projector: max deviation {err:.3e}")
        elif self.role != "general":
            raise ValueError(f"unknown role {self.role!r}")

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def _check_tag(self, other: "OperatorMatrix"):
        if self.basis_tag != other.basis_tag:
            raise BasisMismatchError(f"{self.basis_tag} vs {other.basis_tag}")

    def __matmul__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        self._check_tag(other)
        role = "unitary" if self.role == other.role == "unitary" else "general"
        return OperatorMatrix(self.entries @ other.entries, self.basis_tag, role)

    def __add__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        self._check_tag(other)
        role = "hermitian" if self.role == other.role == "hermitian" else "general"
        return OperatorMatrix(self.entries + other.entries, self.basis_tag, role)

    def __sub__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        self._check_tag(other)
        role = "hermitian" if self.role == other.role == "hermitian" else "general"
        return OperatorMatrix(self.entries - other.entries, self.basis_tag, role)

    def __mul__(self, scalar) -> "OperatorMatrix":
        role = "hermitian" if self.role == "hermitian" and np.imag(scalar) == 0 else "general"
        return OperatorMatrix(self.entries * scalar, self.basis_tag, role)

    __rmul__ = __mul__

    def dagger(self) -> "OperatorMatrix":
        return OperatorMatrix(self.entries.conj().T, self.basis_tag, self.role)


@dataclass(frozen=True)
class PulseSchedule:
    """Ordered (hamiltonian, duration) pulses, applied first-to-last."""

    steps: tuple = field(default_factory=tuple)

    def __post_init__(self):
        steps = tuple(self.steps)
        object.__setattr__(self, "steps", steps)
        tags = {h.basis_tag for h, _ in steps}
        if len(tags) > 1:
            raise BasisMismatchError(f"pulses on mixed bases: {sorted(tags)}")
        for _, duration in steps:
            if duration < 0:
                raise ValueError("pulse durations must be non-negative")

    @property
    def basis_tag(self) -> str:
        return self.steps[0][0].basis_tag if self.steps else ""


# ---------------------------------------------------------------------------
# sector-level matrix assembly

def hop_matrix(basis: SectorBasis, i_mode, j_mode) -> np.ndarray:
    """Dense f_i+ f_j on the sector, with exact JW signs."""
    i_pos = basis.space.position(i_mode)
    j_pos = basis.space.position(j_mode)
    out = np.zeros((basis.dim, basis.dim), dtype=complex)
    for col, state in enumerate(basis.states):
        result = hopping_element(state, i_pos, j_pos)
        if result is None:
            continue
        new, sign = result
        if not basis.contains(new):
            raise ValueError(f"f_{i_mode}+ f_{j_mode} leaves the sector from {state}")
        out[basis.index(new), col] = sign
    return out


def num_matrix(basis: SectorBasis, m) -> np.ndarray:
    """Dense number operator n_m on the sector (diagonal 0/1)."""
    pos = basis.space.position(m)
    return np.diag([1.0 + 0j if s.occupied(pos) else 0.0 for s in basis.states])


def bond_matrix(basis: SectorBasis, a, b) -> np.ndarray:
    """Dense f_b+ f_a + f_a+ f_b on the sector."""
    return hop_matrix(basis, b, a) + hop_matrix(basis, a, b)


def product_ground_state(basis: SectorBasis) -> np.ndarray:
    """Exact ground state of the well-hopping Hamiltonian on this sector.

    Expands prod_wells (f_a+ + f_b+)/sqrt(2) |vac> in group order, with all
    signs from the operator algebra.  Each well's bonding orbital carries
    energy -tau, so this is the unique sector ground state of any
    -tau * sum_wells (f_b+ f_a + h.c.) with tau > 0.
    """
    from .fock import FockState, apply_creation

    amplitudes = {0: 1.0 + 0.0j}
    inv_sqrt2 = 1.0 / np.sqrt(2.0)
    # operator products act right to left: the last well's orbital is
    # created first, so the expansion matches the left-to-right product
    for group in reversed(basis.groups):
        if len(group) != 2:
            raise ValueError("product ground state needs two-mode wells")
        grown = {}
        for occ, amp in amplitudes.items():
            state = FockState(occ, basis.space.mode_count)
            for m in group:
                new, sign = apply_creation(state, basis.space.position(m))
                grown[new.occupation] = grown.get(new.occupation, 0.0) + amp * sign * inv_sqrt2
        amplitudes = grown
    vector = np.zeros(basis.dim, dtype=complex)
    for occ, amp in amplitudes.items():
        vector[basis.index_of[occ]] = amp
    return vector


# ---------------------------------------------------------------------------
# chain Hamiltonians

def leapfrog_1d(num_qubits: int, tau: float) -> OperatorMatrix:
    """-tau * sum_j (f_{2j+4}+ f_{2j+1} + h.c.) on the half-filled sector."""
    if tau <= 0:
        raise ValueError("tau must be positive")
    basis = build_sector(num_qubits)
    h = np.zeros((basis.dim, basis.dim), dtype=complex)
    for a, b in basis.groups:
        h -= tau * bond_matrix(basis, a, b)
    return OperatorMatrix(h, basis.tag, "hermitian")


def _apply_pauli_string(ops_by_site: dict, bits: int):
    """Apply a Pauli string to a site-occupation basis state (site s -> bit s-1).

    Returns (coefficient, image bits); every string maps a basis state to
    exactly one basis state.
    """
    coeff = 1.0 + 0.0j
    out = bits
    for site, p in ops_by_site.items():
        b = (out >> (site - 1)) & 1
        if p == "Z":
            if b:
                coeff = -coeff
        elif p == "X":
            out ^= 1 << (site - 1)
        elif p == "Y":
            coeff *= 1j if b == 0 else -1j
            out ^= 1 << (site - 1)
        else:
            raise ValueError(f"unknown Pauli {p!r}")
    return coeff, out


def spin_hamiltonian(num_qubits: int, tau: float) -> OperatorMatrix:
    """Four-local JW spin form of the chain, restricted to the sector.

    The spin lattice carries all sites 1..2N+2 including the unpaired ones;
    each hopping term becomes -(tau/2) Z_{2j+2} Z_{2j+3} (X_{2j+1} X_{2j+4}
    + Y_{2j+1} Y_{2j+4}).  The restriction is computed by applying each
    string to the sector states directly, which is exactly the projection of
    the full 2^(2N+2) operator and never materializes it.
    """
    basis = build_sector(num_qubits)
    site_of = [m.site for m in basis.space.modes]
    terms = []
    for j in range(num_qubits):
        a, b = 2 * j + 1, 2 * j + 4
        string = {2 * j + 2: "Z", 2 * j + 3: "Z"}
        terms.append((-tau / 2, {**string, a: "X", b: "X"}))
        terms.append((-tau / 2, {**string, a: "Y", b: "Y"}))

    def to_site_bits(state):
        bits = 0
        for pos, site in enumerate(site_of):
            if state.occupied(pos):
                bits |= 1 << (site - 1)
        return bits

    site_bits = [to_site_bits(s) for s in basis.states]
    index_by_bits = {bits: k for k, bits in enumerate(site_bits)}
    h = np.zeros((basis.dim, basis.dim), dtype=complex)
    for coeff, string in terms:
        for col, bits in enumerate(site_bits):
            amp, image = _apply_pauli_string(string, bits)
            row = index_by_bits.get(image)
            if row is None:
                raise ValueError("spin term leaves the half-filled sector")
            h[row, col] += coeff * amp
    return OperatorMatrix(h, basis.tag, "hermitian")


def qubit_operator(ops_by_qubit: dict, num_qubits: int) -> np.ndarray:
    """Dense operator on an N-qubit register, qubit 0 the leading factor."""
    out = np.eye(1, dtype=complex)
    for q in range(num_qubits):
        out = np.kron(out, PAULI[ops_by_qubit.get(q, "I")])
    return out


def qubits_tag(num_qubits: int) -> str:
    return f"qubits({num_qubits})"


def encoded_hamiltonian(num_qubits: int, tau: float) -> OperatorMatrix:
    """Chain Hamiltonian on the 2^N encoded register space.

    With register qubits labeled 0..N-1 (one per double well, left to
    right): +tau * sum_{q=0}^{N-2} Z_{q-1} X_q Z_{q+1} (the q=0 term has no
    left Z) together with the boundary term -tau * Z_{N-2} X_{N-1}; for a
    single qubit only the boundary term -tau * X_0 survives.
    """
    n = num_qubits
    h = np.zeros((2 ** n, 2 ** n), dtype=complex)
    for q in range(n - 1):
        ops = {q: "X", q + 1: "Z"}
        if q > 0:
            ops[q - 1] = "Z"
        h += tau * qubit_operator(ops, n)
    boundary = {n - 1: "X"}
    if n > 1:
        boundary[n - 2] = "Z"
    h -= tau * qubit_operator(boundary, n)
    return OperatorMatrix(h, qubits_tag(n), "hermitian")


def cluster_state(num_qubits: int) -> np.ndarray:
    """CZ on every neighbor pair of |+...+>: the 1D cluster state."""
    n = num_qubits
    state = np.full(2 ** n, 1 / np.sqrt(2) ** n, dtype=complex)
    for q in range(n - 1):
        for idx in range(2 ** n):
            if (idx >> (n - 1 - q)) & 1 and (idx >> (n - 2 - q)) & 1:
                state[idx] *= -1
    return state


def dressed_cluster_state(num_qubits: int) -> np.ndarray:
    """Cluster state with Z applied to all but the last qubit.

    This is the encoded-register form of the half-filled ground state; the
    Z dressing carries the sign structure the fermionic expansion produces.
    """
    n = num_qubits
    state = cluster_state(n)
    for q in range(n - 1):
        for idx in range(2 ** n):
            if (idx >> (n - 1 - q)) & 1:
                state[idx] *= -1
    return state


def cluster_hamiltonian(num_qubits: int, tau: float) -> OperatorMatrix:
    """-tau * sum_i X_i prod_{j in N(i)} Z_j on an open 1D chain of qubits."""
    n = num_qubits
    h = np.zeros((2 ** n, 2 ** n), dtype=complex)
    for q in range(n):
        ops = {q: "X"}
        if q > 0:
            ops[q - 1] = "Z"
        if q < n - 1:
            ops[q + 1] = "Z"
        h -= tau * qubit_operator(ops, n)
    return OperatorMatrix(h, qubits_tag(n), "hermitian")


# ---------------------------------------------------------------------------
# two-dimensional subgraph

def subgraph_basis() -> SectorBasis:
    return SectorBasis(SUBGRAPH_WELLS)


def subgraph_2d(tau: float) -> OperatorMatrix:
    """Hopping on the ten-site subgraph, one fermion per double well."""
    if tau <= 0:
        raise ValueError("tau must be positive")
    basis = subgraph_basis()
    h = np.zeros((basis.dim, basis.dim), dtype=complex)
    for a, b in basis.groups:
        h -= tau * bond_matrix(basis, a, b)
    return OperatorMatrix(h, basis.tag, "hermitian")


# ---------------------------------------------------------------------------
# gate-pulse Hamiltonians

def gate_ham_a(tau14: float, v1: float, v4: float, num_qubits: int = 2,
               suppress_hopping: bool = False) -> OperatorMatrix:
    """Two-site pulse on qubit 0's well: tau14*(f4+ f1 + f1+ f4 + V1 n1 + V4 n4).

    The overall prefactor multiplies the potential terms as well, so the
    generated unitary depends on pulse parameters only through tau14*t.
    With ``suppress_hopping`` the tunneling is switched off (strong barrier
    limit) and only the scaled potentials remain, which generates encoded
    Z rotations.
    """
    basis = build_sector(num_qubits)
    h = tau14 * (v1 * num_matrix(basis, 1) + v4 * num_matrix(basis, 4))
    if not suppress_hopping:
        h = h + tau14 * bond_matrix(basis, 1, 4)
    return OperatorMatrix(h, basis.tag, "hermitian")


def pulse_basis() -> SectorBasis:
    """Two-species basis for the interaction pulse.

    Species 0 carries qubit 0 and may visit sites 1, 3, 4 during the pulse;
    species 1 carries qubit 1, frozen at site 3 or 6 (its own tunneling is
    gated off while the pulse runs).  One fermion per species; dimension 6.
    """
    sigma = tuple(ModeIndex(s, 0) for s in (1, 3, 4))
    sigma_prime = tuple(ModeIndex(s, 1) for s in (3, 6))
    return SectorBasis((sigma, sigma_prime))


def gate_ham_a_pulse(tau14: float, v1: float, v4: float,
                     suppress_hopping: bool = False) -> OperatorMatrix:
    """Same pulse as :func:`gate_ham_a`, on the two-species pulse basis."""
    basis = pulse_basis()
    h = tau14 * (v1 * num_matrix(basis, ModeIndex(1, 0))
                 + v4 * num_matrix(basis, ModeIndex(4, 0)))
    if not suppress_hopping:
        h = h + tau14 * bond_matrix(basis, ModeIndex(1, 0), ModeIndex(4, 0))
    return OperatorMatrix(h, basis.tag, "hermitian")


def gate_ham_b(tau34: float, g: float, v3: float, v4: float) -> OperatorMatrix:
    """Interaction pulse: tau34*(f4s+ f3s + h.c. + g n3s n3s' + V3 n3s + V4 n4s).

    Lets qubit 0's fermion (species 0) tunnel onto site 3 where it can
    collide with qubit 1's fermion (species 1) when the latter sits there.
    """
    basis = pulse_basis()
    site3_s = ModeIndex(3, 0)
    site3_sp = ModeIndex(3, 1)
    site4_s = ModeIndex(4, 0)
    n3 = num_matrix(basis, site3_s)
    n3p = num_matrix(basis, site3_sp)
    h = tau34 * (bond_matrix(basis, site3_s, site4_s)
                 + g * n3 @ n3p + v3 * n3 + v4 * num_matrix(basis, site4_s))
    return OperatorMatrix(h, basis.tag, "hermitian")
