import numpy as np
import pytest

from fermicluster.fock import ModeIndex, SectorBasis, build_sector
from fermicluster.model import (
    OperatorMatrix,
    BasisMismatchError,
    PulseSchedule,
    RoleViolationError,
    SUBGRAPH_WELLS,
    bond_matrix,
    cluster_hamiltonian,
    encoded_hamiltonian,
    gate_ham_a,
    gate_ham_b,
    gate_ham_a_pulse,
    leapfrog_1d,
    product_ground_state,
    pulse_basis,
    qubit_operator,
    spin_hamiltonian,
    subgraph_2d,
    subgraph_basis,
)
from oracles import pauli_string_matrix

SQRT2 = np.sqrt(2.0)


class TestOperatorMatrix:
    def test_hermitian_role_rejects_nonhermitian(self):
        with pytest.raises(RoleViolationError):
            OperatorMatrix(np.array([[0, 1], [0, 0]]), "t", "hermitian")

    def test_unitary_role_rejects_nonunitary(self):
        with pytest.raises(RoleViolationError):
            OperatorMatrix(np.array([[1, 0], [0, 2]]), "t", "unitary")

    def test_projector_role(self):
        OperatorMatrix(np.diag([1.0, 0.0]), "t", "projector")
        with pytest.raises(RoleViolationError):
            OperatorMatrix(np.diag([1.0, 0.5]), "t", "projector")

    def test_tag_mismatch_blocks_algebra(self):
        a = OperatorMatrix(np.eye(2), "a", "hermitian")
        b = OperatorMatrix(np.eye(2), "b", "hermitian")
        with pytest.raises(BasisMismatchError):
            a @ b
        with pytest.raises(BasisMismatchError):
            a + b

    def test_role_propagation(self):
        x = OperatorMatrix(np.array([[0, 1], [1, 0]]), "t", "hermitian")
        assert (x + x).role == "hermitian"
        assert (2.0 * x).role == "hermitian"
        assert (2j * x).role == "general"
        u = OperatorMatrix(np.diag([1, 1j]), "t", "unitary")
        assert (u @ u).role == "unitary"

    def test_entries_are_frozen(self):
        x = OperatorMatrix(np.eye(2), "t", "hermitian")
        with pytest.raises(ValueError):
            x.entries[0, 0] = 5.0

    def test_pulse_schedule_validation(self):
        h = OperatorMatrix(np.eye(2), "t", "hermitian")
        with pytest.raises(ValueError):
            PulseSchedule(((h, -1.0),))
        other = OperatorMatrix(np.eye(2), "u", "hermitian")
        with pytest.raises(BasisMismatchError):
            PulseSchedule(((h, 1.0), (other, 1.0)))


class TestLeapfrog:
    def test_single_well_matrix(self):
        h = leapfrog_1d(1, tau=1.0)
        assert np.array_equal(h.entries, np.array([[0, -1], [-1, 0]], dtype=complex))

    def test_two_well_matrix(self):
        # sector order |1100>, |0110>, |1001>, |0011>: the 1<->4 hop crosses
        # the site-3 fermion in the first pair, the 3<->6 hop crosses site 4
        # in the second.
        expected = np.array([
            [0, 1, -1, 0],
            [1, 0, 0, 1],
            [-1, 0, 0, -1],
            [0, 1, -1, 0],
        ], dtype=complex)
        assert np.array_equal(leapfrog_1d(2, tau=1.0).entries, expected)

    def test_tau_must_be_positive(self):
        with pytest.raises(ValueError):
            leapfrog_1d(2, tau=0.0)

    def test_relabeled_wells_same_spectrum(self):
        # pairing {1,3} and {4,6} instead of {1,4} and {3,6} leaves the
        # spectrum unchanged
        alt = SectorBasis(((1, 3), (4, 6)))
        h_alt = -(bond_matrix(alt, 1, 3) + bond_matrix(alt, 4, 6))
        assert np.allclose(
            np.linalg.eigvalsh(h_alt),
            np.linalg.eigvalsh(leapfrog_1d(2, 1.0).entries),
            atol=1e-12,
        )

    def test_product_ground_state_is_eq8(self):
        basis = build_sector(2)
        vec = product_ground_state(basis)
        by_ket = {basis.states[k].ket(): vec[k] for k in range(4)}
        expected = {"|1100>": 0.5, "|1001>": 0.5, "|0110>": -0.5, "|0011>": 0.5}
        for ket, amp in expected.items():
            assert abs(by_ket[ket] - amp) < 1e-15

    def test_product_ground_state_is_exact_eigenvector(self):
        for n in range(1, 6):
            h = leapfrog_1d(n, tau=1.0)
            vec = product_ground_state(build_sector(n))
            assert np.allclose(h.entries @ vec, -n * vec, atol=1e-12)
            assert abs(np.linalg.norm(vec) - 1) < 1e-12


class TestSpinRepresentation:
    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_restriction_matches_dense_kron_oracle(self, n):
        num_sites = 2 * n + 2
        dense = np.zeros((2 ** num_sites, 2 ** num_sites), dtype=complex)
        for j in range(n):
            a, b = 2 * j + 1, 2 * j + 4
            for paulis in ("XX", "YY"):
                string = {2 * j + 2: "Z", 2 * j + 3: "Z",
                          a: paulis[0], b: paulis[1]}
                dense -= 0.5 * pauli_string_matrix(string, num_sites)
        basis = build_sector(n)
        columns = []
        for state in basis.states:
            bits = 0
            for pos, m in enumerate(basis.space.modes):
                if state.occupied(pos):
                    bits |= 1 << (m.site - 1)
            columns.append(bits)
        projected = dense[np.ix_(columns, columns)]
        assert np.allclose(spin_hamiltonian(n, 1.0).entries, projected, atol=1e-14)

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
    def test_matches_fermionic_form_entrywise(self, n):
        diff = spin_hamiltonian(n, 1.0).entries - leapfrog_1d(n, 1.0).entries
        assert np.max(np.abs(diff)) < 1e-12

    def test_each_term_touches_four_sites(self):
        # Z Z X X / Z Z Y Y on sites (2j+2, 2j+3, 2j+1, 2j+4): all distinct
        for j in range(4):
            sites = {2 * j + 2, 2 * j + 3, 2 * j + 1, 2 * j + 4}
            assert len(sites) == 4


class TestEncodedAndCluster:
    def test_single_qubit_forms(self):
        x = qubit_operator({0: "X"}, 1)
        assert np.array_equal(encoded_hamiltonian(1, 1.0).entries, -x)
        assert np.array_equal(cluster_hamiltonian(1, 1.0).entries, -x)

    def test_two_qubit_encoded_form(self):
        expected = qubit_operator({0: "X", 1: "Z"}, 2) - qubit_operator({0: "Z", 1: "X"}, 2)
        assert np.array_equal(encoded_hamiltonian(2, 1.0).entries, expected)

    @pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
    def test_z_conjugation_gives_cluster_form(self, n):
        conj = np.eye(1, dtype=complex)
        conj = qubit_operator({q: "Z" for q in range(n - 1)}, n)
        mapped = conj @ encoded_hamiltonian(n, 1.0).entries @ conj
        assert np.allclose(mapped, cluster_hamiltonian(n, 1.0).entries, atol=1e-14)

    @pytest.mark.parametrize("n", list(range(1, 11)))
    def test_cluster_ground_energy(self, n):
        values = np.linalg.eigvalsh(cluster_hamiltonian(n, 1.0).entries)
        assert abs(values[0] + n) < 1e-10

    @pytest.mark.parametrize("n", [1, 2, 3, 5])
    def test_cluster_ground_state_is_cz_construction(self, n):
        state = np.full(2 ** n, 1 / np.sqrt(2) ** n, dtype=complex)
        for q in range(n - 1):
            for idx in range(2 ** n):
                if (idx >> (n - 1 - q)) & 1 and (idx >> (n - 2 - q)) & 1:
                    state[idx] *= -1
        h = cluster_hamiltonian(n, 1.0).entries
        assert np.allclose(h @ state, -n * state, atol=1e-12)
        values, vectors = np.linalg.eigh(h)
        overlap = abs(np.vdot(vectors[:, 0], state))
        assert overlap > 1 - 1e-12


class TestSubgraph:
    def test_dimension(self):
        h = subgraph_2d(1.0)
        assert h.entries.shape == (32, 32)

    def test_wells(self):
        assert SUBGRAPH_WELLS == ((1, 4), (3, 5), (2, 7), (6, 9), (8, 10))
        sites = {m.site for m in subgraph_basis().space.modes}
        assert sites == set(range(1, 11))

    def test_ground_energy_and_uniqueness(self):
        values = np.linalg.eigvalsh(subgraph_2d(1.0).entries)
        assert abs(values[0] + 5) < 1e-12
        assert values[1] - values[0] > 1.0  # gapped, unique ground state

    def test_ground_state_is_bonding_product(self):
        basis = subgraph_basis()
        vec = product_ground_state(basis)
        h = subgraph_2d(1.0).entries
        assert np.allclose(h @ vec, -5 * vec, atol=1e-12)
        values, vectors = np.linalg.eigh(h)
        assert abs(np.vdot(vectors[:, 0], vec)) > 1 - 1e-12


class TestGatePulses:
    def test_single_well_pulse_matrix(self):
        h = gate_ham_a(1.0, 0.0, 0.0, num_qubits=1)
        assert np.array_equal(h.entries, np.array([[0, 1], [1, 0]], dtype=complex))

    def test_two_qubit_pulse_block_signs(self):
        v1, v4 = -1 + np.sqrt(2), 1 + np.sqrt(2)
        h = gate_ham_a(1.0, v1, v4, num_qubits=2).entries
        # sector order |1100>, |0110>, |1001>, |0011>; site-3 occupied in the
        # first two, empty in the last two; the hop sign flips with it.
        assert h[1, 0] == -1 and h[0, 1] == -1
        assert h[3, 2] == +1 and h[2, 3] == +1
        assert np.allclose(np.diag(h), [v1, v4, v1, v4], atol=1e-15)

    def test_prefactor_scales_potentials(self):
        assert np.allclose(gate_ham_a(2.0, 0.5, 0.25).entries,
                           2.0 * gate_ham_a(1.0, 0.5, 0.25).entries, atol=1e-15)

    def test_suppressed_hopping_is_diagonal(self):
        h = gate_ham_a(1.0, 0.0, 1.0, suppress_hopping=True).entries
        assert np.array_equal(h, np.diag(np.diag(h)))

    def test_pulse_basis_block_layout(self):
        basis = pulse_basis()
        assert basis.dim == 6
        labels = [tuple(str(m) for m in basis.space.occupied_modes(s))
                  for s in basis.states]
        # occupied modes listed in lexicographic (site, species) order, so
        # sigma' on site 3 prints before sigma on site 4
        assert labels == [
            ("1", "3s1"), ("3", "3s1"), ("3s1", "4"),
            ("1", "6s1"), ("3", "6s1"), ("4", "6s1"),
        ]

    def test_gate_ham_b_entries(self):
        g, v3, v4 = 4 / np.sqrt(3), -1 / np.sqrt(3), 1 / np.sqrt(3)
        h = gate_ham_b(1.0, g, v3, v4).entries
        assert np.allclose(np.diag(h), [0, g + v3, v4, 0, v3, v4], atol=1e-15)
        # sigma hop 3<->4 formally crosses the sigma' fermion parked on
        # site 3 in the first block and nothing in the second
        assert h[2, 1] == -1 and h[1, 2] == -1
        assert h[5, 4] == +1 and h[4, 5] == +1
        assert h[3, 0] == 0  # sigma on site 1 never moves under this pulse

    def test_gate_ham_b_plain_hopping_block_when_g_zero(self):
        h = gate_ham_b(1.0, 0.0, 0.3, 0.7).entries
        second_block = h[np.ix_([4, 5], [4, 5])]
        assert np.allclose(second_block, [[0.3, 1.0], [1.0, 0.7]], atol=1e-15)

    def test_gate_ham_a_pulse_matches_sector_version_on_registers(self):
        # register states of the two-species basis reproduce the N=2 sector
        # matrix of the same pulse
        v1, v4 = 0.3, -0.2
        full = gate_ham_a_pulse(1.0, v1, v4).entries
        register_idx = [0, 3, 2, 5]  # (1,3'),(1,6'),(4,3'),(4,6') in encoded order
        sector = gate_ham_a(1.0, v1, v4, num_qubits=2).entries
        # sector in encoded order 00,01,10,11 = |1100>,|1001>,|0110>,|0011>
        enc_order = [0, 2, 1, 3]
        assert np.allclose(full[np.ix_(register_idx, register_idx)],
                           sector[np.ix_(enc_order, enc_order)], atol=1e-15)

    def test_hermiticity_of_all_builders(self):
        for op in (leapfrog_1d(3, 0.7), spin_hamiltonian(3, 0.7),
                   encoded_hamiltonian(3, 0.7), cluster_hamiltonian(3, 0.7),
                   subgraph_2d(0.7), gate_ham_a(1.3, 0.2, -0.4),
                   gate_ham_b(1.3, 0.5, 0.2, -0.4), gate_ham_a_pulse(1.1, 0.0, 0.9)):
            assert op.role == "hermitian"
