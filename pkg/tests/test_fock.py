import numpy as np
import pytest
from hypothesis import given, strategies as st

from fermicluster.fock import (
    FockState,
    ModeEmptyError,
    ModeIndex,
    ModeOccupiedError,
    ModeSpace,
    SectorBasis,
    apply_annihilation,
    apply_creation,
    build_sector,
    chain_wells,
    hopping_element,
    jw_parity,
)
from oracles import annihilation_matrix, creation_matrix, number_matrix


def op_matrix(space, func):
    """Dense matrix of a one-state-to-one-state map built from the fock ops."""
    dim = 1 << space.mode_count
    out = np.zeros((dim, dim), dtype=complex)
    for state in space.all_states():
        result = func(state)
        if result is not None:
            new, sign = result
            out[new.occupation, state.occupation] += sign
    return out


def creation_op(space, pos):
    def apply(state):
        try:
            return apply_creation(state, pos)
        except ModeOccupiedError:
            return None
    return op_matrix(space, apply)


def annihilation_op(space, pos):
    def apply(state):
        try:
            return apply_annihilation(state, pos)
        except ModeEmptyError:
            return None
    return op_matrix(space, apply)


SITES_6 = ModeSpace(range(1, 7))
SITES_1346 = ModeSpace([1, 3, 4, 6])


class TestLadderExamples:
    def test_create_on_vacuum(self):
        state, sign = apply_creation(SITES_6.vacuum(), SITES_6.position(1))
        assert state == SITES_6.state_with([1])
        assert sign == +1

    def test_create_past_one_occupied_predecessor(self):
        start = SITES_6.state_with([3])
        state, sign = apply_creation(start, SITES_6.position(4))
        assert state == SITES_6.state_with([3, 4])
        assert sign == -1

    def test_double_creation_is_forbidden(self):
        start = SITES_6.state_with([4])
        with pytest.raises(ModeOccupiedError):
            apply_creation(start, SITES_6.position(4))

    def test_annihilate_sole_fermion(self):
        state, sign = apply_annihilation(SITES_6.state_with([1]), SITES_6.position(1))
        assert state == SITES_6.vacuum()
        assert sign == +1

    def test_annihilate_with_predecessor(self):
        start = SITES_6.state_with([1, 4])
        state, sign = apply_annihilation(start, SITES_6.position(4))
        assert state == SITES_6.state_with([1])
        assert sign == -1

    def test_annihilate_empty_mode(self):
        with pytest.raises(ModeEmptyError):
            apply_annihilation(SITES_6.vacuum(), SITES_6.position(3))


class TestHoppingExamples:
    """f_i+ f_j on the 4-mode space of sites (1,3,4,6).

    Expected values frozen from the dense Jordan-Wigner oracle; the
    (|1001>, i=4, j=6) sign is +1 by that oracle (annihilating site 6 sees
    one occupied predecessor, creating at site 4 afterwards sees one more).
    """

    def test_hop_1_from_4_on_0110(self):
        start = SITES_1346.state_with([3, 4])  # |0110>
        new, sign = hopping_element(start, SITES_1346.position(1), SITES_1346.position(4))
        assert new == SITES_1346.state_with([1, 3])
        assert sign == -1

    def test_hop_source_empty_gives_null(self):
        start = SITES_1346.state_with([1, 3])  # |1100>, site 4 empty
        assert hopping_element(start, SITES_1346.position(1), SITES_1346.position(4)) is None

    def test_hop_target_occupied_gives_null(self):
        start = SITES_1346.state_with([1, 4])
        assert hopping_element(start, SITES_1346.position(1), SITES_1346.position(4)) is None

    def test_hop_4_from_6_on_1001(self):
        start = SITES_1346.state_with([1, 6])  # |1001>
        new, sign = hopping_element(start, SITES_1346.position(4), SITES_1346.position(6))
        assert new == SITES_1346.state_with([1, 4])
        assert sign == +1

    def test_hop_examples_match_dense_oracle(self):
        m = SITES_1346.mode_count
        for i, j in [(1, 4), (4, 6), (3, 6), (4, 1)]:
            hop = creation_matrix(SITES_1346.position(i), m) @ annihilation_matrix(
                SITES_1346.position(j), m)
            def apply(state, i=i, j=j):
                return hopping_element(state, SITES_1346.position(i), SITES_1346.position(j))
            assert np.array_equal(op_matrix(SITES_1346, apply), hop)

    def test_number_operator_via_equal_indices(self):
        occ = SITES_1346.state_with([1, 4])
        pos = SITES_1346.position(4)
        assert hopping_element(occ, pos, pos) == (occ, +1)
        empty = SITES_1346.state_with([1, 6])
        assert hopping_element(empty, pos, pos) is None


class TestOrderingSoundness:
    """Bitmask signs reproduce the dense JW Pauli-string construction."""

    @pytest.mark.parametrize("num_modes", [1, 2, 3, 5, 8])
    def test_ladder_ops_match_oracle(self, num_modes):
        space = ModeSpace(range(1, num_modes + 1))
        for pos in range(num_modes):
            assert np.array_equal(creation_op(space, pos), creation_matrix(pos, num_modes))
            assert np.array_equal(
                annihilation_op(space, pos), annihilation_matrix(pos, num_modes))

    @pytest.mark.parametrize("num_modes", [2, 4, 6, 8])
    def test_anticommutation_exact(self, num_modes):
        space = ModeSpace(range(1, num_modes + 1))
        create = [creation_op(space, p) for p in range(num_modes)]
        destroy = [annihilation_op(space, p) for p in range(num_modes)]
        eye = np.eye(1 << num_modes)
        for i in range(num_modes):
            for j in range(num_modes):
                anti = destroy[i] @ create[j] + create[j] @ destroy[i]
                expected = eye if i == j else 0 * eye
                assert np.array_equal(anti, expected)
                assert np.array_equal(
                    destroy[i] @ destroy[j] + destroy[j] @ destroy[i], 0 * eye)

    def test_number_operator_is_diagonal_occupancy(self):
        space = ModeSpace(range(1, 5))
        for pos in range(4):
            n_op = creation_op(space, pos) @ annihilation_op(space, pos)
            assert np.array_equal(n_op, number_matrix(pos, 4))
            diag = np.diagonal(n_op)
            assert set(np.unique(diag.real)) <= {0.0, 1.0}


class TestSectorBasis:
    def test_single_qubit_sector(self):
        basis = build_sector(1)
        assert basis.dim == 2
        assert [s.ket() for s in basis.states] == ["|10>", "|01>"]
        assert basis.space.modes == (ModeIndex(1), ModeIndex(4))

    def test_two_qubit_sector_states(self):
        basis = build_sector(2)
        assert basis.dim == 4
        kets = {s.ket() for s in basis.states}
        assert kets == {"|1100>", "|1001>", "|0110>", "|0011>"}
        masks = [s.occupation for s in basis.states]
        assert masks == sorted(masks)

    def test_three_qubit_dimension(self):
        assert build_sector(3).dim == 8

    def test_unpaired_sites_excluded(self):
        basis = build_sector(3)
        sites = {m.site for m in basis.space.modes}
        assert sites == {1, 3, 4, 5, 6, 8}  # sites 2 and 7 are unpaired

    def test_index_of_is_inverse(self):
        basis = build_sector(3)
        for k, state in enumerate(basis.states):
            assert basis.index(state) == k

    def test_half_filling_constraint(self):
        basis = build_sector(3)
        for state in basis.states:
            for a, b in basis.groups:
                n_a = state.occupied(basis.space.position(a))
                n_b = state.occupied(basis.space.position(b))
                assert n_a + n_b == 1

    def test_sector_closure_under_well_hopping(self):
        basis = build_sector(3)
        for state in basis.states:
            for a, b in basis.groups:
                result = hopping_element(
                    state, basis.space.position(a), basis.space.position(b))
                if result is not None:
                    assert basis.contains(result[0])

    def test_groups_sharing_modes_rejected(self):
        with pytest.raises(ValueError):
            SectorBasis([(ModeIndex(1), ModeIndex(4)), (ModeIndex(4), ModeIndex(6))])

    def test_chain_wells_layout(self):
        wells = chain_wells(2)
        assert wells == ((ModeIndex(1), ModeIndex(4)), (ModeIndex(3), ModeIndex(6)))
        with pytest.raises(ValueError):
            chain_wells(0)


class TestModeIndex:
    def test_ordering_is_lexicographic(self):
        assert ModeIndex(3, 0) < ModeIndex(3, 1) < ModeIndex(4, 0)

    def test_invalid_labels(self):
        with pytest.raises(ValueError):
            ModeIndex(0)
        with pytest.raises(ValueError):
            ModeIndex(1, -1)


@given(occ=st.integers(min_value=0, max_value=(1 << 10) - 1),
       pos=st.integers(min_value=0, max_value=9))
def test_jw_parity_matches_popcount(occ, pos):
    state = FockState(occ, 10)
    below = bin(occ & ((1 << pos) - 1)).count("1")
    assert jw_parity(state, pos) == (-1) ** below


@given(occ=st.integers(min_value=0, max_value=(1 << 10) - 1),
       pos=st.integers(min_value=0, max_value=9))
def test_create_annihilate_roundtrip(occ, pos):
    state = FockState(occ, 10)
    if state.occupied(pos):
        down, s1 = apply_annihilation(state, pos)
        up, s2 = apply_creation(down, pos)
        assert up == state and s1 * s2 == 1
        with pytest.raises(ModeOccupiedError):
            apply_creation(state, pos)
    else:
        up, s1 = apply_creation(state, pos)
        down, s2 = apply_annihilation(up, pos)
        assert down == state and s1 * s2 == 1
        with pytest.raises(ModeEmptyError):
            apply_annihilation(state, pos)


@given(occ=st.integers(min_value=0, max_value=(1 << 12) - 1))
def test_particle_count(occ):
    assert FockState(occ, 12).particle_count == bin(occ).count("1")
