"""Fermionic modes, occupation-bitmask states, and exact ladder-operator algebra.

Conventions
-----------
Modes are labeled by ``(site, species)`` pairs and ordered lexicographically.
That ordering is fixed for the lifetime of a basis and sets the sign
convention everywhere: applying a creation or annihilation operator at mode
``k`` picks up ``(-1)^(number of occupied modes strictly before k)``, the
Jordan-Wigner string parity.

A :class:`FockState` stores one occupation bit per mode (bit ``k`` = mode
``k`` of the ordering).  Basis kets are *defined* as creation operators
applied to the vacuum in increasing mode order with coefficient +1, e.g.
``|0110>`` over sites (1,3,4,6) is ``f3+ f4+ |vac>``.  All relative signs
between basis states then emerge from the operator algebra, never from the
basis map.

The half-filled sector used throughout keeps exactly one fermion per
declared group of modes (a double well in the simplest case).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as _cartesian

MAX_MODES = 64


class ModeOccupiedError(ValueError):
    """Creation on an already occupied mode (f+ f+ = 0)."""


class ModeEmptyError(ValueError):
    """Annihilation on an empty mode (f f = 0)."""


@dataclass(frozen=True, order=True)
class ModeIndex:
    """A fermionic mode label: lattice site plus species tag.

    For the spinless model ``species`` is 0 throughout; the two-species
    interaction pulse uses species 0 and 1.
    """

    site: int
    species: int = 0

    def __post_init__(self):
        if self.site < 1:
            raise ValueError(f"site labels start at 1, got {self.site}")
        if self.species < 0:
            raise ValueError(f"species must be non-negative, got {self.species}")

    def __str__(self):
        return f"{self.site}" if self.species == 0 else f"{self.site}s{self.species}"


def mode(m) -> ModeIndex:
    """Coerce a bare site label (spinless shorthand) into a ModeIndex."""
    return m if isinstance(m, ModeIndex) else ModeIndex(int(m))


@dataclass(frozen=True)
class FockState:
    """Occupation-number basis state over a fixed mode ordering.

    Bit ``k`` of ``occupation`` holds the occupancy of mode ``k``.  A state is
    meaningful only relative to the :class:`ModeSpace` that fixed the
    ordering.
    """

    occupation: int
    mode_count: int

    def __post_init__(self):
        if not 0 <= self.mode_count <= MAX_MODES:
            raise ValueError(f"mode_count must be in [0, {MAX_MODES}]")
        if self.occupation < 0 or self.occupation >> self.mode_count:
            raise ValueError("occupation bits outside the declared mode range")

    def occupied(self, pos: int) -> bool:
        return bool((self.occupation >> pos) & 1)

    @property
    def particle_count(self) -> int:
        return self.occupation.bit_count()

    def ket(self) -> str:
        bits = "".join("1" if self.occupied(k) else "0" for k in range(self.mode_count))
        return f"|{bits}>"

    def __str__(self):
        return self.ket()


def jw_parity(state: FockState, pos: int) -> int:
    """Sign (-1)^(occupied modes strictly before pos): the JW string."""
    below = state.occupation & ((1 << pos) - 1)
    return -1 if below.bit_count() & 1 else 1


def apply_creation(state: FockState, pos: int) -> tuple[FockState, int]:
    """Apply f+ at mode position ``pos``; returns (new state, sign).

    Raises ModeOccupiedError if the mode already holds a fermion.
    """
    if state.occupied(pos):
        raise ModeOccupiedError(f"mode position {pos} already occupied in {state}")
    return FockState(state.occupation | (1 << pos), state.mode_count), jw_parity(state, pos)


def apply_annihilation(state: FockState, pos: int) -> tuple[FockState, int]:
    """Apply f at mode position ``pos``; returns (new state, sign).

    Raises ModeEmptyError if the mode is empty.
    """
    if not state.occupied(pos):
        raise ModeEmptyError(f"mode position {pos} empty in {state}")
    return FockState(state.occupation & ~(1 << pos), state.mode_count), jw_parity(state, pos)


def hopping_element(state: FockState, i_pos: int, j_pos: int):
    """Apply f_i+ f_j to a basis state; ``None`` if it annihilates the state.

    Returns (new state, sign) with the sign from composing annihilation at
    ``j_pos`` and creation at ``i_pos``.  ``i_pos == j_pos`` reduces to the
    number operator.
    """
    if not state.occupied(j_pos):
        return None
    cleared, s1 = apply_annihilation(state, j_pos)
    if cleared.occupied(i_pos):
        return None
    created, s2 = apply_creation(cleared, i_pos)
    return created, s1 * s2


class ModeSpace:
    """Fixed, ordered collection of fermionic modes."""

    def __init__(self, modes):
        ordered = tuple(sorted(mode(m) for m in modes))
        if len(set(ordered)) != len(ordered):
            raise ValueError("duplicate modes")
        if len(ordered) > MAX_MODES:
            raise ValueError(f"at most {MAX_MODES} modes supported")
        self.modes = ordered
        self._position = {m: k for k, m in enumerate(ordered)}

    @property
    def mode_count(self) -> int:
        return len(self.modes)

    def position(self, m) -> int:
        return self._position[mode(m)]

    def vacuum(self) -> FockState:
        return FockState(0, self.mode_count)

    def state_with(self, occupied_modes) -> FockState:
        """The basis ket with the given modes occupied (coefficient +1)."""
        occ = 0
        for m in occupied_modes:
            occ |= 1 << self.position(m)
        return FockState(occ, self.mode_count)

    def occupied_modes(self, state: FockState) -> tuple[ModeIndex, ...]:
        return tuple(m for k, m in enumerate(self.modes) if state.occupied(k))

    def all_states(self):
        """Every occupation pattern; only sensible for small mode counts."""
        return [FockState(occ, self.mode_count) for occ in range(1 << self.mode_count)]


class SectorBasis:
    """Ordered basis of the one-fermion-per-group occupation sector.

    ``groups`` is a tuple of mode tuples; every basis state holds exactly one
    fermion in each group.  For the lattice chain the groups are the double
    wells.  States are sorted ascending by occupation bitmask and
    ``index_of`` is the exact inverse map.
    """

    def __init__(self, groups):
        self.groups = tuple(tuple(mode(m) for m in g) for g in groups)
        flat = [m for g in self.groups for m in g]
        if len(set(flat)) != len(flat):
            raise ValueError("groups must not share modes")
        self.space = ModeSpace(flat)
        masks = []
        for choice in _cartesian(*self.groups):
            occ = 0
            for m in choice:
                occ |= 1 << self.space.position(m)
            masks.append(occ)
        masks.sort()
        self.states = tuple(FockState(occ, self.space.mode_count) for occ in masks)
        self.index_of = {s.occupation: k for k, s in enumerate(self.states)}
        self.tag = "sector[" + ";".join(
            "+".join(str(m) for m in g) for g in self.groups) + "]"

    @property
    def dim(self) -> int:
        return len(self.states)

    def index(self, state: FockState) -> int:
        return self.index_of[state.occupation]

    def contains(self, state: FockState) -> bool:
        return state.occupation in self.index_of

    def __repr__(self):
        return f"SectorBasis({self.tag}, dim={self.dim})"


def chain_wells(num_qubits: int) -> tuple[tuple[ModeIndex, ModeIndex], ...]:
    """Double wells of the 1D chain: qubit j occupies sites (2j+1, 2j+4).

    Sites 2 and 2N+1 are the unpaired endpoints of the overlapping two-site
    sublattices; they hold no fermion and are excluded from the mode set.
    """
    if num_qubits < 1:
        raise ValueError("need at least one encoded qubit")
    return tuple((ModeIndex(2 * j + 1), ModeIndex(2 * j + 4)) for j in range(num_qubits))


def build_sector(num_qubits: int) -> SectorBasis:
    """Half-filled sector of the chain: one fermion per double well, dim 2^N."""
    return SectorBasis(chain_wells(num_qubits))
