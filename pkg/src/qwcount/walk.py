"""Arc-space operators for the coined walk on a complete bipartite graph.

The walker lives on the directed arcs of K_{n0,n1}.  A basis state is
``(direction, u, v)`` where ``u`` indexes the V0 endpoint and ``v`` the V1
endpoint of an edge; direction 0 points from V0 to V1 and direction 1 points
back.  The flat index is ``direction*n0*n1 + u*n1 + v``, which makes the
shift a clean block swap and keeps the direction-0 coin blocks contiguous.

One search step applies the marked-vertex oracle, then the Grover coin at
every tail vertex, then the arc-reversing shift.
"""

from __future__ import annotations

import operator
from dataclasses import dataclass, field

import numpy as np

from .linalg import as_matrix

__all__ = [
    "BipartiteInstance",
    "ArcIndex",
    "arc_to_flat",
    "flat_to_arc",
    "build_shift",
    "build_coin",
    "build_oracle",
    "build_part_oracle",
    "build_ancilla_oracle",
    "restrict_to_plus_ancilla",
    "build_evolution",
    "uniform_state",
]


@dataclass(frozen=True)
class BipartiteInstance:
    """A complete bipartite graph K_{n0,n1} with marked vertex sets.

    Vertices of part ``j`` are the integers ``0 .. nj-1``.  All derived
    quantities (angles, spectra, count distributions) depend only on the
    set sizes, which the test suite checks by relabeling.
    """

    n0: int
    n1: int
    marked0: frozenset[int] = field(default_factory=frozenset)
    marked1: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self):
        try:
            object.__setattr__(self, "marked0", frozenset(operator.index(x) for x in self.marked0))
            object.__setattr__(self, "marked1", frozenset(operator.index(x) for x in self.marked1))
        except TypeError as exc:
            raise ValueError(f"marked vertices must be integers: {exc}")
        if self.n0 < 1 or self.n1 < 1:
            raise ValueError(f"part sizes must be at least 1, got ({self.n0}, {self.n1})")
        for name, marked, size in (("marked0", self.marked0, self.n0),
                                   ("marked1", self.marked1, self.n1)):
            if not all(0 <= x < size for x in marked):
                raise ValueError(f"{name} must be a subset of range({size}), got {sorted(marked)}")

    @classmethod
    def from_counts(cls, n0: int, n1: int, k0: int, k1: int) -> "BipartiteInstance":
        """Instance with the canonical marked sets ``{0..k0-1}`` and ``{0..k1-1}``."""
        if not (0 <= k0 <= n0 and 0 <= k1 <= n1):
            raise ValueError(f"marked counts ({k0}, {k1}) out of range for K_({n0},{n1})")
        return cls(n0, n1, frozenset(range(k0)), frozenset(range(k1)))

    @property
    def k0(self) -> int:
        return len(self.marked0)

    @property
    def k1(self) -> int:
        return len(self.marked1)

    @property
    def num_vertices(self) -> int:
        return self.n0 + self.n1

    @property
    def num_marked(self) -> int:
        return self.k0 + self.k1

    @property
    def num_edges(self) -> int:
        return self.n0 * self.n1

    @property
    def dim(self) -> int:
        """Dimension of the arc space (two arcs per edge)."""
        return 2 * self.n0 * self.n1


@dataclass(frozen=True)
class ArcIndex:
    """A directed arc: direction bit plus the edge endpoints (u in V0, v in V1)."""

    direction: int
    u: int
    v: int


def arc_to_flat(inst: BipartiteInstance, arc: ArcIndex) -> int:
    """Flat index of an arc under the ``direction*n0*n1 + u*n1 + v`` layout."""
    if arc.direction not in (0, 1):
        raise ValueError(f"direction must be 0 or 1, got {arc.direction}")
    if not (0 <= arc.u < inst.n0 and 0 <= arc.v < inst.n1):
        raise ValueError(f"arc endpoints ({arc.u}, {arc.v}) out of range for K_({inst.n0},{inst.n1})")
    return arc.direction * inst.num_edges + arc.u * inst.n1 + arc.v


def flat_to_arc(inst: BipartiteInstance, flat: int) -> ArcIndex:
    """Inverse of :func:`arc_to_flat`."""
    if not (0 <= flat < inst.dim):
        raise ValueError(f"flat index {flat} out of range for dimension {inst.dim}")
    direction, rest = divmod(flat, inst.num_edges)
    u, v = divmod(rest, inst.n1)
    return ArcIndex(direction, u, v)


def _tail_is_marked(inst: BipartiteInstance, direction: int, u: int, v: int) -> bool:
    # The tail of a direction-0 arc is u (in V0); of a direction-1 arc it is v (in V1).
    return (u in inst.marked0) if direction == 0 else (v in inst.marked1)


def build_shift(inst: BipartiteInstance) -> np.ndarray:
    """Flip-flop shift: swaps each arc with its reverse.  Involution."""
    x = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=np.complex128)
    return np.kron(x, np.eye(inst.num_edges, dtype=np.complex128))


def _grover_block(d: int) -> np.ndarray:
    """Reflection about the uniform state on d outgoing arcs: (2/d)J - I."""
    return (2.0 / d) * np.ones((d, d), dtype=np.complex128) - np.eye(d, dtype=np.complex128)


def build_coin(inst: BipartiteInstance) -> np.ndarray:
    """Grover coin: one reflection block per tail vertex.

    Direction-0 arcs with tail ``u`` are contiguous in the flat layout, so
    that half is ``I_{n0} ⊗ G_{n1}``.  Direction-1 arcs with tail ``v`` sit
    at stride ``n1``, which ``G_{n0} ⊗ I_{n1}`` matches.  A degree-1 vertex
    gets the 1x1 identity block.
    """
    half = inst.num_edges
    coin = np.zeros((inst.dim, inst.dim), dtype=np.complex128)
    coin[:half, :half] = np.kron(np.eye(inst.n0, dtype=np.complex128), _grover_block(inst.n1))
    coin[half:, half:] = np.kron(_grover_block(inst.n0), np.eye(inst.n1, dtype=np.complex128))
    return coin


def _oracle_signs(inst: BipartiteInstance, parts: tuple[int, ...]) -> np.ndarray:
    signs = np.ones(inst.dim)
    half = inst.num_edges
    if 0 in parts:
        for u in inst.marked0:
            signs[u * inst.n1:(u + 1) * inst.n1] = -1.0
    if 1 in parts:
        for v in inst.marked1:
            signs[half + v::inst.n1] = -1.0
    return signs


def build_oracle(inst: BipartiteInstance) -> np.ndarray:
    """Diagonal ±1 oracle: flips the amplitude of arcs whose tail is marked."""
    return np.diag(_oracle_signs(inst, (0, 1))).astype(np.complex128)


def _check_part(part: int) -> None:
    if part not in (0, 1):
        raise ValueError(f"part must be 0 or 1, got {part}")


def build_part_oracle(inst: BipartiteInstance, part: int) -> np.ndarray:
    """Oracle restricted to one part: acts like the full oracle on arcs with
    direction bit ``part`` and as the identity elsewhere."""
    _check_part(part)
    return np.diag(_oracle_signs(inst, (part,))).astype(np.complex128)


def build_ancilla_oracle(inst: BipartiteInstance, part: int) -> np.ndarray:
    """Ancilla-circuit realization of the part-restricted oracle.

    Acts on the doubled space (arc ⊗ ancilla qubit, flat index ``2*arc + bit``)
    as ``CZ_part · F · CZ_part`` where ``F`` flips the ancilla bit on
    marked-tail arcs and ``CZ_part`` applies a phase flip to the ancilla
    ``|1⟩`` component on arcs with direction bit ``part``.  With the ancilla
    prepared in ``|+⟩`` this reproduces :func:`build_part_oracle` and returns
    the ancilla to ``|+⟩``.
    """
    _check_part(part)
    dim = inst.dim
    half = inst.num_edges
    flip = np.eye(2 * dim, dtype=np.complex128)
    for a in range(dim):
        direction, rest = divmod(a, half)
        u, v = divmod(rest, inst.n1)
        if _tail_is_marked(inst, direction, u, v):
            base = 2 * a
            flip[base:base + 2, base:base + 2] = np.array([[0.0, 1.0], [1.0, 0.0]])
    cz = np.ones(2 * dim)
    lo, hi = part * half, (part + 1) * half
    cz[2 * lo + 1:2 * hi:2] = -1.0
    czm = np.diag(cz).astype(np.complex128)
    return czm @ flip @ czm


def restrict_to_plus_ancilla(m) -> np.ndarray:
    """Compress a doubled-space operator to the ancilla ``|+⟩`` sector.

    Returns the arc-space matrix with entries ``(⟨a|⊗⟨+|) M (|b⟩⊗|+⟩)``.
    """
    mm = as_matrix(m)
    if mm.shape[0] != mm.shape[1] or mm.shape[0] % 2 != 0:
        raise ValueError(f"expected a square even-dimensional matrix, got {mm.shape}")
    d = mm.shape[0] // 2
    return 0.5 * mm.reshape(d, 2, d, 2).sum(axis=(1, 3))


def build_evolution(inst: BipartiteInstance, oracle) -> np.ndarray:
    """One search step: apply ``oracle`` first, then coin, then shift."""
    om = as_matrix(oracle)
    if om.shape != (inst.dim, inst.dim):
        raise ValueError(f"oracle shape {om.shape} does not match arc dimension {inst.dim}")
    return build_shift(inst) @ build_coin(inst) @ om


def uniform_state(inst: BipartiteInstance) -> np.ndarray:
    """Unit-norm uniform superposition over all arcs."""
    return np.full(inst.dim, 1.0 / np.sqrt(inst.dim), dtype=np.complex128)
