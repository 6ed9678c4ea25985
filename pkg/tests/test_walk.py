import math

import numpy as np
import pytest

from qwcount import (
    ArcIndex,
    BipartiteInstance,
    arc_to_flat,
    build_ancilla_oracle,
    build_coin,
    build_evolution,
    build_oracle,
    build_part_oracle,
    build_shift,
    flat_to_arc,
    restrict_to_plus_ancilla,
    uniform_state,
    unitarity_defect,
)

from conftest import iter_count_instances, random_instances

FIG2 = BipartiteInstance(4, 3, frozenset({1, 3}), frozenset({1}))
K11 = BipartiteInstance(1, 1)
K41 = BipartiteInstance(4, 1, frozenset({2}), frozenset({0}))
K33 = BipartiteInstance(3, 3)
K57 = BipartiteInstance(5, 7, frozenset({0, 2, 4}), frozenset({1, 5}))

INSTANCES = [FIG2, K11, K41, K33, K57]


def test_instance_validation():
    with pytest.raises(ValueError):
        BipartiteInstance(0, 3)
    with pytest.raises(ValueError):
        BipartiteInstance(2, 2, frozenset({2}), frozenset())
    with pytest.raises(ValueError):
        BipartiteInstance.from_counts(2, 2, 3, 0)


def test_instance_derived_counts():
    assert FIG2.k0 == 2 and FIG2.k1 == 1
    assert FIG2.num_vertices == 7 and FIG2.num_marked == 3
    assert FIG2.num_edges == 12 and FIG2.dim == 24


def test_arc_to_flat_origin():
    assert arc_to_flat(FIG2, ArcIndex(0, 0, 0)) == 0


def test_arc_to_flat_reverse_block():
    assert arc_to_flat(FIG2, ArcIndex(1, 0, 0)) == 12


@pytest.mark.parametrize("inst", INSTANCES)
def test_arc_flat_roundtrip(inst):
    for flat in range(inst.dim):
        arc = flat_to_arc(inst, flat)
        assert arc_to_flat(inst, arc) == flat


def test_arc_index_out_of_range():
    with pytest.raises(ValueError):
        arc_to_flat(FIG2, ArcIndex(0, 4, 0))
    with pytest.raises(ValueError):
        arc_to_flat(FIG2, ArcIndex(2, 0, 0))
    with pytest.raises(ValueError):
        flat_to_arc(FIG2, 24)


@pytest.mark.parametrize("inst", INSTANCES)
def test_shift_swaps_directions(inst):
    shift = build_shift(inst)
    for u in range(inst.n0):
        for v in range(inst.n1):
            src = arc_to_flat(inst, ArcIndex(0, u, v))
            dst = arc_to_flat(inst, ArcIndex(1, u, v))
            column = shift[:, src]
            assert column[dst] == 1.0 and np.count_nonzero(column) == 1


@pytest.mark.parametrize("inst", INSTANCES)
def test_shift_is_unitary_involution(inst):
    shift = build_shift(inst)
    assert unitarity_defect(shift) == 0.0
    assert np.array_equal(shift @ shift, np.eye(inst.dim, dtype=np.complex128))


def test_coin_degree_one_blocks_are_identity():
    # Tails in part 0 of K_{4,1} have a single outgoing arc each.
    coin = build_coin(K41)
    assert np.array_equal(coin[:4, :4], np.eye(4, dtype=np.complex128))
    assert np.array_equal(build_coin(K11), np.eye(2, dtype=np.complex128))


def test_coin_block_values():
    coin = build_coin(FIG2)
    expected = (2.0 / 3.0) * np.ones((3, 3)) - np.eye(3)
    assert np.abs(coin[:3, :3] - expected).max() == 0.0
    # Off-block entries for a different tail vanish.
    assert np.abs(coin[:3, 3:6]).max() == 0.0


@pytest.mark.parametrize("inst", INSTANCES)
def test_coin_is_unitary_involution(inst):
    coin = build_coin(inst)
    assert unitarity_defect(coin) < 1e-12
    assert np.abs(coin @ coin - np.eye(inst.dim)).max() < 1e-12


def test_oracle_trivial_cases():
    unmarked = BipartiteInstance(3, 2)
    assert np.array_equal(build_oracle(unmarked), np.eye(12, dtype=np.complex128))
    all_marked = BipartiteInstance(2, 2, frozenset({0, 1}), frozenset({0, 1}))
    assert np.array_equal(build_oracle(all_marked), -np.eye(8, dtype=np.complex128))


def test_oracle_marked_arc_count():
    # Marked tails: 2 vertices of degree 3 in part 0 plus 1 vertex of degree 4 in part 1.
    diag = np.diag(build_oracle(FIG2)).real
    assert int((diag == -1).sum()) == 10
    assert set(diag) == {1.0, -1.0}


def test_oracle_flips_exactly_marked_tails():
    diag = np.diag(build_oracle(FIG2)).real
    for flat in range(FIG2.dim):
        arc = flat_to_arc(FIG2, flat)
        marked = arc.u in FIG2.marked0 if arc.direction == 0 else arc.v in FIG2.marked1
        assert diag[flat] == (-1.0 if marked else 1.0)


def test_part_oracle_identity_when_other_part_marked():
    inst = BipartiteInstance(3, 3, frozenset(), frozenset({1}))
    assert np.array_equal(build_part_oracle(inst, 0), np.eye(18, dtype=np.complex128))


def test_part_oracle_marked_arc_count():
    diag = np.diag(build_part_oracle(FIG2, 0)).real
    assert int((diag == -1).sum()) == 6


@pytest.mark.parametrize("inst", INSTANCES)
def test_part_oracles_factor_the_oracle(inst):
    r0, r1 = build_part_oracle(inst, 0), build_part_oracle(inst, 1)
    assert np.array_equal(r0 @ r1, build_oracle(inst))
    assert np.array_equal(r0 @ r0, np.eye(inst.dim, dtype=np.complex128))


def test_part_oracle_validates_part():
    with pytest.raises(ValueError):
        build_part_oracle(FIG2, 2)


def test_ancilla_oracle_unmarked_is_identity():
    unmarked = BipartiteInstance(2, 2)
    for j in (0, 1):
        assert np.array_equal(build_ancilla_oracle(unmarked, j), np.eye(16, dtype=np.complex128))


@pytest.mark.parametrize("inst", INSTANCES)
@pytest.mark.parametrize("part", [0, 1])
def test_ancilla_oracle_restriction(inst, part):
    doubled = build_ancilla_oracle(inst, part)
    assert unitarity_defect(doubled) < 1e-12
    restriction = restrict_to_plus_ancilla(doubled)
    assert np.abs(restriction - build_part_oracle(inst, part)).max() < 1e-12


@pytest.mark.parametrize("part", [0, 1])
def test_ancilla_oracle_restriction_all_counts(part):
    for inst in iter_count_instances(6):
        restriction = restrict_to_plus_ancilla(build_ancilla_oracle(inst, part))
        assert np.abs(restriction - build_part_oracle(inst, part)).max() < 1e-12


@pytest.mark.parametrize("part", [0, 1])
def test_ancilla_returns_to_plus(part):
    # The |+> component of each output column carries the full amplitude.
    doubled = build_ancilla_oracle(FIG2, part)
    plus = np.array([1.0, 1.0]) / math.sqrt(2.0)
    for a in range(FIG2.dim):
        state = np.zeros(2 * FIG2.dim, dtype=np.complex128)
        state[2 * a:2 * a + 2] = plus
        out = (doubled @ state).reshape(FIG2.dim, 2)
        plus_component = out @ plus
        assert abs(np.linalg.norm(plus_component) - 1.0) < 1e-12


def test_evolution_k11_is_swap():
    evolution = build_evolution(K11, np.eye(2))
    assert np.array_equal(evolution, np.array([[0, 1], [1, 0]], dtype=np.complex128))


@pytest.mark.parametrize("inst", INSTANCES)
def test_evolution_is_unitary(inst):
    evolution = build_evolution(inst, build_oracle(inst))
    assert unitarity_defect(evolution) < 1e-12


def test_evolution_rejects_wrong_oracle_shape():
    with pytest.raises(ValueError):
        build_evolution(FIG2, np.eye(10))


def test_uniform_state_values():
    assert np.array_equal(uniform_state(K11), np.full(2, 1 / math.sqrt(2), dtype=np.complex128))
    state = uniform_state(FIG2)
    assert state.shape == (24,)
    assert np.abs(state - 1 / math.sqrt(24)).max() == 0.0


@pytest.mark.parametrize("inst", INSTANCES + random_instances(5, 6, seed=11))
def test_uniform_state_is_unit_norm(inst):
    assert abs(np.linalg.norm(uniform_state(inst)) - 1.0) < 1e-15
