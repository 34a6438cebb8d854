import itertools
import random

import numpy as np
import pytest

from dets2.core import InstanceError, build_Ed, edges
from dets2.field import FieldSpec, Q
from dets2.linalg import det_s2
from dets2.oracle import dfs_cycle_check
from dets2.partitions import (
    Partition,
    acyclic_colors,
    coloring_block,
    cycle_free_batch,
    enumerate_partitions,
    is_cycle_free,
    is_homogeneous,
    is_spanning_tree,
    partition_to_tensor,
    planted_cycle_partition,
    sample_colorings,
    sample_homogeneous_cycle_free,
    sample_partitions,
    survey,
    tensor_to_partition,
    triple_flip,
)

from reference_data import E3_CLASSES

GF = FieldSpec.gf(32003)

def test_E3_spanning_trees():
    p = Partition.from_classes(3, E3_CLASSES)
    assert partition_to_tensor(p) == build_Ed(3)
    assert tensor_to_partition(build_Ed(3)) == p
    assert is_cycle_free(p) and is_homogeneous(p)


def test_E2_partition():
    p = tensor_to_partition(build_Ed(2))
    assert p.classes() == {1: [(1, 2), (2, 3), (1, 4)], 2: [(1, 3), (2, 4), (3, 4)]}


def test_constant_partition():
    p = Partition(3, (1,) * 15)
    t = partition_to_tensor(p)
    assert all(v == (1, 0, 0) for v in t.vectors)
    assert not is_homogeneous(p) and not is_cycle_free(p)


def test_bijection_roundtrip(rng):
    for p in sample_partitions(3, 20, seed=1):
        assert tensor_to_partition(partition_to_tensor(p, GF)) == p


def test_non_basis_tensor_rejected():
    with pytest.raises(InstanceError, match="not a basis tensor"):
        tensor_to_partition(build_Ed(2).replace({(1, 2): [1, 1]}))


def test_triangle_is_cyclic():
    p = Partition.from_classes(2, {1: [(1, 2), (2, 3), (1, 3)], 2: [(1, 4), (2, 4), (3, 4)]})
    assert acyclic_colors(p) == {1: False, 2: True}
    assert not is_cycle_free(p)


def test_partition_validation():
    with pytest.raises(InstanceError):
        Partition(2, (1, 2, 3, 1, 1, 1))
    with pytest.raises(InstanceError):
        Partition(2, (1, 2))
    with pytest.raises(InstanceError, match="2,4"):
        Partition.from_json({"d": 2, "colors": {"1,2": 1, "1,3": 1, "2,3": 1, "1,4": 1, "3,4": 1}})


def test_partition_json_roundtrip():
    p = tensor_to_partition(build_Ed(3))
    assert Partition.from_json(p.to_json()) == p


@pytest.mark.parametrize("d", range(2, 7))
def test_Ed_partitions_homogeneous_cycle_free(d):
    p = tensor_to_partition(build_Ed(d))
    assert is_homogeneous(p) and is_cycle_free(p)
    assert all(is_spanning_tree(d, es) for es in p.classes().values())


def test_union_find_dfs_batch_agree():
    cols = sample_colorings(3, 3000, seed=11)
    batch = cycle_free_batch(cols, 3)
    for row, b in zip(cols, batch):
        p = Partition(3, tuple(int(c) for c in row))
        assert acyclic_colors(p) == dfs_cycle_check(p)
        assert is_cycle_free(p) == bool(b)


# -- enumeration / sampling ----------------------------------------------------


def test_enumerate_d2():
    parts = list(enumerate_partitions(2))
    assert len(parts) == 64 == len(set(parts))
    assert tensor_to_partition(build_Ed(2)) in parts


def test_enumerate_refuses_d3():
    with pytest.raises(ValueError, match="allow_large"):
        next(enumerate_partitions(3))
    it = enumerate_partitions(3, allow_large=True)
    assert next(it).colors == (1,) * 15


def test_coloring_block_matches_enumeration():
    blk = coloring_block(2, 0, 64)
    assert [tuple(int(c) for c in r) for r in blk] == [p.colors for p in enumerate_partitions(2)]
    last = coloring_block(3, 3**15 - 1, 3**15)
    assert last.tolist() == [[3] * 15]


@pytest.mark.slow
def test_enumerate_d3_count():
    assert sum(1 for _ in enumerate_partitions(3, allow_large=True)) == 14_348_907


def test_sampling_deterministic():
    a = [p.colors for p in sample_partitions(3, 10, seed=42)]
    b = [p.colors for p in sample_partitions(3, 10, seed=42)]
    assert a == b and len(a) == 10
    assert list(sample_partitions(3, 0, seed=42)) == []
    assert (sample_colorings(3, 50, 9) == sample_colorings(3, 50, 9)).all()


def test_cycle_free_fraction_strictly_between():
    frac = cycle_free_batch(sample_colorings(3, 20000, seed=5), 3).mean()
    assert 0 < frac < 1


@pytest.mark.parametrize("length", [3, 4, 5, 6])
def test_planted_cycles_vanish(length):
    rng = random.Random(length)
    for _ in range(10):
        p = planted_cycle_partition(3, length, rng)
        assert not is_cycle_free(p)
        assert det_s2(partition_to_tensor(p, GF)) == 0


def test_exhaustive_d2_theorem():
    for field in (Q, GF):
        table = survey(enumerate_partitions(2), field)
        assert table.total == 64 and table.ok


# -- triple flips -------------------------------------------------------------


def _flip_by_enumeration(p, x, y, z):
    tri = {(x, y), (x, z), (y, z)}
    hits = []
    for q in enumerate_partitions(2):
        if any(q.color(e) != p.color(e) for e in edges(2) if e not in tri):
            continue
        if sum(q.color(e) != p.color(e) for e in tri) < 2:
            continue
        if all(q.colors.count(c) == 3 for c in (1, 2)) and all(dfs_cycle_check(q).values()):
            hits.append(q)
    return hits


@pytest.mark.parametrize("tri", list(itertools.combinations(range(1, 5), 3)))
def test_flip_d2_against_enumeration(tri):
    p = tensor_to_partition(build_Ed(2))
    assert _flip_by_enumeration(p, *tri) == [triple_flip(p, *tri)]


def test_flip_E3():
    p = tensor_to_partition(build_Ed(3))
    q = triple_flip(p, 1, 2, 3)
    tri = [(1, 2), (1, 3), (2, 3)]
    assert sum(p.color(e) != q.color(e) for e in tri) >= 2
    assert all(p.color(e) == q.color(e) for e in edges(3) if e not in tri)
    assert is_homogeneous(q) and is_cycle_free(q)
    assert triple_flip(q, 1, 2, 3) == p
    assert det_s2(partition_to_tensor(q)) == -det_s2(partition_to_tensor(p))


def test_flip_preconditions():
    with pytest.raises(InstanceError):
        triple_flip(Partition(2, (1,) * 6), 1, 2, 3)
    with pytest.raises(InstanceError):
        triple_flip(tensor_to_partition(build_Ed(2)), 2, 1, 3)


def test_homogeneous_sampler():
    ps = sample_homogeneous_cycle_free(3, 20, seed=3)
    assert len(ps) == 20
    assert all(is_homogeneous(p) and is_cycle_free(p) for p in ps)
    assert ps == sample_homogeneous_cycle_free(3, 20, seed=3)
