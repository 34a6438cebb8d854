"""d-partitions of K_{2d} (edge colorings with d colors) and related drivers."""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Any, Iterable, Iterator, Mapping

import numpy as np

from .core import (
    Edge,
    EdgeTensor,
    InstanceError,
    basis_vector,
    column_index,
    edge_key,
    edges,
    num_edges,
    parse_edge_key,
)
from .field import FieldSpec, Q
from .linalg import InvariantViolation, det_s2, det_s2_colorings_mod_p

EXHAUSTIVE_LIMIT = 2**6


@dataclass(frozen=True)
class Partition:
    """Colors 1..d for each edge, stored in colex edge order."""

    d: int
    colors: tuple[int, ...]

    def __post_init__(self):
        if len(self.colors) != num_edges(self.d):
            raise InstanceError(f"expected {num_edges(self.d)} colors for d={self.d}, got {len(self.colors)}")
        for e, c in zip(edges(self.d), self.colors):
            if not 1 <= c <= self.d:
                raise InstanceError(f"color {c} at edge {edge_key(e)} outside 1..{self.d}")

    @classmethod
    def from_mapping(cls, d: int, colors: Mapping[Edge, int]) -> "Partition":
        missing = [e for e in edges(d) if e not in colors]
        if missing:
            raise InstanceError(f"missing edge {edge_key(missing[0])}")
        return cls(d, tuple(colors[e] for e in edges(d)))

    @classmethod
    def from_classes(cls, d: int, classes: Mapping[int, Iterable[Edge]]) -> "Partition":
        return cls.from_mapping(d, {e: c for c, es in classes.items() for e in es})

    def color(self, e: Edge) -> int:
        return self.colors[column_index(e, self.d) - 1]

    def color_class(self, c: int) -> list[Edge]:
        return [e for e, k in zip(edges(self.d), self.colors) if k == c]

    def classes(self) -> dict[int, list[Edge]]:
        return {c: self.color_class(c) for c in range(1, self.d + 1)}

    def recolor(self, updates: Mapping[Edge, int]) -> "Partition":
        cols = list(self.colors)
        for e, c in updates.items():
            cols[column_index(e, self.d) - 1] = c
        return Partition(self.d, tuple(cols))

    def to_json(self) -> dict:
        return {"d": self.d, "colors": {edge_key(e): c for e, c in zip(edges(self.d), self.colors)}}

    @classmethod
    def from_json(cls, obj: Any) -> "Partition":
        if not isinstance(obj, dict) or "d" not in obj or "colors" not in obj:
            raise InstanceError("partition JSON needs keys 'd' and 'colors'")
        d = obj["d"]
        if isinstance(d, bool) or not isinstance(d, int) or d < 1:
            raise InstanceError(f"dimension d must be a positive integer, got {d!r}")
        raw = obj["colors"]
        if not isinstance(raw, dict):
            raise InstanceError("'colors' must be an object keyed by \"i,j\"")
        colors = {}
        for key, c in raw.items():
            if isinstance(c, bool) or not isinstance(c, int):
                raise InstanceError(f"color at edge {key} must be an integer")
            colors[parse_edge_key(key, d)] = c
        return cls.from_mapping(d, colors)


def partition_to_tensor(p: Partition, field: FieldSpec = Q) -> EdgeTensor:
    return EdgeTensor(p.d, field, tuple(basis_vector(c, p.d, field) for c in p.colors))


def tensor_to_partition(t: EdgeTensor) -> Partition:
    labels = t.basis_labeling()
    if labels is None:
        raise InstanceError("tensor is not a basis tensor (some slot is not a standard basis vector)")
    return Partition(t.d, labels)


class UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> bool:
        """Merge the sets of a and b; False if they were already joined."""
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return True


def acyclic_colors(p: Partition) -> dict[int, bool]:
    """Per color, whether its edge class is a forest."""
    forests = {c: UnionFind(2 * p.d + 1) for c in range(1, p.d + 1)}
    verdict = {c: True for c in forests}
    for (i, j), c in zip(edges(p.d), p.colors):
        if verdict[c] and not forests[c].union(i, j):
            verdict[c] = False
    return verdict


def is_cycle_free(p: Partition) -> bool:
    return all(acyclic_colors(p).values())


def is_homogeneous(p: Partition) -> bool:
    target = 2 * p.d - 1
    counts = [0] * (p.d + 1)
    for c in p.colors:
        counts[c] += 1
    return all(n == target for n in counts[1:])


def is_spanning_tree(d: int, class_edges: list[Edge]) -> bool:
    uf = UnionFind(2 * d + 1)
    return len(class_edges) == 2 * d - 1 and all(uf.union(i, j) for i, j in class_edges)


def cycle_free_batch(colorings: np.ndarray, d: int) -> np.ndarray:
    """Vectorised cycle-freeness for a (B, d(2d-1)) array of colorings.

    Tracks a component label per (sample, color, vertex) and merges labels
    edge by edge; an edge joining two equal labels closes a cycle.
    """
    col = np.asarray(colorings, dtype=np.int64)
    bsz = col.shape[0]
    nv = 2 * d
    comp = np.broadcast_to(np.arange(nv), (bsz, d, nv)).copy()
    ok = np.ones(bsz, dtype=bool)
    rows = np.arange(bsz)
    for k, (i, j) in enumerate(edges(d)):
        c = col[:, k] - 1
        labels = comp[rows, c]
        li = labels[:, i - 1]
        lj = labels[:, j - 1]
        ok &= li != lj
        merged = np.where(labels == lj[:, None], li[:, None], labels)
        comp[rows, c] = merged
    return ok


def triple_flip(p: Partition, x: int, y: int, z: int) -> Partition:
    """The partition obtained by flipping p on the triangle x < y < z.

    Searched exhaustively over all d^3 recolorings of the three triangle
    edges; exactly one candidate must be homogeneous, cycle-free and differ
    from p on at least two of them.
    """
    d = p.d
    if not 1 <= x < y < z <= 2 * d:
        raise InstanceError(f"need 1 <= x < y < z <= {2 * d}, got ({x},{y},{z})")
    if not (is_homogeneous(p) and is_cycle_free(p)):
        raise InstanceError("triple_flip needs a homogeneous cycle-free partition")
    tri = ((x, y), (x, z), (y, z))
    old = tuple(p.color(e) for e in tri)
    found = []
    for new in itertools.product(range(1, d + 1), repeat=3):
        if sum(a != b for a, b in zip(old, new)) < 2:
            continue
        q = p.recolor(dict(zip(tri, new)))
        if is_homogeneous(q) and is_cycle_free(q):
            found.append(q)
    if len(found) != 1:
        raise InvariantViolation(
            f"triple flip at ({x},{y},{z}) has {len(found)} candidates, expected exactly 1", p.to_json()
        )
    return found[0]


# -- enumeration and sampling ------------------------------------------------


def enumerate_partitions(d: int, allow_large: bool = False) -> Iterator[Partition]:
    """Every d-partition once, in lexicographic order of the color tuple."""
    total = d ** num_edges(d)
    if total > EXHAUSTIVE_LIMIT and not allow_large:
        raise ValueError(f"{total} partitions for d={d}; pass allow_large=True to enumerate anyway")
    for colors in itertools.product(range(1, d + 1), repeat=num_edges(d)):
        yield Partition(d, colors)


def coloring_block(d: int, start: int, stop: int) -> np.ndarray:
    """Rows start..stop-1 of the lexicographic enumeration as a color array."""
    idx = np.arange(start, stop, dtype=np.int64)
    n = num_edges(d)
    out = np.empty((len(idx), n), dtype=np.int64)
    for k in range(n - 1, -1, -1):
        out[:, k] = idx % d + 1
        idx //= d
    return out


def sample_partitions(d: int, count: int, seed: int) -> Iterator[Partition]:
    rng = random.Random(seed)
    n = num_edges(d)
    for _ in range(count):
        yield Partition(d, tuple(rng.randint(1, d) for _ in range(n)))


def sample_colorings(d: int, count: int, seed: int) -> np.ndarray:
    """Uniform colorings as an array, from a seeded numpy generator."""
    rng = np.random.default_rng(seed)
    return rng.integers(1, d + 1, size=(count, num_edges(d)), dtype=np.int64)


def sample_homogeneous_cycle_free(d: int, count: int, seed: int, max_tries: int = 10**6) -> list[Partition]:
    """Rejection-sample homogeneous cycle-free partitions from shuffled balanced colorings."""
    rng = random.Random(seed)
    base = [c for c in range(1, d + 1) for _ in range(2 * d - 1)]
    out = []
    for _ in range(max_tries):
        if len(out) == count:
            break
        rng.shuffle(base)
        p = Partition(d, tuple(base))
        if is_cycle_free(p):
            out.append(p)
    else:
        if len(out) < count:
            raise RuntimeError(f"only {len(out)} of {count} samples after {max_tries} tries")
    return out


def planted_cycle_partition(d: int, length: int, rng: random.Random, color: int | None = None) -> Partition:
    """Random partition with a monochromatic cycle of the given length."""
    if not 3 <= length <= 2 * d:
        raise ValueError(f"cycle length {length} impossible in K_{2 * d}")
    color = color or rng.randint(1, d)
    verts = rng.sample(range(1, 2 * d + 1), length)
    cyc = [tuple(sorted((verts[k], verts[(k + 1) % length]))) for k in range(length)]
    colors = {e: rng.randint(1, d) for e in edges(d)}
    colors.update({e: color for e in cyc})
    return Partition.from_mapping(d, colors)


# -- the cycle-free <=> nonzero survey ---------------------------------------


@dataclass
class AgreementTable:
    """Counts of (cycle_free, det != 0); off-diagonal cells are failures."""

    cells: dict[tuple[bool, bool], int]
    counterexamples: list[dict]

    @classmethod
    def empty(cls) -> "AgreementTable":
        return cls({(a, b): 0 for a in (True, False) for b in (True, False)}, [])

    @property
    def total(self) -> int:
        return sum(self.cells.values())

    @property
    def disagreements(self) -> int:
        return self.cells[(True, False)] + self.cells[(False, True)]

    @property
    def ok(self) -> bool:
        return self.disagreements == 0

    def merge(self, other: "AgreementTable") -> None:
        for k, v in other.cells.items():
            self.cells[k] += v
        self.counterexamples.extend(other.counterexamples)

    def to_json(self) -> dict:
        return {
            "total": self.total,
            "cycle_free_and_nonzero": self.cells[(True, True)],
            "cycle_free_and_zero": self.cells[(True, False)],
            "cyclic_and_nonzero": self.cells[(False, True)],
            "cyclic_and_zero": self.cells[(False, False)],
            "disagreements": self.disagreements,
            "agrees": self.ok,
            "counterexamples": self.counterexamples[:10],
        }


def survey(parts: Iterable[Partition], field: FieldSpec = Q) -> AgreementTable:
    """Tabulate cycle-freeness against det^S2 != 0, one partition at a time."""
    table = AgreementTable.empty()
    for p in parts:
        cf = is_cycle_free(p)
        nz = det_s2(partition_to_tensor(p, field)) != 0
        table.cells[(cf, nz)] += 1
        if cf != nz:
            table.counterexamples.append(p.to_json())
    return table


def survey_colorings(colorings: np.ndarray, d: int, prime: int, batch: int = 20000) -> AgreementTable:
    """Vectorised :func:`survey` over GF(prime) for a color array."""
    table = AgreementTable.empty()
    for lo in range(0, len(colorings), batch):
        block = colorings[lo : lo + batch]
        cf = cycle_free_batch(block, d)
        nz = det_s2_colorings_mod_p(block, d, prime) != 0
        for a in (True, False):
            for b in (True, False):
                table.cells[(a, b)] += int(np.count_nonzero((cf == a) & (nz == b)))
        for k in np.flatnonzero(cf != nz)[:10]:
            table.counterexamples.append(Partition(d, tuple(int(c) for c in block[k])).to_json())
    return table


def exhaustive_survey(d: int, prime: int, batch: int = 50000, progress=None) -> AgreementTable:
    """All d^(d(2d-1)) partitions over GF(prime), in blocks."""
    total = d ** num_edges(d)
    table = AgreementTable.empty()
    for lo in range(0, total, batch):
        hi = min(total, lo + batch)
        table.merge(survey_colorings(coloring_block(d, lo, hi), d, prime, batch))
        if progress is not None:
            progress(hi, total)
    return table
