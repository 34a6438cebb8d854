"""Edges of K_{2d}, edge tensors, and the canonical element E_d.

Vertices are 1-based.  Edges ``(i, j)`` with ``i < j`` are ordered
colexicographically: (1,2), (1,3), (2,3), (1,4), (2,4), (3,4), ...
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Iterable, Mapping, Sequence

from .field import FieldSpec, Q, Raw

Edge = tuple[int, int]


class InstanceError(ValueError):
    """Malformed instance data (bad keys, wrong lengths, inconsistent d)."""


class InternalConsistencyError(RuntimeError):
    """A construction check that can only fail through a bug."""


def num_edges(d: int) -> int:
    return d * (2 * d - 1)


def check_edge(e: Edge, d: int) -> None:
    i, j = e
    if not (1 <= i < j <= 2 * d):
        raise InstanceError(f"edge {e} invalid for K_{2 * d}")


def column_index(e: Edge, d: int) -> int:
    """1-based colex position of edge ``e`` among the edges of K_{2d}."""
    check_edge(e, d)
    i, j = e
    return (j - 1) * (j - 2) // 2 + i


def edge_at(index: int, d: int) -> Edge:
    """Inverse of :func:`column_index`."""
    if not 1 <= index <= num_edges(d):
        raise InstanceError(f"column {index} out of range for d={d}")
    j = 2
    while j * (j - 1) // 2 < index:
        j += 1
    return index - (j - 1) * (j - 2) // 2, j


@lru_cache(maxsize=None)
def edges(d: int) -> tuple[Edge, ...]:
    return tuple((i, j) for j in range(2, 2 * d + 1) for i in range(1, j))


def edge_key(e: Edge) -> str:
    return f"{e[0]},{e[1]}"


def parse_edge_key(key: str, d: int) -> Edge:
    try:
        i, j = (int(x) for x in key.split(","))
    except ValueError:
        raise InstanceError(f"malformed edge key {key!r}") from None
    check_edge((i, j), d)
    return i, j


def _check_dimension(d: Any) -> int:
    if isinstance(d, bool) or not isinstance(d, int) or d < 1:
        raise InstanceError(f"dimension d must be a positive integer, got {d!r}")
    return d


@dataclass(frozen=True, eq=False)
class EdgeTensor:
    """An assignment edge -> vector in k^d, for every edge of K_{2d}.

    ``vectors`` holds raw field values in colex edge order.
    """

    d: int
    field: FieldSpec
    vectors: tuple[tuple[Raw, ...], ...]

    def __post_init__(self):
        _check_dimension(self.d)
        if len(self.vectors) != num_edges(self.d):
            raise InstanceError(
                f"expected {num_edges(self.d)} edge vectors for d={self.d}, got {len(self.vectors)}"
            )
        for e, v in zip(edges(self.d), self.vectors):
            if len(v) != self.d:
                raise InstanceError(f"vector at edge {edge_key(e)} has length {len(v)}, expected {self.d}")

    @classmethod
    def from_mapping(cls, d: int, field: FieldSpec, entries: Mapping[Edge, Sequence[Any]]) -> "EdgeTensor":
        _check_dimension(d)
        missing = [e for e in edges(d) if e not in entries]
        if missing:
            raise InstanceError(f"missing edge {edge_key(missing[0])}")
        for e in entries:
            check_edge(e, d)
        vecs = tuple(tuple(field.coerce(x) for x in entries[e]) for e in edges(d))
        return cls(d, field, vecs)

    @classmethod
    def from_function(cls, d: int, field: FieldSpec, fn) -> "EdgeTensor":
        return cls.from_mapping(d, field, {e: fn(e) for e in edges(d)})

    @classmethod
    def zero(cls, d: int, field: FieldSpec = Q) -> "EdgeTensor":
        z = field.zero
        return cls(d, field, tuple((z,) * d for _ in edges(d)))

    @classmethod
    def random(cls, d: int, field: FieldSpec, rng, bound: int = 10) -> "EdgeTensor":
        return cls(d, field, tuple(tuple(field.random(rng, bound) for _ in range(d)) for _ in edges(d)))

    def __getitem__(self, e: Edge) -> tuple[Raw, ...]:
        return self.vectors[column_index(e, self.d) - 1]

    def items(self) -> Iterable[tuple[Edge, tuple[Raw, ...]]]:
        return zip(edges(self.d), self.vectors)

    def replace(self, updates: Mapping[Edge, Sequence[Any]]) -> "EdgeTensor":
        """Copy with some slots replaced."""
        vecs = list(self.vectors)
        for e, v in updates.items():
            if len(v) != self.d:
                raise InstanceError(f"vector for {edge_key(e)} has length {len(v)}, expected {self.d}")
            vecs[column_index(e, self.d) - 1] = tuple(self.field.coerce(x) for x in v)
        return EdgeTensor(self.d, self.field, tuple(vecs))

    def is_zero(self) -> bool:
        return all(x == 0 for v in self.vectors for x in v)

    def __eq__(self, other):
        if not isinstance(other, EdgeTensor):
            return NotImplemented
        return (self.d, self.field, self.vectors) == (other.d, other.field, other.vectors)

    def __hash__(self):
        return hash((self.d, self.field, self.vectors))

    def basis_labeling(self) -> tuple[int, ...] | None:
        """Colors (1..d) per edge if every slot is a standard basis vector, else None."""
        colors = []
        for v in self.vectors:
            nz = [t for t, x in enumerate(v) if x != 0]
            if len(nz) != 1 or v[nz[0]] != 1:
                return None
            colors.append(nz[0] + 1)
        return tuple(colors)

    # -- JSON -------------------------------------------------------------

    def to_json(self) -> dict:
        fmt = self.field.format
        return {
            "d": self.d,
            "field": self.field.to_json(),
            "vectors": {edge_key(e): [fmt(x) for x in v] for e, v in self.items()},
        }

    @classmethod
    def from_json(cls, obj: Any) -> "EdgeTensor":
        if not isinstance(obj, dict):
            raise InstanceError("instance must be a JSON object")
        for key in ("d", "vectors"):
            if key not in obj:
                raise InstanceError(f"missing key {key!r}")
        d = _check_dimension(obj["d"])
        field = FieldSpec.from_json(obj.get("field", "rational"))
        raw = obj["vectors"]
        if not isinstance(raw, dict):
            raise InstanceError("'vectors' must be an object keyed by \"i,j\"")
        entries = {}
        for key, vec in raw.items():
            e = parse_edge_key(key, d)
            if not isinstance(vec, list) or len(vec) != d:
                raise InstanceError(f"vector at edge {key} must be a list of {d} scalars")
            entries[e] = [x if isinstance(x, str) else str(x) for x in vec]
        return cls.from_mapping(d, field, entries)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=False)


def basis_vector(t: int, d: int, field: FieldSpec = Q) -> tuple[Raw, ...]:
    """Standard basis vector e_t (t is 1-based)."""
    return tuple(field.one if s == t else field.zero for s in range(1, d + 1))


def ed_color(i: int, j: int, d: int) -> int:
    """Index t of the basis vector that E_d places on edge (i, j).

    Each of the four defining cases is tested for every t; exactly one
    (case, t) pair must fire.
    """
    hits = []
    for t in range(1, d + 1):
        if i < 2 * t - 1 and i % 2 == 1 and j == 2 * t - 1:
            hits.append(t)
        if i < 2 * t and i % 2 == 0 and j == 2 * t:
            hits.append(t)
        if i == 2 * t - 1 and j > 2 * t - 1 and j % 2 == 0:
            hits.append(t)
        if i == 2 * t and j > 2 * t and j % 2 == 1:
            hits.append(t)
    if len(hits) != 1:
        raise InternalConsistencyError(f"E_{d}: edge ({i},{j}) matched {len(hits)} cases")
    return hits[0]


def build_Ed(d: int, field: FieldSpec = Q) -> EdgeTensor:
    if d < 2:
        raise InstanceError(f"E_d needs d >= 2, got {d}")
    return EdgeTensor(d, field, tuple(basis_vector(ed_color(i, j, d), d, field) for i, j in edges(d)))
