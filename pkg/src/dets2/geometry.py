"""Difference tensors v_ij = p_j - p_i of point configurations.

Their det^S2 always vanishes; :func:`geometric_witness` builds an explicit
nonzero solution of the system from a linear dependence among the vectors
p_t - p_1.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Any, Sequence

from .core import EdgeTensor, InstanceError, edges
from .field import FieldSpec, Q, Raw
from .linalg import InvariantViolation, KernelWitness, det_s2, null_space
from .system import equation_residuals


@dataclass(frozen=True)
class PointConfig:
    d: int
    field: FieldSpec
    points: tuple[tuple[Raw, ...], ...]

    def __post_init__(self):
        if len(self.points) != 2 * self.d:
            raise InstanceError(f"expected {2 * self.d} points for d={self.d}, got {len(self.points)}")
        for n, p in enumerate(self.points, 1):
            if len(p) != self.d:
                raise InstanceError(f"point {n} has length {len(p)}, expected {self.d}")

    @classmethod
    def from_lists(cls, d: int, field: FieldSpec, points: Sequence[Sequence[Any]]) -> "PointConfig":
        return cls(d, field, tuple(tuple(field.coerce(x) for x in p) for p in points))

    @classmethod
    def random(cls, d: int, field: FieldSpec, rng: random.Random, bound: int | None = 3) -> "PointConfig":
        """Small-integer coordinates in [-bound, bound] (over GF(p): uniform residues if bound is None)."""
        if bound is None:
            return cls(d, field, tuple(tuple(field.random(rng) for _ in range(d)) for _ in range(2 * d)))
        return cls.from_lists(d, field, [[rng.randint(-bound, bound) for _ in range(d)] for _ in range(2 * d)])

    def to_json(self) -> dict:
        fmt = self.field.format
        return {"d": self.d, "field": self.field.to_json(), "points": [[fmt(x) for x in p] for p in self.points]}

    @classmethod
    def from_json(cls, obj: Any) -> "PointConfig":
        if not isinstance(obj, dict):
            raise InstanceError("points file must be a JSON object")
        for key in ("d", "points"):
            if key not in obj:
                raise InstanceError(f"missing key {key!r}")
        d = obj["d"]
        if isinstance(d, bool) or not isinstance(d, int) or d < 1:
            raise InstanceError(f"dimension d must be a positive integer, got {d!r}")
        field = FieldSpec.from_json(obj.get("field", "rational"))
        pts = obj["points"]
        if not isinstance(pts, list):
            raise InstanceError("'points' must be a list")
        return cls.from_lists(d, field, [[x if isinstance(x, str) else str(x) for x in p] for p in pts])


def points_to_differences(c: PointConfig) -> EdgeTensor:
    f = c.field
    vecs = tuple(
        tuple(f.sub(b, a) for a, b in zip(c.points[i - 1], c.points[j - 1])) for i, j in edges(c.d)
    )
    return EdgeTensor(c.d, f, vecs)


def first_row_dependence(t: EdgeTensor) -> list[Raw]:
    """lam_2..lam_2d, not all zero, with sum_t (-1)^t lam_t v_{1,t} = 0.

    Returned as a list indexed by vertex (entries 0 and 1 unused).
    """
    d, f = t.d, t.field
    cols = [[f.mul(f.sign(j), x) for x in t[(1, j)]] for j in range(2, 2 * d + 1)]
    rows = [[cols[c][r] for c in range(len(cols))] for r in range(d)]
    lam = null_space(rows, f)[0]
    return [f.zero, f.zero, *lam]


def geometric_witness(c: PointConfig) -> KernelWitness:
    """Nonzero (lam_ij) solving every equation of the system for p_j - p_i."""
    t = points_to_differences(c)
    d, f = c.d, c.field
    n = 2 * d
    if t.is_zero():
        coeffs = {e: f.zero for e in edges(d)}
        coeffs[(1, 2)] = f.one
        return KernelWitness(d, f, coeffs, "degenerate")

    lam = first_row_dependence(t)
    big = f.zero
    for s in range(2, n + 1):
        big = f.add(big, f.mul(f.sign(s), lam[s]))

    coeffs = {}
    if big != 0:
        case = "I"
        inv = f.inv(big)
        for i, j in edges(d):
            coeffs[(i, j)] = lam[j] if i == 1 else f.mul(f.mul(lam[i], lam[j]), inv)
    else:
        case = "II"
        a = next(s for s in range(2, n + 1) if lam[s] != 0)
        inv = f.inv(lam[a])
        for i, j in edges(d):
            coeffs[(i, j)] = f.zero if i < a else f.mul(f.mul(lam[i], lam[j]), inv)

    w = KernelWitness(d, f, coeffs, case)
    bad = [k for k, r in enumerate(equation_residuals(t, coeffs), 1) if any(x != 0 for x in r)]
    if bad or not w.nontrivial:
        raise InvariantViolation(
            f"case {case} witness fails equations {bad}" if bad else f"case {case} witness is zero",
            c.to_json(),
        )
    return w


@dataclass
class VanishingReport:
    det: Raw
    witness: KernelWitness

    def to_json(self) -> dict:
        f = self.witness.field
        return {"det": f.format(self.det), "witness": self.witness.to_json(), "case": self.witness.case}


def assert_vanishing(c: PointConfig) -> VanishingReport:
    det = det_s2(points_to_differences(c))
    w = geometric_witness(c)
    if det != 0:
        raise InvariantViolation(f"det^S2 of a difference tensor is {c.field.format(det)}, not 0", c.to_json())
    return VanishingReport(det, w)


def case_two_config(d: int, field: FieldSpec = Q, rng: random.Random | None = None) -> PointConfig:
    """A configuration whose witness takes the Lambda = 0 branch.

    Seeded search over points with coordinates in {-1, 0, 1}, where affinely
    dependent subsets are common.
    """
    rng = rng or random.Random(0)
    for _ in range(10000):
        c = PointConfig.random(d, field, rng, bound=1)
        t = points_to_differences(c)
        if t.is_zero():
            continue
        if geometric_witness(c).case == "II":
            return c
    raise RuntimeError("no case II configuration found")

