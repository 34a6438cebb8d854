"""Exact determinants and kernels, and the det^S2 map built on them."""
from __future__ import annotations

import math
from functools import lru_cache
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Sequence

import numpy as np

from .core import Edge, EdgeTensor, InstanceError, edge_key, edges, num_edges
from .field import FieldSpec, Raw
from .system import SystemMatrix, build_A, build_At

# Largest modulus for the vectorised int64 path: products stay below 2^62.
BATCH_PRIME_LIMIT = 1 << 31


class InvariantViolation(AssertionError):
    """A mathematical identity that must hold failed on a concrete instance."""

    def __init__(self, message: str, instance: Any = None):
        super().__init__(message)
        self.instance = instance


def _rows_and_field(m, field: FieldSpec | None):
    if isinstance(m, SystemMatrix):
        return [list(r) for r in m.rows], m.field, m.shape[1]
    if field is None:
        raise TypeError("a field is required for plain matrices")
    rows = [[field.coerce(x) for x in r] for r in m]
    return rows, field, (len(rows[0]) if rows else 0)


def bareiss(rows: list[list[int]]) -> int:
    """Determinant of a square integer matrix by fraction-free elimination."""
    a = [list(r) for r in rows]
    n = len(a)
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        piv = a[k][k]
        row_k = a[k]
        for i in range(k + 1, n):
            row_i = a[i]
            aik = row_i[k]
            for j in range(k + 1, n):
                row_i[j] = (piv * row_i[j] - aik * row_k[j]) // prev
            row_i[k] = 0
        prev = piv
    return sign * a[n - 1][n - 1] if n else 1


def _det_mod_p(a: list[list[int]], p: int) -> int:
    n = len(a)
    det = 1
    for c in range(n):
        piv_row = next((r for r in range(c, n) if a[r][c]), None)
        if piv_row is None:
            return 0
        if piv_row != c:
            a[c], a[piv_row] = a[piv_row], a[c]
            det = -det
        piv = a[c][c]
        det = det * piv % p
        inv = pow(piv, -1, p)
        row_c = a[c]
        for r in range(c + 1, n):
            f = a[r][c]
            if f:
                f = f * inv % p
                row_r = a[r]
                for j in range(c + 1, n):
                    row_r[j] = (row_r[j] - f * row_c[j]) % p
                row_r[c] = 0
    return det % p


def det_exact(m, field: FieldSpec | None = None) -> Raw:
    """Exact determinant of a square matrix.

    Over Q each row is scaled to integers, the integer determinant is taken
    with Bareiss elimination, and the scale factors are divided back out.
    """
    rows, f, ncols = _rows_and_field(m, field)
    if len(rows) != ncols:
        raise InstanceError(f"determinant of non-square {len(rows)}x{ncols} matrix")
    if f.is_rational:
        scale = 1
        int_rows = []
        for r in rows:
            lcm = 1
            for x in r:
                lcm = math.lcm(lcm, Fraction(x).denominator)
            scale *= lcm
            int_rows.append([int(x * lcm) for x in r])
        return Fraction(bareiss(int_rows), scale)
    return _det_mod_p(rows, f.prime)


def rref(rows: list[list[Raw]], f: FieldSpec) -> tuple[list[list[Raw]], list[int]]:
    """Reduced row echelon form and pivot columns (first-nonzero pivoting)."""
    a = [list(r) for r in rows]
    n = len(a)
    m = len(a[0]) if a else 0
    pivots: list[int] = []
    r = 0
    for c in range(m):
        if r == n:
            break
        pr = next((i for i in range(r, n) if a[i][c] != 0), None)
        if pr is None:
            continue
        a[r], a[pr] = a[pr], a[r]
        inv = f.inv(a[r][c])
        a[r] = [f.mul(inv, x) for x in a[r]]
        for i in range(n):
            if i != r and a[i][c] != 0:
                fac = a[i][c]
                a[i] = [f.sub(x, f.mul(fac, y)) for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return a[:r], pivots


def null_space(m, field: FieldSpec | None = None) -> list[tuple[Raw, ...]]:
    """Null-space basis, one vector per free column, in column order.

    Each vector is scaled so that its first nonzero entry is 1.
    """
    rows, f, ncols = _rows_and_field(m, field)
    red, pivots = rref(rows, f) if rows else ([], [])
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        v = [f.zero] * ncols
        v[free] = f.one
        for row, pc in zip(red, pivots):
            v[pc] = f.neg(row[free])
        lead = next(x for x in v if x != 0)
        if lead != 1:
            inv = f.inv(lead)
            v = [f.mul(inv, x) for x in v]
        basis.append(tuple(v))
    return basis


def rank(m, field: FieldSpec | None = None) -> int:
    rows, f, _ = _rows_and_field(m, field)
    return len(rref(rows, f)[1]) if rows else 0


@dataclass(frozen=True)
class KernelWitness:
    """Coefficients lam_e, one per edge, solving the whole system."""

    d: int
    field: FieldSpec
    coeffs: dict[Edge, Raw]
    case: str | None = None

    @property
    def nontrivial(self) -> bool:
        return any(x != 0 for x in self.coeffs.values())

    def vector(self) -> tuple[Raw, ...]:
        return tuple(self.coeffs.get(e, self.field.zero) for e in edges(self.d))

    def to_json(self) -> dict[str, str]:
        fmt = self.field.format
        return {edge_key(e): fmt(self.coeffs.get(e, self.field.zero)) for e in edges(self.d)}


def kernel_basis(m: SystemMatrix | Sequence[Sequence[Any]], field: FieldSpec | None = None):
    """Kernel of ``m``; as KernelWitness objects when columns are edges."""
    vecs = null_space(m, field)
    if isinstance(m, SystemMatrix) and m.d is not None and m.col_edges == edges(m.d):
        return [KernelWitness(m.d, m.field, dict(zip(m.col_edges, v))) for v in vecs]
    return vecs


# -- det^S2 ---------------------------------------------------------------


def det_s2(t: EdgeTensor) -> Raw:
    """det^S2(t) := det A_1(t)."""
    return det_exact(build_At(t, 1))


@dataclass
class InvarianceReport:
    value: Raw
    per_omit: dict[int, Raw]
    ok: bool


def det_s2_invariance_check(t: EdgeTensor, strict: bool = True) -> InvarianceReport:
    """det A_t for every t; all must agree."""
    per = {k: det_exact(build_At(t, k)) for k in range(1, 2 * t.d + 1)}
    ok = len(set(per.values())) == 1
    if strict and not ok:
        raise InvariantViolation(f"det(A_t) differs across t: {per}", t.to_json())
    return InvarianceReport(per[1], per, ok)


@dataclass
class MultilinearityReport:
    lhs: Raw
    rhs: Raw
    det_u: Raw
    det_v: Raw
    ok: bool


def multilinearity_check(
    t: EdgeTensor, e: Edge, u: Sequence[Any], v: Sequence[Any], a: Any, b: Any, strict: bool = True
) -> MultilinearityReport:
    f = t.field
    if len(u) != t.d or len(v) != t.d:
        raise InstanceError(f"slot vectors must have length {t.d}")
    u = [f.coerce(x) for x in u]
    v = [f.coerce(x) for x in v]
    a, b = f.coerce(a), f.coerce(b)
    mix = [f.add(f.mul(a, x), f.mul(b, y)) for x, y in zip(u, v)]
    lhs = det_s2(t.replace({e: mix}))
    du = det_s2(t.replace({e: u}))
    dv = det_s2(t.replace({e: v}))
    rhs = f.add(f.mul(a, du), f.mul(b, dv))
    ok = lhs == rhs
    if strict and not ok:
        raise InvariantViolation(f"multilinearity fails at slot {edge_key(e)}", t.to_json())
    return MultilinearityReport(lhs, rhs, du, dv, ok)


# -- vectorised prime-field path for basis tensors --------------------------


_TABLE_LIMIT = 1 << 22


@lru_cache(maxsize=4)
def _inverse_table(p: int) -> np.ndarray:
    table = np.zeros(p, dtype=np.int64)
    table[1:] = [pow(x, -1, p) for x in range(1, p)]
    return table


def det_mod_p_batch(mats: np.ndarray, p: int) -> np.ndarray:
    """Determinants mod p of a stack of square int64 matrices, shape (B, n, n)."""
    if p >= BATCH_PRIME_LIMIT:
        raise ValueError(f"batched path needs p < 2^31, got {p}")
    a = np.array(mats, dtype=np.int64) % p
    bsz, n, _ = a.shape
    det = np.ones(bsz, dtype=np.int64)
    alive = np.ones(bsz, dtype=bool)
    idx = np.arange(bsz)
    for c in range(n):
        col = a[:, c:, c]
        has = col != 0
        found = has.any(axis=1)
        alive &= found
        prow = c + np.argmax(has, axis=1)
        swap = found & (prow != c)
        if swap.any():
            s = idx[swap]
            rc = a[s, c, :].copy()
            a[s, c, :] = a[s, prow[swap], :]
            a[s, prow[swap], :] = rc
            det[s] = (p - det[s]) % p
        piv = a[:, c, c]
        piv = np.where(found, piv, 1)
        det = det * piv % p
        inv = _inverse_table(p)[piv] if p < _TABLE_LIMIT else np.array(
            [pow(int(x), -1, p) for x in piv], dtype=np.int64
        )
        factors = a[:, c + 1 :, c] * inv[:, None] % p
        a[:, c + 1 :, c:] = (a[:, c + 1 :, c:] - factors[:, :, None] * a[:, c, None, c:] % p) % p
    return np.where(alive, det, 0)


def _a1_template(d: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Positions in A_1 touched by each edge: (rows-offset, column, sign)."""
    blocks = [k for k in range(2, 2 * d + 1)]
    pos = {k: n * d for n, k in enumerate(blocks)}
    rows, cols, sgn = [], [], []
    for c, (i, j) in enumerate(edges(d)):
        for k, s in ((i, (-1) ** j), (j, (-1) ** (i - 1))):
            if k in pos:
                rows.append(pos[k])
                cols.append(c)
                sgn.append(s)
    return np.array(rows), np.array(cols), np.array(sgn)


def det_s2_colorings_mod_p(colorings: np.ndarray, d: int, p: int) -> np.ndarray:
    """det^S2 mod p of the basis tensors given as color arrays.

    ``colorings`` has shape (B, d(2d-1)) with colors 1..d in colex edge order.
    """
    col = np.asarray(colorings, dtype=np.int64)
    if col.ndim == 1:
        col = col[None, :]
    n = num_edges(d)
    bsz = col.shape[0]
    rows, cols, sgn = _a1_template(d)
    mats = np.zeros((bsz, n, n), dtype=np.int64)
    batch = np.arange(bsz)[:, None]
    # each edge contributes sign * e_color in the blocks of its endpoints
    mats[batch, rows[None, :] + col[:, cols] - 1, cols[None, :]] = sgn[None, :] % p
    return det_mod_p_batch(mats, p)
