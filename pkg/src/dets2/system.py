"""Matrices of the signed linear system attached to an edge tensor.

For each vertex k of K_{2d} the vector equation

    sum_{s<k} (-1)^(s-1) lam_{s,k} v_{s,k} + sum_{t>k} (-1)^t lam_{k,t} v_{k,t} = 0

contributes a d-row block M_k.  Columns are the unknowns lam_e in colex edge
order.  A stacks all 2d blocks; A_t drops block t.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .core import Edge, EdgeTensor, InstanceError, column_index, edge_key, edges, num_edges
from .field import FieldSpec, Raw


@dataclass(frozen=True, eq=False)
class SystemMatrix:
    """Dense exact matrix with row-block and column provenance.

    ``row_blocks`` lists ``(k, first_row, last_row)`` with 1-based, inclusive
    row numbers; ``col_edges`` names the edge of each column.
    """

    field: FieldSpec
    rows: tuple[tuple[Raw, ...], ...]
    row_blocks: tuple[tuple[int, int, int], ...] = ()
    col_edges: tuple[Edge, ...] = ()
    d: int | None = None
    _ncols: int = dc_field(default=0, repr=False)

    def __post_init__(self):
        ncols = len(self.rows[0]) if self.rows else (len(self.col_edges) or self._ncols)
        object.__setattr__(self, "_ncols", ncols)
        if any(len(r) != ncols for r in self.rows):
            raise ValueError("ragged matrix")

    @classmethod
    def plain(cls, rows, field: FieldSpec) -> "SystemMatrix":
        return cls(field, tuple(tuple(field.coerce(x) for x in r) for r in rows))

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), self._ncols

    def column(self, e: Edge) -> tuple[Raw, ...]:
        c = self.col_edges.index(e)
        return tuple(r[c] for r in self.rows)

    def block(self, k: int) -> tuple[tuple[Raw, ...], ...]:
        for kk, lo, hi in self.row_blocks:
            if kk == k:
                return self.rows[lo - 1 : hi]
        raise KeyError(f"block M_{k} not present")

    def __eq__(self, other):
        if not isinstance(other, SystemMatrix):
            return NotImplemented
        return self.field == other.field and self.rows == other.rows and self.shape == other.shape

    def to_json(self) -> dict:
        fmt = self.field.format
        n, m = self.shape
        return {
            "rows": n,
            "cols": m,
            "field": self.field.to_json(),
            "entries": [[fmt(x) for x in r] for r in self.rows],
            "row_blocks": [{"k": k, "first_row": lo, "last_row": hi} for k, lo, hi in self.row_blocks],
            "col_edges": [edge_key(e) for e in self.col_edges],
        }


def _check_k(k: int, d: int, what: str) -> None:
    if not 1 <= k <= 2 * d:
        raise InstanceError(f"{what} {k} out of range 1..{2 * d}")


def _block_rows(t: EdgeTensor, k: int) -> list[list[Raw]]:
    d, f = t.d, t.field
    rows = [[f.zero] * num_edges(d) for _ in range(d)]
    for (i, j), v in t.items():
        if k == i:
            sgn = f.sign(j)
        elif k == j:
            sgn = f.sign(i - 1)
        else:
            continue
        c = column_index((i, j), d) - 1
        for r in range(d):
            rows[r][c] = f.mul(sgn, v[r])
    return rows


def _stack(t: EdgeTensor, ks) -> SystemMatrix:
    rows: list[tuple[Raw, ...]] = []
    blocks = []
    for k in ks:
        lo = len(rows) + 1
        rows.extend(tuple(r) for r in _block_rows(t, k))
        blocks.append((k, lo, len(rows)))
    return SystemMatrix(t.field, tuple(rows), tuple(blocks), edges(t.d), t.d, num_edges(t.d))


def build_Mk(t: EdgeTensor, k: int) -> SystemMatrix:
    _check_k(k, t.d, "equation index")
    return _stack(t, [k])


def build_A(t: EdgeTensor) -> SystemMatrix:
    return _stack(t, range(1, 2 * t.d + 1))


def build_At(t: EdgeTensor, omit: int) -> SystemMatrix:
    _check_k(omit, t.d, "omitted equation")
    return _stack(t, [k for k in range(1, 2 * t.d + 1) if k != omit])


def signed_block_sum(t: EdgeTensor) -> list[list[Raw]]:
    """sum_k (-1)^(k-1) M_k, which is identically zero."""
    f = t.field
    total = [[f.zero] * num_edges(t.d) for _ in range(t.d)]
    for k in range(1, 2 * t.d + 1):
        s = f.sign(k - 1)
        for r, row in enumerate(_block_rows(t, k)):
            total[r] = [f.add(a, f.mul(s, b)) for a, b in zip(total[r], row)]
    return total


def equation_residuals(t: EdgeTensor, coeffs) -> list[tuple[Raw, ...]]:
    """Left-hand side of each equation E_1..E_2d for unknowns ``coeffs``.

    ``coeffs`` is a mapping edge -> raw scalar (missing edges count as 0).
    Computed directly from the equation, not from the matrix.
    """
    d, f = t.d, t.field
    out = []
    for k in range(1, 2 * d + 1):
        acc = [f.zero] * d
        for s in range(1, k):
            lam = coeffs.get((s, k), f.zero)
            if lam != 0:
                c = f.mul(f.sign(s - 1), lam)
                acc = [f.add(a, f.mul(c, x)) for a, x in zip(acc, t[(s, k)])]
        for u in range(k + 1, 2 * d + 1):
            lam = coeffs.get((k, u), f.zero)
            if lam != 0:
                c = f.mul(f.sign(u), lam)
                acc = [f.add(a, f.mul(c, x)) for a, x in zip(acc, t[(k, u)])]
        out.append(tuple(acc))
    return out
