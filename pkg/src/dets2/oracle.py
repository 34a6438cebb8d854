"""Slow, independent reference implementations used to check production code.

Nothing here calls the elimination or union-find code in :mod:`dets2.linalg`
or :mod:`dets2.partitions`.
"""
from __future__ import annotations

import itertools
import json
import math
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Any, Sequence

from .core import EdgeTensor, basis_vector, build_Ed, edges, num_edges
from .field import FieldSpec, Q, Raw, is_prime
from .partitions import Partition
from .system import build_At

GOLDEN_PATH = Path(__file__).with_name("golden.json")
REGEN_COMMAND = "dets2 oracle regen"

COFACTOR_CAP = 8
COFACTOR_CAP_OVERRIDE = 15


class OracleLimitError(ValueError):
    pass


def det_cofactor(rows: Sequence[Sequence[Any]], field: FieldSpec = Q, override: bool = False) -> Raw:
    """Laplace expansion along the first remaining row, memoised on the set of used columns."""
    n = len(rows)
    cap = COFACTOR_CAP_OVERRIDE if override else COFACTOR_CAP
    if n > cap:
        raise OracleLimitError(f"cofactor oracle capped at n={cap}, got {n}")
    if any(len(r) != n for r in rows):
        raise ValueError("cofactor determinant needs a square matrix")
    a = [[field.coerce(x) for x in r] for r in rows]
    f = field

    @lru_cache(maxsize=None)
    def minor(row: int, used: int) -> Raw:
        if row == n:
            return f.one
        total = f.zero
        sign = 0  # parity of used columns to the left of c
        for c in range(n):
            if used >> c & 1:
                sign += 1
                continue
            x = a[row][c]
            if x != 0:
                term = f.mul(x, minor(row + 1, used | (1 << c)))
                total = f.sub(total, term) if (c - sign) % 2 else f.add(total, term)
        return total

    return minor(0, 0)


def _primes_above(start: int):
    p = start
    while True:
        if is_prime(p):
            yield p
        p += 1


def det_multimodular(rows: Sequence[Sequence[int]]) -> int:
    """Integer determinant via residues mod many primes and the CRT.

    Enough primes are used to exceed twice the Hadamard bound.
    """
    n = len(rows)
    bound = 1
    for r in rows:
        bound *= math.isqrt(sum(x * x for x in r)) + 1
    modulus, value = 1, 0
    for p in _primes_above(1 << 30):
        if modulus > 2 * bound:
            break
        m = [[x % p for x in r] for r in rows]
        det = 1
        for c in range(n):
            r = c
            while r < n and m[r][c] == 0:
                r += 1
            if r == n:
                det = 0
                break
            if r != c:
                m[c], m[r] = m[r], m[c]
                det = p - det
            inv = pow(m[c][c], p - 2, p)
            det = det * m[c][c] % p
            for rr in range(c + 1, n):
                if m[rr][c]:
                    fac = m[rr][c] * inv % p
                    m[rr] = [(x - fac * y) % p for x, y in zip(m[rr], m[c])]
        # combine value (mod modulus) with det (mod p)
        t = (det - value) * pow(modulus, -1, p) % p
        value += modulus * t
        modulus *= p
    return value - modulus if value > modulus // 2 else value


def dfs_cycle_check(p) -> dict[int, bool]:
    """Per color, True when the color class is acyclic (iterative DFS)."""
    verdict = {}
    nv = 2 * p.d
    for c in range(1, p.d + 1):
        adj: dict[int, list[int]] = {v: [] for v in range(1, nv + 1)}
        for (i, j), col in zip(edges(p.d), p.colors):
            if col == c:
                adj[i].append(j)
                adj[j].append(i)
        seen: set[int] = set()
        acyclic = True
        for root in adj:
            if root in seen or not acyclic:
                continue
            stack = [(root, 0)]
            seen.add(root)
            while stack and acyclic:
                v, parent = stack.pop()
                skipped_parent = False
                for w in adj[v]:
                    if w == parent and not skipped_parent:
                        skipped_parent = True
                        continue
                    if w in seen:
                        acyclic = False
                        break
                    seen.add(w)
                    stack.append((w, v))
        verdict[c] = acyclic
    return verdict


def _basis_a1_rows(d: int, colors: Sequence[int], field: FieldSpec) -> list[list[Raw]]:
    t = EdgeTensor(d, field, tuple(basis_vector(c, d, field) for c in colors))
    return [list(r) for r in build_At(t, 1).rows]


def exhaustive_d2_report(field: FieldSpec = Q) -> dict:
    """All 64 2-partitions of K_4: DFS cycle check vs cofactor det^S2 != 0."""
    d = 2
    cells = {"cycle_free_and_nonzero": 0, "cycle_free_and_zero": 0, "cyclic_and_nonzero": 0, "cyclic_and_zero": 0}
    bad = []
    for colors in itertools.product((1, 2), repeat=num_edges(d)):
        p = Partition(d, colors)
        cf = all(dfs_cycle_check(p).values())
        nz = det_cofactor(_basis_a1_rows(d, colors, field), field) != 0
        key = ("cycle_free" if cf else "cyclic") + ("_and_nonzero" if nz else "_and_zero")
        cells[key] += 1
        if cf != nz:
            bad.append(p.to_json())
    total = sum(cells.values())
    return {
        "total": total,
        **cells,
        "cycle_free_count": cells["cycle_free_and_nonzero"] + cells["cycle_free_and_zero"],
        "off_diagonal": [cells["cycle_free_and_zero"], cells["cyclic_and_nonzero"]],
        "passes": not bad,
        "counterexamples": bad,
    }


def det_s2_Ed_oracle(d: int) -> Fraction:
    """det A_1(E_d) over Q: cofactor expansion for d <= 3, multimodular beyond."""
    rows = [[int(x) for x in r] for r in build_At(build_Ed(d, Q), 1).rows]
    if len(rows) <= COFACTOR_CAP_OVERRIDE:
        return Fraction(det_cofactor(rows, Q, override=True))
    return Fraction(det_multimodular(rows))


def compute_golden(max_d: int = 6) -> dict:
    return {
        "generated_by": REGEN_COMMAND,
        "det_s2_Ed": {str(d): Q.format(det_s2_Ed_oracle(d)) for d in range(2, max_d + 1)},
        "d2_cycle_free_count": exhaustive_d2_report(Q)["cycle_free_count"],
    }


def load_golden(path: Path = GOLDEN_PATH) -> dict:
    return json.loads(path.read_text())


def regen(path: Path = GOLDEN_PATH, check: bool = False) -> tuple[bool, dict]:
    """Recompute golden values; write them, or in check mode compare only."""
    fresh = compute_golden()
    if check:
        try:
            stored = load_golden(path)
        except FileNotFoundError:
            return False, fresh
        return stored == fresh, fresh
    path.write_text(json.dumps(fresh, indent=2) + "\n")
    return True, fresh
