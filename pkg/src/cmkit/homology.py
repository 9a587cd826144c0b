"""Relative simplicial homology of closed pairs over a field; Conley indices.

Betti vectors are reported dimension-wise; over a field they coincide with
the cohomological ones, so the relative Betti vector of the closure/exit
pair of an isolated invariant set *is* its Conley index.  Default
coefficients are the two-element field (no orientation bookkeeping); the
rationals are available as a cross-check, with boundary sign ``(-1)**i``
for dropping the i-th vertex of the sorted vertex list.
"""

from __future__ import annotations

from typing import Iterable

from .complex import Simplex, SimplicialComplex
from .field import VectorField
from . import flow as _flow


def _pair_basis(complex_: SimplicialComplex, total, dropped):
    """Per-dimension bases of the quotient complex (simplices of A outside B)."""
    basis = {}
    for sigma in sorted(total - dropped, key=complex_.sort_key):
        basis.setdefault(len(sigma) - 1, []).append(sigma)
    return basis


def _boundary_gf2(basis, k):
    """Rows indexed by k-simplices as bitmasks over the (k-1)-basis."""
    lower = {s: i for i, s in enumerate(basis.get(k - 1, []))}
    rows = []
    for sigma in basis.get(k, []):
        mask = 0
        for i in range(len(sigma)):
            face = sigma[:i] + sigma[i + 1:]
            if face in lower:
                mask |= 1 << lower[face]
        rows.append(mask)
    return rows


def _rank_gf2(rows) -> int:
    rank = 0
    pivots = []
    for row in rows:
        for p in pivots:
            low = p & -p
            if row & low:
                row ^= p
        if row:
            pivots.append(row)
            rank += 1
    return rank


def _boundary_int(basis, k):
    lower = {s: i for i, s in enumerate(basis.get(k - 1, []))}
    rows = []
    for sigma in basis.get(k, []):
        row = [0] * len(lower)
        for i in range(len(sigma)):
            face = sigma[:i] + sigma[i + 1:]
            if face in lower:
                row[lower[face]] = (-1) ** i
        rows.append(row)
    return rows


def _rank_bareiss(matrix) -> int:
    """Fraction-free Gaussian elimination over the integers."""
    m = [row[:] for row in matrix]
    if not m or not m[0]:
        return 0
    rows, cols = len(m), len(m[0])
    rank = 0
    prev = 1
    r = 0
    for c in range(cols):
        pivot_row = next((i for i in range(r, rows) if m[i][c]), None)
        if pivot_row is None:
            continue
        m[r], m[pivot_row] = m[pivot_row], m[r]
        for i in range(r + 1, rows):
            for j in range(c + 1, cols):
                m[i][j] = (m[r][c] * m[i][j] - m[i][c] * m[r][j]) // prev
            m[i][c] = 0
        prev = m[r][c]
        rank += 1
        r += 1
        if r == rows:
            break
    return rank


def _compose_is_zero_gf2(rows_k, rows_k1, n_k):
    # rows_k1: (k+1)-simplices over k-basis; rows_k: k-simplices over (k-1)-basis
    for row in rows_k1:
        acc = 0
        for j in range(n_k):
            if row >> j & 1:
                acc ^= rows_k[j]
        if acc:
            return False
    return True


def _compose_is_zero_int(rows_k, rows_k1):
    for row in rows_k1:
        if not rows_k:
            continue
        width = len(rows_k[0])
        acc = [0] * width
        for j, coef in enumerate(row):
            if coef:
                for c in range(width):
                    acc[c] += coef * rows_k[j][c]
        if any(acc):
            return False
    return True


def relative_betti(complex_: SimplicialComplex, closed_family: Iterable[Simplex],
                   dropped_family: Iterable[Simplex], field: str = "gf2") -> tuple[int, ...]:
    """Betti vector of the pair, indexed 0..dim(complex).

    Both families must be closed and nested; the quotient chain complex drops
    every face lying in the second family.  The square-zero identity of the
    assembled boundary operators is asserted on every call.
    """
    A = frozenset(closed_family)
    B = frozenset(dropped_family)
    if not B.issubset(A):
        raise ValueError("pair not nested: second family must lie inside the first")
    if not complex_.is_closed(A) or not complex_.is_closed(B):
        raise ValueError("both families must be closed")
    if field not in ("gf2", "rational"):
        raise ValueError(f"unknown coefficient field {field!r}")
    basis = _pair_basis(complex_, A, B)
    top = complex_.dim
    counts = {k: len(basis.get(k, [])) for k in range(top + 2)}
    ranks = {}
    if field == "gf2":
        boundaries = {k: _boundary_gf2(basis, k) for k in range(top + 2)}
        for k in range(1, top + 1):
            if not _compose_is_zero_gf2(boundaries[k], boundaries[k + 1], counts[k]):
                raise _flow.InternalInvariantError("boundary composition not zero over gf2")
        for k in range(top + 2):
            ranks[k] = _rank_gf2(boundaries[k])
    else:
        boundaries = {k: _boundary_int(basis, k) for k in range(top + 2)}
        for k in range(1, top + 1):
            if not _compose_is_zero_int(boundaries[k], boundaries[k + 1]):
                raise _flow.InternalInvariantError("boundary composition not zero over the rationals")
        for k in range(top + 2):
            ranks[k] = _rank_bareiss(boundaries[k])
    betti = []
    for k in range(top + 1):
        betti.append(counts[k] - ranks[k] - ranks[k + 1])
    return tuple(betti)


def conley_index(complex_: SimplicialComplex, field_: VectorField,
                 sset: Iterable[Simplex], coefficients: str = "gf2") -> tuple[int, ...]:
    """Betti vector of the closure/exit pair of an isolated invariant set."""
    p1, p2 = _flow.canonical_index_pair(complex_, field_, sset)
    return relative_betti(complex_, p1, p2, coefficients)


def poincare_polynomial(betti: Iterable[int]) -> str:
    """Display string with the k-th coefficient attached to t**k; '0' when zero."""
    terms = []
    for k, b in enumerate(betti):
        if b == 0:
            continue
        if k == 0:
            terms.append(str(b))
        else:
            power = "t" if k == 1 else f"t^{k}"
            terms.append(power if b == 1 else f"{b}{power}")
    return "+".join(terms) if terms else "0"
