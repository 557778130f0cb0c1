"""Exact linear algebra kernels over the local ring Z_(p) and the field F_p.

All matrices are lists of rows of Python ints. Nothing here ever rounds or
reduces modulo a power of p, so coefficients may grow; that is deliberate.
"""

from __future__ import annotations

from math import gcd
from typing import Optional, Sequence

Matrix = list[list[int]]


def valuation(a: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if a == 0:
        raise ValueError("valuation of 0 is infinite")
    a = abs(a)
    if p == 2:
        return (a & -a).bit_length() - 1
    v = 0
    while a % p == 0:
        a //= p
        v += 1
    return v


def split_unit(a: int, p: int) -> tuple[int, int]:
    """Write a nonzero a as p**v * u with u prime to p; return (v, u)."""
    v = valuation(a, p)
    return v, a // p**v


def _strip_unit_content(row: list[int], p: int) -> list[int]:
    # Dividing a row by a p-local unit does not change its Z_(p)-span.
    g = 0
    for x in row:
        if x:
            g = gcd(g, x)
            if g == 1:
                return row
    if g <= 1:
        return row
    while g % p == 0:
        g //= p
    if g == 1:
        return row
    return [x // g for x in row]


class LocalEchelon:
    """Row echelon form of an integer matrix over Z_(p).

    Pivots are chosen by minimal p-adic valuation over the remaining
    submatrix, so each pivot divides (over Z_(p)) every entry still to be
    eliminated. Rows are combined only by ``u*row - w*pivot_row`` with u a
    p-local unit, which keeps everything integral.

    The pivot valuations are the p-local invariant factors of the matrix.
    """

    def __init__(self, rows: Sequence[Sequence[int]], ncols: int, p: int):
        self.p = p
        self.ncols = ncols
        # (column, valuation, unit, row)
        self.pivots: list[tuple[int, int, int, list[int]]] = []
        work = [_strip_unit_content(list(r), p) for r in rows if any(r)]
        for r in work:
            if len(r) != ncols:
                raise ValueError(f"row of length {len(r)}, expected {ncols}")
        while work:
            best = None
            for ri, row in enumerate(work):
                for c, a in enumerate(row):
                    if a:
                        v = valuation(a, p)
                        if best is None or v < best[0]:
                            best = (v, ri, c)
                            if v == 0:
                                break
                if best is not None and best[0] == 0:
                    break
            if best is None:
                break
            v, ri, c = best
            prow = work.pop(ri)
            u = prow[c] // p**v
            self.pivots.append((c, v, u, prow))
            remaining = []
            for row in work:
                b = row[c]
                if b:
                    w = b // p**v
                    row = [u * x - w * y for x, y in zip(row, prow)]
                    row = _strip_unit_content(row, p)
                if any(row):
                    remaining.append(row)
            work = remaining

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def invariant_valuations(self) -> list[int]:
        """Valuations of the p-local invariant factors, sorted descending."""
        return sorted((v for _, v, _, _ in self.pivots), reverse=True)

    def reduce(self, vec: Sequence[int]) -> Optional[list[int]]:
        """Reduce ``vec`` against the pivots.

        Returns None if ``vec`` provably lies outside the Z_(p)-row span
        (a pivot column entry has too small a valuation); otherwise the
        residual, which is all zeros exactly when ``vec`` lies in the span.
        """
        p = self.p
        v = list(vec)
        for c, val, u, prow in self.pivots:
            b = v[c]
            if not b:
                continue
            if valuation(b, p) < val:
                return None
            w = b // p**val
            v = [u * x - w * y for x, y in zip(v, prow)]
        return v

    def contains(self, vec: Sequence[int]) -> bool:
        residual = self.reduce(vec)
        return residual is not None and not any(residual)


def local_invariants(rows: Sequence[Sequence[int]], ncols: int, p: int) -> tuple[int, list[int]]:
    """Return (free_rank, torsion exponents) of Z_(p)^ncols / rowspan(rows)."""
    ech = LocalEchelon(rows, ncols, p)
    return ncols - ech.rank, [e for e in ech.invariant_valuations() if e > 0]


# --- F_p ---------------------------------------------------------------------


def mod_matrix(mat: Sequence[Sequence[int]], p: int) -> Matrix:
    return [[x % p for x in row] for row in mat]


def rank_mod_p(mat: Sequence[Sequence[int]], p: int) -> int:
    """Rank over F_p by Gaussian elimination."""
    return len(row_basis_mod_p(mat, p))


def row_basis_mod_p(mat: Sequence[Sequence[int]], p: int) -> Matrix:
    """A reduced row echelon basis of the F_p row span."""
    rows = [r for r in mod_matrix(mat, p) if any(r)]
    if not rows:
        return []
    ncols = len(rows[0])
    basis: Matrix = []
    for col in range(ncols):
        piv = next((i for i, r in enumerate(rows) if r[col]), None)
        if piv is None:
            continue
        prow = rows.pop(piv)
        inv = pow(prow[col], -1, p)
        prow = [(x * inv) % p for x in prow]
        rows = [[(x - r[col] * y) % p for x, y in zip(r, prow)] for r in rows]
        rows = [r for r in rows if any(r)]
        basis = [[(x - b[col] * y) % p for x, y in zip(b, prow)] for b in basis]
        basis.append(prow)
        if not rows:
            break
    return basis


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]], ncols: int) -> Matrix:
    """Exact integer product of an m x k and a k x ncols matrix."""
    cols = [[row[j] for row in b] for j in range(ncols)]
    return [[sum(x * y for x, y in zip(row, col)) for col in cols] for row in a]


def matmul_mod_p(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]], p: int) -> Matrix:
    return mod_matrix(matmul(a, b, len(b[0]) if b else 0), p)


def transpose(mat: Sequence[Sequence[int]], nrows_if_empty: int = 0) -> Matrix:
    if not mat:
        return [[] for _ in range(nrows_if_empty)]
    return [list(col) for col in zip(*mat)]


def identity_matrix(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def det_mod_p(mat: Sequence[Sequence[int]], p: int) -> int:
    """Determinant over F_p of a square matrix (empty matrix has det 1)."""
    a = mod_matrix(mat, p)
    n = len(a)
    det = 1
    for col in range(n):
        piv = next((i for i in range(col, n) if a[i][col]), None)
        if piv is None:
            return 0
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det = det * a[col][col] % p
        inv = pow(a[col][col], -1, p)
        for i in range(col + 1, n):
            f = a[i][col] * inv % p
            if f:
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[col])]
    return det % p
