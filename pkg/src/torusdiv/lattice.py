# -*- coding: utf-8 -*-
"""
Exact integer linear algebra: Hermite and Smith normal forms, integral
solving and lattice invariants.

Row convention throughout: the rows of a matrix generate the lattice, and
transforms act on the left (U·A = H).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable, Optional, Sequence


class LatticeError(ValueError):
    """Raised for ragged input or mismatched dimensions."""


@dataclass(frozen=True)
class IntMatrix:
    rows: tuple[tuple[int, ...], ...]
    ncols: int

    def __post_init__(self) -> None:
        rows = tuple(tuple(int(x) for x in row) for row in self.rows)
        for row in rows:
            if len(row) != self.ncols:
                raise LatticeError(f"ragged matrix: expected {self.ncols} columns, got {len(row)}")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def of(cls, rows: Iterable[Sequence[int]], ncols: Optional[int] = None) -> "IntMatrix":
        rows = [tuple(r) for r in rows]
        if ncols is None:
            if not rows:
                raise LatticeError("column count required for a matrix without rows")
            ncols = len(rows[0])
        return cls(tuple(rows), ncols)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)), n)

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "IntMatrix":
        return cls(tuple((0,) * ncols for _ in range(nrows)), ncols)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, index: tuple[int, int]) -> int:
        i, j = index
        return self.rows[i][j]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(row[j] for row in self.rows)

    def transpose(self) -> "IntMatrix":
        return IntMatrix(tuple(self.column(j) for j in range(self.ncols)), self.nrows)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.ncols != other.nrows:
            raise LatticeError(f"cannot multiply {self.shape} by {other.shape}")
        cols = [other.column(j) for j in range(other.ncols)]
        return IntMatrix(
            tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in cols) for row in self.rows),
            other.ncols,
        )

    def row_times(self, x: Sequence[int]) -> tuple[int, ...]:
        """The row vector x·A."""
        if len(x) != self.nrows:
            raise LatticeError(f"vector of length {len(x)} against {self.nrows} rows")
        return tuple(sum(x[i] * self.rows[i][j] for i in range(self.nrows)) for j in range(self.ncols))

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def determinant(self) -> int:
        """Fraction-free Bareiss elimination."""
        if not self.is_square():
            raise LatticeError(f"determinant of non-square matrix {self.shape}")
        n = self.nrows
        if n == 0:
            return 1
        m = [list(r) for r in self.rows]
        sign, prev = 1, 1
        for k in range(n - 1):
            if m[k][k] == 0:
                swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
                if swap is None:
                    return 0
                m[k], m[swap] = m[swap], m[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            prev = m[k][k]
        return sign * m[n - 1][n - 1]

    def inverse_unimodular(self) -> "IntMatrix":
        """Integer inverse of a matrix with determinant +1 or -1."""
        if not self.is_square():
            raise LatticeError(f"inverse of non-square matrix {self.shape}")
        H, U = hnf(self)
        if H != IntMatrix.identity(self.nrows):
            raise LatticeError("matrix is not unimodular")
        return U

    def to_lists(self) -> list[list[int]]:
        return [list(r) for r in self.rows]

    def to_json(self) -> list[list[str]]:
        return [[str(x) for x in r] for r in self.rows]

    @classmethod
    def from_json(cls, data: Sequence[Sequence[str | int]], ncols: Optional[int] = None) -> "IntMatrix":
        return cls.of([[int(x) for x in r] for r in data], ncols)

    def __str__(self) -> str:
        return "[" + ", ".join("[" + ", ".join(str(x) for x in r) + "]" for r in self.rows) + "]"


def _add_row(m: list[list[int]], target: int, source: int, factor: int) -> None:
    if factor:
        src = m[source]
        m[target] = [a + factor * b for a, b in zip(m[target], src)]


def _add_col(m: list[list[int]], target: int, source: int, factor: int) -> None:
    if factor:
        for row in m:
            row[target] += factor * row[source]


def _swap_cols(m: list[list[int]], a: int, b: int) -> None:
    for row in m:
        row[a], row[b] = row[b], row[a]


def hnf(A: IntMatrix) -> tuple[IntMatrix, IntMatrix]:
    """
    Row Hermite normal form.

    Returns (H, U) with U unimodular and U·A = H. Pivots are positive,
    entries above a pivot lie in [0, pivot), zero rows sit at the bottom.
    """
    m, n = A.shape
    H = [list(r) for r in A.rows]
    U = [list(r) for r in IntMatrix.identity(m).rows]
    p = 0
    for col in range(n):
        if p == m:
            break
        while True:
            live = [i for i in range(p, m) if H[i][col] != 0]
            if not live:
                break
            k = min(live, key=lambda i: (abs(H[i][col]), i))
            H[p], H[k] = H[k], H[p]
            U[p], U[k] = U[k], U[p]
            done = True
            for i in range(p + 1, m):
                if H[i][col]:
                    q = H[i][col] // H[p][col]
                    _add_row(H, i, p, -q)
                    _add_row(U, i, p, -q)
                    if H[i][col]:
                        done = False
            if done:
                break
        if H[p][col] == 0:
            continue
        if H[p][col] < 0:
            H[p] = [-x for x in H[p]]
            U[p] = [-x for x in U[p]]
        for i in range(p):
            q = H[i][col] // H[p][col]
            _add_row(H, i, p, -q)
            _add_row(U, i, p, -q)
        p += 1
    return IntMatrix.of(H, n), IntMatrix.of(U, m)


def snf(A: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """
    Smith normal form.

    Returns (D, U, V) with U, V unimodular and U·A·V = D diagonal,
    d1 | d2 | ... and every d_i >= 0.
    """
    m, n = A.shape
    D = [list(r) for r in A.rows]
    U = [list(r) for r in IntMatrix.identity(m).rows]
    V = [list(r) for r in IntMatrix.identity(n).rows]

    for t in range(min(m, n)):
        entries = [(abs(D[i][j]), i, j) for i in range(t, m) for j in range(t, n) if D[i][j]]
        if not entries:
            break
        _, i0, j0 = min(entries)
        D[t], D[i0] = D[i0], D[t]
        U[t], U[i0] = U[i0], U[t]
        _swap_cols(D, t, j0)
        _swap_cols(V, t, j0)

        while True:
            for i in range(t + 1, m):
                q = D[i][t] // D[t][t]
                _add_row(D, i, t, -q)
                _add_row(U, i, t, -q)
            for j in range(t + 1, n):
                q = D[t][j] // D[t][t]
                _add_col(D, j, t, -q)
                _add_col(V, j, t, -q)
            rest = [(abs(D[i][t]), i, t) for i in range(t + 1, m) if D[i][t]]
            rest += [(abs(D[t][j]), t, j) for j in range(t + 1, n) if D[t][j]]
            if rest:
                _, i0, j0 = min(rest)
                if j0 == t:
                    D[t], D[i0] = D[i0], D[t]
                    U[t], U[i0] = U[i0], U[t]
                else:
                    _swap_cols(D, t, j0)
                    _swap_cols(V, t, j0)
                continue
            # divisibility chain
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if D[i][j] % D[t][t]),
                None,
            )
            if bad is None:
                break
            _add_row(D, t, bad, 1)
            _add_row(U, t, bad, 1)

        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]

    return IntMatrix.of(D, n), IntMatrix.of(U, m), IntMatrix.of(V, n)


def diagonal(D: IntMatrix) -> list[int]:
    return [D[i, i] for i in range(min(D.shape))]


def rank(A: IntMatrix) -> int:
    H, _ = hnf(A)
    return sum(1 for row in H.rows if any(row))


def solve_integral(A: IntMatrix, b: Sequence[int]) -> Optional[list[int]]:
    """An integer row vector x with x·A = b, or None when none exists."""
    if len(b) != A.ncols:
        raise LatticeError(f"right-hand side of length {len(b)} against {A.ncols} columns")
    H, U = hnf(A)
    residual = [int(v) for v in b]
    y = [0] * A.nrows
    for i, row in enumerate(H.rows):
        col = next((j for j, x in enumerate(row) if x), None)
        if col is None:
            break
        if residual[col] % row[col]:
            return None
        y[i] = residual[col] // row[col]
        residual = [r - y[i] * x for r, x in zip(residual, row)]
    if any(residual):
        return None
    return list(U.row_times(y))


def kernel_basis(A: IntMatrix) -> IntMatrix:
    """Basis of the left kernel {x : x·A = 0}, as rows."""
    H, U = hnf(A)
    rows = [U.rows[i] for i, row in enumerate(H.rows) if not any(row)]
    return IntMatrix.of(rows, A.nrows)


def lattice_invariants(A: IntMatrix) -> tuple[int, list[int]]:
    """Rank of the row lattice and the nontrivial torsion invariants of Z^d / lattice."""
    D, _, _ = snf(A)
    diag = diagonal(D)
    r = sum(1 for d in diag if d)
    return r, [d for d in diag if d > 1]


def saturation_index(A: IntMatrix, w: Sequence[int]) -> Optional[int]:
    """
    Minimal d >= 1 with d·w in the row lattice of A, or None when w is
    outside its rational span.
    """
    if len(w) != A.ncols:
        raise LatticeError(f"vector of length {len(w)} against {A.ncols} columns")
    D, _, V = snf(A)
    wv = V.row_times(list(w))
    diag = diagonal(D)
    d = 1
    for j, x in enumerate(wv):
        dj = diag[j] if j < len(diag) else 0
        if dj == 0:
            if x:
                return None
            continue
        need = dj // gcd(dj, x)
        d = d * need // gcd(d, need)
    return d
