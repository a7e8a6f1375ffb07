"""Exact integer linear algebra on plain list-of-lists matrices.

Everything here works over Python ints, so there is no overflow; matrices
are ``list[list[int]]`` in row-major order.  Normal forms come back with
their unimodular transforms so callers can re-check them by multiplication.
"""

from __future__ import annotations

from typing import NamedTuple, Sequence

from .errors import InvalidInput

Matrix = list[list[int]]


def shape(M: Sequence[Sequence[int]]) -> tuple[int, int]:
    rows = len(M)
    cols = len(M[0]) if rows else 0
    return rows, cols


def as_matrix(M: Sequence[Sequence[int]]) -> Matrix:
    out = [[int(x) for x in row] for row in M]
    if out and any(len(row) != len(out[0]) for row in out):
        raise InvalidInput("ragged matrix")
    return out


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def zeros(rows: int, cols: int) -> Matrix:
    return [[0] * cols for _ in range(rows)]


def transpose(M: Sequence[Sequence[int]]) -> Matrix:
    return [list(col) for col in zip(*M)]


def matmul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> Matrix:
    Bt = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def matvec(A: Sequence[Sequence[int]], v: Sequence[int]) -> list[int]:
    return [sum(a * x for a, x in zip(row, v)) for row in A]


def vecmat(v: Sequence[int], A: Sequence[Sequence[int]]) -> list[int]:
    if not A:
        return []
    out = [0] * len(A[0])
    for x, row in zip(v, A):
        if x:
            for j, a in enumerate(row):
                if a:
                    out[j] += x * a
    return out


def from_columns(columns: Sequence[Sequence[int]]) -> Matrix:
    return [list(row) for row in zip(*columns)]


def det(M: Sequence[Sequence[int]]) -> int:
    """Determinant by Bareiss fraction-free elimination."""
    n, c = shape(M)
    if n != c:
        raise InvalidInput(f"determinant of non-square {n}x{c} matrix")
    if n == 0:
        return 1
    A = [list(row) for row in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k] != 0:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = A[k][k]
        for i in range(k + 1, n):
            aik = A[i][k]
            row_i = A[i]
            row_k = A[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
        prev = akk
    return sign * A[n - 1][n - 1]


def minor(M: Sequence[Sequence[int]], i: int, j: int) -> Matrix:
    return [row[:j] + row[j + 1:] for r, row in enumerate(M) if r != i]


def adjugate(M: Sequence[Sequence[int]]) -> Matrix:
    """Classical adjoint: ``adj(M)[p][q] = (-1)^(p+q) * det(minor(M, q, p))``."""
    n, c = shape(M)
    if n != c:
        raise InvalidInput("adjugate of non-square matrix")
    if n == 1:
        return [[1]]
    M = [list(row) for row in M]
    return [[(-1) ** (p + q) * det(minor(M, q, p)) for q in range(n)] for p in range(n)]


def unimodular_inverse(M: Sequence[Sequence[int]]) -> Matrix:
    d = det(M)
    if d not in (1, -1):
        raise InvalidInput(f"matrix is not unimodular (det {d})")
    return [[d * x for x in row] for row in adjugate(M)]


def rational_rank(M: Sequence[Sequence[int]]) -> int:
    """Rank over Q via fraction-free row elimination."""
    A = [list(row) for row in M if any(row)]
    if not A:
        return 0
    rows, cols = shape(A)
    rank = 0
    prev = 1
    for col in range(cols):
        pivot = next((i for i in range(rank, rows) if A[i][col] != 0), None)
        if pivot is None:
            continue
        A[rank], A[pivot] = A[pivot], A[rank]
        p = A[rank][col]
        for i in range(rank + 1, rows):
            f = A[i][col]
            row_i = A[i]
            row_r = A[rank]
            for j in range(col, cols):
                row_i[j] = (row_i[j] * p - f * row_r[j]) // prev
        prev = p
        rank += 1
        if rank == rows:
            break
    return rank


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, x, y)`` with ``x*a + y*b == g == gcd(a, b) >= 0``."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


class SmithForm(NamedTuple):
    diagonal: list[int]
    U: Matrix | None
    V: Matrix | None

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d)


def _swap_rows(A, i, j):
    A[i], A[j] = A[j], A[i]


def _swap_cols(A, i, j):
    for row in A:
        row[i], row[j] = row[j], row[i]


def _add_row(A, dst, src, q):
    # row[dst] += q * row[src]
    rd, rs = A[dst], A[src]
    for k, x in enumerate(rs):
        if x:
            rd[k] += q * x


def _add_col(A, dst, src, q):
    for row in A:
        x = row[src]
        if x:
            row[dst] += q * x


def smith_normal_form(M: Sequence[Sequence[int]], transforms: bool | str = True) -> SmithForm:
    """Smith normal form ``U @ M @ V == diag(d_1, d_2, ...)`` with ``d_i | d_{i+1}``.

    Pivots are chosen with minimal absolute value in the remaining block.
    With ``transforms=False`` the (comparatively costly) bookkeeping of
    ``U`` and ``V`` is skipped and both come back as ``None``;
    ``transforms="right"`` keeps only ``V``.
    """
    A = [list(row) for row in M]
    r, c = shape(A)
    U = identity(r) if transforms is True else None
    V = identity(c) if transforms else None
    t = 0
    while t < min(r, c):
        best = None
        for i in range(t, r):
            row = A[i]
            for j in range(t, c):
                x = row[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        if i != t:
            _swap_rows(A, i, t)
            if U is not None:
                _swap_rows(U, i, t)
        if j != t:
            _swap_cols(A, j, t)
            if V is not None:
                _swap_cols(V, j, t)
        p = A[t][t]
        clean = True
        for i in range(t + 1, r):
            if A[i][t]:
                q = A[i][t] // p
                _add_row(A, i, t, -q)
                if U is not None:
                    _add_row(U, i, t, -q)
                clean = clean and A[i][t] == 0
        for j in range(t + 1, c):
            if A[t][j]:
                q = A[t][j] // p
                _add_col(A, j, t, -q)
                if V is not None:
                    _add_col(V, j, t, -q)
                clean = clean and A[t][j] == 0
        if not clean:
            continue
        bad = next((i for i in range(t + 1, r) for j in range(t + 1, c) if A[i][j] % p), None)
        if bad is not None:
            _add_row(A, t, bad, 1)
            if U is not None:
                _add_row(U, t, bad, 1)
            continue
        if p < 0:
            A[t] = [-x for x in A[t]]
            if U is not None:
                U[t] = [-x for x in U[t]]
        t += 1
    diagonal = [A[i][i] for i in range(min(r, c))]
    return SmithForm(diagonal, U, V)


def invariant_factors(M: Sequence[Sequence[int]]) -> list[int]:
    return smith_normal_form(M, transforms=False).diagonal


def hermite_normal_form(M: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix]:
    """Row-style Hermite normal form: returns ``(H, U)`` with ``U @ M == H``.

    ``H`` is in row echelon form with positive pivots and entries above each
    pivot reduced into ``[0, pivot)``; zero rows sit at the bottom.
    """
    A = [list(row) for row in M]
    r, c = shape(A)
    U = identity(r)
    row = 0
    for col in range(c):
        if row == r:
            break
        for i in range(row + 1, r):
            b = A[i][col]
            if b == 0:
                continue
            a = A[row][col]
            g, x, y = xgcd(a, b)
            fa, fb = a // g, b // g
            for T in (A, U):
                top, bot = T[row], T[i]
                T[row] = [x * s + y * w for s, w in zip(top, bot)]
                T[i] = [-fb * s + fa * w for s, w in zip(top, bot)]
        if A[row][col] == 0:
            continue
        if A[row][col] < 0:
            A[row] = [-v for v in A[row]]
            U[row] = [-v for v in U[row]]
        p = A[row][col]
        for i in range(row):
            q = A[i][col] // p
            if q:
                _add_row(A, i, row, -q)
                _add_row(U, i, row, -q)
        row += 1
    return A, U


class Lattice:
    """The Z-span of a list of integer row vectors, with a cached HNF."""

    def __init__(self, rows: Sequence[Sequence[int]], dim: int | None = None):
        self.rows = [list(r) for r in rows]
        if dim is None:
            if not self.rows:
                raise InvalidInput("empty lattice needs an explicit dimension")
            dim = len(self.rows[0])
        self.dim = dim
        if self.rows:
            H, U = hermite_normal_form(self.rows)
        else:
            H, U = [], []
        self._pivots = []
        for i, h in enumerate(H):
            col = next((j for j, x in enumerate(h) if x), None)
            if col is None:
                break
            self._pivots.append((i, col))
        self._H = H
        self._U = U

    @property
    def rank(self) -> int:
        return len(self._pivots)

    def solve(self, v: Sequence[int]) -> list[int] | None:
        """Integer coefficients ``x`` with ``x @ rows == v``, or ``None``."""
        if len(v) != self.dim:
            raise InvalidInput(f"vector of length {len(v)} in a lattice of dimension {self.dim}")
        w = list(v)
        coeffs = [0] * len(self._H)
        for i, col in self._pivots:
            if w[col] == 0:
                continue
            q, rem = divmod(w[col], self._H[i][col])
            if rem:
                return None
            coeffs[i] = q
            _sub_scaled(w, self._H[i], q)
        if any(w):
            return None
        return vecmat(coeffs, self._U) if self._U else []

    def __contains__(self, v: Sequence[int]) -> bool:
        return self.solve(v) is not None


def _sub_scaled(w, h, q):
    for k, x in enumerate(h):
        if x:
            w[k] -= q * x


def lattice_member(v: Sequence[int], M: Sequence[Sequence[int]]) -> bool:
    """True iff ``v`` is an integer combination of the rows of ``M``."""
    if not any(v):
        return True
    return v in Lattice(M, dim=len(v))


def principal_submatrix(A: Sequence[Sequence[int]], dims: Sequence[int], ks: Sequence[int]) -> Matrix:
    """The m x m submatrix whose j-th row is row ``N_{j-1} + k_j`` of ``A``.

    ``A`` is n x m with rows grouped into blocks of sizes ``dims``; each
    ``k_j`` is 1-based inside its block.
    """
    if len(ks) != len(dims):
        raise InvalidInput("need one index per block")
    rows = []
    offset = 0
    for n_j, k in zip(dims, ks):
        if not 1 <= k <= n_j:
            raise InvalidInput(f"block index {k} outside 1..{n_j}")
        rows.append(list(A[offset + k - 1]))
        offset += n_j
    return rows
