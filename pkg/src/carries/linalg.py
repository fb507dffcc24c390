"""Dense exact linear algebra on lists of lists (ints or Fractions)."""

from __future__ import annotations

from fractions import Fraction

Matrix = list[list]


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def vecmat(v: list, a: Matrix) -> list:
    """Row vector times matrix."""
    return [sum(x * y for x, y in zip(v, col)) for col in zip(*a)]


def matvec(a: Matrix, v: list) -> list:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def matpow(a: Matrix, k: int) -> Matrix:
    """k-th power by repeated squaring."""
    if k < 0:
        raise ValueError("matrix power needs k >= 0")
    result = identity(len(a))
    base = a
    while k:
        if k & 1:
            result = matmul(result, base)
        k >>= 1
        if k:
            base = matmul(base, base)
    return result


def diag(values) -> Matrix:
    values = list(values)
    n = len(values)
    return [[values[i] if i == j else 0 for j in range(n)] for i in range(n)]


def determinant(a: Matrix) -> int | Fraction:
    """Bareiss fraction-free elimination; exact for integer and rational input."""
    m = [list(row) for row in a]
    n = len(m)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if m[r][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[i][j] * m[k][k] - m[i][k] * m[k][j]
                m[i][j] = num // prev if isinstance(num, int) and isinstance(prev, int) else num / prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def nullspace(a: Matrix) -> list[list[Fraction]]:
    """Basis of {x : a x = 0} from the reduced row echelon form."""
    rows = [[Fraction(x) for x in row] for row in a]
    ncols = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r][c]
        rows[r] = [x / p for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    basis = []
    for free in (c for c in range(ncols) if c not in pivots):
        vec = [Fraction(0)] * ncols
        vec[free] = Fraction(1)
        for row_idx, pc in enumerate(pivots):
            vec[pc] = -rows[row_idx][free]
        basis.append(vec)
    return basis
