"""Dense exact matrices as tuples of tuples of :class:`fractions.Fraction`.

Everything here is deliberately small and obvious; matrices in this package
are desk scale (n well below 100) and correctness beats speed.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

Matrix = tuple[tuple[Fraction, ...], ...]


def as_matrix(rows: Iterable[Iterable]) -> Matrix:
    return tuple(tuple(Fraction(x) for x in row) for row in rows)


def identity(n: int) -> Matrix:
    one, zero = Fraction(1), Fraction(0)
    return tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n))


def diag(values: Sequence) -> Matrix:
    n = len(values)
    zero = Fraction(0)
    return tuple(
        tuple(Fraction(values[i]) if i == j else zero for j in range(n)) for i in range(n)
    )


def diagonal(a: Matrix) -> tuple[Fraction, ...]:
    return tuple(a[i][i] for i in range(len(a)))


def transpose(a: Matrix) -> Matrix:
    return tuple(zip(*a)) if a else ()


def matmul(a: Matrix, b: Matrix) -> Matrix:
    """Exact product, skipping structural zeros (E and its inverse are sparse)."""
    bt = transpose(b)
    nz_cols = [[(k, x) for k, x in enumerate(col) if x] for col in bt]
    out = []
    for row in a:
        nz = {k: x for k, x in enumerate(row) if x}
        out_row = []
        for col in nz_cols:
            s = Fraction(0)
            for k, y in col:
                x = nz.get(k)
                if x is not None:
                    s += x * y
            out_row.append(s)
        out.append(tuple(out_row))
    return tuple(out)


def chain(*factors: Matrix) -> Matrix:
    out = factors[0]
    for f in factors[1:]:
        out = matmul(out, f)
    return out


def scale_rows(values: Sequence[Fraction], a: Matrix) -> Matrix:
    """``diag(values) @ a``."""
    return tuple(tuple(v * x for x in row) for v, row in zip(values, a))


def scale_cols(a: Matrix, values: Sequence[Fraction]) -> Matrix:
    """``a @ diag(values)``."""
    return tuple(tuple(x * v for x, v in zip(row, values)) for row in a)


def unit_lower_inverse(a: Matrix) -> Matrix:
    """Inverse of a unit lower triangular matrix by forward substitution."""
    n = len(a)
    for i in range(n):
        if a[i][i] != 1 or any(a[i][j] for j in range(i + 1, n)):
            raise ValueError("matrix is not unit lower triangular")
    inv = [[Fraction(0)] * n for _ in range(n)]
    for j in range(n):
        inv[j][j] = Fraction(1)
        for i in range(j + 1, n):
            s = Fraction(0)
            for k in range(j, i):
                if a[i][k]:
                    s += a[i][k] * inv[k][j]
            inv[i][j] = -s
    return tuple(tuple(r) for r in inv)


def _eliminate(a: Matrix, rhs: Matrix | None):
    n = len(a)
    m = [list(r) for r in a]
    b = [list(r) for r in rhs] if rhs is not None else None
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if m[r][c] != 0), None)
        if p is None:
            return Fraction(0), None
        if p != c:
            m[c], m[p] = m[p], m[c]
            if b is not None:
                b[c], b[p] = b[p], b[c]
            det = -det
        pv = m[c][c]
        det *= pv
        for r in range(c + 1, n):
            fac = m[r][c] / pv
            if fac:
                m[r] = [x - fac * y for x, y in zip(m[r], m[c])]
                if b is not None:
                    b[r] = [x - fac * y for x, y in zip(b[r], b[c])]
    if b is None:
        return det, None
    for c in range(n - 1, -1, -1):
        pv = m[c][c]
        b[c] = [x / pv for x in b[c]]
        for r in range(c):
            fac = m[r][c]
            if fac:
                b[r] = [x - fac * y for x, y in zip(b[r], b[c])]
    return det, tuple(tuple(r) for r in b)


def determinant(a: Matrix) -> Fraction:
    return _eliminate(a, None)[0]


def inverse(a: Matrix) -> Matrix:
    det, inv = _eliminate(a, identity(len(a)))
    if inv is None:
        raise ZeroDivisionError("matrix is singular")
    return inv


def to_float(a: Matrix) -> np.ndarray:
    return np.array([[float(x) for x in row] for row in a], dtype=float).reshape(len(a), len(a[0]) if a else 0)


def fraction_str(x: Fraction) -> str:
    """``"p"`` for integers and ``"p/q"`` otherwise."""
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else "%d/%d" % (x.numerator, x.denominator)
