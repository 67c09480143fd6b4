"""Dense exact linear algebra on lists of Fraction rows."""

from fractions import Fraction
from typing import List, Optional, Sequence

from .errors import OrderMismatchError, SingularBasisError

Matrix = List[List[Fraction]]
Vector = List[Fraction]


def zeros(rows: int, cols: Optional[int] = None) -> Matrix:
    return [[Fraction(0)] * (rows if cols is None else cols) for _ in range(rows)]


def identity(n: int) -> Matrix:
    result = zeros(n)
    for i in range(n):
        result[i][i] = Fraction(1)
    return result


def clone(mat: Sequence[Sequence[Fraction]]) -> Matrix:
    """Fresh Fraction rows, so ints never turn into floats under division."""
    return [[Fraction(value) for value in row] for row in mat]


def transpose(mat: Sequence[Sequence[Fraction]]) -> Matrix:
    return [list(col) for col in zip(*mat)] if mat else []


def matmul(a: Sequence[Sequence[Fraction]], b: Sequence[Sequence[Fraction]]) -> Matrix:
    """Product of an (n x m) and an (m x p) matrix, skipping zero entries of a."""
    if a and len(a[0]) != len(b):
        raise OrderMismatchError(f"cannot multiply {len(a)}x{len(a[0])} by {len(b)}x{len(b[0]) if b else 0}")
    cols = len(b[0]) if b else 0
    result = zeros(len(a), cols)
    for i, row in enumerate(a):
        out = result[i]
        for k, value in enumerate(row):
            if not value:
                continue
            for j, other in enumerate(b[k]):
                if other:
                    out[j] += value * other
    return result


def matvec(a: Sequence[Sequence[Fraction]], v: Sequence[Fraction]) -> Vector:
    if a and len(a[0]) != len(v):
        raise OrderMismatchError(f"cannot apply {len(a)}x{len(a[0])} matrix to vector of length {len(v)}")
    return [sum((x * y for x, y in zip(row, v) if x and y), Fraction(0)) for row in a]


def inverse(mat: Sequence[Sequence[Fraction]]) -> Matrix:
    """
    Gauss-Jordan inverse over the rationals.

    Raises:
        SingularBasisError: If the matrix has a zero pivot column
    """
    n = len(mat)
    if any(len(row) != n for row in mat):
        raise OrderMismatchError("only square matrices can be inverted")
    work = [list(row) + unit for row, unit in zip(clone(mat), identity(n))]
    for col in range(n):
        pivot = next((r for r in range(col, n) if work[r][col] != 0), None)
        if pivot is None:
            raise SingularBasisError(f"matrix is singular (no pivot in column {col})")
        if pivot != col:
            work[col], work[pivot] = work[pivot], work[col]
        factor = work[col][col]
        work[col] = [value / factor for value in work[col]]
        for r in range(n):
            if r != col and work[r][col] != 0:
                scale = work[r][col]
                work[r] = [x - scale * y for x, y in zip(work[r], work[col])]
    return [row[n:] for row in work]


def rank(mat: Sequence[Sequence[Fraction]]) -> int:
    """Row-echelon rank."""
    work = clone(mat)
    if not work:
        return 0
    rows, cols = len(work), len(work[0])
    pivot_row = 0
    for col in range(cols):
        pivot = next((r for r in range(pivot_row, rows) if work[r][col] != 0), None)
        if pivot is None:
            continue
        work[pivot_row], work[pivot] = work[pivot], work[pivot_row]
        for r in range(pivot_row + 1, rows):
            if work[r][col] != 0:
                ratio = work[r][col] / work[pivot_row][col]
                work[r] = [x - ratio * y for x, y in zip(work[r], work[pivot_row])]
        pivot_row += 1
        if pivot_row == rows:
            break
    return pivot_row


def diagonal(values: Sequence[Fraction]) -> Matrix:
    result = zeros(len(values))
    for i, value in enumerate(values):
        result[i][i] = Fraction(value)
    return result
