"""Sylvester resultants of binary forms and the associated cofactor identities."""

from __future__ import annotations

from fractions import Fraction

from .poly import BinaryForm


def sylvester_matrix(f: BinaryForm, g: BinaryForm) -> list[list[int]]:
    """Sylvester matrix of two forms, columns indexed by X-degree descending."""
    m, n = f.degree, g.degree
    size = m + n
    fc = list(reversed(f.coeffs))
    gc = list(reversed(g.coeffs))
    rows = []
    for i in range(n):
        rows.append([0] * i + fc + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + gc + [0] * (size - n - 1 - i))
    return rows


def bareiss_det(matrix: list[list[int]]) -> int:
    """Fraction-free Gaussian elimination; exact for integer matrices."""
    a = [list(r) for r in matrix]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
            row_i[k] = 0
        prev = akk
    return sign * a[n - 1][n - 1]


def resultant(f: BinaryForm, g: BinaryForm) -> int:
    """Resultant of two binary forms of equal degree ``d >= 1``.

    Zero exactly when the forms share a projective root.
    """
    if f.degree != g.degree:
        raise ValueError(f"degree mismatch: {f.degree} vs {g.degree}")
    if f.degree < 1:
        raise ValueError("forms must have degree >= 1")
    return bareiss_det(sylvester_matrix(f, g))


def _solve_left(matrix: list[list[int]], rhs: list[int]) -> list[Fraction]:
    """Solve ``v^T M = rhs`` over Q."""
    n = len(matrix)
    # transpose so that M^T v = rhs
    a = [[Fraction(matrix[j][i]) for j in range(n)] + [Fraction(rhs[i])] for i in range(n)]
    for col in range(n):
        piv = next(r for r in range(col, n) if a[r][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        pv = a[col][col]
        a[col] = [x / pv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                fac = a[r][col]
                a[r] = [x - fac * y for x, y in zip(a[r], a[col])]
    return [a[i][n] for i in range(n)]


def sylvester_cofactors(f: BinaryForm, g: BinaryForm, res: int | None = None):
    """Integral forms ``A1, B1, A2, B2`` of degree ``d-1`` with

        A1*F + B1*G = Res * X**(2d-1)
        A2*F + B2*G = Res * Y**(2d-1)
    """
    d = f.degree
    if res is None:
        res = resultant(f, g)
    if res == 0:
        raise ValueError("forms share a root; no cofactor identity")
    m = sylvester_matrix(f, g)
    out = []
    for target in (0, 2 * d - 1):  # column 0 is X^(2d-1), last column Y^(2d-1)
        rhs = [0] * (2 * d)
        rhs[target] = res
        v = _solve_left(m, rhs)
        if any(x.denominator != 1 for x in v):
            raise ArithmeticError("non-integral Sylvester cofactor")
        v = [int(x) for x in v]
        # rows 0..d-1 are X^(d-1-i) * F, rows d..2d-1 are X^(d-1-i) * G
        a = BinaryForm(tuple(reversed(v[:d])), d - 1)
        b = BinaryForm(tuple(reversed(v[d:])), d - 1)
        out.extend([a, b])
    return tuple(out)
