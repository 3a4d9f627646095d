"""Dispersion-minimized mass stencils, exactly in rational arithmetic.

The off-center entries of the modified mass row are chosen so that the
coupled stiffness/mass moments vanish through order p+1 instead of p,
which raises the dispersion accuracy from 2p to 2p+2.  The defining
conditions form a p x p linear system with factorial-weighted power
coefficients; it is solved with Fraction Gaussian elimination, and the
center entry follows from the row-sum normalization.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from igadmm.stencils import (
    IdentityCheck,
    IdentityReport,
    Stencil,
    dispersion_moment,
    stiffness_stencil,
)


class SingularMatrixError(ValueError):
    """Exact elimination hit a zero pivot column."""


def solve_rational_system(matrix, rhs) -> list[Fraction]:
    """Solve M x = b exactly by Gaussian elimination with partial pivoting.

    matrix is a square sequence of sequences, rhs a sequence; entries are
    coerced to Fraction.  Pivoting picks the largest-magnitude entry, which
    for exact arithmetic only matters for avoiding zero pivots.
    """
    n = len(rhs)
    M = [[Fraction(matrix[i][j]) for j in range(n)] for i in range(n)]
    b = [Fraction(v) for v in rhs]
    for col in range(n):
        pivot = max(range(col, n), key=lambda r: abs(M[r][col]))
        if M[pivot][col] == 0:
            raise SingularMatrixError(f"zero pivot in column {col}")
        if pivot != col:
            M[col], M[pivot] = M[pivot], M[col]
            b[col], b[pivot] = b[pivot], b[col]
        for row in range(col + 1, n):
            f = M[row][col] / M[col][col]
            if f == 0:
                continue
            b[row] -= f * b[col]
            for j in range(col, n):
                M[row][j] -= f * M[col][j]
    x = [Fraction(0)] * n
    for row in range(n - 1, -1, -1):
        acc = b[row] - sum(M[row][j] * x[j] for j in range(row + 1, n))
        x[row] = acc / M[row][row]
    return x


@lru_cache(maxsize=None)
def dmm_stencil(p: int) -> Stencil:
    """Exact dispersion-minimized mass row for degree p.

    Solves, for the off-center entries b_1..b_p,
        sum_k k^{2m-2}/(2m-2)! b_k = - sum_k k^{2m}/(2m)! A_k,  m = 1..p,
    then sets the center entry from the unit row sum.
    """
    if p < 1:
        raise ValueError(f"degree must be >= 1, got {p}")
    A = stiffness_stencil(p)
    matrix = [
        [Fraction(k ** (2 * m), math.factorial(2 * m)) for k in range(1, p + 1)]
        for m in range(1, p + 1)
    ]
    rhs = [
        -sum(
            Fraction(k ** (2 * m + 2), math.factorial(2 * m + 2)) * A.values[k]
            for k in range(1, p + 1)
        )
        for m in range(1, p + 1)
    ]
    off = solve_rational_system(matrix, rhs)
    center = 1 - 2 * sum(off)
    return Stencil(p, "mass", (center, *off))


def verify_dmm_identity(p: int) -> IdentityReport:
    """Moment identities of the minimized row: orders m = 2..p+1 vanish."""
    A = stiffness_stencil(p)
    Bt = dmm_stencil(p)
    checks = tuple(
        IdentityCheck("dmm_moment_identity", p, m, dispersion_moment(A, Bt, m))
        for m in range(2, p + 2)
    )
    return IdentityReport(checks)


def leading_coefficient(p: int, A: Stencil, B, order: int) -> Fraction:
    """Leading dispersion-error coefficient for a rational mass row.

    order = 2p   : coefficient of the 2p-th power term, 2 (-1)^{p+1} times
                   the (p+1)-th coupled moment; zero when the row is
                   dispersion minimized.
    order = 2p+2 : same with the (p+2)-th moment and sign flipped; the
                   leading coefficient of a minimized row.

    Exact when A and B carry Fractions.  For the full expansion
    coefficients including lower-order feedback see the dispersion module.
    """
    if order == 2 * p:
        return 2 * (-1) ** (p + 1) * dispersion_moment(A, B, p + 1)
    if order == 2 * p + 2:
        return 2 * (-1) ** p * dispersion_moment(A, B, p + 2)
    raise ValueError(f"order must be {2 * p} or {2 * p + 2}, got {order}")
