"""Uniform maximum-continuity B-spline bases on [0, 1] and cardinal B-splines.

Two families live here.  ``BSplineSpace`` is the open-knot Cox-de Boor basis
of degree p on a uniform mesh of N elements, C^{p-1} across interior knots,
with homogeneous Dirichlet conditions imposed by dropping the first and last
basis functions.  ``cardinal_value`` evaluates the degree-p cardinal B-spline
on integer knots 0..p+1, exactly when the argument is rational.  Away from the
boundary the two coincide up to an affine change of variable, which is what
makes interior Gram rows expressible through cardinal-spline values.

All evaluation routines are generic over the scalar type of the point:
``fractions.Fraction`` input gives exact rational output, ``float`` or
``numpy.longdouble`` input stays in that arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np


def knot_vector(p: int, N: int) -> list[Fraction]:
    """Open uniform knot vector on [0, 1] with exact rational knots.

    The boundary knots 0 and 1 are repeated p+1 times each and the N-1
    interior knots are k/N, giving a sequence of length N + 2p + 1.
    """
    if p < 1:
        raise ValueError(f"degree must be >= 1, got {p}")
    if N < 2:
        raise ValueError(f"element count must be >= 2, got {N}")
    zero, one = Fraction(0), Fraction(1)
    interior = [Fraction(k, N) for k in range(1, N)]
    return [zero] * (p + 1) + interior + [one] * (p + 1)


@dataclass(frozen=True)
class BSplineSpace:
    """Degree-p spline space on a uniform N-element mesh of [0, 1].

    The basis is the open-knot Cox-de Boor basis: N + p functions of maximal
    smoothness C^{p-1}.  With homogeneous Dirichlet conditions the first and
    last functions are removed, leaving N + p - 2 degrees of freedom.
    """

    p: int
    N: int
    knots: tuple[Fraction, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "knots", tuple(knot_vector(self.p, self.N)))

    @property
    def h(self) -> Fraction:
        return Fraction(1, self.N)

    @property
    def dim_full(self) -> int:
        return self.N + self.p

    @property
    def dim(self) -> int:
        """Dimension after removing the two boundary basis functions."""
        return self.N + self.p - 2

    def element_index(self, x) -> int:
        """Index of the mesh element containing x, with x=1 assigned to the last."""
        if x < 0 or x > 1:
            raise ValueError(f"point {x} outside [0, 1]")
        return min(int(math.floor(x * self.N)), self.N - 1)

    def knots_as(self, x):
        """Knot sequence coerced to the arithmetic of the sample point x."""
        if isinstance(x, Fraction) or isinstance(x, int):
            return self.knots
        if isinstance(x, np.longdouble):
            return _knots_longdouble(self.p, self.N)
        return _knots_float(self.p, self.N)


_KNOT_CACHE: dict[tuple[int, int, str], tuple] = {}


def _knots_float(p: int, N: int) -> tuple[float, ...]:
    key = (p, N, "f8")
    if key not in _KNOT_CACHE:
        _KNOT_CACHE[key] = tuple(float(t) for t in knot_vector(p, N))
    return _KNOT_CACHE[key]


def _knots_longdouble(p: int, N: int) -> tuple:
    key = (p, N, "f16")
    if key not in _KNOT_CACHE:
        one = np.longdouble(1)
        _KNOT_CACHE[key] = tuple(
            np.longdouble(t.numerator) / (np.longdouble(t.denominator) * one)
            for t in knot_vector(p, N)
        )
    return _KNOT_CACHE[key]


def nonzero_basis(space: BSplineSpace, x, element: int | None = None):
    """All basis values that may be nonzero at x.

    Returns ``(first, values)`` where ``values[i]`` is basis function
    ``first + i`` (full numbering, no Dirichlet reduction) evaluated at x.
    Uses the triangular Cox-de Boor scheme, which never divides by zero for
    points inside the domain; x=1 is evaluated in the last element so the
    resulting values are the left limits there.

    element pins the evaluation to a mesh element's polynomial pieces.  At
    an element's right endpoint this yields the left limits, which is what
    per-element quadrature needs (basis derivatives jump across knots when
    p = 1).
    """
    p = space.p
    knots = space.knots_as(x)
    mu = p + (space.element_index(x) if element is None else element)
    vals = [x - x + 1]  # multiplicative unit in the arithmetic of x
    left = [None] * (p + 1)
    right = [None] * (p + 1)
    for q in range(1, p + 1):
        left[q] = x - knots[mu + 1 - q]
        right[q] = knots[mu + q] - x
        saved = 0
        for r in range(q):
            temp = vals[r] / (right[r + 1] + left[q - r])
            vals[r] = saved + right[r + 1] * temp
            saved = left[q - r] * temp
        vals.append(saved)
    return mu - p, vals


def nonzero_basis_derivatives(space: BSplineSpace, x, element: int | None = None):
    """First derivatives of the basis functions that may be nonzero at x.

    Same indexing convention (and element pinning) as ``nonzero_basis``.
    Uses the degree-reduction identity, dropping terms whose knot-difference
    denominator vanishes (those correspond to degree p-1 functions with
    empty support).
    """
    p = space.p
    knots = space.knots_as(x)
    mu = p + (space.element_index(x) if element is None else element)
    if p == 1:
        lower_first, lower = mu, [x - x + 1]
    else:
        lower_first, lower = _nonzero_basis_of_degree(space, x, p - 1, element)
    derivs = []
    for j in range(mu - p, mu + 1):
        acc = 0
        i = j - lower_first
        if 0 <= i < len(lower):
            den = knots[j + p] - knots[j]
            if den != 0:
                acc = acc + p * lower[i] / den
        i = j + 1 - lower_first
        if 0 <= i < len(lower):
            den = knots[j + p + 1] - knots[j + 1]
            if den != 0:
                acc = acc - p * lower[i] / den
        derivs.append(acc)
    return mu - p, derivs


def _nonzero_basis_of_degree(space: BSplineSpace, x, q: int, element: int | None = None):
    """Triangular scheme at reduced degree q on the same knot vector."""
    knots = space.knots_as(x)
    mu = space.p + (space.element_index(x) if element is None else element)
    vals = [x - x + 1]
    left = [None] * (q + 1)
    right = [None] * (q + 1)
    for d in range(1, q + 1):
        left[d] = x - knots[mu + 1 - d]
        right[d] = knots[mu + d] - x
        saved = 0
        for r in range(d):
            temp = vals[r] / (right[r + 1] + left[d - r])
            vals[r] = saved + right[r + 1] * temp
            saved = left[d - r] * temp
        vals.append(saved)
    return mu - q, vals


def eval_basis(space: BSplineSpace, j: int, x):
    """Value of basis function j (full numbering) at x in [0, 1]."""
    if not 0 <= j < space.dim_full:
        raise ValueError(f"basis index {j} out of range 0..{space.dim_full - 1}")
    first, vals = nonzero_basis(space, x)
    i = j - first
    if 0 <= i < len(vals):
        return vals[i]
    return 0 * x


def eval_basis_derivative(space: BSplineSpace, j: int, x):
    """First derivative of basis function j at x in [0, 1]."""
    if not 0 <= j < space.dim_full:
        raise ValueError(f"basis index {j} out of range 0..{space.dim_full - 1}")
    first, vals = nonzero_basis_derivatives(space, x)
    i = j - first
    if 0 <= i < len(vals):
        return vals[i]
    return 0 * x


def cardinal_value(p: int, t):
    """Degree-p cardinal B-spline on knots 0, 1, ..., p+1 evaluated at t.

    Exact rational output for int or Fraction input; float-family input is
    evaluated in its own arithmetic.  The spline is taken right-continuous,
    so the value is 0 at t = p+1 and outside [0, p+1).
    """
    if p < 0:
        raise ValueError(f"degree must be >= 0, got {p}")
    exact = isinstance(t, (int, Fraction))
    zero = Fraction(0) if exact else 0 * t
    if t < 0 or t >= p + 1:
        return zero
    one = zero + 1
    vals = [one if i <= t < i + 1 else zero for i in range(p + 1)]
    for q in range(1, p + 1):
        for i in range(p + 1 - q):
            vals[i] = ((t - i) * vals[i] + (i + q + 1 - t) * vals[i + 1]) / q
    return vals[0]


def cardinal_derivative(p: int, t):
    """First derivative of the degree-p cardinal B-spline at t (p >= 1)."""
    if p < 1:
        raise ValueError(f"degree must be >= 1, got {p}")
    return cardinal_value(p - 1, t) - cardinal_value(p - 1, t - 1)


def cardinal_piece(p: int, element: int, t):
    """Polynomial piece of the cardinal spline on [element, element+1] at t.

    Unlike ``cardinal_value`` this extends the piece to its closed right
    end, i.e. at integer breakpoints it gives the left limit of the piece;
    elements outside 0..p give 0.  Needed by per-element quadrature, where
    an endpoint node must see the integrand of its own element.
    """
    if p < 0:
        raise ValueError(f"degree must be >= 0, got {p}")
    exact = isinstance(t, (int, Fraction))
    zero = Fraction(0) if exact else 0 * t
    if not 0 <= element <= p:
        return zero
    one = zero + 1
    vals = [one if i == element else zero for i in range(p + 1)]
    for q in range(1, p + 1):
        for i in range(p + 1 - q):
            vals[i] = ((t - i) * vals[i] + (i + q + 1 - t) * vals[i + 1]) / q
    return vals[0]


def cardinal_piece_derivative(p: int, element: int, t):
    """Derivative of the degree-p cardinal spline piece on one element."""
    if p < 1:
        raise ValueError(f"degree must be >= 1, got {p}")
    return cardinal_piece(p - 1, element, t) - cardinal_piece(p - 1, element - 1, t - 1)
