"""Quadrature rules on [0, 1] and the mass rows they induce.

Rules are built once in high precision: scipy/numpy supply double seeds
for the nodes, mpmath Newton iteration polishes them to 40 significant
digits, and the weights follow from the moment (Vandermonde) system on
the polished nodes.  The public nodes/weights attributes are floats; the
high-precision copies ride along privately and feed every stencil, blend
ratio, and expansion coefficient computed here, which is what makes the
1e-12-ish tolerances downstream comfortable.

Alongside the three classical families (Legendre, Lobatto, left-endpoint
Radau) the module builds the degree-specific minimizing rules: tiny node
sets, one per sign of the square root, that have no polynomial exactness
at all but reproduce the exact stiffness row and the dispersion-minimized
mass row through the stencil sums.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from mpmath import mp
from numpy.polynomial.legendre import leggauss
from scipy.special import roots_jacobi

from igadmm.dispersion import error_expansion
from igadmm.splines import cardinal_piece, cardinal_piece_derivative
from igadmm.stencils import Stencil, dispersion_moment, stiffness_stencil

_DPS = 40


class DegenerateBlendError(ArithmeticError):
    """The two mass rows share their leading moment: no blend ratio exists."""


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and weights on [0, 1] with a known polynomial exactness degree.

    exactness is the highest polynomial degree integrated exactly; the
    minimizing rules carry 0 because they are not exact beyond constants.
    """

    label: str
    nodes: tuple[float, ...]
    weights: tuple[float, ...]
    exactness: int
    nodes_mp: tuple = field(repr=False, compare=False, default=())
    weights_mp: tuple = field(repr=False, compare=False, default=())

    def __post_init__(self):
        if len(self.nodes) != len(self.weights):
            raise ValueError("nodes and weights must pair up")

    def integrate(self, f) -> float:
        return float(sum(w * f(x) for x, w in zip(self.nodes, self.weights)))

    def _mp_pairs(self):
        if self.nodes_mp:
            return tuple(zip(self.nodes_mp, self.weights_mp))
        return tuple((mp.mpf(x), mp.mpf(w)) for x, w in zip(self.nodes, self.weights))


@dataclass(frozen=True)
class BlendedRule(QuadratureRule):
    """Affine combination tau * first + (1 - tau) * second of two rules."""

    tau: float = 0.0
    parts: tuple[str, str] = ("", "")


def _finish(label, exactness, nodes_mp, weights_mp) -> QuadratureRule:
    return QuadratureRule(
        label=label,
        nodes=tuple(float(x) for x in nodes_mp),
        weights=tuple(float(w) for w in weights_mp),
        exactness=exactness,
        nodes_mp=tuple(nodes_mp),
        weights_mp=tuple(weights_mp),
    )


def _newton(f, df, x0, steps=60):
    x = mp.mpf(x0)
    for _ in range(steps):
        dx = f(x) / df(x)
        x -= dx
        if abs(dx) < mp.mpf(10) ** (-mp.dps + 2):
            break
    return x


def _weights_from_moments(nodes01):
    """Interpolatory weights on [0, 1]: solve the Vandermonde moment system."""
    n = len(nodes01)
    V = mp.matrix(n, n)
    rhs = mp.matrix(n, 1)
    for j in range(n):
        rhs[j] = mp.mpf(1) / (j + 1)
        for i in range(n):
            V[j, i] = nodes01[i] ** j
    w = mp.lu_solve(V, rhs)
    return [w[i] for i in range(n)]


def _map_01(nodes_pm1):
    return [(x + 1) / 2 for x in nodes_pm1]


@lru_cache(maxsize=None)
def gauss_legendre(m: int) -> QuadratureRule:
    """m-point Gauss-Legendre rule on [0, 1]; exact through degree 2m - 1."""
    if m < 1:
        raise ValueError(f"need at least one node, got {m}")
    with mp.workdps(_DPS + 15):
        if m == 1:
            nodes = [mp.mpf(0)]
        else:
            seeds, _ = leggauss(m)

            def f(x, m=m):
                return mp.legendre(m, x)

            def df(x, m=m):
                return m * (x * mp.legendre(m, x) - mp.legendre(m - 1, x)) / (x * x - 1)

            nodes = [_newton(f, df, s) for s in seeds]
        nodes01 = _map_01(sorted(nodes))
        weights01 = _weights_from_moments(nodes01)
    return _finish(f"G{m}", 2 * m - 1, nodes01, weights01)


@lru_cache(maxsize=None)
def gauss_lobatto(m: int) -> QuadratureRule:
    """m-point Gauss-Lobatto rule on [0, 1] with both endpoints; degree 2m - 3."""
    if m < 2:
        raise ValueError(f"need at least two nodes, got {m}")
    with mp.workdps(_DPS + 15):
        if m == 2:
            nodes = [mp.mpf(-1), mp.mpf(1)]
        else:
            # interior nodes are the roots of P'_{m-1}, i.e. of Jacobi(1,1) deg m-2
            seeds, _ = roots_jacobi(m - 2, 1, 1)
            n = m - 1

            def f(x, n=n):
                return n * (x * mp.legendre(n, x) - mp.legendre(n - 1, x)) / (x * x - 1)

            def df(x, n=n, f=f):
                # Legendre ODE: (1 - x^2) P'' = 2x P' - n(n+1) P
                return (2 * x * f(x) - n * (n + 1) * mp.legendre(n, x)) / (1 - x * x)

            nodes = [mp.mpf(-1)] + [_newton(f, df, s) for s in seeds] + [mp.mpf(1)]
        nodes01 = _map_01(sorted(nodes))
        weights01 = _weights_from_moments(nodes01)
    return _finish(f"L{m}", 2 * m - 3, nodes01, weights01)


@lru_cache(maxsize=None)
def gauss_radau(m: int) -> QuadratureRule:
    """m-point left Gauss-Radau rule on [0, 1] with node at 0; degree 2m - 2."""
    if m < 1:
        raise ValueError(f"need at least one node, got {m}")
    with mp.workdps(_DPS + 15):
        if m == 1:
            nodes = [mp.mpf(-1)]
        else:
            # free nodes are the roots of Jacobi(0,1) of degree m-1
            seeds, _ = roots_jacobi(m - 1, 0, 1)
            n = m - 1

            def f(x, n=n):
                return mp.jacobi(n, 0, 1, x)

            def df(x, n=n):
                return (n + 2) * mp.jacobi(n - 1, 1, 2, x) / 2

            nodes = [mp.mpf(-1)] + [_newton(f, df, s) for s in seeds]
        nodes01 = _map_01(sorted(nodes))
        weights01 = _weights_from_moments(nodes01)
    return _finish(f"R{m}", 2 * m - 2, nodes01, weights01)


_DMM_NODE_DATA = {
    # degree -> (shift under the sqrt, weights); nodes are 0 (optional) and
    # 1/2 +- sqrt(radicand)/divisor, one sign per rule variant
    1: (None, (6, 6), (Fraction(1),)),
    2: (0, (15, 30), (Fraction(2, 7), Fraction(5, 7))),
    3: (0, (14, 14), (Fraction(-17, 375), Fraction(392, 375))),
}


@lru_cache(maxsize=None)
def dmm_rule(p: int, sign: int = 1) -> QuadratureRule:
    """Minimizing rule for degree p (p <= 3), one variant per sign.

    The rules have one or two nodes, no polynomial exactness, and possibly
    a negative weight; used for both the stiffness and the mass form they
    reproduce the exact stiffness row and the dispersion-minimized mass row
    exactly (in the stencil-sum sense).
    """
    if p not in _DMM_NODE_DATA:
        raise ValueError(f"minimizing rules are tabulated for p in 1..3, got {p}")
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    fixed, (radicand, divisor), weights = _DMM_NODE_DATA[p]
    with mp.workdps(_DPS + 15):
        free = mp.mpf(1) / 2 + sign * mp.sqrt(radicand) / divisor
        nodes_mp = ([mp.mpf(fixed)] if fixed is not None else []) + [free]
        weights_mp = [mp.mpf(w.numerator) / w.denominator for w in weights]
    tag = "+" if sign > 0 else "-"
    return _finish(f"D{p}{tag}", 0, nodes_mp, weights_mp)


def _check_exactness(p: int, rule: QuadratureRule, require: bool):
    if require and rule.exactness < 2 * p - 2:
        raise ValueError(
            f"rule {rule.label} is exact only to degree {rule.exactness}; "
            f"degree {2 * p - 2} is required at p = {p} "
            "(pass require_exactness=False to override)"
        )


def quadrature_mass_stencil(p: int, rule: QuadratureRule,
                            require_exactness: bool = True) -> Stencil:
    """Interior mass row induced by applying the rule on every knot span.

    Entry k sums, over the p + 1 spans shared by two splines at offset k,
    the rule applied to the product of the two cardinal splines.  Values
    are mpf at the rule's construction precision.
    """
    _check_exactness(p, rule, require_exactness)
    return _stencil_from_rule(p, rule, "mass")


def quadrature_stiffness_stencil(p: int, rule: QuadratureRule,
                                 require_exactness: bool = True) -> Stencil:
    """Interior stiffness row induced by the rule; exact for degree >= 2p - 2."""
    _check_exactness(p, rule, require_exactness)
    return _stencil_from_rule(p, rule, "stiffness")


def _stencil_from_rule(p: int, rule: QuadratureRule, kind: str) -> Stencil:
    # Entry k integrates the product of the spline with its k-translate
    # element by element; piece-indexed evaluation keeps endpoint nodes on
    # the integrand of their own element (the p = 1 derivative jumps).
    piece = cardinal_piece if kind == "mass" else cardinal_piece_derivative
    with mp.workdps(_DPS + 15):
        pairs = rule._mp_pairs()
        # table[l][e]: piece e of the spline at node l mapped into element e
        table = [[piece(p, e, e + x) for e in range(p + 1)] for x, _ in pairs]
        vals = []
        for k in range(p + 1):
            acc = mp.mpf(0)
            for (x, w), row in zip(pairs, table):
                for e in range(k, p + 1):
                    acc += w * row[e] * row[e - k]
            vals.append(acc)
    return Stencil(p, kind, tuple(vals))


def optimal_tau(p: int, b_first, b_second):
    """Blend ratio that cancels the order-(p+1) moment between two mass rows.

    Returns tau with tau * first + (1 - tau) * second dispersion minimized:
    tau = M(second) / (M(second) - M(first)) where M is the order-(p+1)
    coupled moment against the exact stiffness row.  Raises
    DegenerateBlendError when the two moments coincide.
    """
    A = stiffness_stencil(p)
    with mp.workdps(_DPS):
        m1 = dispersion_moment(A, b_first, p + 1)
        m2 = dispersion_moment(A, b_second, p + 1)
        den = m2 - m1
        # relative test: the moments shrink factorially with p, so an
        # absolute threshold would flag legitimate tiny denominators
        scale = max(abs(m1), abs(m2), mp.mpf(1) * 1e-30)
        if abs(den) < 1e-14 * scale:
            raise DegenerateBlendError(
                f"mass rows share the order-{p + 1} moment at p = {p}"
            )
        return m2 / den


_PAIR_NAMES = ("gg", "gl", "gr", "pl", "pr", "lr")


def _pair_rules(p: int, pair: str) -> tuple[QuadratureRule, QuadratureRule]:
    # g = (p+1)-point Legendre, then the partner: second g means the p-point
    # Legendre; p/l/r are the p-point Legendre, (p+1)-point Lobatto, p-point
    # Radau as first or second member
    table = {
        "gg": (lambda: gauss_legendre(p + 1), lambda: gauss_legendre(p)),
        "gl": (lambda: gauss_legendre(p + 1), lambda: gauss_lobatto(p + 1)),
        "gr": (lambda: gauss_legendre(p + 1), lambda: gauss_radau(p)),
        "pl": (lambda: gauss_legendre(p), lambda: gauss_lobatto(p + 1)),
        "pr": (lambda: gauss_legendre(p), lambda: gauss_radau(p)),
        "lr": (lambda: gauss_lobatto(p + 1), lambda: gauss_radau(p)),
    }
    if pair not in table:
        raise ValueError(f"pair must be one of {_PAIR_NAMES}, got {pair!r}")
    f1, f2 = table[pair]
    return f1(), f2()


def tau_for_pair(p: int, pair: str):
    """Blend ratio for a named rule pair.

    Pair letters: g = (p+1)-point Legendre, p = p-point Legendre,
    l = (p+1)-point Lobatto, r = p-point Radau; e.g. "gl" blends the
    (p+1)-point Legendre with the (p+1)-point Lobatto rule.
    """
    r1, r2 = _pair_rules(p, pair)
    b1 = quadrature_mass_stencil(p, r1)
    b2 = quadrature_mass_stencil(p, r2)
    return optimal_tau(p, b1, b2)


def blend(rule1: QuadratureRule, rule2: QuadratureRule, tau) -> BlendedRule:
    """Affine combination of two rules as a single (possibly signed) rule.

    The result carries the union of the node sets with weights scaled by
    tau and 1 - tau, so applying it is the same as blending the two
    applications; its induced mass row is the blend of the two mass rows.
    """
    with mp.workdps(_DPS + 15):
        if isinstance(tau, Fraction):
            t = mp.mpf(tau.numerator) / tau.denominator
        else:
            t = mp.mpf(tau)
        nodes_mp = tuple(x for x, _ in rule1._mp_pairs()) + tuple(
            x for x, _ in rule2._mp_pairs()
        )
        weights_mp = tuple(t * w for _, w in rule1._mp_pairs()) + tuple(
            (1 - t) * w for _, w in rule2._mp_pairs()
        )
    return BlendedRule(
        label=f"blend:{rule1.label}+{rule2.label}",
        nodes=tuple(float(x) for x in nodes_mp),
        weights=tuple(float(w) for w in weights_mp),
        exactness=min(rule1.exactness, rule2.exactness),
        nodes_mp=nodes_mp,
        weights_mp=weights_mp,
        tau=float(t),
        parts=(rule1.label, rule2.label),
    )


def optimal_blend(p: int, pair: str = "gl") -> BlendedRule:
    """Blend of a named pair at its minimizing ratio."""
    r1, r2 = _pair_rules(p, pair)
    tau = optimal_tau(
        p, quadrature_mass_stencil(p, r1), quadrature_mass_stencil(p, r2)
    )
    return blend(r1, r2, tau)


def _mpf_to_fraction(x) -> Fraction:
    # no mp.mpf() here: that would re-round to the ambient precision
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if hasattr(x, "_mpf_"):
        sign, man, exp, _ = x._mpf_
        if man == 0:
            return Fraction(0)
        f = Fraction(int(man)) * Fraction(2) ** exp
        return -f if sign else f
    return Fraction(x)


def _rationalize(values, max_den=10 ** 9, tol=Fraction(1, 10 ** 25)):
    """Recover exact fractions from mp stencil values, or None if they
    do not round-trip within tol."""
    out = []
    for v in values:
        exact = _mpf_to_fraction(v)
        f = exact.limit_denominator(max_den)
        if abs(exact - f) > tol:
            return None
        out.append(f)
    return out


def _normalize_row(row):
    """Scale a rational row to the smallest integer vector, first entry > 0."""
    L = 1
    for f in row:
        d = f.denominator
        L = L * d // math.gcd(L, d)
    ints = [int(f * L) for f in row]
    g = 0
    for v in ints:
        g = math.gcd(g, abs(v))
    if g:
        ints = [v // g for v in ints]
    for v in ints:
        if v != 0:
            if v < 0:
                ints = [-u for u in ints]
            break
    return tuple(ints)


@dataclass(frozen=True)
class TripleBlendReport:
    """Reduced 2x2 system for a three-rule blend hitting order 2p + 4.

    rows hold the two normalized integer equations in (tau_1, tau_2) with
    tau_3 = 1 - tau_1 - tau_2: entries (a, b, rhs) meaning a tau_1 +
    b tau_2 = rhs.  solution is the exact rational pair when the system is
    uniquely solvable, else None; consistent reports solvability.
    """

    p: int
    labels: tuple[str, str, str]
    rows: tuple[tuple[int, int, int], tuple[int, int, int]]
    solution: tuple | None
    consistent: bool


def triple_blend_check(p: int, rule1: QuadratureRule, rule2: QuadratureRule,
                       rule3: QuadratureRule) -> TripleBlendReport:
    """Conditions for a three-rule mass blend to cancel two error orders.

    Writes the vanishing of the order-2p and order-(2p+2) dispersion error
    coefficients of the blended mass row as two equations in the first two
    blend fractions, eliminating the third through the affine constraint.
    Rows are normalized to the smallest integer form.  The per-rule
    coefficients come from each rule's own error expansion; on the solution
    set the quadratic feedback term of the blend vanishes, so the reduced
    system is genuinely linear.
    """
    rules = (rule1, rule2, rule3)
    A = stiffness_stencil(p)
    stencils = []
    for r in rules:
        _check_exactness(p, r, True)
        stencils.append(quadrature_mass_stencil(p, r))
    for i in range(3):
        for j in range(i + 1, 3):
            diff = max(
                abs(u - v)
                for u, v in zip(stencils[i].values, stencils[j].values)
            )
            if diff < 1e-20:
                raise ValueError(
                    f"rules {rules[i].label} and {rules[j].label} induce the "
                    "same mass row; the blend system is degenerate"
                )
    coeffs = []
    for s in stencils:
        rational = _rationalize(s.values)
        if rational is None:
            raise ArithmeticError(
                "mass row did not resolve to exact rationals; "
                "raise the construction precision"
            )
        c1, c2 = error_expansion(p, A, rational)
        coeffs.append((c1, c2))
    rows = []
    for idx in range(2):
        c_1, c_2, c_3 = (coeffs[r][idx] for r in range(3))
        rows.append(_normalize_row([c_1 - c_3, c_2 - c_3, -c_3]))
    (a1, b1, r1), (a2, b2, r2) = rows
    det = a1 * b2 - a2 * b1
    if det != 0:
        t1 = Fraction(r1 * b2 - r2 * b1, det)
        t2 = Fraction(a1 * r2 - a2 * r1, det)
        solution = (t1, t2)
        consistent = True
    else:
        solution = None
        consistent = (a1 * r2 == a2 * r1) and (b1 * r2 == b2 * r1)
    return TripleBlendReport(
        p=p,
        labels=(rule1.label, rule2.label, rule3.label),
        rows=(rows[0], rows[1]),
        solution=solution,
        consistent=consistent,
    )
