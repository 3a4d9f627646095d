"""Discrete dispersion analysis of interior stencil pairs.

For a stiffness/mass row pair the plane-wave (Bloch) eigenvalue at
normalized wavenumber y = omega*h is the trigonometric quotient

    R(y) = (A_0 + 2 sum_k A_k cos(k y)) / (B_0 + 2 sum_k B_k cos(k y)),

and the relative dispersion error is (R(y) - y^2) / y^2.  Expanding the
cosines gives error = c_{2p} y^{2p} + c_{2p+2} y^{2p+2} + ... where the
coefficients are the coupled stencil moments:

    c_{2p}   = 2 (-1)^{p+1} M_{p+1}
    c_{2p+2} = 2 (-1)^p M_{p+2} + (sum_k k^2 B_k) c_{2p}

with M_m the order-m moment from stencils.dispersion_moment.  A
dispersion-minimized mass row has M_{p+1} = 0, so its error starts at
y^{2p+2} and the feedback term drops out.

Evaluation happens in mpmath: near y = 0 the quotient cancels to machine
roundoff long before the curves reach the asymptotic regime (for p = 3
minimized rows the error is ~1e-21 at y = 0.01), so double precision
cannot resolve the slopes this module measures.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from mpmath import mp

from igadmm.dmm import leading_coefficient
from igadmm.stencils import Stencil

_DPS = 50


class StoppingBandError(ArithmeticError):
    """Mass symbol vanished: the wavenumber sits in a stopping band."""


def _values(S, p: int) -> tuple:
    vals = S.values if isinstance(S, Stencil) else tuple(S)
    if len(vals) != p + 1:
        raise ValueError(f"need offsets 0..{p}, got {len(vals)} values")
    return vals


def _to_mp(v) -> mp.mpf:
    if isinstance(v, Fraction):
        return mp.mpf(v.numerator) / v.denominator
    return mp.mpf(v)


def _symbol(vals_mp, y):
    acc = vals_mp[0]
    for k in range(1, len(vals_mp)):
        acc += 2 * vals_mp[k] * mp.cos(k * y)
    return acc


def rayleigh(p: int, A, B, wavenumber) -> float:
    """Discrete squared-frequency symbol R(y) at normalized wavenumber y."""
    a = _values(A, p)
    b = _values(B, p)
    with mp.workdps(_DPS):
        y = _to_mp(wavenumber)
        den = _symbol([_to_mp(v) for v in b], y)
        if abs(den) < 1e-14:
            raise StoppingBandError(f"mass symbol ~ 0 at wavenumber {wavenumber}")
        return float(_symbol([_to_mp(v) for v in a], y) / den)


def dispersion_error(p: int, A, B, wavenumber) -> float:
    """Relative dispersion error (R(y) - y^2) / y^2, evaluated in mpmath."""
    a = _values(A, p)
    b = _values(B, p)
    with mp.workdps(_DPS):
        y = _to_mp(wavenumber)
        if y == 0:
            raise ValueError("wavenumber must be nonzero")
        den = _symbol([_to_mp(v) for v in b], y)
        if abs(den) < 1e-14:
            raise StoppingBandError(f"mass symbol ~ 0 at wavenumber {wavenumber}")
        num = _symbol([_to_mp(v) for v in a], y)
        return float((num - y * y * den) / (y * y * den))


@dataclass(frozen=True)
class DispersionCurve:
    p: int
    label: str
    wavenumbers: tuple[float, ...]
    errors: tuple[float, ...]  # signed relative errors


def sample_curve(p: int, A, B, wavenumbers, label: str = "") -> DispersionCurve:
    errs = tuple(dispersion_error(p, A, B, y) for y in wavenumbers)
    return DispersionCurve(p, label, tuple(float(y) for y in wavenumbers), errs)


def fit_order(wavenumbers, errors) -> float:
    """Least-squares slope of log|error| against log(wavenumber)."""
    ys = np.asarray(wavenumbers, dtype=float)
    es = np.abs(np.asarray(errors, dtype=float))
    if ys.size < 2:
        raise ValueError("need at least two samples to fit a slope")
    if np.any(es == 0):
        raise ValueError("zero error sample: slope undefined")
    coeffs = np.polyfit(np.log(ys), np.log(es), 1)
    return float(coeffs[0])


def error_expansion(p: int, A, B) -> tuple:
    """Coefficients (c_{2p}, c_{2p+2}) of the dispersion error expansion.

    Exact Fractions when both stencils carry Fractions, floats or mpf
    otherwise.  c_{2p+2} includes the feedback of c_{2p} through the mass
    symbol, so it is the true second coefficient also for rows that are
    not dispersion minimized.
    """
    a = Stencil(p, "stiffness", _values(A, p))
    b_vals = _values(B, p)
    b = Stencil(p, "mass", b_vals)
    lead = leading_coefficient(p, a, b, 2 * p)
    bare = leading_coefficient(p, a, b, 2 * p + 2)
    b1 = sum(k * k * b_vals[k] for k in range(1, p + 1))
    return lead, bare + b1 * lead


@dataclass(frozen=True)
class CoefficientCheck:
    order: int
    measured: float
    predicted: float

    @property
    def rel_deviation(self) -> float:
        return abs(self.measured - self.predicted) / abs(self.predicted)


def coefficient_check(p: int, A, B, order: int, wavenumber: float = 1e-3) -> CoefficientCheck:
    """Compare the measured error coefficient against the moment formula.

    Measures dispersion_error / y^order at a small wavenumber and predicts
    the same number from the expansion coefficients: the c_{2p} term for
    order = 2p, the full c_{2p+2} term for order = 2p + 2.
    """
    if order not in (2 * p, 2 * p + 2):
        raise ValueError(f"order must be {2 * p} or {2 * p + 2}, got {order}")
    c_lead, c_next = error_expansion(p, A, B)
    predicted = c_lead if order == 2 * p else c_next
    with mp.workdps(_DPS):
        a = [_to_mp(v) for v in _values(A, p)]
        b = [_to_mp(v) for v in _values(B, p)]
        y = _to_mp(wavenumber)
        den = _symbol(b, y)
        err = (_symbol(a, y) - y * y * den) / (y * y * den)
        measured = float(err / y ** order)
    return CoefficientCheck(order, measured, float(predicted))
