"""Quadrature families, induced mass rows, blend ratios, triple blends."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from mpmath import mp

from expected_values import (
    BLEND_RATIOS,
    DEGENERATE_PAIRS,
    EXACT_MASS,
    EXACT_STIFFNESS,
    MASS_BY_RULE,
    MINIMIZED_MASS,
    MINRULE_FORMS,
    TRIPLE_SYSTEMS,
)
from igadmm.dmm import dmm_stencil
from igadmm.quadrature import (
    DegenerateBlendError,
    QuadratureRule,
    blend,
    dmm_rule,
    gauss_legendre,
    gauss_lobatto,
    gauss_radau,
    optimal_blend,
    optimal_tau,
    quadrature_mass_stencil,
    quadrature_stiffness_stencil,
    tau_for_pair,
    triple_blend_check,
)

FAMILIES = [
    (gauss_legendre, 1, lambda m: 2 * m - 1),
    (gauss_lobatto, 2, lambda m: 2 * m - 3),
    (gauss_radau, 1, lambda m: 2 * m - 2),
]


def _stencil_close(stencil, fractions, tol):
    with mp.workdps(60):
        return max(
            abs(v - mp.mpf(f.numerator) / f.denominator)
            for v, f in zip(stencil.values, fractions)
        ) < tol


@pytest.mark.parametrize("family,mmin,_deg", FAMILIES)
def test_weights_sum_to_one(family, mmin, _deg):
    for m in range(mmin, 8):
        assert abs(sum(family(m).weights) - 1.0) < 1e-14


@pytest.mark.parametrize("family,mmin,deg", FAMILIES)
def test_polynomial_exactness_is_sharp(family, mmin, deg):
    for m in range(max(mmin, 2), 6):
        rule = family(m)
        assert rule.exactness == deg(m)
        for d in range(rule.exactness + 1):
            err = abs(rule.integrate(lambda x, d=d: x ** d) - 1.0 / (d + 1))
            assert err < 1e-13, (rule.label, d, err)
        d = rule.exactness + 1
        err = abs(rule.integrate(lambda x, d=d: x ** d) - 1.0 / (d + 1))
        assert err > 1e-11, (rule.label, d, err)


def test_small_rules_are_the_classical_ones():
    g1 = gauss_legendre(1)
    assert g1.nodes == (0.5,) and g1.weights == (1.0,)
    l2 = gauss_lobatto(2)
    assert l2.nodes == (0.0, 1.0) and l2.weights == (0.5, 0.5)
    r1 = gauss_radau(1)
    assert r1.nodes == (0.0,) and r1.weights == (1.0,)


def test_constrained_nodes_present():
    for m in range(2, 8):
        assert gauss_lobatto(m).nodes[0] == 0.0
        assert gauss_lobatto(m).nodes[-1] == 1.0
        assert gauss_radau(m).nodes[0] == 0.0


def test_rule_validates_node_weight_pairing():
    with pytest.raises(ValueError):
        QuadratureRule("bad", (0.0, 1.0), (1.0,), 0)
    for bad in (lambda: gauss_legendre(0),
                lambda: gauss_lobatto(1),
                lambda: gauss_radau(0)):
        with pytest.raises(ValueError):
            bad()


@pytest.mark.parametrize("p,name", sorted(MASS_BY_RULE))
def test_underintegrated_mass_rows_frozen(p, name):
    rule = {
        "gp": lambda: gauss_legendre(p),
        "lobatto": lambda: gauss_lobatto(p + 1),
        "radau": lambda: gauss_radau(p),
    }[name]()
    row = quadrature_mass_stencil(p, rule)
    assert _stencil_close(row, MASS_BY_RULE[p, name], 1e-20)


@pytest.mark.parametrize("p", [1, 2, 3, 4])
def test_full_gauss_reproduces_exact_rows(p):
    g = gauss_legendre(p + 1)
    assert _stencil_close(quadrature_mass_stencil(p, g), EXACT_MASS[p], 1e-20)
    assert _stencil_close(
        quadrature_stiffness_stencil(p, g), EXACT_STIFFNESS[p], 1e-18
    )


def test_exactness_guard():
    with pytest.raises(ValueError):
        quadrature_mass_stencil(3, gauss_legendre(2))
    row = quadrature_mass_stencil(3, gauss_legendre(2), require_exactness=False)
    assert len(row.values) == 4


@pytest.mark.parametrize("p", [1, 2, 3])
@pytest.mark.parametrize("sign", [1, -1])
def test_minimizing_rule_closed_form(p, sign):
    rule = dmm_rule(p, sign)
    fixed, radicand, divisor, weights = MINRULE_FORMS[p]
    with mp.workdps(40):
        free = mp.mpf(1) / 2 + sign * mp.sqrt(radicand) / divisor
        want = ([mp.mpf(fixed)] if fixed is not None else []) + [free]
        assert max(abs(a - b) for a, b in zip(rule.nodes_mp, want)) < mp.mpf(10) ** -38
    assert tuple(float(w) for w in weights) == rule.weights
    assert rule.exactness == 0


@pytest.mark.parametrize("p", [1, 2, 3])
@pytest.mark.parametrize("sign", [1, -1])
def test_minimizing_rule_reproduces_both_rows(p, sign):
    rule = dmm_rule(p, sign)
    mass = quadrature_mass_stencil(p, rule, require_exactness=False)
    stiff = quadrature_stiffness_stencil(p, rule, require_exactness=False)
    assert _stencil_close(mass, MINIMIZED_MASS[p], 1e-20)
    assert _stencil_close(stiff, EXACT_STIFFNESS[p], 1e-18)


def test_minimizing_rule_rejects_bad_arguments():
    with pytest.raises(ValueError):
        dmm_rule(4)
    with pytest.raises(ValueError):
        dmm_rule(2, sign=0)


@pytest.mark.parametrize("p,pair", sorted(BLEND_RATIOS))
def test_blend_ratios_frozen(p, pair):
    tau = tau_for_pair(p, pair)
    want = BLEND_RATIOS[p, pair]
    with mp.workdps(40):
        assert abs(tau - mp.mpf(want.numerator) / want.denominator) < 1e-25


@pytest.mark.parametrize("p,pair", sorted(DEGENERATE_PAIRS))
def test_degenerate_pair_raises(p, pair):
    with pytest.raises(DegenerateBlendError):
        tau_for_pair(p, pair)


def test_identical_rows_raise():
    row = quadrature_mass_stencil(2, gauss_legendre(3))
    with pytest.raises(DegenerateBlendError):
        optimal_tau(2, row, row)


def test_unknown_pair_rejected():
    with pytest.raises(ValueError):
        tau_for_pair(2, "xy")


@settings(max_examples=40, deadline=None)
@given(
    st.floats(min_value=-4, max_value=4, allow_nan=False),
    st.lists(st.floats(min_value=-3, max_value=3, allow_nan=False),
             min_size=1, max_size=5),
)
def test_blend_is_affine_in_the_applications(tau, coeffs):
    r1, r2 = gauss_legendre(3), gauss_lobatto(3)

    def f(x):
        return sum(c * x ** i for i, c in enumerate(coeffs))

    combined = blend(r1, r2, tau).integrate(f)
    split = tau * r1.integrate(f) + (1 - tau) * r2.integrate(f)
    assert abs(combined - split) < 1e-10 * (1 + abs(split))


def test_blended_mass_row_is_the_row_blend():
    p, tau = 2, Fraction(1, 3)
    r1, r2 = gauss_legendre(p + 1), gauss_lobatto(p + 1)
    rows = (quadrature_mass_stencil(p, r1), quadrature_mass_stencil(p, r2))
    mixed = quadrature_mass_stencil(p, blend(r1, r2, tau),
                                    require_exactness=False)
    with mp.workdps(40):
        t = mp.mpf(1) / 3
        for v, a, b in zip(mixed.values, rows[0].values, rows[1].values):
            assert abs(v - (t * a + (1 - t) * b)) < mp.mpf(10) ** -30


@pytest.mark.parametrize("pair", ["gg", "gl", "gr"])
@pytest.mark.parametrize("p", range(1, 7))
def test_optimal_blend_recovers_minimized_row(p, pair):
    row = quadrature_mass_stencil(p, optimal_blend(p, pair),
                                  require_exactness=False)
    assert _stencil_close(row, dmm_stencil(p).values, 1e-18)


def test_doubled_gauss_identity_in_exact_arithmetic():
    # gg blend at p = 2 has ratio 2: twice the exact row minus the p-point row
    lhs = tuple(2 * e - g for e, g in zip(EXACT_MASS[2], MASS_BY_RULE[2, "gp"]))
    assert lhs == MINIMIZED_MASS[2]


@pytest.mark.parametrize("p", [2, 3])
def test_triple_blend_systems_frozen(p):
    rep = triple_blend_check(
        p, gauss_legendre(p + 1), gauss_lobatto(p + 1), gauss_legendre(p)
    )
    rows = tuple(tuple(int(f) for f in row) for row in TRIPLE_SYSTEMS[p])
    assert rep.rows == rows
    assert not rep.consistent
    assert rep.solution is None


def test_triple_blend_rejects_duplicate_rules():
    with pytest.raises(ValueError):
        triple_blend_check(
            2, gauss_legendre(3), gauss_legendre(3), gauss_radau(2)
        )
