import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import quad2, t, gauss_grid
from dyntrans.trig_basis import (COS, SHE_DOMAIN, SIN, Domain, Exact, Mode, TrigPoly, axis_integral,
                                 axis_may_be_nonzero, inner_product, mode_norm_sq, mode_product,
                                 product_integral, product_may_be_nonzero, resonance_allows)

parities = st.sampled_from([COS, SIN])


@st.composite
def modes(draw, max_index=4):
    px, py = draw(parities), draw(parities)
    j1 = draw(st.integers(1 if px == SIN else 0, max_index))
    j2 = draw(st.integers(1 if py == SIN else 0, max_index))
    return Mode(j1, j2, px, py)


def numeric_product(ms, derivs, dom):
    def f(A, B):
        out = 1.0
        for m, (dx, dy) in zip(ms, derivs):
            gx = _deriv(m.px, m.j1, dx, A) / dom.L1 ** dx
            gy = _deriv(m.py, m.j2, dy, B) / dom.L2 ** dy
            out = out * gx * gy
        return out
    return quad2(f, dom)


def _deriv(parity, j, order, a):
    # d^order/da^order of cos/sin(j a)
    phase = order * math.pi / 2
    base = np.cos(j * a + phase) if parity == COS else np.sin(j * a + phase)
    return j ** order * base


def test_known_values():
    f1, f2 = Mode(1, 1), Mode(2, 0)
    dom = SHE_DOMAIN
    assert product_integral((f1, f1)).value(dom) == pytest.approx(math.sqrt(3) * math.pi ** 2 / 4, rel=1e-15)
    assert product_integral((f1, f1, f2)).value(dom) == pytest.approx(math.sqrt(3) * math.pi ** 2 / 8, rel=1e-15)
    assert product_integral((Mode(0, 0),) * 2).value(dom) == pytest.approx(math.sqrt(3) * math.pi ** 2)


def test_axis_integral_exact():
    assert axis_integral(((COS, 0),)) == (1, 1)
    assert axis_integral(((SIN, 3),)) == (Fraction(2, 3), 0)
    assert axis_integral(((SIN, 2),)) == (0, 0)
    assert axis_integral(((COS, 2), (COS, 2))) == (Fraction(1, 2), 1)
    # sin(a) cos(2a) = (sin 3a - sin a)/2 -> (2/3 - 2)/2
    assert axis_integral(((SIN, 1), (COS, 2))) == (Fraction(-2, 3), 0)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(parities, st.integers(0, 5)), min_size=1, max_size=4))
def test_axis_integral_matches_quadrature(factors):
    factors = [(p, n) for p, n in factors]
    a, w = gauss_grid(96)
    vals = np.ones_like(a)
    for p, n in factors:
        vals = vals * t(p, n, a)
    num = float(np.dot(w, vals))
    c, e = axis_integral(tuple(sorted(factors)))
    assert float(c) * math.pi ** e == pytest.approx(num, abs=1e-12)
    if not axis_may_be_nonzero(factors):
        assert c == 0


@settings(max_examples=40, deadline=None)
@given(st.lists(modes(), min_size=2, max_size=3),
       st.lists(st.tuples(st.integers(0, 2), st.integers(0, 2)), min_size=3, max_size=3))
def test_product_integral_matches_quadrature(ms, derivs):
    derivs = derivs[: len(ms)]
    dom = Domain.from_squares(Fraction(7, 3), 2)
    exact = product_integral(ms, derivs).value(dom)
    assert exact == pytest.approx(numeric_product(ms, derivs, dom), abs=1e-10)
    if not product_may_be_nonzero(ms, derivs):
        assert exact == 0


@settings(max_examples=40, deadline=None)
@given(modes(), modes(), modes())
def test_resonance_rule_for_cosine_triples(a, b, c):
    a, b, c = (Mode(m.j1, m.j2) for m in (a, b, c))
    if not resonance_allows(a.index, b.index, c.index):
        assert product_integral((a, b, c)).value(SHE_DOMAIN) == 0


@settings(max_examples=40, deadline=None)
@given(modes(3), modes(3))
def test_mode_product_expansion(a, b):
    dom = SHE_DOMAIN
    p = mode_product(a, b)
    x = np.linspace(0.1, 5.0, 7)
    y = np.linspace(0.2, 3.0, 5)
    X, Y = np.meshgrid(x, y)
    direct = TrigPoly.from_mode(a).evaluate(X, Y, dom) * TrigPoly.from_mode(b).evaluate(X, Y, dom)
    np.testing.assert_allclose(p.evaluate(X, Y, dom), direct, atol=1e-13)
    assert len(p) <= 4


def test_inner_product_orthogonality():
    dom = SHE_DOMAIN
    f1, f2, e = Mode(1, 1), Mode(2, 0), Mode(3, 1)
    p = TrigPoly.from_mode(f1) + TrigPoly.from_mode(f2, 2) + TrigPoly.from_mode(e, Fraction(1, 10))
    assert inner_product(p, f1).value(dom) == pytest.approx(mode_norm_sq(f1).value(dom))
    assert inner_product(p, f2).value(dom) == pytest.approx(2 * mode_norm_sq(f2).value(dom))
    assert inner_product(p, Mode(5, 5)).value(dom) == 0


def test_sin_cos_product():
    # <f1_x f2, f1> for the mixed basis: f1 = sin(x/L1)cos(y), f2 = sin(2x/L1)
    dom = SHE_DOMAIN
    f1, f2 = Mode(1, 1, SIN, COS), Mode(2, 0, SIN, COS)
    val = product_integral((f1, f2, f1), ((1, 0), (0, 0), (0, 0))).value(dom)
    assert val == pytest.approx(numeric_product((f1, f2, f1), ((1, 0), (0, 0), (0, 0)), dom), abs=1e-12)


def test_derivative_poly_matches_numeric():
    dom = SHE_DOMAIN
    p = TrigPoly.from_mode(Mode(2, 1, SIN, COS), 3).derivative((1, 1))
    x, y = 0.7, 1.3
    expected = 3 * (2 / dom.L1) * math.cos(2 * x / dom.L1) * (-(1 / dom.L2)) * math.sin(y / dom.L2)
    assert p.evaluate(x, y, dom) == pytest.approx(expected)


def test_exact_arithmetic():
    a = Exact.monomial(Fraction(1, 2), 1, 1, 0)
    b = Exact.monomial(3, 0, 0, 1)
    assert (a + b) - b == a
    assert (a * b).value(SHE_DOMAIN) == pytest.approx(0.5 * math.pi * math.sqrt(3) * 3)
    assert hash(a + b) == hash(b + a)
    assert not Exact()


def test_mode_validation():
    with pytest.raises(ValueError):
        Mode(0, 1, SIN, COS)
    with pytest.raises(ValueError):
        Mode(-1, 0)
    with pytest.raises(ValueError):
        Domain(0.0, 1.0)


def test_exact_wavenumbers():
    assert SHE_DOMAIN.wavenumber_sq(1, 1) == Fraction(4, 3) == SHE_DOMAIN.wavenumber_sq(2, 0)
