import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import quad2
from dyntrans.errors import ZeroNormError
from dyntrans.nonlinear_op import BilinearTerm, NonlinearSpec, TrilinearTerm, g2_proj, g2_sym, g3_proj, g3_sym
from dyntrans.trig_basis import COS, SHE_DOMAIN, SIN, Mode

DOM = SHE_DOMAIN


def field(m, d, A, B):
    dx, dy = d
    gx = m.j1 ** dx * (np.cos(m.j1 * A + dx * math.pi / 2) if m.px == COS else np.sin(m.j1 * A + dx * math.pi / 2))
    gy = m.j2 ** dy * (np.cos(m.j2 * B + dy * math.pi / 2) if m.py == COS else np.sin(m.j2 * B + dy * math.pi / 2))
    return gx * gy / (DOM.L1 ** dx * DOM.L2 ** dy)


def quad_g2(spec, i, j, k):
    num = sum(tm.coeff * quad2(lambda A, B: field(i, tm.du, A, B) * field(j, tm.dv, A, B) * field(k, (0, 0), A, B),
                               DOM) for tm in spec.bilinear)
    return num / quad2(lambda A, B: field(k, (0, 0), A, B) ** 2, DOM)


MIXED_SPEC = NonlinearSpec((BilinearTerm(0.3), BilinearTerm(1.0, du=(1, 0)), BilinearTerm(-0.7, dv=(0, 1)),
                            BilinearTerm(0.2, du=(1, 1), dv=(0, 1))),
                           (TrilinearTerm(-1.0), TrilinearTerm(0.5, ((1, 0), (1, 0), (0, 0)))))


@st.composite
def mixed_modes(draw):
    return Mode(draw(st.integers(1, 4)), draw(st.integers(0, 3)), SIN, COS)


@settings(max_examples=30, deadline=None)
@given(mixed_modes(), mixed_modes(), mixed_modes())
def test_g2_matches_quadrature(i, j, k):
    assert g2_proj(MIXED_SPEC, i, j, k, DOM) == pytest.approx(quad_g2(MIXED_SPEC, i, j, k), abs=1e-11)


def test_g2_she_values():
    spec = NonlinearSpec((BilinearTerm(1.0),))
    f1, f2 = Mode(1, 1), Mode(2, 0)
    # alpha2 u^2: <f1 f2, f1>/|f1|^2 = 1/2, <f1 f1, f2>/|f2|^2 = 1/4
    assert g2_proj(spec, f1, f2, f1, DOM) == pytest.approx(0.5)
    assert g2_proj(spec, f1, f1, f2, DOM) == pytest.approx(0.25)
    assert g2_sym(spec, f1, f2, f1, DOM) == pytest.approx(1.0)


def test_g3_sym_counts_distinct_permutations():
    spec = NonlinearSpec((), (TrilinearTerm(1.0),))
    f1, f2 = Mode(1, 1), Mode(2, 0)
    one = g3_proj(spec, f1, f1, f2, f2, DOM)
    assert g3_sym(spec, f1, f1, f2, f2, DOM) == pytest.approx(3 * one)
    assert g3_sym(spec, f2, f2, f2, f2, DOM) == pytest.approx(g3_proj(spec, f2, f2, f2, f2, DOM))


def test_g3_quadrature():
    spec = MIXED_SPEC
    i, j, k, l = Mode(1, 1, SIN, COS), Mode(2, 0, SIN, COS), Mode(1, 1, SIN, COS), Mode(2, 0, SIN, COS)
    num = sum(tm.coeff * quad2(lambda A, B: field(i, tm.d[0], A, B) * field(j, tm.d[1], A, B)
                               * field(k, tm.d[2], A, B) * field(l, (0, 0), A, B), DOM) for tm in spec.trilinear)
    num /= quad2(lambda A, B: field(l, (0, 0), A, B) ** 2, DOM)
    assert g3_proj(spec, i, j, k, l, DOM) == pytest.approx(num, abs=1e-11)


def test_zero_weight():
    with pytest.raises(ZeroNormError):
        g2_proj(MIXED_SPEC, Mode(1, 1), Mode(1, 1), Mode(1, 1), DOM, adjoint_weight=0.0)


def test_admissibility():
    assert NonlinearSpec((BilinearTerm(1.0),)).is_admissible((COS, COS))
    assert not NonlinearSpec((BilinearTerm(1.0, du=(1, 0)),)).is_admissible((COS, COS))
    assert NonlinearSpec((BilinearTerm(1.0, du=(1, 0)),)).is_admissible((SIN, COS))
    assert not NonlinearSpec((BilinearTerm(1.0),)).is_admissible((SIN, COS))
    assert not NonlinearSpec((BilinearTerm(1.0, du=(1, 1)),)).is_admissible((SIN, COS))
    assert not NonlinearSpec((), (TrilinearTerm(1.0, ((1, 0), (0, 0), (0, 0))),)).is_admissible((COS, COS))


def test_roundtrip_dict():
    d = MIXED_SPEC.to_dict()
    assert NonlinearSpec.from_dict(d) == MIXED_SPEC
    assert MIXED_SPEC.without_trilinear().trilinear == ()


def test_derivative_order_validation():
    with pytest.raises(ValueError):
        BilinearTerm(1.0, du=(5, 0))
    with pytest.raises(ValueError):
        TrilinearTerm(1.0, ((0, 0), (0, 0)))
