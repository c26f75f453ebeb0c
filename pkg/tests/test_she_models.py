import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dyntrans.center_manifold import reduce
from dyntrans.classifier import classify
from dyntrans.errors import ConfigError, QuadraticDegeneracyError, WindowError
from dyntrans.she_models import (MIXED, NEUMANN, SheConfig, build_problem, closed_form_coefficients,
                                 nonlinear_spec, sign_predictions)

k_she = st.floats(7 / 6 + 1e-3, 11 / 6 - 1e-3)
k_mixed = st.floats(7 / 6 + 1e-3, 11 / 6 - 1e-3)
coef = st.floats(-3, 3).filter(lambda v: abs(v) > 0.05)


def test_closed_form_examples():
    assert closed_form_coefficients(SheConfig()) == pytest.approx((1, 0.25, -63 / 88))
    a1, b1, b3 = closed_form_coefficients(SheConfig(variant=MIXED, c=(0, 1, 0, 0, 0)))
    assert (a1, b1, b3) == pytest.approx((-1 / (2 * math.sqrt(3)), 1 / (4 * math.sqrt(3)), -34 / 44))
    assert closed_form_coefficients(SheConfig(alpha2=0))[:2] == (0, 0)


def test_window():
    with pytest.raises(WindowError):
        closed_form_coefficients(SheConfig(k=1.0))
    with pytest.raises(WindowError):
        build_problem(SheConfig(k=1.9))
    # the mixed window is wider
    closed_form_coefficients(SheConfig(k=1.0, variant=MIXED, c=(0, 1, 0, 0, 0)))
    with pytest.raises(ConfigError):
        SheConfig(variant="dirichlet")
    with pytest.raises(ConfigError):
        SheConfig(c=(1, 2))


@settings(max_examples=12, deadline=None)
@given(k_she, coef, st.floats(-3, 3))
def test_she_end_to_end(k, a2, a3):
    cfg = SheConfig(k=k, alpha2=a2, alpha3=a3)
    p = build_problem(cfg)
    s = reduce(p.spec, p.law, p.pair)
    a1, b1, b3 = closed_form_coefficients(cfg)
    assert (s.a1, s.b1) == pytest.approx((a1, b1), abs=1e-12)
    assert s.b3 == pytest.approx(b3, rel=1e-10, abs=1e-12)
    assert s.a1 * s.b1 >= 0
    if not s.is_zero(s.b3):
        assert classify(s).transition_type == sign_predictions(cfg)


@settings(max_examples=12, deadline=None)
@given(k_mixed, coef, coef, st.floats(-3, 3))
def test_mixed_end_to_end(k, c2, c4, a3):
    if abs(c2 + c4) < 0.05:
        c4 += 0.2
    cfg = SheConfig(k=k, alpha3=a3, variant=MIXED, c=(0, c2, 0, c4, 0))
    p = build_problem(cfg)
    s = reduce(p.spec, p.law, p.pair)
    a1, b1, b3 = closed_form_coefficients(cfg)
    assert (s.a1, s.b1) == pytest.approx((a1, b1), rel=1e-10, abs=1e-12)
    assert s.b3 == pytest.approx(b3, rel=1e-10, abs=1e-12)
    assert s.a1 * s.b1 < 0
    if not s.is_zero(s.b3):
        assert classify(s).transition_type == sign_predictions(cfg)


def test_sign_logic_examples():
    assert sign_predictions(SheConfig(alpha3=-1)) == "catastrophic"
    assert sign_predictions(SheConfig(alpha3=0)) == "catastrophic"
    assert sign_predictions(SheConfig(alpha3=1)) == "random"
    assert sign_predictions(SheConfig(variant=MIXED, c=(0, 1, 0, 0, 0), alpha3=0)) == "continuous"
    assert sign_predictions(SheConfig(variant=MIXED, c=(0, 1, 0, -1, 0))) == "quadratic-degeneracy"
    assert sign_predictions(SheConfig(alpha2=0)) == "quadratic-degeneracy"
    # strongly negative alpha3 flips b3 in the mixed model
    assert sign_predictions(SheConfig(variant=MIXED, c=(0, 1, 0, 0, 0), alpha3=-1)) == "catastrophic"


def test_degenerate_quadratic_raises():
    p = build_problem(SheConfig(alpha2=0))
    with pytest.raises(QuadraticDegeneracyError):
        classify(reduce(p.spec, p.law, p.pair))


def test_spec_terms():
    spec = nonlinear_spec(SheConfig(variant=MIXED, c=(1, 2, 3, 4, 5)))
    assert [(t.coeff, t.du, t.dv) for t in spec.bilinear] == [
        (1, (0, 0), (0, 0)), (2, (1, 0), (0, 0)), (3, (0, 1), (0, 0)), (4, (0, 0), (1, 0)), (5, (0, 0), (0, 1))]
    assert spec.trilinear[0].coeff == -1
    assert nonlinear_spec(SheConfig(alpha2=0, alpha3=0)).bilinear == ()
    assert SheConfig(c=(0, 1, 0, 2, 0)).s == 3
    assert SheConfig().to_dict()["variant"] == NEUMANN
