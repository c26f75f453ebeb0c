import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dyntrans.center_manifold import ReducedSystem
from dyntrans.classifier import STABLE_NODE, steady_states
from dyntrans.errors import NotApplicable, StepSizeError
from dyntrans.reduced_ode import (CONVERGED, ESCAPED, PortraitSpec, circle_seeds, default_radius,
                                  find_equilibria, integrate, integrate_batch, line_drift, sector_probe)

BETA = 0.005


def stable_kind(sys, beta):
    return [s.kind for s in steady_states(sys, beta) if s.stability == STABLE_NODE]


def test_axis_seed_reaches_stable_roll(she_system):
    lam = she_system.lambda_c + BETA
    (kind,) = stable_kind(she_system, BETA)
    r = math.sqrt(-BETA / she_system.b3)
    sign = -1 if kind == "R1" else 1
    tr = integrate(she_system, lam, (0.0, sign * 0.3 * r))
    assert tr.termination == CONVERGED and tr.state == kind
    assert abs(tr.final[1] - sign * r) < 1e-6


def test_origin_stays_put(she_system):
    tr = integrate(she_system, she_system.lambda_c + BETA, (0.0, 0.0))
    assert tr.final == (0.0, 0.0)
    assert tr.state == "O"


def test_opposite_axis_direction_escapes(she_system):
    (kind,) = stable_kind(she_system, BETA)
    sign = 1 if kind == "R1" else -1
    r = math.sqrt(-BETA / she_system.b3)
    tr = integrate(she_system, she_system.lambda_c + BETA, (0.0, sign * 0.3 * r), PortraitSpec(radius=0.3))
    assert tr.termination == ESCAPED or tr.state != kind


@settings(max_examples=15, deadline=None)
@given(st.floats(0.01, 1.0), st.floats(-1.0, 1.0))
def test_u1_sign_and_mirror(x, y):
    s = ReducedSystem(1.0, -0.51, -1.34, 0.25, -0.67, -0.716, lambda_c=0.0)
    r = default_radius(s, BETA)
    spec = PortraitSpec(t_max=2000.0, record_every=1, audit=False)
    u0 = (x * r / 2, y * r / 2)
    a = integrate(s, BETA, u0, spec, states=[])
    b = integrate(s, BETA, (-u0[0], u0[1]), spec, states=[])
    assert np.all(a.samples[:, 1] >= 0)
    np.testing.assert_array_equal(a.samples[:, 1], -b.samples[:, 1])
    np.testing.assert_array_equal(a.samples[:, 2], b.samples[:, 2])


@pytest.mark.parametrize("sign", [1.0, -1.0])
def test_straight_line_invariant_at_quadratic_order(she_system, sign):
    lam = she_system.lambda_c + BETA
    h = {s.kind: s for s in steady_states(she_system, BETA)}["H1"]
    u2 = 0.5 * abs(h.amplitudes[1])
    for u2_0 in (u2, -u2):
        spec = PortraitSpec(t_max=400.0)
        assert line_drift(she_system, lam, u2_0, sign, spec) < 1e-9


def test_equilibria_match_leading_order(she_system):
    errs = {}
    for beta in (0.02, 0.01, 0.005):
        lam = she_system.lambda_c + beta
        eqs = {e.seed_kind: e for e in find_equilibria(she_system, lam)}
        assert all(e.converged for e in eqs.values())
        assert eqs["R1"].seed_distance == 0.0 and eqs["R2"].seed_distance == 0.0
        errs[beta] = eqs["H1"].seed_distance
    assert 3 <= errs[0.02] / errs[0.01] <= 5
    assert 3 <= errs[0.01] / errs[0.005] <= 5


def test_equilibria_report_failure(she_system):
    eqs = find_equilibria(she_system, she_system.lambda_c + BETA, seeds=[("bad", (1e200, 1e200))])
    assert not eqs[0].converged and eqs[0].error == "NoConvergence"


def test_sector_angle_symmetric_case():
    s = ReducedSystem(1.0, 0.0, 0.0, 1.0, 0.0, -1.0)
    m = sector_probe(s, 0.002, n_rays=32)
    assert m.theta_predicted == pytest.approx(math.pi / 4)
    assert m.error < 0.05
    assert m.boundaries[0] == pytest.approx(m.boundaries[1], abs=1e-3)


def test_sector_not_applicable(mshe_system, she_system):
    with pytest.raises(NotApplicable):
        sector_probe(mshe_system, mshe_system.lambda_c + BETA)
    with pytest.raises(NotApplicable):
        sector_probe(she_system, she_system.lambda_c - BETA)


def test_step_audit_rejects_large_dt(she_system):
    with pytest.raises(StepSizeError):
        integrate(she_system, she_system.lambda_c + BETA, (0.01, 0.01), PortraitSpec(dt=50.0))


def test_seed_outside_radius_rejected(she_system):
    with pytest.raises(ValueError):
        integrate(she_system, she_system.lambda_c + BETA, (1.0, 1.0), PortraitSpec(radius=0.1))


def test_continuous_all_seeds_settle(mshe_system):
    lam = mshe_system.lambda_c + BETA
    (kind,) = stable_kind(mshe_system, BETA)
    r = math.sqrt(-BETA / mshe_system.b3)
    _, terms, kinds = integrate_batch(mshe_system, lam, circle_seeds(0.25 * r, 24, 0.1))
    assert set(terms) == {CONVERGED}
    assert set(kinds) == {kind}


def test_batch_matches_single(she_system):
    lam = she_system.lambda_c + BETA
    seeds = circle_seeds(0.02, 8, 0.3)
    spec = PortraitSpec(audit=False)
    final, terms, kinds = integrate_batch(she_system, lam, seeds, spec)
    for u0, f, t, k in zip(seeds, final, terms, kinds):
        tr = integrate(she_system, lam, u0, spec)
        assert tr.termination == t and tr.state == k
        if t != ESCAPED:
            np.testing.assert_array_equal(tr.final, f)
