import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dyntrans.dns import (CONVERGED, ESCAPED, IMEX, Schedule, SpectralField, SpectralLayout, Stepper,
                          analyze, nonlinear_term, project_amplitudes, read_grid, run, synthesize, write_grid)
from dyntrans.errors import BlowupError, ConfigError
from dyntrans.nonlinear_op import g2_proj, g3_proj
from dyntrans.she_models import MIXED, NEUMANN, SheConfig, build_problem
from dyntrans.trig_basis import COS, SIN

BETA = 0.005


@pytest.mark.parametrize("parity", list(itertools.product((COS, SIN), repeat=2)))
def test_transform_roundtrip_and_grid_values(parity):
    rng = np.random.default_rng(1)
    n = 16
    c = rng.standard_normal((n, n))
    if parity[0] == SIN:
        c[0, :] = 0
    if parity[1] == SIN:
        c[:, 0] = 0
    g = synthesize(c, parity)
    np.testing.assert_allclose(analyze(g, parity), c, atol=1e-12)
    # brute-force synthesis on the midpoint grid
    a = (np.arange(n) + 0.5) * np.pi / n
    f = [np.cos if p == COS else np.sin for p in parity]
    j = np.arange(n)
    brute = np.einsum("ij,ai,bj->ab", c, f[0](np.outer(a, j)), f[1](np.outer(a, j)))
    np.testing.assert_allclose(g, brute, atol=1e-11)


def test_zero_field_stays_zero(she_problem):
    p = she_problem
    r = run(p.law, p.spec, p.pair, p.pair.lambda_c + BETA, {}, Schedule(t_end=5.0, plateau_window=1.0))
    assert np.all(r.norm == 0.0)


def test_linear_fidelity(she_problem):
    p = she_problem
    lay = SpectralLayout(p.law, 32)
    lam = float(p.pair.lambda_c) + BETA
    amps = {(1, 1): 0.3, (2, 0): -0.2, (0, 3): 0.1, (4, 2): 0.05}
    f = SpectralField.from_amplitudes(lay, amps)
    st_ = Stepper(lay, p.spec, lam, dt=0.01, linear_only=True)
    c = f.coeffs
    for _ in range(1000):
        c = st_.step(c)
    for (j1, j2), v in amps.items():
        exact = v * math.exp(10.0 * (lam - float(p.law.decay((j1, j2)))))
        assert c[j1, j2] == pytest.approx(exact, rel=1e-6)


def test_project_amplitudes(she_problem):
    p = she_problem
    lay = SpectralLayout(p.law, 16)
    f = SpectralField.from_amplitudes(lay, {(1, 1): 0.25, (2, 0): -0.5, (3, 3): 9.0})
    assert project_amplitudes(f, p.pair) == (0.25, -0.5)
    # a field with only the critical modes reproduces them from grid values
    g = SpectralField(analyze(f.values(), lay.parity), lay)
    np.testing.assert_allclose(project_amplitudes(g, p.pair), (0.25, -0.5), atol=1e-14)


@pytest.mark.parametrize("variant,c", [(NEUMANN, (0, 0, 0, 0, 0)), (MIXED, (0.3, 1.0, 0.0, -0.4, 0.0))])
def test_nonlinear_term_matches_exact_projections(variant, c):
    p = build_problem(SheConfig(alpha3=0.8, variant=variant, c=c))
    lay = SpectralLayout(p.law, 32)
    i, j = p.law.mode((1, 1)), p.law.mode((2, 0))
    f = SpectralField.from_amplitudes(lay, {i.index: 1.0})
    got = nonlinear_term(f.coeffs, lay, p.spec)
    dom = p.law.domain
    for kidx in [(0, 2), (2, 2), (2, 0), (1, 1), (3, 3)]:
        if not p.law.admissible(kidx):
            continue
        k = p.law.mode(kidx)
        expect = g2_proj(p.spec, i, i, k, dom) + g3_proj(p.spec, i, i, i, k, dom)
        assert got[kidx] == pytest.approx(expect, abs=1e-12)
    f2 = SpectralField.from_amplitudes(lay, {i.index: 1.0, j.index: 1.0})
    got2 = nonlinear_term(f2.coeffs, lay, p.spec)
    k = p.law.mode((3, 1))
    expect = sum(g2_proj(p.spec, a, b, k, dom) for a in (i, j) for b in (i, j))
    expect += sum(g3_proj(p.spec, a, b, e, k, dom) for a in (i, j) for b in (i, j) for e in (i, j))
    assert got2[3, 1] == pytest.approx(expect, abs=1e-12)


def test_parity_breaking_terms_converge_with_resolution():
    """c3, c5 leave the basis parity; their grid projection carries O(N^-2) aliasing."""
    p = build_problem(SheConfig(alpha3=0.0, variant=MIXED, c=(0, 0, 1.0, 0, 0.5)))
    i, k = p.law.mode((1, 1)), p.law.mode((1, 1))
    exact = g2_proj(p.spec, i, i, k, p.law.domain)
    errs = []
    for N in (32, 64, 128):
        lay = SpectralLayout(p.law, N)
        f = SpectralField.from_amplitudes(lay, {i.index: 1.0})
        errs.append(abs(nonlinear_term(f.coeffs, lay, p.spec)[1, 1] - exact))
    assert errs[0] / errs[1] == pytest.approx(4.0, rel=0.1)
    assert errs[1] / errs[2] == pytest.approx(4.0, rel=0.1)


def test_continuous_run_settles_on_roll(mshe_problem, mshe_system):
    p = mshe_problem
    lam = float(p.pair.lambda_c) + BETA
    ic = {"amplitudes": [[1, 1, 0.01], [2, 0, 0.01]]}
    r = run(p.law, p.spec, p.pair, lam, ic, Schedule(dt=0.5, t_end=4000.0, t_min=200.0))
    assert r.termination == CONVERGED
    amp = math.sqrt(-BETA / mshe_system.b3)
    assert abs(r.u1[-1]) < 1e-8
    assert abs(abs(r.u2[-1]) - amp) / amp < 0.05


def test_catastrophic_run_escapes():
    p = build_problem(SheConfig(alpha3=-1.0))
    lam = float(p.pair.lambda_c) + BETA
    ic = {"noise": 0.01, "seed": 0}
    r = run(p.law, p.spec, p.pair, lam, ic, Schedule(dt=0.5, t_end=2000.0))
    assert r.termination == ESCAPED
    assert r.norm[-1] > 10 * r.norm[0] or not math.isfinite(r.u1[-1])


def test_resolution_independence(she_problem):
    p = she_problem
    lam = float(p.pair.lambda_c) + BETA
    ic = {"amplitudes": [[1, 1, 0.01], [2, 0, -0.02]]}
    sch = Schedule(dt=0.5, t_end=100.0, plateau_tol=0.0)
    a = run(p.law, p.spec, p.pair, lam, ic, sch, N=64)
    b = run(p.law, p.spec, p.pair, lam, ic, sch, N=128)
    scale = max(np.max(np.abs(b.u1)), np.max(np.abs(b.u2)))
    assert np.max(np.abs(a.u1 - b.u1)) / scale < 1e-4
    assert np.max(np.abs(a.u2 - b.u2)) / scale < 1e-4


def test_imex_agrees_with_etd_for_small_dt(she_problem):
    p = she_problem
    lam = float(p.pair.lambda_c) + BETA
    ic = {"amplitudes": [[1, 1, 0.02], [2, 0, -0.02]]}
    a = run(p.law, p.spec, p.pair, lam, ic, Schedule(dt=0.05, t_end=20.0, plateau_tol=0.0), N=32)
    b = run(p.law, p.spec, p.pair, lam, ic, Schedule(dt=0.05, t_end=20.0, plateau_tol=0.0, scheme=IMEX), N=32)
    assert np.max(np.abs(a.u2 - b.u2)) < 1e-3 * np.max(np.abs(a.u2))


@settings(max_examples=10, deadline=None)
@given(st.floats(-1.0, 1.0), st.floats(-1.0, 1.0))
def test_single_step_wrapper_is_deterministic(x, y):
    p = build_problem(SheConfig())
    lay = SpectralLayout(p.law, 16)
    f = SpectralField.from_amplitudes(lay, {(1, 1): x, (2, 0): y})
    s1 = Stepper(lay, p.spec, 0.03, 0.1)
    np.testing.assert_array_equal(s1.step(f.coeffs), s1.step(f.coeffs.copy()))


def test_blowup_and_bad_inputs(she_problem):
    p = she_problem
    lay = SpectralLayout(p.law, 16)
    f = SpectralField.from_amplitudes(lay, {(1, 1): 10.0})
    with pytest.raises(BlowupError):
        Stepper(lay, p.spec, 0.03, 0.1, ceiling=1.0).step(f.coeffs)
    with pytest.raises(ConfigError):
        Stepper(lay, p.spec, 0.03, 0.1, scheme="euler")
    with pytest.raises(ConfigError):
        SpectralLayout(p.law, 4)


def test_grid_roundtrip(tmp_path, she_problem):
    lay = SpectralLayout(she_problem.law, 16)
    f = SpectralField.from_amplitudes(lay, {(1, 1): 0.5})
    path = tmp_path / "g.txt"
    write_grid(path, f.values(), lay, "neumann")
    meta, vals = read_grid(path)
    assert meta["N"] == "16" and meta["variant"] == "neumann"
    np.testing.assert_allclose(vals, f.values(), rtol=1e-10, atol=1e-14)
