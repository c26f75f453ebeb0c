import numpy as np
import pytest

from dyntrans.she_models import MIXED, SheConfig, build_problem
from dyntrans.trig_basis import COS


# filled by the acceptance tests, printed at the end of the session
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


def gauss_grid(n=128):
    """Gauss-Legendre nodes/weights on (0, pi); exact to round-off for the
    low-frequency trig products used here."""
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * np.pi * (x + 1.0), 0.5 * np.pi * w


def t(parity, j, a):
    return np.cos(j * a) if parity == COS else np.sin(j * a)


def quad2(f, dom, n=128):
    """Integral of ``f(a, b)`` over the domain in scaled coordinates with the
    ``L1 L2`` measure."""
    a, w = gauss_grid(n)
    A, B = np.meshgrid(a, a, indexing="ij")
    return float(np.einsum("i,j,ij->", w, w, f(A, B))) * dom.L1 * dom.L2


@pytest.fixture(scope="session")
def she_problem():
    return build_problem(SheConfig(k=1.5, alpha2=1.0, alpha3=1.0))


@pytest.fixture(scope="session")
def mshe_problem():
    return build_problem(SheConfig(k=1.5, alpha3=1.0, variant=MIXED, c=(0, 1, 0, 0, 0)))


@pytest.fixture(scope="session")
def she_system(she_problem):
    from dyntrans.center_manifold import reduce

    p = she_problem
    return reduce(p.spec, p.law, p.pair)


@pytest.fixture(scope="session")
def mshe_system(mshe_problem):
    from dyntrans.center_manifold import reduce

    p = mshe_problem
    return reduce(p.spec, p.law, p.pair)


def random_admissible_spec(rng):
    """Random bilinear/trilinear terms with even derivative totals per axis."""
    from dyntrans.nonlinear_op import BilinearTerm, NonlinearSpec, TrilinearTerm

    bil = []
    for _ in range(rng.integers(1, 4)):
        du = (int(rng.integers(0, 3)), int(rng.integers(0, 3)))
        dv = tuple(int(2 * rng.integers(0, 2) + (du[r] % 2)) for r in (0, 1))
        bil.append(BilinearTerm(float(rng.normal()), du, dv))
    tri = [TrilinearTerm(float(rng.normal()))]
    if rng.random() < 0.5:
        tri.append(TrilinearTerm(float(rng.normal()), ((1, 0), (1, 0), (0, 0))))
    return NonlinearSpec(tuple(bil), tuple(tri))
