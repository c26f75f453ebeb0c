"""Center-manifold reduction onto the two critical modes.

The stable-mode amplitudes are slaved quadratically,

    Phi_j = (-1/beta_j) * sum_{m,n in {1,2}} u_m u_n G2(m, n, j),

with ``beta_j`` taken at ``lambda_c``.  Substituting ``u_c + Phi`` into the
projected equations gives quadratic and cubic polynomials in ``(u1, u2)``;
:func:`reduced_polynomials` assembles every monomial of both by brute force
and :func:`reduce` reads off the six coefficients that survive.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, replace
from itertools import product

import numpy as np

from .errors import SingularManifoldError, TruncationError
from .linear_problem import CriticalPair, DispersionLaw
from .nonlinear_op import NonlinearSpec, g2_proj, g2_sym, g3_proj, g3_sym
from .trig_basis import Mode

DEFAULT_RADIUS = 12
CONVERGENCE_STEP = 4
MAX_RADIUS = 128
CONVERGENCE_TOL = 1e-10
ZERO_TOL = 1e-9

QUAD_MONOMIALS = ("u1^2", "u1u2", "u2^2")
CUBIC_MONOMIALS = ("u1^3", "u1^2u2", "u1u2^2", "u2^3")


@dataclass(frozen=True)
class ReducedSystem:
    """Coefficients of the cubic amplitude equations

        du1/dt = beta u1 + a1 u1 u2 + u1 (a2 u1^2 + a3 u2^2)
        du2/dt = beta u2 + b1 u1^2 + u2 (b2 u1^2 + b3 u2^2)

    with ``beta(lambda) = lambda - lambda_c``.
    """

    a1: float
    a2: float
    a3: float
    b1: float
    b2: float
    b3: float
    lambda_c: float = 0.0

    def beta(self, lam) -> float:
        return float(lam - self.lambda_c)

    @property
    def scale(self) -> float:
        return max(abs(self.a1), abs(self.a2), abs(self.a3), abs(self.b1), abs(self.b2), abs(self.b3))

    def is_zero(self, value: float) -> bool:
        """Zero test at the package tolerance, relative to the largest coefficient."""
        return abs(value) <= ZERO_TOL * self.scale

    def quadratic_only(self) -> "ReducedSystem":
        return replace(self, a2=0.0, a3=0.0, b2=0.0, b3=0.0)

    def to_dict(self) -> dict:
        return {k: float(v) for k, v in asdict(self).items()}

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, data: dict) -> "ReducedSystem":
        return cls(**{k: float(data[k]) for k in ("a1", "a2", "a3", "b1", "b2", "b3")},
                   lambda_c=float(data.get("lambda_c", 0.0)))


@dataclass(frozen=True)
class ManifoldTruncation:
    """Stable modes retained in the center-manifold sums, with their
    growth rates at ``lambda_c``."""

    modes: tuple[Mode, ...]
    betas: tuple[float, ...]
    label: str = "lattice"

    def __post_init__(self):
        for m, b in zip(self.modes, self.betas):
            if not b < 0:
                raise SingularManifoldError(f"stable-space mode {m} has beta={b:.6g} >= 0")


def critical_modes(law: DispersionLaw, pair: CriticalPair) -> tuple[Mode, Mode]:
    return law.mode(pair.f1_index), law.mode(pair.f2_index)


def _truncation(law, pair, indices, label):
    crit = set(pair.indices)
    idx = sorted({J for J in indices if law.admissible(J) and J not in crit})
    modes = tuple(law.mode(J) for J in idx)
    betas = tuple(law.beta(J, pair.lambda_c) for J in idx)
    return ManifoldTruncation(modes, betas, label)


def lattice_truncation(law: DispersionLaw, pair: CriticalPair, radius: int = DEFAULT_RADIUS) -> ManifoldTruncation:
    """All admissible modes with both wave indices at most ``radius``."""
    return _truncation(law, pair, law.indices(radius), f"lattice-{radius}")


def interaction_index_sets(pair: CriticalPair) -> dict[str, set]:
    """Wave-index sets reachable by products of the critical modes.

    These are all sign-resonant sums; for ``f1 ~ (j1, j2)``, ``f2 ~ (k1, 0)``
    they reduce to ``{(2j1, 2j2), (2j1, 0), (0, 2j2), (0, 0)}``,
    ``{(k1 - j1, j2), (k1 + j1, j2)}`` and ``{(2k1, 0), (0, 0)}``.
    """
    def combos(p, q):
        return {(abs(p[0] + s * q[0]), abs(p[1] + t * q[1])) for s in (1, -1) for t in (1, -1)}

    f1, f2 = pair.indices
    return {"C11": combos(f1, f1), "C12": combos(f1, f2), "C22": combos(f2, f2)}


def cij_truncation(law: DispersionLaw, pair: CriticalPair) -> ManifoldTruncation:
    sets = interaction_index_sets(pair)
    return _truncation(law, pair, set().union(*sets.values()), "cij")


def equal_wavenumbers(law: DispersionLaw, pair: CriticalPair) -> bool:
    w1 = law.wavenumber_sq(pair.f1_index)
    w2 = law.wavenumber_sq(pair.f2_index)
    return abs(float(w1 - w2)) <= 1e-12 * max(1.0, abs(float(w1)))


def default_truncation(spec: NonlinearSpec, law: DispersionLaw, pair: CriticalPair) -> ManifoldTruncation | None:
    """The interaction sets when they are provably sufficient, else ``None``
    (meaning: use a converged lattice)."""
    if equal_wavenumbers(law, pair) and spec.is_admissible(law.parity):
        return cij_truncation(law, pair)
    return None


def phi_coefficients(spec: NonlinearSpec, law: DispersionLaw, pair: CriticalPair,
                     truncation: ManifoldTruncation | None = None) -> dict[Mode, tuple[float, float, float]]:
    """Quadratic center-manifold amplitudes.

    Returns ``{mode: (c11, c12, c22)}`` with
    ``Phi_mode = c11 u1^2 + c12 u1 u2 + c22 u2^2``.  The trilinear part of the
    nonlinearity never enters.
    """
    if truncation is None:
        truncation = default_truncation(spec, law, pair) or lattice_truncation(law, pair)
    dom = law.domain
    f = critical_modes(law, pair)
    out = {}
    for mode, beta in zip(truncation.modes, truncation.betas):
        g = {(m, n): g2_proj(spec, f[m], f[n], mode, dom) for m in (0, 1) for n in (0, 1)}
        out[mode] = (-g[0, 0] / beta, -(g[0, 1] + g[1, 0]) / beta, -g[1, 1] / beta)
    return out


@dataclass(frozen=True)
class ReducedPolynomials:
    """Every monomial coefficient of the reduced vector field.

    ``quad[k]`` is indexed by :data:`QUAD_MONOMIALS` and ``cubic[k]`` by
    :data:`CUBIC_MONOMIALS`; ``k = 0, 1`` for the ``u1`` and ``u2`` equations.
    """

    quad: np.ndarray
    cubic: np.ndarray
    lambda_c: float

    def system(self) -> ReducedSystem:
        return ReducedSystem(
            a1=float(self.quad[0, 1]),
            a2=float(self.cubic[0, 0]),
            a3=float(self.cubic[0, 2]),
            b1=float(self.quad[1, 0]),
            b2=float(self.cubic[1, 1]),
            b3=float(self.cubic[1, 3]),
            lambda_c=float(self.lambda_c),
        )

    def vanishing_terms(self) -> dict[str, float]:
        """Monomials absent from the reduced equations, with their assembled values."""
        return {
            "P2,1:u1^2": float(self.quad[0, 0]),
            "P2,1:u2^2": float(self.quad[0, 2]),
            "P2,2:u1u2": float(self.quad[1, 1]),
            "P2,2:u2^2": float(self.quad[1, 2]),
            "P3,1:u1^2u2": float(self.cubic[0, 1]),
            "P3,1:u2^3": float(self.cubic[0, 3]),
            "P3,2:u1u2^2": float(self.cubic[1, 2]),
            "P3,2:u1^3": float(self.cubic[1, 0]),
        }


def _quad_slot(i, j):
    return (i + j)  # 0 -> u1^2, 1 -> u1u2, 2 -> u2^2 (with 0-based mode labels)


def _cubic_slot(i, m, n):
    return i + m + n


def _critical_parts(spec, dom, f):
    quad = np.zeros((2, 3))
    cubic = np.zeros((2, 4))
    for k in (0, 1):
        for i, j in product((0, 1), repeat=2):
            quad[k, _quad_slot(i, j)] += g2_proj(spec, f[i], f[j], f[k], dom)
        for i, m, n in product((0, 1), repeat=3):
            cubic[k, _cubic_slot(i, m, n)] += g3_proj(spec, f[i], f[m], f[n], f[k], dom)
    return quad, cubic


def _add_stable_modes(spec, dom, f, modes, betas, cubic):
    """Add the center-manifold contributions of ``modes`` to ``cubic`` in place."""
    for mode, beta in zip(modes, betas):
        g_mn = {(m, n): g2_proj(spec, f[m], f[n], mode, dom) for m in (0, 1) for n in (0, 1)}
        if not any(g_mn.values()):
            continue
        g_s = {(i, k): g2_sym(spec, f[i], mode, f[k], dom) for i in (0, 1) for k in (0, 1)}
        for k in (0, 1):
            for i, m, n in product((0, 1), repeat=3):
                cubic[k, _cubic_slot(i, m, n)] += (-1.0 / beta) * g_mn[m, n] * g_s[i, k]


def reduced_polynomials(spec: NonlinearSpec, law: DispersionLaw, pair: CriticalPair,
                        truncation: ManifoldTruncation | None = None) -> ReducedPolynomials:
    """Brute-force assembly of the quadratic and cubic reduced polynomials."""
    if truncation is None:
        truncation = default_truncation(spec, law, pair) or lattice_truncation(law, pair)
    dom = law.domain
    f = critical_modes(law, pair)
    quad, cubic = _critical_parts(spec, dom, f)
    # sum over stable modes in fixed (sorted) order
    _add_stable_modes(spec, dom, f, truncation.modes, truncation.betas, cubic)
    return ReducedPolynomials(quad, cubic, float(pair.lambda_c))


def reduce(spec: NonlinearSpec, law: DispersionLaw, pair: CriticalPair,
           truncation: ManifoldTruncation | None = None, radius: int = DEFAULT_RADIUS,
           max_radius: int = MAX_RADIUS, tol: float = CONVERGENCE_TOL) -> ReducedSystem:
    """Six reduced coefficients.

    Without an explicit ``truncation``, the interaction sets are used when the
    critical wave numbers coincide and the nonlinearity is admissible.
    Otherwise a lattice of the given ``radius`` is grown in shells of 4 until
    a shell moves no coefficient by more than ``tol`` (``TruncationError``
    past ``max_radius``).  Shells are summed in a fixed order.
    """
    if truncation is not None:
        return reduced_polynomials(spec, law, pair, truncation).system()
    trunc = default_truncation(spec, law, pair)
    if trunc is not None:
        return reduced_polynomials(spec, law, pair, trunc).system()
    polys = reduced_polynomials(spec, law, pair, lattice_truncation(law, pair, radius))
    dom = law.domain
    f = critical_modes(law, pair)
    quad, cubic = polys.quad, polys.cubic.copy()
    inner = set(lattice_truncation(law, pair, radius).modes)
    while radius < max_radius:
        radius += CONVERGENCE_STEP
        outer = lattice_truncation(law, pair, radius)
        shell = [(m, b) for m, b in zip(outer.modes, outer.betas) if m not in inner]
        before = cubic.copy()
        _add_stable_modes(spec, dom, f, [m for m, _ in shell], [b for _, b in shell], cubic)
        inner.update(m for m, _ in shell)
        scale = max(1.0, float(np.max(np.abs(cubic))), float(np.max(np.abs(quad))))
        if np.max(np.abs(cubic - before)) <= tol * scale:
            return ReducedPolynomials(quad, cubic, float(pair.lambda_c)).system()
    raise TruncationError(f"reduced coefficients not converged to {tol:g} by radius {max_radius}")


def formula_coefficients(spec: NonlinearSpec, law: DispersionLaw, pair: CriticalPair,
                         truncation: ManifoldTruncation) -> ReducedSystem:
    """The six coefficients from their closed interaction-sum expressions
    (independent of the monomial bookkeeping in :func:`reduced_polynomials`)."""
    dom = law.domain
    f1, f2 = critical_modes(law, pair)
    G2 = lambda i, j, k: g2_proj(spec, i, j, k, dom)  # noqa: E731
    G2s = lambda i, j, k: g2_sym(spec, i, j, k, dom)  # noqa: E731
    a1 = G2s(f1, f2, f1)
    b1 = G2(f1, f1, f2)
    a2 = g3_proj(spec, f1, f1, f1, f1, dom)
    a3 = g3_sym(spec, f1, f2, f2, f1, dom)
    b2 = g3_sym(spec, f1, f1, f2, f2, dom)
    b3 = g3_proj(spec, f2, f2, f2, f2, dom)
    for j, beta in zip(truncation.modes, truncation.betas):
        w = -1.0 / beta
        a2 += w * G2(f1, f1, j) * G2s(f1, j, f1)
        a3 += w * (G2(f1, f2, j) * G2s(f2, j, f1) + G2(f2, f1, j) * G2s(f2, j, f1) + G2(f2, f2, j) * G2s(f1, j, f1))
        b2 += w * (G2(f1, f1, j) * G2s(f2, j, f2) + G2(f1, f2, j) * G2s(f1, j, f2) + G2(f2, f1, j) * G2s(f1, j, f2))
        b3 += w * G2(f2, f2, j) * G2s(f2, j, f2)
    return ReducedSystem(a1, a2, a3, b1, b2, b3, float(pair.lambda_c))


def reduced_vector_field(sys: ReducedSystem, lam, u1, u2):
    """Cubic-truncated right-hand side; works elementwise on arrays."""
    beta = sys.beta(lam)
    du1 = beta * u1 + sys.a1 * u1 * u2 + u1 * (sys.a2 * u1 * u1 + sys.a3 * u2 * u2)
    du2 = beta * u2 + sys.b1 * u1 * u1 + u2 * (sys.b2 * u1 * u1 + sys.b3 * u2 * u2)
    return du1, du2


def jacobian(sys: ReducedSystem, lam, u1: float, u2: float) -> np.ndarray:
    beta = sys.beta(lam)
    return np.array([
        [3 * sys.a2 * u1**2 + sys.a3 * u2**2 + sys.a1 * u2 + beta, u1 * (2 * sys.a3 * u2 + sys.a1)],
        [2 * u1 * (sys.b2 * u2 + sys.b1), sys.b2 * u1**2 + 3 * sys.b3 * u2**2 + beta],
    ])
