"""Phase-plane analysis of the cubic amplitude equations.

Fixed-step RK4 integration (compiled kernel when available), Newton polishing
of equilibria from the analytic seeds, straight-line orbit checks and
ray-bisection probing of the attracted sector in the random case.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import kernels
from .center_manifold import ReducedSystem, jacobian, reduced_vector_field
from .classifier import sector_angle, steady_states
from .errors import NotApplicable, StepSizeError

CONVERGED = "converged-to-state"
ESCAPED = "left-neighborhood"
MAX_TIME = "max-time"

FIELD_TOL = 1e-9
DT_SCALE = 1e-3
HALVING_TOL = 1e-6
AUDIT_STEPS = 200


@dataclass(frozen=True)
class PortraitSpec:
    """Integration controls; unset values are derived from ``beta``.

    ``radius`` is the neighborhood radius (escape at ``2 * radius``),
    ``dt`` defaults to ``1e-3/|beta|`` and ``t_max`` to ``200/|beta|``.
    """

    radius: float | None = None
    n_seeds: int = 16
    dt: float | None = None
    t_max: float | None = None
    field_tol: float = FIELD_TOL
    state_tol: float | None = None
    record_every: int = 10
    audit: bool = True

    def resolved(self, sys: ReducedSystem, beta: float) -> "PortraitSpec":
        b = max(abs(beta), 1e-3)
        radius = self.radius if self.radius is not None else default_radius(sys, beta)
        dt = self.dt if self.dt is not None else DT_SCALE / b
        t_max = self.t_max if self.t_max is not None else 200.0 / b
        state_tol = self.state_tol if self.state_tol is not None else 1e-3 * radius
        return replace(self, radius=radius, dt=dt, t_max=t_max, state_tol=state_tol)

    def to_dict(self):
        return dict(self.__dict__)


@dataclass
class Trajectory:
    samples: np.ndarray
    lam: float
    termination: str
    state: str | None = None
    distance: float | None = None
    steps: int = 0

    @property
    def final(self) -> tuple[float, float]:
        return float(self.samples[-1, 1]), float(self.samples[-1, 2])

    def to_csv(self, path):
        np.savetxt(path, self.samples, delimiter=",", header="t,u1,u2", comments="", fmt="%.17g")


@dataclass
class Equilibrium:
    seed_kind: str
    seed: tuple[float, float]
    u: tuple[float, float]
    converged: bool
    iterations: int
    eigvals: tuple[float, float] = (math.nan, math.nan)
    eigvecs: np.ndarray = field(default_factory=lambda: np.full((2, 2), math.nan))
    error: str | None = None

    @property
    def seed_distance(self) -> float:
        return math.hypot(self.u[0] - self.seed[0], self.u[1] - self.seed[1])

    def to_dict(self):
        return {"seed_kind": self.seed_kind, "seed": list(self.seed), "u": list(self.u),
                "converged": self.converged, "iterations": self.iterations,
                "eigvals": list(self.eigvals), "eigvecs": np.asarray(self.eigvecs).tolist(),
                "seed_distance": self.seed_distance, "error": self.error}


def default_radius(sys: ReducedSystem, beta: float) -> float:
    """Twice the largest analytic steady-state amplitude, or ``|beta|`` if none exist."""
    amps = [math.hypot(*s.amplitudes) for s in steady_states(sys, beta)]
    r = max(amps, default=0.0)
    return 2.0 * r if r > 0 else max(abs(beta), 1e-3)


def _coef(sys: ReducedSystem, beta: float):
    return (beta, sys.a1, sys.a2, sys.a3, sys.b1, sys.b2, sys.b3)


def newton(sys: ReducedSystem, lam, seed, tol=1e-14, max_iter=50):
    with np.errstate(over="ignore", invalid="ignore"):
        return _newton(sys, lam, np.array(seed, dtype=float), tol, max_iter)


def _newton(sys, lam, u, tol, max_iter):
    for it in range(1, max_iter + 1):
        f = np.array(reduced_vector_field(sys, lam, u[0], u[1]))
        J = jacobian(sys, lam, u[0], u[1])
        try:
            du = np.linalg.solve(J, -f)
        except np.linalg.LinAlgError:
            return u, it, False
        u = u + du
        if np.linalg.norm(du) <= tol * max(1.0, np.linalg.norm(u)) or not np.isfinite(u).all():
            break
    ok = bool(np.isfinite(u).all()) and np.linalg.norm(reduced_vector_field(sys, lam, u[0], u[1])) < 1e-13
    return u, it, ok


def analytic_seeds(sys: ReducedSystem, lam) -> list[tuple[str, tuple[float, float]]]:
    seeds = [("O", (0.0, 0.0))]
    seeds += [(s.kind, s.amplitudes) for s in steady_states(sys, sys.beta(lam))]
    return seeds


def find_equilibria(sys: ReducedSystem, lam, seeds=None) -> list[Equilibrium]:
    """Newton-polish each seed; non-converged seeds are reported, not raised."""
    seeds = analytic_seeds(sys, lam) if seeds is None else seeds
    out = []
    for kind, seed in seeds:
        u, it, ok = newton(sys, lam, seed)
        eq = Equilibrium(kind, tuple(float(v) for v in seed), (float(u[0]), float(u[1])), ok, it)
        if ok:
            w, v = np.linalg.eig(jacobian(sys, lam, *eq.u))
            order = np.argsort(w.real)
            eq.eigvals = tuple(float(x) for x in w.real[order])
            eq.eigvecs = v.real[:, order]
        else:
            eq.error = "NoConvergence"
        out.append(eq)
    return out


def _match_state(u, states, tol):
    best, dist = None, math.inf
    for kind, p in states:
        d = math.hypot(u[0] - p[0], u[1] - p[1])
        if d < dist:
            best, dist = kind, d
    if dist <= tol:
        return best, dist
    return None, dist


def known_states(sys: ReducedSystem, lam):
    return [(e.seed_kind, e.u) for e in find_equilibria(sys, lam) if e.converged]


def _max_steps(spec: PortraitSpec) -> int:
    return max(1, int(math.ceil(spec.t_max / spec.dt)))


def audit_step(sys: ReducedSystem, lam, u0, dt, steps=AUDIT_STEPS, tol=HALVING_TOL):
    """Compare ``steps`` RK4 steps against twice as many half steps."""
    c = _coef(sys, sys.beta(lam))
    big = np.inf
    a, _, n1 = kernels.rk4_trajectory(c, u0[0], u0[1], dt, steps, 0.0, big, steps)
    b, _, _ = kernels.rk4_trajectory(c, u0[0], u0[1], dt / 2, 2 * n1, 0.0, big, 2 * n1)
    ua, ub = a[-1, 1:], b[-1, 1:]
    scale = max(np.linalg.norm(u0), np.linalg.norm(ub), 1e-300)
    err = float(np.linalg.norm(ua - ub)) / scale
    if not np.isfinite(err) or err > tol:
        raise StepSizeError(f"dt={dt:.3g} fails the halving check (relative difference {err:.3g})")
    return err


def integrate(sys: ReducedSystem, lam, u0, spec: PortraitSpec | None = None, states=None) -> Trajectory:
    beta = sys.beta(lam)
    spec = (spec or PortraitSpec()).resolved(sys, beta)
    u0 = (float(u0[0]), float(u0[1]))
    if math.hypot(*u0) > spec.radius * (1 + 1e-12):
        raise ValueError(f"|u0|={math.hypot(*u0):.3g} exceeds the neighborhood radius {spec.radius:.3g}")
    if spec.audit:
        audit_step(sys, lam, u0, spec.dt)
    samples, status, n = kernels.rk4_trajectory(_coef(sys, beta), u0[0], u0[1], spec.dt, _max_steps(spec),
                                                spec.field_tol, 2.0 * spec.radius, spec.record_every)
    traj = Trajectory(samples, float(lam), MAX_TIME, steps=int(n))
    if status in (kernels.ESCAPED, kernels.NONFINITE):
        traj.termination = ESCAPED
    elif status == kernels.CONVERGED:
        states = known_states(sys, lam) if states is None else states
        kind, dist = _match_state(traj.final, states, spec.state_tol)
        traj.state, traj.distance = kind, dist
        if kind is not None:
            traj.termination = CONVERGED
    return traj


def integrate_batch(sys: ReducedSystem, lam, u0s, spec: PortraitSpec | None = None, states=None):
    """Terminal classification for many seeds; returns ``(final, terminations, kinds)``."""
    beta = sys.beta(lam)
    spec = (spec or PortraitSpec()).resolved(sys, beta)
    final, status, _ = kernels.rk4_batch(_coef(sys, beta), np.asarray(u0s, float), spec.dt, _max_steps(spec),
                                         spec.field_tol, 2.0 * spec.radius)
    states = known_states(sys, lam) if states is None else states
    terms, kinds = [], []
    for u, st in zip(final, status):
        kind = None
        if st in (kernels.ESCAPED, kernels.NONFINITE):
            term = ESCAPED
        elif st == kernels.CONVERGED:
            kind, _ = _match_state(u, states, spec.state_tol)
            term = CONVERGED if kind is not None else MAX_TIME
        else:
            term = MAX_TIME
        terms.append(term)
        kinds.append(kind)
    return final, terms, kinds


def circle_seeds(radius: float, n: int, offset: float = 0.0) -> np.ndarray:
    phi = offset + 2.0 * np.pi * np.arange(n) / n
    return np.column_stack([radius * np.sin(phi), radius * np.cos(phi)])


@dataclass
class SectorMeasurement:
    theta_measured: float
    theta_predicted: float
    boundaries: tuple[float, float]
    attractor: str
    n_rays: int
    circle_radius: float

    @property
    def error(self) -> float:
        return abs(self.theta_measured - self.theta_predicted)

    def to_dict(self):
        return dict(self.__dict__, boundaries=list(self.boundaries), error=self.error)


def sector_probe(sys: ReducedSystem, lam, n_rays: int = 64, circle_radius: float | None = None,
                 spec: PortraitSpec | None = None, tol: float = 1e-4) -> SectorMeasurement:
    """Measure the half-angle of the sector attracted to the stable roll state.

    Angles are measured from the attracting direction of the ``u2`` axis
    (``-u2`` when ``a1 > 0``).  Each boundary is bisected between adjacent
    rays with different outcomes.
    """
    beta = sys.beta(lam)
    theta = sector_angle(sys)
    if theta is None or sys.b3 >= 0 or beta <= 0:
        raise NotApplicable("sector probing needs a1*b1 > 0, b3 < 0 and beta > 0")
    spec = (spec or PortraitSpec()).resolved(sys, beta)
    if circle_radius is None:
        circle_radius = 0.25 * math.sqrt(-beta / sys.b3)
    attractor = "R1" if sys.a1 > 0 else "R2"
    down = -1.0 if sys.a1 > 0 else 1.0
    states = known_states(sys, lam)

    def points(phis):
        phis = np.asarray(phis, float)
        return np.column_stack([circle_radius * np.sin(phis), down * circle_radius * np.cos(phis)])

    def attracted(phis):
        _, terms, kinds = integrate_batch(sys, lam, points(phis), spec, states)
        return np.array([t == CONVERGED and k == attractor for t, k in zip(terms, kinds)])

    # phi is measured from the attracting axis direction, positive towards +u1
    phis = np.linspace(0.0, np.pi, n_rays + 1)
    hits = attracted(np.concatenate([phis, -phis[1:]]))
    right, left = hits[: n_rays + 1], np.concatenate([hits[:1], hits[n_rays + 1:]])
    bounds = []
    for side, h in ((1.0, right), (-1.0, left)):
        if not h[0]:
            raise NotApplicable("the attracting axis direction is not attracted; no sector to probe")
        idx = int(np.argmin(h)) if not h.all() else None
        if idx is None:
            bounds.append(math.pi)
            continue
        lo, hi = phis[idx - 1], phis[idx]
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            if attracted([side * mid])[0]:
                lo = mid
            else:
                hi = mid
        bounds.append(0.5 * (lo + hi))
    return SectorMeasurement(0.5 * (bounds[0] + bounds[1]), theta, (bounds[0], bounds[1]), attractor,
                             n_rays, circle_radius)


def line_drift(sys: ReducedSystem, lam, u2_0: float, sign: float = 1.0, spec: PortraitSpec | None = None,
               quadratic_only: bool = True) -> float:
    """Max deviation from the line ``u1 = sign*sqrt(a1/b1)*u2`` along a trajectory seeded on it."""
    if sys.a1 * sys.b1 <= 0:
        raise NotApplicable("straight-line orbits off the u2 axis need a1*b1 > 0")
    s = sys.quadratic_only() if quadratic_only else sys
    k = sign * math.sqrt(sys.a1 / sys.b1)
    spec = replace(spec or PortraitSpec(), audit=False, record_every=1)
    u0 = (k * u2_0, u2_0)
    spec = replace(spec, radius=spec.radius or 4.0 * math.hypot(*u0))
    tr = integrate(s, lam, u0, spec, states=[])
    u1, u2 = tr.samples[:, 1], tr.samples[:, 2]
    return float(np.max(np.abs(u1 - k * u2)))
