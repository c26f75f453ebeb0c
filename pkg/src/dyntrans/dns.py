"""Pseudo-spectral simulation on the trigonometric basis.

The field is stored as coefficients ``c[j1, j2]`` of ``phi_{j1}(x/L1) psi_{j2}(y/L2)``
with ``j = 0..N-1`` per axis; on a sine axis the ``j = 0`` slot is always 0.
Products are formed on the midpoint grid ``a_i = (i + 1/2) pi / N`` where
DCT-II/III and DST-II/III are exact synthesis/analysis pairs, so the
boundary conditions hold by parity.  Nonlinear terms are dealiased with the
2/3 rule.

Time stepping is first-order exponential (``etd1``, the linear part exact)
or semi-implicit Euler (``imex``).  For both, explicit treatment of the
nonlinearity is stable while ``dt * |dN/du| < DT_STABILITY``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import fft as sfft

from .errors import BlowupError, ConfigError
from .linear_problem import CriticalPair, DispersionLaw
from .nonlinear_op import NonlinearSpec
from .trig_basis import COS, SIN

ETD1 = "etd1"
IMEX = "imex"
SCHEMES = (ETD1, IMEX)

DT_STABILITY = 0.5
DEFAULT_N = 64
DEFAULT_DT = 1e-3
DEFAULT_CEILING = 1e3

CONVERGED = "converged"
ESCAPED = "escaped"
TIMEOUT = "timeout"


def _synth_axis(c, parity, axis):
    n = c.shape[axis]
    if parity == COS:
        x = np.moveaxis(c, axis, 0).copy()
        x[1:] *= 0.5
        return np.moveaxis(sfft.dct(x, type=3, axis=0, workers=1), 0, axis)
    x = np.moveaxis(c, axis, 0)
    x = np.concatenate([0.5 * x[1:], np.zeros((1,) + x.shape[1:])], axis=0)
    assert x.shape[0] == n
    return np.moveaxis(sfft.dst(x, type=3, axis=0, workers=1), 0, axis)


def _analyze_axis(g, parity, axis):
    n = g.shape[axis]
    if parity == COS:
        y = np.moveaxis(sfft.dct(g, type=2, axis=axis, workers=1), axis, 0) / n
        y[0] *= 0.5
        return np.moveaxis(y, 0, axis)
    y = np.moveaxis(sfft.dst(g, type=2, axis=axis, workers=1), axis, 0) / n
    y = np.concatenate([np.zeros((1,) + y.shape[1:]), y[:-1]], axis=0)
    return np.moveaxis(y, 0, axis)


def synthesize(c: np.ndarray, parity) -> np.ndarray:
    """Grid values ``u(a_i, b_k)`` from coefficients."""
    return _synth_axis(_synth_axis(c, parity[0], 0), parity[1], 1)


def analyze(g: np.ndarray, parity) -> np.ndarray:
    """Discrete projection of grid values onto the basis of the given parity."""
    return _analyze_axis(_analyze_axis(g, parity[0], 0), parity[1], 1)


def _flip(p):
    return SIN if p == COS else COS


# sign of d^n/da^n acting on cos(ja) / sin(ja), in units of j^n
_DERIV_SIGN = {COS: (1, -1, -1, 1), SIN: (1, 1, -1, -1)}


@dataclass
class SpectralLayout:
    """Grid size, parity, wave numbers and the dealiasing mask."""

    law: DispersionLaw
    N: int = DEFAULT_N

    def __post_init__(self):
        if self.N < 8:
            raise ConfigError(f"N={self.N} is too small; need at least 8 modes per axis")
        dom = self.law.domain
        j = np.arange(self.N, dtype=float)
        self.parity = tuple(self.law.parity)
        self.kx = j / float(dom.L1)
        self.ky = j / float(dom.L2)
        self.K2 = self.kx[:, None] ** 2 + self.ky[None, :] ** 2
        keep = j < (2.0 * self.N / 3.0)
        self.mask = keep[:, None] & keep[None, :]
        if self.parity[0] == SIN:
            self.mask[0, :] = False
        if self.parity[1] == SIN:
            self.mask[:, 0] = False
        if self.law.zero_mean:
            self.mask[0, 0] = False

    def symbol(self, lam) -> np.ndarray:
        """Diagonal linear multiplier ``lambda - (k - |J|^2)^2``."""
        return lam - (float(self.law.k) - self.K2) ** 2

    def grid(self):
        a = (np.arange(self.N) + 0.5) * np.pi / self.N
        dom = self.law.domain
        return float(dom.L1) * a, float(dom.L2) * a

    def derivative(self, c: np.ndarray, d):
        """Coefficients of ``d^d c`` and their parity."""
        out = c
        par = list(self.parity)
        for axis, order in enumerate(d):
            if order == 0:
                continue
            k = self.kx if axis == 0 else self.ky
            fac = _DERIV_SIGN[par[axis]][order % 4] * k ** order
            out = out * (fac[:, None] if axis == 0 else fac[None, :])
            if order % 2:
                par[axis] = _flip(par[axis])
        return out, tuple(par)


@dataclass
class SpectralField:
    coeffs: np.ndarray
    layout: SpectralLayout = field(repr=False)

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs, dtype=float) * self.layout.mask

    @classmethod
    def zeros(cls, layout):
        return cls(np.zeros((layout.N, layout.N)), layout)

    @classmethod
    def from_amplitudes(cls, layout, amps: dict):
        c = np.zeros((layout.N, layout.N))
        for (j1, j2), v in amps.items():
            c[j1, j2] += v
        return cls(c, layout)

    def norm(self) -> float:
        return float(np.sqrt(np.sum(self.coeffs ** 2)))

    def values(self) -> np.ndarray:
        return synthesize(self.coeffs, self.layout.parity)


def nonlinear_term(c: np.ndarray, layout: SpectralLayout, spec: NonlinearSpec) -> np.ndarray:
    """Dealiased basis coefficients of ``G(u)`` for ``u`` with coefficients ``c``."""
    cache = {}

    def grid(d):
        d = tuple(d)
        if d not in cache:
            dc, par = layout.derivative(c, d)
            cache[d] = synthesize(dc, par)
        return cache[d]

    g = np.zeros((layout.N, layout.N))
    for t in spec.bilinear:
        g += t.coeff * grid(t.du) * grid(t.dv)
    for t in spec.trilinear:
        g += t.coeff * grid(t.d[0]) * grid(t.d[1]) * grid(t.d[2])
    return analyze(g, layout.parity) * layout.mask


class Stepper:
    """Fixed-step integrator for ``c' = L c + N(c)``."""

    def __init__(self, layout: SpectralLayout, spec: NonlinearSpec, lam: float, dt: float = DEFAULT_DT,
                 scheme: str = ETD1, ceiling: float = DEFAULT_CEILING, linear_only: bool = False):
        if scheme not in SCHEMES:
            raise ConfigError(f"unknown scheme {scheme!r}; expected one of {SCHEMES}")
        if not dt > 0:
            raise ConfigError("dt must be positive")
        self.layout, self.spec, self.lam, self.dt = layout, spec, float(lam), float(dt)
        self.scheme, self.ceiling, self.linear_only = scheme, ceiling, linear_only
        L = layout.symbol(lam)
        if scheme == ETD1:
            self.E = np.exp(dt * L)
            z = dt * L
            with np.errstate(divide="ignore", invalid="ignore"):
                phi = np.where(np.abs(z) > 1e-8, np.expm1(z) / np.where(z == 0, 1.0, z), 1.0 + 0.5 * z)
            self.F = dt * phi
        else:
            self.E = 1.0 / (1.0 - dt * L)
            self.F = dt * self.E
        self.E = self.E * layout.mask
        self.F = self.F * layout.mask

    def step(self, c: np.ndarray, t: float = 0.0) -> np.ndarray:
        if self.linear_only:
            out = self.E * c
        else:
            out = self.E * c + self.F * nonlinear_term(c, self.layout, self.spec)
        nrm = float(np.sqrt(np.sum(out ** 2)))
        if not math.isfinite(nrm) or nrm > self.ceiling:
            raise BlowupError(t + self.dt, nrm)
        return out


def step(fieldv: SpectralField, spec: NonlinearSpec, lam: float, dt: float, scheme: str = ETD1) -> SpectralField:
    """One step of the chosen scheme (convenience wrapper around ``Stepper``)."""
    st = Stepper(fieldv.layout, spec, lam, dt, scheme)
    return SpectralField(st.step(fieldv.coeffs), fieldv.layout)


def project_amplitudes(fieldv: SpectralField, pair: CriticalPair) -> tuple[float, float]:
    """``(u1, u2)``: coefficients of the critical modes (orthogonal basis)."""
    (i1, i2), (k1, k2) = pair.indices
    return float(fieldv.coeffs[i1, i2]), float(fieldv.coeffs[k1, k2])


@dataclass
class Schedule:
    dt: float = DEFAULT_DT
    t_end: float = 2000.0
    record_every: float = 1.0
    plateau_window: float = 50.0
    plateau_tol: float = 1e-7
    t_min: float = 0.0
    escape_norm: float | None = None
    ceiling: float = DEFAULT_CEILING
    scheme: str = ETD1

    def to_dict(self):
        return dict(self.__dict__)


@dataclass
class DnsRun:
    lam: float
    N: int
    schedule: Schedule
    ic: dict
    times: np.ndarray
    u1: np.ndarray
    u2: np.ndarray
    norm: np.ndarray
    termination: str
    final: SpectralField = field(repr=False)
    message: str = ""

    def series(self) -> np.ndarray:
        return np.column_stack([self.times, self.u1, self.u2, self.norm])

    def to_csv(self, path):
        np.savetxt(path, self.series(), delimiter=",", header="t,u1,u2,norm", comments="", fmt="%.17g")

    def summary(self) -> dict:
        return {"lambda": self.lam, "N": self.N, "termination": self.termination, "message": self.message,
                "t_final": float(self.times[-1]), "u1": float(self.u1[-1]), "u2": float(self.u2[-1]),
                "norm": float(self.norm[-1]), "schedule": self.schedule.to_dict(), "ic": self.ic}


def initial_field(layout: SpectralLayout, ic: dict) -> SpectralField:
    """Build an initial field.

    ``ic`` keys: ``amplitudes`` (list of ``[j1, j2, value]``), ``noise`` (rms
    of random coefficients on the resolved modes), ``seed``.
    """
    c = np.zeros((layout.N, layout.N))
    for j1, j2, v in ic.get("amplitudes", []):
        c[int(j1), int(j2)] += float(v)
    noise = float(ic.get("noise", 0.0))
    if noise:
        rng = np.random.default_rng(int(ic.get("seed", 0)))
        r = rng.standard_normal(c.shape)
        # concentrate the perturbation on low modes
        r *= np.exp(-layout.K2 / 4.0)
        r *= layout.mask
        c += noise * r / np.sqrt(np.sum(r ** 2))
    return SpectralField(c, layout)


def run(law: DispersionLaw, spec: NonlinearSpec, pair: CriticalPair, lam: float, ic: dict,
        schedule: Schedule | None = None, N: int = DEFAULT_N) -> DnsRun:
    """Integrate until plateau, escape or ``t_end``, recording ``(u1, u2, |c|)``."""
    sch = schedule or Schedule()
    layout = SpectralLayout(law, N)
    f0 = initial_field(layout, ic)
    stepper = Stepper(layout, spec, lam, sch.dt, sch.scheme, sch.ceiling)
    c = f0.coeffs
    n0 = f0.norm()
    escape = sch.escape_norm if sch.escape_norm is not None else max(10.0 * n0, 1.0)
    rec = max(1, int(round(sch.record_every / sch.dt)))
    win = max(1, int(round(sch.plateau_window / (rec * sch.dt))))
    nsteps = int(math.ceil(sch.t_end / sch.dt))
    pi, pk = pair.indices
    rows = [(0.0, c[pi], c[pk], n0)]
    snaps = [c]
    term, msg = TIMEOUT, ""
    t = 0.0
    for n in range(1, nsteps + 1):
        try:
            c = stepper.step(c, t)
        except BlowupError as e:
            term, msg = ESCAPED, str(e)
            t = n * sch.dt
            rows.append((t, math.nan, math.nan, e.norm))
            break
        t = n * sch.dt
        if n % rec == 0 or n == nsteps:
            nrm = float(np.sqrt(np.sum(c ** 2)))
            rows.append((t, c[pi], c[pk], nrm))
            snaps.append(c)
            if nrm > escape:
                term, msg = ESCAPED, f"norm {nrm:.3g} exceeded {escape:.3g}"
                break
            if len(snaps) > win and t >= sch.t_min:
                old = snaps[-1 - win]
                rate = float(np.sqrt(np.sum((c - old) ** 2))) / (win * rec * sch.dt)
                if rate < sch.plateau_tol:
                    term, msg = CONVERGED, f"plateau rate {rate:.3g}"
                    break
                snaps = snaps[-win - 1:]
    arr = np.array(rows, dtype=float)
    return DnsRun(float(lam), N, sch, dict(ic), arr[:, 0], arr[:, 1], arr[:, 2], arr[:, 3], term,
                  SpectralField(c, layout), msg)


def write_grid(path, values: np.ndarray, layout: SpectralLayout, variant: str):
    """Plain-text grid: one header line, then row-major values (rows index x)."""
    dom = layout.law.domain
    with open(path, "w") as fh:
        fh.write(f"# N={values.shape[0]} L1={float(dom.L1):.17g} L2={float(dom.L2):.17g} variant={variant}\n")
        for row in values:
            fh.write(" ".join(f"{v:.10e}" for v in row) + "\n")


def read_grid(path) -> tuple[dict, np.ndarray]:
    with open(path) as fh:
        header = fh.readline().lstrip("#").split()
    meta = dict(item.split("=", 1) for item in header)
    return meta, np.loadtxt(path, comments="#", ndmin=2)
