"""Bundled Swift-Hohenberg problems.

``neumann-cosine``
    ``u_t = lambda u - (Delta + k)^2 u + alpha2 u^2 - alpha3 u^3`` on
    ``(0, sqrt(3) pi) x (0, pi)`` with Neumann conditions and zero mean;
    basis ``cos(j1 x/sqrt3) cos(j2 y)``.
``mixed-sin-cos``
    same linear part with ``G(u, v) = (c1 u + c2 u_x + c3 u_y) v + u (c4 v_x + c5 v_y)``
    and ``-alpha3 u^3``; basis ``sin(j1 x/sqrt3) cos(j2 y)``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from .errors import ConfigError, WindowError
from .linear_problem import CriticalPair, DispersionLaw, critical_pair
from .nonlinear_op import BilinearTerm, NonlinearSpec, TrilinearTerm
from .trig_basis import COS, SHE_DOMAIN, SIN, Domain

NEUMANN = "neumann-cosine"
MIXED = "mixed-sin-cos"
VARIANTS = (NEUMANN, MIXED)

WINDOWS = {NEUMANN: (Fraction(7, 6), Fraction(11, 6)), MIXED: (Fraction(5, 6), Fraction(11, 6))}
PARITY = {NEUMANN: (COS, COS), MIXED: (SIN, COS)}

SQRT3 = math.sqrt(3.0)


@dataclass(frozen=True)
class SheConfig:
    k: float = 1.5
    alpha2: float = 1.0
    alpha3: float = 1.0
    variant: str = NEUMANN
    c: tuple[float, float, float, float, float] = (0.0, 0.0, 0.0, 0.0, 0.0)

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ConfigError(f"unknown variant {self.variant!r}; expected one of {VARIANTS}")
        c = tuple(float(v) for v in self.c)
        if len(c) != 5:
            raise ConfigError("c must hold five coefficients c1..c5")
        object.__setattr__(self, "c", c)

    @property
    def s(self) -> float:
        """``c2 + c4``, the only gradient coupling that reaches ``a1, b1``."""
        return self.c[1] + self.c[3]

    def check_window(self):
        lo, hi = WINDOWS[self.variant]
        if not (lo < self.k < hi):
            raise WindowError(f"k={self.k} outside the two-mode window ({lo}, {hi}) for {self.variant}")

    def to_dict(self):
        d = asdict(self)
        d["c"] = list(self.c)
        return d


@dataclass(frozen=True)
class Problem:
    """Everything the reduction needs: geometry, spectrum, nonlinearity, critical pair."""

    law: DispersionLaw
    spec: NonlinearSpec
    pair: CriticalPair
    cfg: SheConfig | None = field(default=None, compare=False)

    @property
    def domain(self) -> Domain:
        return self.law.domain


def nonlinear_spec(cfg: SheConfig) -> NonlinearSpec:
    cubic = (TrilinearTerm(-cfg.alpha3),) if cfg.alpha3 else ()
    if cfg.variant == NEUMANN:
        quad = (BilinearTerm(cfg.alpha2),) if cfg.alpha2 else ()
        return NonlinearSpec(quad, cubic)
    c1, c2, c3, c4, c5 = cfg.c
    terms = [
        BilinearTerm(c1),
        BilinearTerm(c2, du=(1, 0)),
        BilinearTerm(c3, du=(0, 1)),
        BilinearTerm(c4, dv=(1, 0)),
        BilinearTerm(c5, dv=(0, 1)),
    ]
    return NonlinearSpec(tuple(t for t in terms if t.coeff), cubic)


def dispersion_law(cfg: SheConfig, domain: Domain = SHE_DOMAIN) -> DispersionLaw:
    return DispersionLaw(k=cfg.k, domain=domain, parity=PARITY[cfg.variant], zero_mean=cfg.variant == NEUMANN)


def build_problem(cfg: SheConfig, domain: Domain = SHE_DOMAIN, check_window: bool = True) -> Problem:
    if check_window:
        cfg.check_window()
    law = dispersion_law(cfg, domain)
    return Problem(law, nonlinear_spec(cfg), critical_pair(law), cfg)


def closed_form_coefficients(cfg: SheConfig) -> tuple[float, float, float]:
    """Closed forms of ``(a1, b1, b3)`` for the two bundled variants.

    For the mixed variant ``a1`` is linear in ``s = c2 + c4``: the coefficient
    is a single bilinear projection, so it cannot be quadratic in the
    nonlinearity (and ``a1 * b1 = -s^2/24 < 0`` for every ``s != 0``).
    """
    cfg.check_window()
    k = cfg.k
    if cfg.variant == NEUMANN:
        a2 = cfg.alpha2
        return a2, a2 / 4.0, 3.0 * (a2 * a2 + 4.0 * (3.0 * k - 10.0) * cfg.alpha3) / (160.0 - 48.0 * k)
    s = cfg.s
    return -s / (2.0 * SQRT3), s / (4.0 * SQRT3), (s * s + 6.0 * (10.0 - 3.0 * k) * cfg.alpha3) / (24.0 * k - 80.0)


def sign_predictions(cfg: SheConfig) -> str:
    """Transition type predicted from the sign structure of the closed forms.

    Returns one of ``random``, ``catastrophic``, ``continuous`` or
    ``quadratic-degeneracy``.
    """
    a1, b1, b3 = closed_form_coefficients(cfg)
    if cfg.variant == NEUMANN:
        if cfg.alpha2 == 0:
            return "quadratic-degeneracy"
        # a1 b1 = alpha2^2 / 4 > 0
        if cfg.alpha3 <= 0:
            return "catastrophic"
        return "random" if b3 < 0 else "catastrophic"
    if cfg.s == 0:
        return "quadratic-degeneracy"
    # a1 b1 = -s^2 / 24 < 0
    if cfg.alpha3 >= 0:
        return "continuous"
    return "continuous" if b3 < 0 else "catastrophic"
