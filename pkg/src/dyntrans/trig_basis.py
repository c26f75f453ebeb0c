"""Exact algebra of trigonometric modes on a rectangle.

Modes live on ``(0, L1*pi) x (0, L2*pi)``.  All computations are carried out in
the scaled coordinates ``a = x/L1`` and ``b = y/L2`` so that every mode is a
product ``t1(j1*a) * t2(j2*b)`` with ``t in {cos, sin}`` and every integral is a
rational multiple of a monomial ``pi**e * L1**p * L2**q``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Iterable, Mapping

COS = "cos"
SIN = "sin"
PARITIES = (COS, SIN)


def _as_exact(value):
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    return value


@dataclass(frozen=True)
class Domain:
    """Rectangle ``(0, L1*pi) x (0, L2*pi)``.

    ``L1_sq`` and ``L2_sq`` hold the squared lengths; pass them as integers or
    fractions (see :meth:`from_squares`) to keep wave numbers exact, e.g. the
    standard hexagon-compatible box is ``Domain.from_squares(3, 1)``.
    """

    L1: float
    L2: float
    L1_sq: Fraction | float | None = field(default=None, compare=False)
    L2_sq: Fraction | float | None = field(default=None, compare=False)

    def __post_init__(self):
        if not (self.L1 > 0 and self.L2 > 0):
            raise ValueError(f"domain lengths must be positive, got {self.L1}, {self.L2}")
        if self.L1_sq is None:
            object.__setattr__(self, "L1_sq", self.L1 * self.L1)
        if self.L2_sq is None:
            object.__setattr__(self, "L2_sq", self.L2 * self.L2)

    @classmethod
    def from_squares(cls, L1_sq, L2_sq) -> "Domain":
        L1_sq, L2_sq = _as_exact(L1_sq), _as_exact(L2_sq)
        return cls(math.sqrt(L1_sq), math.sqrt(L2_sq), L1_sq, L2_sq)

    @property
    def area(self) -> float:
        return math.pi**2 * self.L1 * self.L2

    def wavenumber_sq(self, j1: int, j2: int):
        """``|J|^2 = j1^2/L1^2 + j2^2/L2^2`` (exact when the squares are exact)."""
        return j1 * j1 / _as_exact(self.L1_sq) + j2 * j2 / _as_exact(self.L2_sq)

    def length_power(self, axis: int, p: int) -> float:
        sq = float(self.L1_sq if axis == 0 else self.L2_sq)
        root = self.L1 if axis == 0 else self.L2
        half, odd = divmod(p, 2)
        return sq**half * (root if odd else 1.0)

    def to_dict(self) -> dict:
        return {"L1": self.L1, "L2": self.L2}


SHE_DOMAIN = Domain.from_squares(3, 1)


@dataclass(frozen=True, order=True)
class Mode:
    """Basis function ``t_x(j1 x/L1) * t_y(j2 y/L2)``."""

    j1: int
    j2: int
    px: str = COS
    py: str = COS

    def __post_init__(self):
        if self.j1 < 0 or self.j2 < 0:
            raise ValueError(f"wave indices must be non-negative: {self}")
        if self.px not in PARITIES or self.py not in PARITIES:
            raise ValueError(f"unknown parity in {self}")
        if (self.px == SIN and self.j1 == 0) or (self.py == SIN and self.j2 == 0):
            raise ValueError(f"sin parity needs a positive wave index: {self}")

    @property
    def index(self) -> tuple[int, int]:
        return (self.j1, self.j2)

    @property
    def parity(self) -> tuple[str, str]:
        return (self.px, self.py)

    def __str__(self):
        return f"{self.px}({self.j1}x){self.py}({self.j2}y)"


def is_valid_mode(j1: int, j2: int, parity: tuple[str, str]) -> bool:
    return not ((parity[0] == SIN and j1 == 0) or (parity[1] == SIN and j2 == 0))


# --------------------------------------------------------------------------
# exact scalars


class Exact:
    """Finite sum ``sum c * pi**e * L1**p * L2**q`` with rational ``c``."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[tuple[int, int, int], Fraction] | None = None):
        self.terms = {k: Fraction(v) for k, v in (terms or {}).items() if v != 0}

    @classmethod
    def monomial(cls, coeff, pi=0, l1=0, l2=0) -> "Exact":
        return cls({(pi, l1, l2): Fraction(coeff)})

    def __add__(self, other):
        if not isinstance(other, Exact):
            other = Exact.monomial(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return Exact(out)

    __radd__ = __add__

    def __neg__(self):
        return Exact({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, Exact):
            other = Fraction(other)
            return Exact({k: v * other for k, v in self.terms.items()})
        out: dict = {}
        for (e1, p1, q1), v1 in self.terms.items():
            for (e2, p2, q2), v2 in other.terms.items():
                key = (e1 + e2, p1 + p2, q1 + q2)
                out[key] = out.get(key, 0) + v1 * v2
        return Exact(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, Exact):
            other = Fraction(other)
            return Exact({k: v / other for k, v in self.terms.items()})
        if len(other.terms) != 1:
            raise ZeroDivisionError("can only divide by a single nonzero monomial")
        ((e, p, q), c), = other.terms.items()
        return Exact({(k[0] - e, k[1] - p, k[2] - q): v / c for k, v in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, Exact):
            other = Exact.monomial(other) if other != 0 else Exact()
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def value(self, dom: Domain) -> float:
        total = 0.0
        for (e, p, q), c in sorted(self.terms.items()):
            total += float(c) * math.pi**e * dom.length_power(0, p) * dom.length_power(1, q)
        return total

    def __repr__(self):
        if not self.terms:
            return "Exact(0)"
        parts = []
        for (e, p, q), c in sorted(self.terms.items()):
            s = str(c)
            if e:
                s += f"*pi^{e}"
            if p:
                s += f"*L1^{p}"
            if q:
                s += f"*L2^{q}"
            parts.append(s)
        return "Exact(" + " + ".join(parts) + ")"


# --------------------------------------------------------------------------
# one-dimensional trig series on (0, pi)
#
# A series is a dict {(parity, freq): Fraction} in canonical form: freq >= 0,
# no sin(0) entries, no zero coefficients.


def _canon_add(out: dict, parity: str, freq: int, coeff: Fraction) -> None:
    if freq < 0:
        freq = -freq
        if parity == SIN:
            coeff = -coeff
    if parity == SIN and freq == 0:
        return
    key = (parity, freq)
    val = out.get(key, 0) + coeff
    if val:
        out[key] = val
    else:
        out.pop(key, None)


def _series_product(s1: Mapping, s2: Mapping) -> dict:
    half = Fraction(1, 2)
    out: dict = {}
    for (p1, m), c1 in s1.items():
        for (p2, n), c2 in s2.items():
            c = c1 * c2 * half
            if p1 == COS and p2 == COS:
                _canon_add(out, COS, m - n, c)
                _canon_add(out, COS, m + n, c)
            elif p1 == SIN and p2 == SIN:
                _canon_add(out, COS, m - n, c)
                _canon_add(out, COS, m + n, -c)
            elif p1 == SIN:  # sin m * cos n
                _canon_add(out, SIN, m + n, c)
                _canon_add(out, SIN, m - n, c)
            else:  # cos m * sin n
                _canon_add(out, SIN, m + n, c)
                _canon_add(out, SIN, m - n, -c)
    return out


def _series_integral(series: Mapping) -> tuple[Fraction, Fraction]:
    """Return ``(rational, pi_coefficient)`` of the integral over ``(0, pi)``."""
    rational = Fraction(0)
    pi_part = Fraction(0)
    for (parity, freq), c in series.items():
        if parity == COS:
            if freq == 0:
                pi_part += c
        elif freq % 2:
            rational += c * Fraction(2, freq)
    return rational, pi_part


@lru_cache(maxsize=None)
def axis_integral(factors: tuple[tuple[str, int], ...]) -> tuple[Fraction, int]:
    """Exact ``int_0^pi prod t(n a) da`` for factors ``(parity, n)``.

    Returns ``(c, e)`` with the integral equal to ``c * pi**e``.  Products with
    an even number of sines are pure cosine series (``e`` in {0, 1} with the
    rational part zero); with an odd number they are pure sine series (``e=0``).
    """
    series: dict = {(COS, 0): Fraction(1)}
    for parity, n in sorted(factors):
        term: dict = {}
        _canon_add(term, parity, n, Fraction(1))
        if not term:
            return Fraction(0), 0
        series = _series_product(series, term)
        if not series:
            return Fraction(0), 0
    rational, pi_part = _series_integral(series)
    if pi_part:
        return pi_part, 1
    return rational, 0


def axis_may_be_nonzero(factors: Iterable[tuple[str, int]]) -> bool:
    """Parity-aware selection rule for :func:`axis_integral`.

    With an even number of sines the integral can be nonzero only if some
    signed sum of the frequencies vanishes; with an odd number it can be
    nonzero only if the frequency sum is odd.
    """
    factors = list(factors)
    freqs = [n for _, n in factors]
    n_sin = sum(1 for p, _ in factors if p == SIN)
    if n_sin % 2:
        return sum(freqs) % 2 == 1
    return _signed_sum_vanishes(freqs)


def _signed_sum_vanishes(freqs) -> bool:
    if not freqs:
        return True
    reach = {freqs[0]}
    for n in freqs[1:]:
        reach = {r + n for r in reach} | {r - n for r in reach}
    return 0 in reach


# --------------------------------------------------------------------------
# resonance predicates on index pairs


def resonance_allows(i, j, k) -> bool:
    """True iff ``+-i_r +- j_r = +-k_r`` is solvable on both axes.

    When False, the projection of a product of two cosine modes (or any
    combination with an even sine count per axis) on a third vanishes.
    """
    return all(_signed_sum_vanishes([i[r], j[r], k[r]]) for r in (0, 1))


def resonance_allows3(i, j, k, l) -> bool:
    """Four-index analogue of :func:`resonance_allows`."""
    return all(_signed_sum_vanishes([i[r], j[r], k[r], l[r]]) for r in (0, 1))


# --------------------------------------------------------------------------
# derivatives and integrals of products of modes

_COS_CYCLE = ((COS, 1), (SIN, -1), (COS, -1), (SIN, 1))
_SIN_CYCLE = ((SIN, 1), (COS, 1), (SIN, -1), (COS, -1))


def _axis_derivative(parity: str, n: int, order: int) -> tuple[str, int]:
    """``d^order/da^order t(n a) = sign * n**order * t'(n a)``; returns (t', sign)."""
    new_parity, sign = (_COS_CYCLE if parity == COS else _SIN_CYCLE)[order % 4]
    return new_parity, sign


def derived_factor(mode: Mode, d: tuple[int, int]) -> tuple[Exact, tuple[str, int], tuple[str, int]]:
    """Derivative ``d_x^d[0] d_y^d[1]`` of a mode as ``coefficient * t_x * t_y``.

    The coefficient is zero when differentiating a constant direction.
    """
    dx, dy = d
    if (dx and mode.j1 == 0) or (dy and mode.j2 == 0):
        return Exact(), (mode.px, mode.j1), (mode.py, mode.j2)
    px, sx = _axis_derivative(mode.px, mode.j1, dx)
    py, sy = _axis_derivative(mode.py, mode.j2, dy)
    coeff = Exact.monomial(sx * sy * mode.j1**dx * mode.j2**dy, 0, -dx, -dy)
    return coeff, (px, mode.j1), (py, mode.j2)


def product_may_be_nonzero(modes: Iterable[Mode], derivs: Iterable[tuple[int, int]]) -> bool:
    """Selection rule for ``int prod d^{d_i} m_i`` (cheap test, no integration)."""
    fx, fy = [], []
    for m, (dx, dy) in zip(modes, derivs):
        if (dx and m.j1 == 0) or (dy and m.j2 == 0):
            return False
        fx.append((m.px if dx % 2 == 0 else (SIN if m.px == COS else COS), m.j1))
        fy.append((m.py if dy % 2 == 0 else (SIN if m.py == COS else COS), m.j2))
    return axis_may_be_nonzero(fx) and axis_may_be_nonzero(fy)


@lru_cache(maxsize=None)
def _product_integral_cached(modes: tuple[Mode, ...], derivs: tuple[tuple[int, int], ...]) -> Exact:
    coeff = Exact.monomial(1, 0, 1, 1)  # dx dy = L1 L2 da db
    fx, fy = [], []
    for m, d in zip(modes, derivs):
        c, tx, ty = derived_factor(m, d)
        if not c:
            return Exact()
        coeff = coeff * c
        fx.append(tx)
        fy.append(ty)
    cx, ex = axis_integral(tuple(sorted(fx)))
    if not cx:
        return Exact()
    cy, ey = axis_integral(tuple(sorted(fy)))
    if not cy:
        return Exact()
    return coeff * Exact.monomial(cx * cy, ex + ey)


def product_integral(modes, derivs=None) -> Exact:
    """Exact ``int_Omega prod_i (d^{derivs_i} modes_i) dx dy``."""
    modes = tuple(modes)
    if derivs is None:
        derivs = ((0, 0),) * len(modes)
    derivs = tuple(tuple(d) for d in derivs)
    return _product_integral_cached(modes, derivs)


def product_value(modes, derivs, dom: Domain) -> float:
    """Float evaluation of :func:`product_integral` without exact bookkeeping."""
    c = dom.L1 * dom.L2
    fx, fy = [], []
    for m, (dx, dy) in zip(modes, derivs):
        if (dx and m.j1 == 0) or (dy and m.j2 == 0):
            return 0.0
        px, sx = _axis_derivative(m.px, m.j1, dx)
        py, sy = _axis_derivative(m.py, m.j2, dy)
        if dx or dy:
            c *= sx * sy * (m.j1 / dom.L1) ** dx * (m.j2 / dom.L2) ** dy
        fx.append((px, m.j1))
        fy.append((py, m.j2))
    cx, ex = axis_integral(tuple(sorted(fx)))
    if not cx:
        return 0.0
    cy, ey = axis_integral(tuple(sorted(fy)))
    if not cy:
        return 0.0
    return c * float(cx) * float(cy) * math.pi ** (ex + ey)


# --------------------------------------------------------------------------
# TrigPoly: finite 2D trig sums with exact coefficients


class TrigPoly:
    """Finite sum of modes with :class:`Exact` coefficients (canonical form)."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Mode, Exact] | None = None):
        self.terms = {m: c for m, c in (terms or {}).items() if c}

    @classmethod
    def from_mode(cls, mode: Mode, coeff=1) -> "TrigPoly":
        c = coeff if isinstance(coeff, Exact) else Exact.monomial(coeff)
        return cls({mode: c})

    def __add__(self, other: "TrigPoly") -> "TrigPoly":
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out[m] + c if m in out else c
        return TrigPoly(out)

    def scale(self, coeff) -> "TrigPoly":
        return TrigPoly({m: c * coeff for m, c in self.terms.items()})

    def __mul__(self, other: "TrigPoly") -> "TrigPoly":
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                sx = _series_product({(m1.px, m1.j1): Fraction(1)}, {(m2.px, m2.j1): Fraction(1)})
                sy = _series_product({(m1.py, m1.j2): Fraction(1)}, {(m2.py, m2.j2): Fraction(1)})
                c12 = c1 * c2
                for ((px, n1), cx), ((py, n2), cy) in product(sx.items(), sy.items()):
                    mode = Mode(n1, n2, px, py)
                    val = c12 * (cx * cy)
                    out[mode] = out[mode] + val if mode in out else val
        return TrigPoly(out)

    def derivative(self, d: tuple[int, int]) -> "TrigPoly":
        out: dict = {}
        for m, c in self.terms.items():
            coeff, (px, n1), (py, n2) = derived_factor(m, d)
            if coeff:
                mode = Mode(n1, n2, px, py)
                val = c * coeff
                out[mode] = out[mode] + val if mode in out else val
        return TrigPoly(out)

    def __eq__(self, other):
        return isinstance(other, TrigPoly) and self.terms == other.terms

    def __len__(self):
        return len(self.terms)

    def evaluate(self, x, y, dom: Domain):
        """Numeric evaluation on physical coordinates (broadcasting)."""
        import numpy as np

        a = np.asarray(x) / dom.L1
        b = np.asarray(y) / dom.L2
        total = 0.0
        for m, c in self.terms.items():
            tx = np.cos(m.j1 * a) if m.px == COS else np.sin(m.j1 * a)
            ty = np.cos(m.j2 * b) if m.py == COS else np.sin(m.j2 * b)
            total = total + c.value(dom) * tx * ty
        return total

    def __repr__(self):
        inner = ", ".join(f"{m}: {c!r}" for m, c in sorted(self.terms.items()))
        return f"TrigPoly({{{inner}}})"


def mode_product(a: Mode, b: Mode, dom: Domain | None = None) -> TrigPoly:
    """Product-to-sum expansion of ``a * b`` (at most four modes)."""
    return TrigPoly.from_mode(a) * TrigPoly.from_mode(b)


def inner_product(p: TrigPoly, m: Mode, dom: Domain | None = None) -> Exact:
    """Exact L2 inner product ``int_Omega p * m``.

    Returns an :class:`Exact`; call ``.value(dom)`` for a float.
    """
    total = Exact()
    for mode, c in p.terms.items():
        total = total + c * product_integral((mode, m))
    return total


def mode_norm_sq(m: Mode) -> Exact:
    return product_integral((m, m))
