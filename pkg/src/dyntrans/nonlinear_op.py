"""Bilinear and trilinear product-of-derivative nonlinearities and their
projected interaction coefficients.

A bilinear term ``coeff * (d^du u) * (d^dv v)`` and a trilinear term
``coeff * (d^d0 u)(d^d1 v)(d^d2 w)`` are enough to express ``alpha2 u^2``,
``-alpha3 u^3`` and gradient couplings such as ``u u_x``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

from .errors import ZeroNormError
from .trig_basis import COS, Domain, Mode, product_may_be_nonzero, product_value

MAX_DERIVATIVE = 4


def _check_order(d):
    d = tuple(int(v) for v in d)
    if len(d) != 2 or min(d) < 0 or max(d) > MAX_DERIVATIVE:
        raise ValueError(f"derivative orders must be two integers in [0, {MAX_DERIVATIVE}], got {d}")
    return d


@dataclass(frozen=True)
class BilinearTerm:
    coeff: float
    du: tuple[int, int] = (0, 0)
    dv: tuple[int, int] = (0, 0)

    def __post_init__(self):
        object.__setattr__(self, "du", _check_order(self.du))
        object.__setattr__(self, "dv", _check_order(self.dv))

    def to_dict(self):
        return {"coeff": self.coeff, "du": list(self.du), "dv": list(self.dv)}


@dataclass(frozen=True)
class TrilinearTerm:
    coeff: float
    d: tuple[tuple[int, int], tuple[int, int], tuple[int, int]] = ((0, 0), (0, 0), (0, 0))

    def __post_init__(self):
        if len(self.d) != 3:
            raise ValueError("a trilinear term needs three derivative pairs")
        object.__setattr__(self, "d", tuple(_check_order(x) for x in self.d))

    def to_dict(self):
        return {"coeff": self.coeff, "d": [list(x) for x in self.d]}


@dataclass(frozen=True)
class NonlinearSpec:
    bilinear: tuple[BilinearTerm, ...] = ()
    trilinear: tuple[TrilinearTerm, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "bilinear", tuple(self.bilinear))
        object.__setattr__(self, "trilinear", tuple(self.trilinear))

    @classmethod
    def from_dict(cls, data: dict) -> "NonlinearSpec":
        bil = [BilinearTerm(float(t["coeff"]), tuple(t.get("du", (0, 0))), tuple(t.get("dv", (0, 0))))
               for t in data.get("bilinear", [])]
        tri = [TrilinearTerm(float(t["coeff"]), tuple(tuple(x) for x in t.get("d", [(0, 0)] * 3)))
               for t in data.get("trilinear", [])]
        return cls(tuple(bil), tuple(tri))

    def to_dict(self):
        return {"bilinear": [t.to_dict() for t in self.bilinear],
                "trilinear": [t.to_dict() for t in self.trilinear]}

    def without_trilinear(self) -> "NonlinearSpec":
        return NonlinearSpec(self.bilinear, ())

    def is_admissible(self, parity=(COS, COS)) -> bool:
        """Whether every projected interaction obeys the sign-resonance rule.

        Per axis, a bilinear term keeps an even number of sines in the triple
        product iff its total derivative order is even on a cosine axis and
        odd on a sine axis; a trilinear term needs an even total either way.
        """
        for t in self.bilinear:
            for r in (0, 1):
                want = 0 if parity[r] == COS else 1
                if (t.du[r] + t.dv[r]) % 2 != want:
                    return False
        for t in self.trilinear:
            for r in (0, 1):
                if sum(x[r] for x in t.d) % 2:
                    return False
        return True


def _weight(k: Mode, dom: Domain, adjoint_weight):
    w = product_value((k, k), ((0, 0), (0, 0)), dom) if adjoint_weight is None else adjoint_weight
    if w == 0:
        raise ZeroNormError(f"adjoint weight of {k} vanishes")
    return w


def bilinear_action_projection(spec: NonlinearSpec, i: Mode, j: Mode, k: Mode, dom: Domain) -> float:
    """``<G2(e_i, e_j), e_k>`` (unnormalized)."""
    total = 0.0
    for t in spec.bilinear:
        derivs = (t.du, t.dv, (0, 0))
        if not product_may_be_nonzero((i, j, k), derivs):
            continue
        total += t.coeff * product_value((i, j, k), derivs, dom)
    return total


def g2_proj(spec: NonlinearSpec, i: Mode, j: Mode, k: Mode, dom: Domain, adjoint_weight=None) -> float:
    """``<G2(f_i, f_j), f_k*> / <f_k, f_k*>`` for self-adjoint trig modes."""
    w = _weight(k, dom, adjoint_weight)
    return bilinear_action_projection(spec, i, j, k, dom) / w


def g2_sym(spec: NonlinearSpec, i: Mode, j: Mode, k: Mode, dom: Domain, adjoint_weight=None) -> float:
    """``G2(i, j, k) + G2(j, i, k)``: the quadratic coupling coefficient of
    ``u_i u_j`` in the equation for ``u_k``."""
    return g2_proj(spec, i, j, k, dom, adjoint_weight) + g2_proj(spec, j, i, k, dom, adjoint_weight)


def g3_proj(spec: NonlinearSpec, i: Mode, j: Mode, k: Mode, l: Mode, dom: Domain, adjoint_weight=None) -> float:
    w = _weight(l, dom, adjoint_weight)
    total = 0.0
    for t in spec.trilinear:
        derivs = t.d + ((0, 0),)
        if not product_may_be_nonzero((i, j, k, l), derivs):
            continue
        total += t.coeff * product_value((i, j, k, l), derivs, dom)
    return total / w


def g3_sym(spec: NonlinearSpec, i: Mode, j: Mode, k: Mode, l: Mode, dom: Domain, adjoint_weight=None) -> float:
    """Sum of ``G3(sigma(i, j, k), l)`` over the distinct rearrangements of
    ``(i, j, k)``, i.e. the coefficient of the monomial ``u_i u_j u_k``."""
    return sum(g3_proj(spec, *p, l, dom, adjoint_weight) for p in sorted(set(permutations((i, j, k)))))
