"""Dispersion laws, critical parameters and critical-mode selection.

The linear operator is ``L u = lambda u - (Delta + k)^2 u`` on a trigonometric
basis, so every basis mode is an eigenmode with growth rate
``beta_J(lambda) = lambda - (k - |J|^2)^2``.  The rate decreases without bound
once ``|J|^2 > k``, which is why a finite scan over a lattice that extends a
couple of indices beyond the critical ones settles the stability question.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DegenerateError, InvalidIndices, MultiplicityError, PESViolation
from .trig_basis import COS, SHE_DOMAIN, Domain, Mode, is_valid_mode

DEFAULT_INDEX_BOUND = 16
TIE_RTOL = 1e-12


@dataclass(frozen=True)
class DispersionLaw:
    """Growth rates of the Swift-Hohenberg linear operator on a trig basis.

    ``parity`` is the per-axis basis parity; ``zero_mean`` removes the constant
    mode from the admissible index set.
    """

    k: float | Fraction
    domain: Domain = SHE_DOMAIN
    parity: tuple[str, str] = (COS, COS)
    zero_mean: bool = True

    def wavenumber_sq(self, index):
        return self.domain.wavenumber_sq(*index)

    def decay(self, index):
        """``(k - |J|^2)^2``: the value of ``lambda`` at which mode J is neutral."""
        d = self.k - self.wavenumber_sq(index)
        return d * d

    def beta(self, index, lam) -> float:
        return float(lam - self.decay(index))

    def admissible(self, index) -> bool:
        j1, j2 = index
        if self.zero_mean and j1 == 0 and j2 == 0:
            return False
        return is_valid_mode(j1, j2, self.parity)

    def indices(self, bound: int):
        for j1 in range(bound + 1):
            for j2 in range(bound + 1):
                if self.admissible((j1, j2)):
                    yield (j1, j2)

    def mode(self, index) -> Mode:
        return Mode(index[0], index[1], *self.parity)


@dataclass(frozen=True)
class CriticalPair:
    f1_index: tuple[int, int]
    f2_index: tuple[int, int]
    lambda_c: float | Fraction

    def __post_init__(self):
        if self.f1_index[1] < 1 or self.f1_index[0] < 0:
            raise DegenerateError(f"f1 must be a rectangle mode, got {self.f1_index}")
        if self.f2_index[1] != 0 or self.f2_index[0] < 1:
            raise DegenerateError(f"f2 must be a roll mode (k1, 0), got {self.f2_index}")

    @property
    def indices(self):
        return (tuple(self.f1_index), tuple(self.f2_index))


@dataclass(frozen=True)
class PESStatus:
    beta: float
    gap: float
    worst_index: tuple[int, int]


def critical_parameter(law: DispersionLaw, index_bound: int = DEFAULT_INDEX_BOUND):
    """Minimum of ``(k - |J|^2)^2`` over the lattice and all its minimizers."""
    values = {J: law.decay(J) for J in law.indices(index_bound)}
    lam_c = min(values.values())
    scale = max(1.0, abs(float(lam_c)))
    minimizers = sorted(J for J, v in values.items() if abs(float(v - lam_c)) <= TIE_RTOL * scale)
    return lam_c, minimizers


def critical_pair(law: DispersionLaw, index_bound: int = DEFAULT_INDEX_BOUND) -> CriticalPair:
    """Select one rectangle and one roll mode as the two critical modes."""
    lam_c, minimizers = critical_parameter(law, index_bound)
    if len(minimizers) > 2:
        raise MultiplicityError(f"{len(minimizers)} modes tie at criticality: {minimizers}")
    rects = [J for J in minimizers if J[0] >= 1 and J[1] >= 1]
    rolls = [J for J in minimizers if J[1] == 0 and J[0] >= 1]
    if len(minimizers) != 2 or len(rects) != 1 or len(rolls) != 1:
        raise DegenerateError(f"critical set {minimizers} is not one rectangle plus one roll mode")
    return CriticalPair(rects[0], rolls[0], lam_c)


def verify_pes(law: DispersionLaw, pair: CriticalPair, lam, index_bound: int = DEFAULT_INDEX_BOUND) -> PESStatus:
    """Check the exchange-of-stability conditions at ``pair.lambda_c``.

    Returns the shared growth rate at ``lam`` and the spectral gap
    ``min_{J not critical} -beta_J(lambda_c)``.
    """
    lam_c = pair.lambda_c
    b1 = law.beta(pair.f1_index, lam_c)
    b2 = law.beta(pair.f2_index, lam_c)
    for J, b in ((pair.f1_index, b1), (pair.f2_index, b2)):
        if abs(b) > 1e-12 * max(1.0, abs(float(lam_c))):
            raise PESViolation(J, b)
    gap = math.inf
    worst = None
    for J in law.indices(index_bound):
        if J in pair.indices:
            continue
        b = law.beta(J, lam_c)
        if b >= 0:
            raise PESViolation(J, b)
        if -b < gap:
            gap, worst = -b, J
    return PESStatus(beta=float(lam - lam_c), gap=gap, worst_index=worst)


def aspect_ratio_squared(j1: int, j2: int, k1: int) -> Fraction:
    """``(L1/L2)^2`` making ``(j1, j2)`` and ``(k1, 0)`` share a wave number."""
    if not (k1 > j1 >= 0) or j2 < 1:
        raise InvalidIndices(f"need k1 > j1 >= 0 and j2 >= 1, got j=({j1},{j2}), k1={k1}")
    return Fraction(k1 * k1 - j1 * j1, j2 * j2)


def aspect_ratio_for_double_criticality(j1: int, j2: int, k1: int, L2: float = 1.0) -> float:
    return math.sqrt(aspect_ratio_squared(j1, j2, k1)) * L2


def double_criticality_domain(j1: int, j2: int, k1: int, L2_sq=1) -> Domain:
    """Domain with exact squared lengths on which the two modes are degenerate."""
    L2_sq = Fraction(L2_sq)
    return Domain.from_squares(aspect_ratio_squared(j1, j2, k1) * L2_sq, L2_sq)
