"""Transition type, bifurcated steady states and their stability.

The type is decided by the signs of ``a1*b1`` and ``b3``:

    =======  ====  ============
    a1 b1    b3    type
    =======  ====  ============
    > 0      < 0   random
    > 0      > 0   catastrophic
    < 0      < 0   continuous
    < 0      > 0   catastrophic
    =======  ====  ============

Roll states ``R1, R2 = (0, -+sqrt(-beta/b3))`` exist when ``beta*b3 < 0``;
mixed states ``H1, H2 = (+-beta/sqrt(a1 b1), -beta/a1)`` exist when
``a1*b1 > 0`` and are always saddles.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .center_manifold import ReducedSystem
from .errors import QuadraticDegeneracyError

RANDOM = "random"
CATASTROPHIC = "catastrophic"
CONTINUOUS = "continuous"
INDETERMINATE = "indeterminate"

TYPE_LABELS = {RANDOM: "Type-III", CATASTROPHIC: "Type-II", CONTINUOUS: "Type-I", INDETERMINATE: ""}

STABLE_NODE = "stable node"
UNSTABLE_NODE = "unstable node"
SADDLE = "saddle"
DEGENERATE = "degenerate"

BELOW = "lambda<lambda_c"
ABOVE = "lambda>lambda_c"
BOTH = "both-sides"


@dataclass
class SteadyState:
    kind: str
    amplitudes: tuple[float, float]
    exists_for: str
    stability: str
    jacobian_eigs: tuple[float, float]
    eigvecs: tuple[tuple[float, float], tuple[float, float]]

    def to_dict(self):
        d = asdict(self)
        d["amplitudes"] = list(self.amplitudes)
        d["jacobian_eigs"] = list(self.jacobian_eigs)
        d["eigvecs"] = [list(v) for v in self.eigvecs]
        return d


@dataclass
class TransitionReport:
    transition_type: str
    case: str
    theta: float | None
    states: list[SteadyState] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    coefficients: dict | None = None

    def to_dict(self):
        return {
            "transition_type": self.transition_type,
            "type_label": TYPE_LABELS[self.transition_type],
            "case": self.case,
            "theta": self.theta,
            "states": [s.to_dict() for s in self.states],
            "notes": list(self.notes),
            "coefficients": self.coefficients,
        }


def _sign(sys: ReducedSystem, x: float) -> int:
    return 0 if sys.is_zero(x) else (1 if x > 0 else -1)


def _check_quadratic(sys: ReducedSystem):
    if sys.scale == 0 or sys.is_zero(sys.a1) or sys.is_zero(sys.b1):
        raise QuadraticDegeneracyError(f"a1={sys.a1:.6g}, b1={sys.b1:.6g}: quadratic coupling vanishes")


def transition_type(sys: ReducedSystem) -> str:
    _check_quadratic(sys)
    s_ab = 1 if sys.a1 * sys.b1 > 0 else -1
    s_b3 = _sign(sys, sys.b3)
    if s_b3 == 0:
        return INDETERMINATE
    if s_b3 > 0:
        return CATASTROPHIC
    return RANDOM if s_ab > 0 else CONTINUOUS


def sector_angle(sys: ReducedSystem) -> float | None:
    """``arctan(sqrt(a1/b1))``: angle between the roll axis and the invariant
    lines ``u1 = +-sqrt(a1/b1) u2`` (defined only for ``a1 b1 > 0``)."""
    if sys.a1 * sys.b1 > 0:
        return math.atan(math.sqrt(sys.a1 / sys.b1))
    return None


def _stability(eigs) -> str:
    l1, l2 = eigs
    if l1 == 0 or l2 == 0:
        return DEGENERATE
    if l1 < 0 and l2 < 0:
        return STABLE_NODE
    if l1 > 0 and l2 > 0:
        return UNSTABLE_NODE
    return SADDLE


def steady_states(sys: ReducedSystem, beta: float) -> list[SteadyState]:
    """Leading-order bifurcated states at growth rate ``beta``."""
    _check_quadratic(sys)
    states = []
    if not sys.is_zero(sys.b3) and beta * sys.b3 < 0:
        amp = math.sqrt(-beta / sys.b3)
        side = ABOVE if sys.b3 < 0 else BELOW
        for kind, sgn in (("R1", -1.0), ("R2", 1.0)):
            eigs = (-2.0 * beta, sgn * sys.a1 * amp)
            states.append(SteadyState(kind, (0.0, sgn * amp), side, _stability(eigs), eigs,
                                      ((0.0, 1.0), (1.0, 0.0))))
    if sys.a1 * sys.b1 > 0:
        root = math.sqrt(sys.a1 * sys.b1)
        r = sys.a1 / root
        for kind, sgn in (("H1", 1.0), ("H2", -1.0)):
            eigs = (-beta, 2.0 * beta)
            states.append(SteadyState(kind, (sgn * beta / root, -beta / sys.a1), BOTH, _stability(eigs), eigs,
                                      ((-sgn * r, 1.0), (sgn * r / 2.0, 1.0))))
    return states


def classify(sys: ReducedSystem, lam: float | None = None) -> TransitionReport:
    """Transition report; states are included when ``lam`` is given."""
    ttype = transition_type(sys)
    ab = "a1b1>0" if sys.a1 * sys.b1 > 0 else "a1b1<0"
    notes = []
    if ttype == INDETERMINATE:
        case = f"{ab}, b3=0"
        notes.append("b3 vanishes: the origin is a non-isolated singular point of the cubic truncation; "
                     "higher-order terms decide the transition")
    else:
        case = f"{ab}, {'b3<0' if sys.b3 < 0 else 'b3>0'}"
    if ttype == CATASTROPHIC and sys.a1 * sys.b1 < 0:
        notes.append("catastrophic (Type-II) transition with a repelling circle of roll states on lambda<lambda_c; "
                     "this case is sometimes labelled Type-I, but no nearby attractor exists after onset")
    if ttype == RANDOM:
        notes.append("random (Type-III): the a1b1>0, b3<0 case is random even where a model-specific statement "
                     "reads 'continuous'")
    report = TransitionReport(ttype, case, sector_angle(sys), notes=notes, coefficients=sys.to_dict())
    if lam is not None:
        report.states = steady_states(sys, sys.beta(lam))
    return report


def stability_table(sys: ReducedSystem) -> dict[str, str]:
    """Stability summary: H states, R states below and above criticality."""
    _check_quadratic(sys)

    def label(beta):
        st = {s.kind: s for s in steady_states(sys, beta)}
        rolls = "DNE" if "R1" not in st else f"R1 {_abbrev(st['R1'].stability)}, R2 {_abbrev(st['R2'].stability)}"
        hexes = "DNE" if "H1" not in st else f"H {_abbrev(st['H1'].stability)}"
        return rolls, hexes

    below, h_below = label(-1.0)
    above, h_above = label(1.0)
    return {"H": h_above if h_above == h_below else f"{h_below} / {h_above}",
            "R_below": below, "R_above": above}


def _abbrev(stability: str) -> str:
    return {STABLE_NODE: "SN", UNSTABLE_NODE: "UN", SADDLE: "SAD", DEGENERATE: "DEG"}[stability]


def numeric_jacobian_eigs(sys: ReducedSystem, lam: float, u: tuple[float, float]):
    """Eigenvalues of the full cubic Jacobian at ``u``, sorted ascending."""
    from .center_manifold import jacobian

    return np.sort(np.linalg.eigvals(jacobian(sys, lam, *u)).real)
