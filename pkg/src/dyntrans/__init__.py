"""Two-mode center-manifold reduction, transition classification, and
pseudo-spectral validation for Swift-Hohenberg type problems."""

__version__ = "0.1.0"

from .center_manifold import ReducedSystem, reduce
from .classifier import classify, stability_table, steady_states
from .she_models import SheConfig, build_problem, closed_form_coefficients

__all__ = [
    "ReducedSystem",
    "SheConfig",
    "build_problem",
    "classify",
    "closed_form_coefficients",
    "reduce",
    "stability_table",
    "steady_states",
]
