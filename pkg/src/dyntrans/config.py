"""Run configuration: JSON file plus command-line overrides.

Layout::

    {"model": "she" | "mshe",
     "domain": {"L1": 1.732..., "L2": 1.0},          # or L1_sq / L2_sq, exact squares
     "params": {"k": 1.5, "alpha2": 1, "alpha3": 1, "c": [c1, ..., c5],
                "lambda": ..., "beta": ...},
     "truncation": {"kind": "auto" | "cij" | "lattice", "radius": 12, "max_radius": 128},
     "tolerances": {"reduction": 1e-10, "field": 1e-9, "validity_factor": 0.1},
     "nonlinear": {"bilinear": [{"coeff": 1, "du": [0, 0], "dv": [0, 0]}],
                   "trilinear": [{"coeff": -1, "d": [[0, 0], [0, 0], [0, 0]]}]},   # optional
     "output": "out",
     "seed": 0,
     "portrait": {...}, "pattern": {...}, "dns": {...}, "sweep": {...}}

``nonlinear`` replaces the model's built-in nonlinearity with an explicit
term list; ``k`` and the domain still set the linear part.

The domain is ``(0, L1 pi) x (0, L2 pi)`` with modes ``cos(j1 x / L1)`` etc.
"""

from __future__ import annotations

import copy
import json
import math
from dataclasses import dataclass, replace
from fractions import Fraction

from .center_manifold import (CONVERGENCE_TOL, DEFAULT_RADIUS, MAX_RADIUS, ReducedSystem, cij_truncation,
                              lattice_truncation, reduce)
from .errors import ConfigError
from .nonlinear_op import NonlinearSpec
from .linear_problem import PESStatus, verify_pes
from .she_models import MIXED, NEUMANN, Problem, SheConfig, build_problem
from .trig_basis import SHE_DOMAIN, Domain

MODELS = {"she": NEUMANN, "mshe": MIXED, NEUMANN: NEUMANN, MIXED: MIXED}
TRUNCATIONS = ("auto", "cij", "lattice")

DEFAULTS = {
    "model": "she",
    "domain": {"L1_sq": 3, "L2_sq": 1},
    "params": {"k": 1.5, "alpha2": 1.0, "alpha3": 1.0, "c": [0.0, 0.0, 0.0, 0.0, 0.0]},
    "truncation": {"kind": "auto", "radius": DEFAULT_RADIUS, "max_radius": MAX_RADIUS},
    "tolerances": {"reduction": CONVERGENCE_TOL, "field": 1e-9, "validity_factor": 0.1},
    "output": "out",
    "seed": 0,
}

DEFAULT_BETA = 0.005


def deep_merge(base: dict, over: dict) -> dict:
    out = copy.deepcopy(base)
    for k, v in over.items():
        if isinstance(v, dict) and isinstance(out.get(k), dict):
            out[k] = deep_merge(out[k], v)
        else:
            out[k] = copy.deepcopy(v)
    return out


def set_path(cfg: dict, dotted: str, value):
    keys = dotted.split(".")
    cur = cfg
    for k in keys[:-1]:
        cur = cur.setdefault(k, {})
    cur[keys[-1]] = value


def load(path=None, overrides: dict | None = None) -> dict:
    cfg = copy.deepcopy(DEFAULTS)
    if path:
        try:
            with open(path) as fh:
                user = json.load(fh)
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigError(f"cannot read config {path}: {e}") from e
        if not isinstance(user, dict):
            raise ConfigError("config root must be a JSON object")
        if "domain" in user:
            # a user domain replaces the default one rather than merging with it
            cfg["domain"] = {}
        cfg = deep_merge(cfg, user)
    for dotted, value in (overrides or {}).items():
        if dotted.startswith("domain.") and dotted.split(".")[1] in ("L1", "L2"):
            cfg["domain"].pop(dotted.split(".")[1] + "_sq", None)
        set_path(cfg, dotted, value)
    validate(cfg)
    return cfg


def validate(cfg: dict):
    if cfg["model"] not in MODELS:
        raise ConfigError(f"unknown model {cfg['model']!r}; expected she or mshe")
    kind = cfg["truncation"].get("kind", "auto")
    if kind not in TRUNCATIONS:
        raise ConfigError(f"unknown truncation {kind!r}; expected one of {TRUNCATIONS}")
    c = params_c(cfg["params"])
    if len(c) != 5:
        raise ConfigError("params.c must have five entries")
    for key in ("k", "alpha2", "alpha3"):
        v = cfg["params"].get(key)
        if not isinstance(v, (int, float)) or not math.isfinite(v):
            raise ConfigError(f"params.{key} must be a finite number")
    domain(cfg)
    nonlinear_spec(cfg)


def nonlinear_spec(cfg: dict) -> NonlinearSpec | None:
    data = cfg.get("nonlinear")
    if data is None:
        return None
    if not isinstance(data, dict):
        raise ConfigError("nonlinear must be an object with bilinear/trilinear term lists")
    try:
        return NonlinearSpec.from_dict(data)
    except (KeyError, TypeError, ValueError) as e:
        raise ConfigError(f"bad nonlinear term list: {e}") from e


def params_c(params: dict) -> list[float]:
    c = list(params.get("c", [0.0] * 5))
    for i in range(5):
        key = f"c{i + 1}"
        if key in params and i < len(c):
            c[i] = params[key]
    return [float(v) for v in c]


def domain(cfg: dict) -> Domain:
    d = cfg["domain"]
    try:
        for key in ("L1", "L2", "L1_sq", "L2_sq"):
            if key in d and not float(d[key]) > 0:
                raise ConfigError(f"domain.{key} must be positive")
        if "L1_sq" in d or "L2_sq" in d:
            l1 = Fraction(str(d["L1_sq"])) if "L1_sq" in d else Fraction(str(float(d["L1"]) ** 2))
            l2 = Fraction(str(d["L2_sq"])) if "L2_sq" in d else Fraction(str(float(d["L2"]) ** 2))
            if l1 <= 0 or l2 <= 0:
                raise ConfigError("domain lengths must be positive")
            return Domain.from_squares(l1, l2)
        L1, L2 = float(d["L1"]), float(d["L2"])
    except (KeyError, ValueError, TypeError) as e:
        raise ConfigError(f"bad domain {d!r}: {e}") from e
    if not (L1 > 0 and L2 > 0):
        raise ConfigError("domain lengths must be positive")
    return Domain(L1, L2)


def she_config(cfg: dict) -> SheConfig:
    p = cfg["params"]
    return SheConfig(k=float(p["k"]), alpha2=float(p["alpha2"]), alpha3=float(p["alpha3"]),
                     variant=MODELS[cfg["model"]], c=tuple(params_c(p)))


def is_default_domain(dom: Domain) -> bool:
    return dom.wavenumber_sq(1, 0) == SHE_DOMAIN.wavenumber_sq(1, 0) and \
        dom.wavenumber_sq(0, 1) == SHE_DOMAIN.wavenumber_sq(0, 1)


@dataclass
class Pipeline:
    cfg: dict
    she: SheConfig
    problem: Problem
    system: ReducedSystem
    pes: PESStatus
    lam: float | None
    truncation: str

    @property
    def beta(self) -> float | None:
        return None if self.lam is None else self.system.beta(self.lam)

    @property
    def validity_radius(self) -> float:
        return self.cfg["tolerances"].get("validity_factor", 0.1) * self.pes.gap

    def lam_or_default(self) -> float:
        return self.lam if self.lam is not None else float(self.problem.pair.lambda_c) + DEFAULT_BETA


def resolve_lambda(cfg: dict, lambda_c) -> float | None:
    p = cfg["params"]
    if p.get("lambda") is not None:
        return float(p["lambda"])
    if p.get("beta") is not None:
        return float(lambda_c) + float(p["beta"])
    return None


def build(cfg: dict) -> Pipeline:
    she = she_config(cfg)
    dom = domain(cfg)
    prob = build_problem(she, dom, check_window=is_default_domain(dom))
    custom = nonlinear_spec(cfg)
    if custom is not None:
        prob = replace(prob, spec=custom)
    tr = cfg["truncation"]
    kind = tr.get("kind", "auto")
    tol = float(cfg["tolerances"].get("reduction", CONVERGENCE_TOL))
    if kind == "cij":
        sys = reduce(prob.spec, prob.law, prob.pair, truncation=cij_truncation(prob.law, prob.pair))
        label = "cij"
    elif kind == "lattice":
        r = int(tr.get("radius", DEFAULT_RADIUS))
        sys = reduce(prob.spec, prob.law, prob.pair, truncation=lattice_truncation(prob.law, prob.pair, r))
        label = f"lattice-{r}"
    else:
        sys = reduce(prob.spec, prob.law, prob.pair, radius=int(tr.get("radius", DEFAULT_RADIUS)),
                     max_radius=int(tr.get("max_radius", MAX_RADIUS)), tol=tol)
        label = "auto"
    lam = resolve_lambda(cfg, prob.pair.lambda_c)
    pes = verify_pes(prob.law, prob.pair, lam if lam is not None else prob.pair.lambda_c)
    return Pipeline(cfg, she, prob, sys, pes, lam, label)
