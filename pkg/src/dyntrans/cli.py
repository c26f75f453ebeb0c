"""Command-line front end.

Subcommands ``coeffs``, ``classify``, ``portrait``, ``pattern``, ``dns`` and
``sweep`` all read the same JSON config; flags override file values.  Every
run writes a ``manifest.json`` next to its outputs.  Exit codes: 0 success,
2 configuration error, 3 degeneracy, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import config as cfgmod
from . import dns as dnsmod
from . import reduced_ode as ro
from .classifier import INDETERMINATE, classify, stability_table, steady_states
from .errors import ConfigError, DynTransError, QuadraticDegeneracyError
from .outputs import OutputDir, dumps
from .she_models import MIXED, NEUMANN, closed_form_coefficients, sign_predictions
from .trig_basis import COS

EXIT_OK = 0


# ---------------------------------------------------------------- helpers

def _oracle(pl: cfgmod.Pipeline) -> dict | None:
    """Closed-form (a1, b1, b3) comparison when the bundled formulas apply."""
    she = pl.she
    if not cfgmod.is_default_domain(pl.problem.domain):
        return None
    if pl.cfg.get("nonlinear") is not None:
        return {"applicable": False, "reason": "custom nonlinear terms"}
    if she.variant == MIXED and she.c[0] != 0:
        return {"applicable": False, "reason": "closed forms assume c1 = 0"}
    a1, b1, b3 = closed_form_coefficients(she)
    s = pl.system
    diff = {"a1": s.a1 - a1, "b1": s.b1 - b1, "b3": s.b3 - b3}
    return {"applicable": True, "a1": a1, "b1": b1, "b3": b3, "difference": diff,
            "predicted_type": sign_predictions(she)}


def _coeff_payload(pl: cfgmod.Pipeline) -> dict:
    return {"model": pl.cfg["model"], "coefficients": pl.system.to_dict(),
            "critical_pair": {"f1": list(pl.problem.pair.f1_index), "f2": list(pl.problem.pair.f2_index),
                              "lambda_c": float(pl.problem.pair.lambda_c)},
            "spectral_gap": pl.pes.gap, "gap_mode": list(pl.pes.worst_index), "truncation": pl.truncation,
            "closed_form": _oracle(pl)}


def _report(pl: cfgmod.Pipeline, lam: float | None) -> dict:
    rep = classify(pl.system, lam)
    out = rep.to_dict()
    out["stability_table"] = stability_table(pl.system)
    out["lambda"] = lam
    out["beta"] = None if lam is None else pl.system.beta(lam)
    out["validity_radius"] = pl.validity_radius
    if lam is not None and abs(pl.system.beta(lam)) > pl.validity_radius:
        out["notes"].append(f"|beta|={abs(pl.system.beta(lam)):.3g} exceeds the validity radius "
                            f"{pl.validity_radius:.3g}; leading-order states may be inaccurate")
    if pl.she.variant == NEUMANN and pl.cfg.get("nonlinear") is None and rep.transition_type != INDETERMINATE:
        out["notes"].append("the neumann-cosine model has a1*b1 >= 0, so b3 < 0 is random and b3 > 0 catastrophic")
    return out


def _portrait_spec(pl: cfgmod.Pipeline, beta: float) -> ro.PortraitSpec:
    p = pl.cfg.get("portrait", {})
    return ro.PortraitSpec(radius=p.get("radius"), n_seeds=int(p.get("n_seeds", 16)), dt=p.get("dt"),
                           t_max=p.get("t_max"), field_tol=float(pl.cfg["tolerances"].get("field", ro.FIELD_TOL)),
                           record_every=int(p.get("record_every", 10)), audit=bool(p.get("audit", True)))


def _basis_1d(j, parity, a):
    return np.cos(j * a) if parity == COS else np.sin(j * a)


def pattern_field(pl: cfgmod.Pipeline, u1: float, u2: float, n: int):
    """``u1 f1 + u2 f2`` on an ``n x n`` grid spanning the closed domain."""
    law = pl.problem.law
    a = np.linspace(0.0, np.pi, n)
    px, py = law.parity
    (i1, i2), (k1, k2) = pl.problem.pair.indices
    f1 = np.outer(_basis_1d(i1, px, a), _basis_1d(i2, py, a))
    f2 = np.outer(_basis_1d(k1, px, a), _basis_1d(k2, py, a))
    return u1 * f1 + u2 * f2


def _write_pattern(path, values, pl, variant):
    dom = pl.problem.domain
    with open(path, "w") as fh:
        fh.write(f"# N={values.shape[0]} L1={float(dom.L1) * math.pi:.17g} L2={float(dom.L2) * math.pi:.17g} "
                 f"variant={variant}\n")
        for row in values:
            fh.write(" ".join(f"{v:.10e}" for v in row) + "\n")


# ---------------------------------------------------------------- commands

def cmd_coeffs(cfg: dict, out: OutputDir) -> tuple[dict, int]:
    pl = cfgmod.build(cfg)
    payload = _coeff_payload(pl)
    code = EXIT_OK
    s = pl.system
    if s.scale == 0 or s.is_zero(s.a1) or s.is_zero(s.b1):
        payload["degeneracy"] = "a1 or b1 vanishes: quadratic degeneracy"
        code = QuadraticDegeneracyError.exit_code
    out.write_json("coeffs.json", payload, "coeffs")
    return payload, code


def cmd_classify(cfg: dict, out: OutputDir) -> tuple[dict, int]:
    pl = cfgmod.build(cfg)
    rep = _report(pl, pl.lam)
    rep["reduction"] = _coeff_payload(pl)
    out.write_json("report.json", rep, "classify")
    code = 3 if rep["transition_type"] == INDETERMINATE else EXIT_OK
    return rep, code


def cmd_portrait(cfg: dict, out: OutputDir) -> tuple[dict, int]:
    pl = cfgmod.build(cfg)
    lam = pl.lam_or_default()
    beta = pl.system.beta(lam)
    spec = _portrait_spec(pl, beta).resolved(pl.system, beta)
    seeds = ro.circle_seeds(0.25 * spec.radius, spec.n_seeds, offset=float(cfg.get("portrait", {}).get("offset", 0.0)))
    extra = cfg.get("portrait", {}).get("seeds")
    if extra:
        seeds = np.vstack([seeds, np.asarray(extra, float).reshape(-1, 2)])
    states = ro.known_states(pl.system, lam)
    entries = []
    for i, u0 in enumerate(seeds):
        tr = ro.integrate(pl.system, lam, u0, spec, states)
        rel = f"portrait/seed_{i:03d}.csv"
        out.write_csv(rel, tr.samples, "t,u1,u2", "portrait")
        entries.append({"index": i, "u0": list(map(float, u0)), "file": rel, "termination": tr.termination,
                        "state": tr.state, "final": list(tr.final), "steps": tr.steps})
    eqs = [e.to_dict() for e in ro.find_equilibria(pl.system, lam)]
    payload = {"lambda": lam, "beta": beta, "spec": spec.to_dict(), "coefficients": pl.system.to_dict(),
               "transition": _report(pl, lam)["transition_type"], "equilibria": eqs, "trajectories": entries}
    out.write_json("portrait.json", payload, "portrait")
    summary = {"lambda": lam, "beta": beta, "n_seeds": len(entries),
               "terminations": {t: sum(e["termination"] == t for e in entries)
                                for t in (ro.CONVERGED, ro.ESCAPED, ro.MAX_TIME)}}
    return summary, EXIT_OK


def cmd_pattern(cfg: dict, out: OutputDir) -> tuple[dict, int]:
    pl = cfgmod.build(cfg)
    p = cfg.get("pattern", {})
    n = int(p.get("n", 129))
    if n < 2:
        raise ConfigError("pattern.n must be at least 2")
    state = p.get("state")
    if state:
        lam = pl.lam_or_default()
        found = {s.kind: s for s in steady_states(pl.system, pl.system.beta(lam))}
        if state not in found:
            raise ConfigError(f"state {state} does not exist at lambda={lam:.6g}; available: {sorted(found)}")
        u1, u2 = found[state].amplitudes
    else:
        u1, u2 = float(p.get("u1", 0.0)), float(p.get("u2", 1.0))
    values = pattern_field(pl, u1, u2, n)
    _write_pattern(out.path("pattern.txt"), values, pl, pl.she.variant)
    out.record("pattern.txt", "pattern")
    payload = {"u1": u1, "u2": u2, "state": state, "n": n, "f1": list(pl.problem.pair.f1_index),
               "f2": list(pl.problem.pair.f2_index), "min": float(values.min()), "max": float(values.max())}
    out.write_json("pattern.json", payload, "pattern")
    return payload, EXIT_OK


def cmd_dns(cfg: dict, out: OutputDir) -> tuple[dict, int]:
    pl = cfgmod.build(cfg)
    d = cfg.get("dns", {})
    lam = pl.lam_or_default()
    sch = dnsmod.Schedule(dt=float(d.get("dt", 0.5)), t_end=float(d.get("t_end", 2000.0)),
                          record_every=float(d.get("record_every", 1.0)),
                          plateau_window=float(d.get("plateau_window", 50.0)),
                          plateau_tol=float(d.get("plateau_tol", 1e-8)), escape_norm=d.get("escape_norm"),
                          scheme=d.get("scheme", dnsmod.ETD1))
    ic = {"amplitudes": d.get("amplitudes", []), "noise": float(d.get("noise", 0.0)),
          "seed": int(d.get("seed", cfg.get("seed", 0)))}
    if not ic["amplitudes"] and not ic["noise"]:
        (i1, i2), (k1, k2) = pl.problem.pair.indices
        ic["amplitudes"] = [[i1, i2, 0.01], [k1, k2, 0.01]]
    N = int(d.get("N", dnsmod.DEFAULT_N))
    res = dnsmod.run(pl.problem.law, pl.problem.spec, pl.problem.pair, lam, ic, sch, N)
    out.write_csv("dns_timeseries.csv", res.series(), "t,u1,u2,norm", "dns")
    dnsmod.write_grid(out.path("dns_final.txt"), res.final.values(), res.final.layout, pl.she.variant)
    out.record("dns_final.txt", "dns")
    summary = res.summary()
    summary["beta"] = pl.system.beta(lam)
    beta = summary["beta"]
    if beta * pl.system.b3 < 0:
        summary["predicted_roll_amplitude"] = math.sqrt(-beta / pl.system.b3)
    if d.get("compare_reduced"):
        u0 = (res.u1[0], res.u2[0])
        spec = ro.PortraitSpec(radius=max(2.0 * math.hypot(*u0), ro.default_radius(pl.system, beta)),
                               dt=min(sch.dt, ro.DT_SCALE / max(abs(beta), 1e-3)), record_every=1,
                               t_max=float(res.times[-1]))
        tr = ro.integrate(pl.system, lam, u0, spec)
        out.write_csv("reduced_timeseries.csv", tr.samples, "t,u1,u2", "dns")
        summary["comparison"] = trace_discrepancy(res, tr)
    out.write_json("dns.json", summary, "dns")
    return summary, EXIT_OK


def trace_discrepancy(res: dnsmod.DnsRun, tr: ro.Trajectory) -> dict:
    """Sup-norm gap between DNS and reduced traces over the reduced run's time span."""
    t = res.times
    m = np.isfinite(res.u1) & (t <= tr.samples[-1, 0])
    r1 = np.interp(t[m], tr.samples[:, 0], tr.samples[:, 1])
    r2 = np.interp(t[m], tr.samples[:, 0], tr.samples[:, 2])
    d = float(np.max(np.hypot(res.u1[m] - r1, res.u2[m] - r2)))
    s = float(np.max(np.hypot(r1, r2)))
    return {"sup_abs": d, "sup_reduced": s, "relative": d / s if s > 0 else math.inf,
            "t_span": float(t[m][-1])}


SWEEPABLE = ("k", "alpha2", "alpha3", "c1", "c2", "c3", "c4", "c5", "lambda", "beta")


def _sweep_point(args):
    cfg, i = args
    try:
        pl = cfgmod.build(cfg)
        rep = _report(pl, pl.lam)
        row = {"index": i, "status": "ok", "transition_type": rep["transition_type"], **pl.system.to_dict()}
        return row, rep, 0
    except DynTransError as e:
        return {"index": i, "status": type(e).__name__, "transition_type": "", "error": str(e)}, \
            {"error": type(e).__name__, "message": str(e)}, e.exit_code


def cmd_sweep(cfg: dict, out: OutputDir, jobs: int = 1) -> tuple[dict, int]:
    sw = cfg.get("sweep", {})
    param = sw.get("param")
    if param not in SWEEPABLE:
        raise ConfigError(f"sweep.param must be one of {SWEEPABLE}")
    values = sw.get("values")
    if values is None:
        lo, hi, n = sw.get("range", [None, None, None])
        if lo is None:
            raise ConfigError("sweep needs values or range [start, stop, n]")
        values = np.linspace(float(lo), float(hi), int(n)).tolist()
    values = [float(v) for v in values]
    points = []
    for i, v in enumerate(values):
        c = json.loads(json.dumps(cfg))
        c["params"][param] = v
        if param in ("lambda", "beta"):
            c["params"].pop("beta" if param == "lambda" else "lambda", None)
        if param.startswith("c") and len(param) == 2:
            c["params"]["c"] = cfgmod.params_c(c["params"])
        points.append((c, i))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_sweep_point, points))
    else:
        results = [_sweep_point(p) for p in points]
    rows = []
    for (row, rep, _), v in zip(results, values):
        row[param] = v
        rows.append(row)
        out.write_json(f"points/point_{row['index']:03d}/report.json", rep, "sweep")
    keys = ["index", param, "status", "transition_type", "a1", "a2", "a3", "b1", "b2", "b3", "lambda_c"]
    lines = [",".join(keys)]
    for r in rows:
        lines.append(",".join("" if r.get(k) is None else (repr(float(r[k])) if isinstance(r.get(k), float)
                                                           else str(r.get(k, ""))) for k in keys))
    out.path("sweep.csv").write_text("\n".join(lines) + "\n")
    out.record("sweep.csv", "sweep")
    payload = {"param": param, "values": values, "points": rows}
    out.write_json("sweep.json", payload, "sweep")
    return {"param": param, "n": len(rows), "types": [r["transition_type"] for r in rows]}, EXIT_OK


COMMANDS = {"coeffs": cmd_coeffs, "classify": cmd_classify, "portrait": cmd_portrait, "pattern": cmd_pattern,
            "dns": cmd_dns, "sweep": cmd_sweep}


# ---------------------------------------------------------------- argparse

# flag -> (config path, type)
COMMON_FLAGS = {
    "model": ("model", str), "L1": ("domain.L1", float), "L2": ("domain.L2", float),
    "k": ("params.k", float), "alpha2": ("params.alpha2", float), "alpha3": ("params.alpha3", float),
    "c1": ("params.c1", float), "c2": ("params.c2", float), "c3": ("params.c3", float),
    "c4": ("params.c4", float), "c5": ("params.c5", float),
    "lambda": ("params.lambda", float), "beta": ("params.beta", float),
    "truncation": ("truncation.kind", str), "radius": ("truncation.radius", int),
    "output": ("output", str), "seed": ("seed", int),
}
COMMAND_FLAGS = {
    "portrait": {"n_seeds": ("portrait.n_seeds", int), "portrait_radius": ("portrait.radius", float),
                 "dt": ("portrait.dt", float), "t_max": ("portrait.t_max", float)},
    "pattern": {"u1": ("pattern.u1", float), "u2": ("pattern.u2", float), "state": ("pattern.state", str),
                "n": ("pattern.n", int)},
    "dns": {"N": ("dns.N", int), "dt": ("dns.dt", float), "t_end": ("dns.t_end", float),
            "scheme": ("dns.scheme", str), "noise": ("dns.noise", float),
            "compare_reduced": ("dns.compare_reduced", bool)},
    "sweep": {"param": ("sweep.param", str), "values": ("sweep.values", "floats")},
}


def _parse_floats(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from e


def _add(parser, name, typ):
    flag = "--" + name.replace("_", "-")
    if name == "output":
        parser.add_argument(flag, "-o", dest=name, type=typ, default=None, help="output directory")
        return
    if typ is bool:
        parser.add_argument(flag, dest=name, action="store_const", const=True, default=None)
    elif typ == "floats":
        parser.add_argument(flag, dest=name, type=_parse_floats, default=None)
    else:
        parser.add_argument(flag, dest=name, type=typ, default=None)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dyntrans", description=__doc__.split("\n\n")[0])
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name, help=COMMANDS[name].__doc__ or name)
        sp.add_argument("--config", "-c", default=None, help="JSON config file")
        sp.add_argument("--jobs", "-j", type=int, default=1, help="parallel sweep points")
        sp.add_argument("--quiet", "-q", action="store_true", help="do not print the result JSON")
        for flag, (_, typ) in COMMON_FLAGS.items():
            _add(sp, flag, typ)
        for flag, (_, typ) in COMMAND_FLAGS.get(name, {}).items():
            _add(sp, flag, typ)
        if name == "sweep":
            sp.add_argument("--range", dest="range", type=_parse_floats, default=None, help="start,stop,n")
    return ap


def _overrides(ns) -> dict:
    flags = dict(COMMON_FLAGS)
    flags.update(COMMAND_FLAGS.get(ns.command, {}))
    over = {}
    for name, (path, _) in flags.items():
        v = getattr(ns, name, None)
        if v is not None:
            over[path] = v
    if getattr(ns, "range", None) is not None:
        over["sweep.range"] = ns.range
    return over


def _error(out_dir, exc: Exception, code: int):
    payload = {"error": type(exc).__name__, "message": str(exc), "exit_code": code}
    text = dumps(payload)
    sys.stderr.write(text)
    if out_dir is not None:
        try:
            Path(out_dir).mkdir(parents=True, exist_ok=True)
            (Path(out_dir) / "error.json").write_text(text)
        except OSError:
            pass
    return code


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    out_dir = Path(ns.output) if getattr(ns, "output", None) else None
    try:
        cfg = cfgmod.load(ns.config, _overrides(ns))
        out_dir = Path(cfg["output"]) if isinstance(cfg["output"], str) else Path(cfg["output"].get("dir", "out"))
        out = OutputDir(out_dir, ns.command, cfg, int(cfg.get("seed", 0)))
        if ns.command == "sweep":
            result, code = cmd_sweep(cfg, out, jobs=max(1, ns.jobs))
        else:
            result, code = COMMANDS[ns.command](cfg, out)
        out.close()
    except DynTransError as e:
        return _error(out_dir, e, e.exit_code)
    except OSError as e:
        return _error(out_dir, e, 2)
    if not ns.quiet:
        sys.stdout.write(dumps(result))
    if code:
        sys.stderr.write(dumps({"error": "degeneracy", "exit_code": code}))
    return code


if __name__ == "__main__":
    sys.exit(main())
