"""Experiment drivers: solve, converge, constraint-study, exact.

Every command is driven by a single JSON config (``--set key=value`` flags
override individual fields) and writes its artifacts under
``out/<run-name>/``: solution.csv, exact.csv, diagnostics.csv,
convergence.csv and summary.json as applicable, plus a timing.json sidecar
that is kept out of summary.json so reruns stay byte-identical.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
import time

import numpy as np

from . import runio, timefn
from .config import ConfigError, RunConfig, load_config
from .diagnostics import apply_turnon, constraint, offset_by_side
from .exact import (ExactEvalError, ExactProblem, error_at_interface,
                    exact_eval, max_nodal_error, sample_reduced_state)
from .integrate import evolve
from .mesh import SidedPoint, StateVector
from .operators import WaveOperator, interface_modification
from .reduction import SourceSpec
from .timefn import Cos, Sin


def _prepare(cfg):
    mesh = cfg.build_mesh()
    basis = cfg.build_basis()
    reduced = cfg.reduced_source()
    if cfg.turnon is not None:
        reduced = apply_turnon(reduced, cfg.turnon["tau"], cfg.turnon["delta_hat"],
                               cfg.turnon.get("include_g", False))
    mod = None if reduced.is_source_free() else interface_modification(reduced)
    op = WaveOperator(mesh, basis, potential=cfg.potential, mod=mod)
    problem = cfg.exact_problem()
    if cfg.initial_data == "exact":
        state0 = sample_reduced_state(problem, mesh, basis, 0.0, cfg.exact_mode)
    else:
        state0 = StateVector.zeros(mesh, basis)
    return mesh, basis, reduced, op, state0, problem


def run_solve(cfg):
    """Execute one evolution; returns (EvolveResult, diag rows, summary, problem)."""
    mesh, basis, reduced, op, state0, problem = _prepare(cfg)
    res = evolve(op, state0, cfg.t_final, cfl=cfg.cfl, dt=cfg.dt,
                 snapshot_times=cfg.snapshots,
                 energy_check=reduced.is_source_free())
    diag = []
    for t, st in res.snapshots:
        rep = constraint(st, reduced, t)
        if problem is not None:
            ex = sample_reduced_state(problem, mesh, basis, t, cfg.exact_mode)
            off_l, off_r = offset_by_side(st, ex, t)
        else:
            off_l = off_r = 0.0
        diag.append((float(t), rep.max_constraint, rep.l2_constraint, off_l, off_r))
    summary = {
        "config": cfg.to_dict(),
        "dt": res.dt,
        "n_steps": res.n_steps,
        "delta_part": [[m, float(c(cfg.t_final))] for m, c in reduced.recon],
        "phi_delta": float(reduced.F(cfg.t_final)),
        "error_max": None,
        "error_at_zero": None,
    }
    if problem is not None:
        summary["error_max"] = max_nodal_error(res.final_state, problem,
                                               cfg.t_final, cfg.exact_mode)
        summary["error_at_zero"] = error_at_interface(res.final_state, problem,
                                                      cfg.t_final, cfg.exact_mode)
    return res, diag, summary, problem


def cmd_solve(cfg, out_base):
    t0 = time.perf_counter()
    res, diag, summary, problem = run_solve(cfg)
    out = runio.ensure_outdir(out_base, cfg.name)
    runio.write_solution_csv(os.path.join(out, "solution.csv"), res.snapshots)
    if problem is not None and cfg.write_exact:
        exacts = [(t, sample_reduced_state(problem, res.final_state.mesh,
                                           res.final_state.basis, t, cfg.exact_mode))
                  for t, _ in res.snapshots]
        runio.write_solution_csv(os.path.join(out, "exact.csv"), exacts)
    runio.write_diagnostics_csv(os.path.join(out, "diagnostics.csv"), diag)
    runio.write_summary(os.path.join(out, "summary.json"), summary)
    runio.write_timing(out, time.perf_counter() - t0)
    if summary["error_max"] is not None:
        print("%s: error_max=%.3e error_at_zero=%.3e (dt=%.3e, %d steps)"
              % (cfg.name, summary["error_max"], summary["error_at_zero"],
                 summary["dt"], summary["n_steps"]))
    else:
        print("%s: done (dt=%.3e, %d steps)" % (cfg.name, summary["dt"],
                                                summary["n_steps"]))
    return out


def converge_rows(cfg, mode, degrees, element_counts):
    """Run the sweep and return (rows, fits); rows are convergence.csv rows."""
    rows = []
    fits = {}
    if mode == "h":
        for k in degrees:
            errs = []
            for e in element_counts:
                sub = dataclasses.replace(cfg, degree=int(k), elements=int(e),
                                          snapshots=(), name=cfg.name).validate()
                _, _, summary, _ = run_solve(sub)
                rows.append((int(k), int(e), summary["error_max"],
                             summary["error_at_zero"]))
                errs.append(summary["error_max"])
            if len(errs) >= 2:
                n_fit = min(3, len(errs))
                fits[int(k)] = fit_slope(element_counts[-n_fit:], errs[-n_fit:])
    elif mode == "p":
        e = int(cfg.elements) if np.ndim(cfg.elements) == 0 else len(cfg.elements) - 1
        for k in degrees:
            sub = dataclasses.replace(cfg, degree=int(k), snapshots=(),
                                      name=cfg.name).validate()
            _, _, summary, _ = run_solve(sub)
            rows.append((int(k), e, summary["error_max"], summary["error_at_zero"]))
    else:
        raise ConfigError("converge mode must be 'h' or 'p', got %r" % (mode,))
    return rows, fits


def fit_slope(element_counts, errors):
    """Least-squares slope of log(error) against log(elements)."""
    x = np.log(np.asarray(element_counts, dtype=float))
    y = np.log(np.asarray(errors, dtype=float))
    return float(np.polyfit(x, y, 1)[0])


def cmd_converge(cfg, out_base, mode, degrees, element_counts):
    t0 = time.perf_counter()
    if cfg.exact_problem() is None:
        raise ConfigError("converge needs a config with a closed-form exact "
                          "solution (single cos/sin source term, s <= 2)")
    rows, fits = converge_rows(cfg, mode, degrees, element_counts)
    out = runio.ensure_outdir(out_base, cfg.name)
    runio.write_convergence_csv(os.path.join(out, "convergence.csv"), rows)
    summary = {
        "config": cfg.to_dict(),
        "mode": mode,
        "degrees": [int(k) for k in degrees],
        "elements": [int(e) for e in element_counts] if mode == "h" else None,
        "fits": [[k, s] for k, s in sorted(fits.items())],
    }
    runio.write_summary(os.path.join(out, "summary.json"), summary)
    runio.write_timing(out, time.perf_counter() - t0)
    for k, e, err, _ in rows:
        print("k=%-2d elements=%-3d max_error=%.3e" % (k, e, err))
    for k, s in sorted(fits.items()):
        print("k=%-2d fitted slope %.3f (expected %.1f)" % (k, s, -(k + 1)))
    return out


STUDY_DEFAULTS = {"t_final": 40.0, "turnon_t_final": 70.0, "tau": 30.0,
                  "delta_hat": 0.15, "snapshots": [8.0]}


def cmd_constraint_study(cfg, out_base):
    """The three impulsive-start scenarios: cos, sin, cos with turn-on."""
    study = dict(STUDY_DEFAULTS)
    study.update(cfg.constraint_study or {})
    t_final = float(study["t_final"])
    t_on = float(study["turnon_t_final"])
    snaps = [float(s) for s in study["snapshots"]]
    scenarios = [
        ("cos-trivial", Cos(), t_final, None),
        ("sin-trivial", Sin(), t_final, None),
        ("cos-turnon", Cos(), t_on,
         {"tau": float(study["tau"]), "delta_hat": float(study["delta_hat"]),
          "include_g": False}),
    ]
    outs = []
    for name, amp, tf, turnon in scenarios:
        sub = dataclasses.replace(
            cfg, name="%s-%s" % (cfg.name, name),
            source=SourceSpec(((1, amp),)), initial_data="trivial",
            exact_mode="global", t_final=tf, turnon=turnon,
            snapshots=tuple(s for s in snaps if s <= tf) + (tf,),
            converge=None, constraint_study=None).validate()
        outs.append(cmd_solve(sub, out_base))
    return outs


def cmd_exact(args):
    amp = {"cos": Cos(), "sin": Sin()}.get(args.amplitude)
    if amp is None:
        amp = timefn.from_dict(json.loads(args.amplitude))
    problem = ExactProblem(args.s, amp)
    if not problem.has_closed_form():
        problem = ExactProblem(args.s, amp, "quadrature")
    point = SidedPoint(args.x, args.side)
    result = {"t": args.t, "x": args.x, "side": args.side, "s": args.s,
              "amplitude": amp.to_dict()}
    if problem.has_closed_form():
        for mode in ("global", "causal"):
            v = exact_eval(problem, args.t, point, mode)
            result[mode] = {"classical": v.classical,
                            "delta_coeffs": [[m, c] for m, c in v.delta_coeffs]}
    else:
        v = exact_eval(problem, args.t, point, "causal")
        result["causal"] = {"classical": v.classical,
                            "delta_coeffs": [[m, c] for m, c in v.delta_coeffs]}
    print(json.dumps(result, indent=2, sort_keys=True))
    return result


def _int_list(text):
    return [int(v) for v in text.split(",") if v.strip()]


_EPILOG = """\
CSV schemas (see deltadg/csv_schema.json for the full description):
  solution.csv / exact.csv: t, element, node_index, x, psibar, pi, phi
  diagnostics.csv: t, max_constraint, l2_constraint, offset_left, offset_right
  convergence.csv: degree, elements, max_error, error_at_zero
All floats carry 17 significant digits; files are RFC 4180 CSV.
"""


def build_parser():
    p = argparse.ArgumentParser(
        prog="deltadg",
        description="DG solver for 1+1 wave equations forced by Dirac delta "
                    "derivatives",
        epilog=_EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True)

    def add_common(sp):
        sp.add_argument("--config", required=True, help="JSON config file")
        sp.add_argument("--out", default="out", help="output directory root")
        sp.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                        help="override a config field (JSON value; flags win)")

    solve = sub.add_parser("solve", help="run one evolution and write artifacts")
    add_common(solve)

    conv = sub.add_parser("converge", help="h- or p-convergence sweep")
    add_common(conv)
    conv.add_argument("--mode", choices=("h", "p"), help="sweep type "
                      "(default from config.converge.mode, else h)")
    conv.add_argument("--degrees", type=_int_list,
                      help="comma-separated degrees, e.g. 2,3,4,5")
    conv.add_argument("--elements", type=_int_list,
                      help="comma-separated element counts (h-mode)")

    study = sub.add_parser("constraint-study",
                           help="impulsive-start scenarios (cos, sin, turn-on)")
    add_common(study)

    ex = sub.add_parser("exact", help="print an exact solution value as JSON")
    ex.add_argument("--amplitude", default="cos",
                    help="cos, sin, or a JSON time-function spec")
    ex.add_argument("--s", type=int, default=0, help="delta derivative order")
    ex.add_argument("--t", type=float, required=True)
    ex.add_argument("--x", type=float, required=True)
    ex.add_argument("--side", choices=("left", "right"), default="right")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command == "exact":
            cmd_exact(args)
            return 0
        cfg = load_config(args.config, args.set)
        if args.command == "solve":
            cmd_solve(cfg, args.out)
        elif args.command == "converge":
            conv = cfg.converge or {}
            mode = args.mode or conv.get("mode", "h")
            default_degrees = [2, 3, 4, 5] if mode == "h" else list(range(2, 13))
            degrees = args.degrees or conv.get("degrees") or default_degrees
            elements = args.elements or conv.get("elements") or [4, 8, 16, 32]
            cmd_converge(cfg, args.out, mode, degrees, elements)
        elif args.command == "constraint-study":
            cmd_constraint_study(cfg, args.out)
        return 0
    except (ConfigError, ExactEvalError) as e:
        print("error: %s" % e, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
