"""CSV/JSON run artifacts.

CSV files are RFC 4180 (CRLF line endings, header on line 1) and floats are
printed with 17 significant digits, so re-running a config reproduces every
artifact byte for byte.  Wall-clock timing goes to a sidecar file to keep
summary.json deterministic.
"""

from __future__ import annotations

import csv
import json
import os

SCHEMA_VERSION = 1

SOLUTION_COLUMNS = ["t", "element", "node_index", "x", "psibar", "pi", "phi"]
DIAGNOSTICS_COLUMNS = ["t", "max_constraint", "l2_constraint",
                       "offset_left", "offset_right"]
CONVERGENCE_COLUMNS = ["degree", "elements", "max_error", "error_at_zero"]


def fmt(x):
    if isinstance(x, float):
        return "%.17g" % x
    return str(x)


def write_csv(path, header, rows):
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) for v in row])


def solution_rows(snapshots):
    """Flatten (t, StateVector) snapshots into solution.csv rows."""
    for t, state in snapshots:
        x = state.mesh.element_nodes(state.basis)
        e, n = x.shape
        for j in range(e):
            for i in range(n):
                yield (float(t), j, i, float(x[j, i]),
                       float(state.data[0, j, i]),
                       float(state.data[1, j, i]),
                       float(state.data[2, j, i]))


def write_solution_csv(path, snapshots):
    write_csv(path, SOLUTION_COLUMNS, solution_rows(snapshots))


def write_diagnostics_csv(path, rows):
    write_csv(path, DIAGNOSTICS_COLUMNS, rows)


def write_convergence_csv(path, rows):
    write_csv(path, CONVERGENCE_COLUMNS, rows)


def write_summary(path, summary):
    summary = dict(summary)
    summary["schema_version"] = SCHEMA_VERSION
    with open(path, "w") as f:
        json.dump(summary, f, indent=2, sort_keys=True)
        f.write("\n")


def write_timing(out_dir, seconds):
    with open(os.path.join(out_dir, "timing.json"), "w") as f:
        json.dump({"wall_seconds": seconds}, f, indent=2)
        f.write("\n")


def ensure_outdir(base, name):
    out = os.path.join(base, name)
    os.makedirs(out, exist_ok=True)
    return out
