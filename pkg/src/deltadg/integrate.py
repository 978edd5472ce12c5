"""Explicit time integration: classic RK4 with CFL-based step selection.

The default step is dt = cfl * h_min / (2k + 1), shrunk so every snapshot
time (and the final time) is hit by an integer number of steps; snapshots
are never produced by interpolation in time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .mesh import StateVector, energy


def step_rk4(state, t, dt, rhs):
    """Classic four-stage RK4 update; works on ndarrays and StateVectors."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    if isinstance(state, StateVector):
        if hasattr(rhs, "rhs_data"):
            return state.with_data(_rk4_array(state.data, t, dt, rhs.rhs_data))

        def fn(u, tt):
            return rhs(state.with_data(u), tt).data

        return state.with_data(_rk4_array(state.data, t, dt, fn))
    return _rk4_array(np.asarray(state, dtype=float), t, dt, rhs)


def _rk4_array(u, t, dt, rhs):
    k1 = rhs(u, t)
    k2 = rhs(u + 0.5 * dt * k1, t + 0.5 * dt)
    k3 = rhs(u + 0.5 * dt * k2, t + 0.5 * dt)
    k4 = rhs(u + dt * k3, t + dt)
    return u + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def cfl_timestep(mesh, basis, cfl=0.5):
    """Default stable step for unit wave speed."""
    h_min = float(np.min(mesh.widths))
    return cfl * h_min / (2 * basis.degree + 1)


@dataclass(frozen=True)
class TimeStepper:
    """Resolved stepping plan: base dt, final time, snapshot schedule."""

    dt: float
    t_final: float
    snapshot_times: tuple = ()

    def segments(self):
        """(t_start, t_end, n_steps) pieces covering [0, t_final].

        Each segment ends on a snapshot time (or t_final) and is crossed
        with an integer number of equal steps no larger than dt.
        """
        targets = sorted(set(list(self.snapshot_times) + [self.t_final]))
        targets = [t for t in targets if 0.0 < t <= self.t_final]
        out = []
        t0 = 0.0
        for t1 in targets:
            span = t1 - t0
            n = max(1, int(math.ceil(span / self.dt - 1e-12)))
            out.append((t0, t1, n))
            t0 = t1
        return out


@dataclass(frozen=True)
class InitialData:
    """Start-up selector: exact fields, trivial (all-zero), or custom."""

    kind: str = "trivial"
    state: StateVector = None

    def __post_init__(self):
        if self.kind not in ("trivial", "exact", "custom"):
            raise ValueError("initial data kind must be trivial, exact or custom")
        if self.kind == "custom" and self.state is None:
            raise ValueError("custom initial data needs a state")


@dataclass
class EvolveResult:
    final_state: StateVector
    snapshots: list = field(default_factory=list)  # (t, StateVector) pairs
    dt: float = 0.0
    n_steps: int = 0


def evolve(operator, initial_state, t_final, cfl=0.5, dt=None, snapshot_times=(),
           energy_check=False):
    """Integrate the semi-discrete system from t = 0 to t_final.

    ``operator`` is a WaveOperator (or any rhs_data-style callable bound to
    the state's mesh/basis).  When ``energy_check`` is set (source-free
    sanity mode) a more than tenfold growth of the discrete energy aborts
    the run, which catches a manually overridden unstable dt.

    Returns an EvolveResult whose snapshots hit the requested times exactly.
    """
    if t_final < 0:
        raise ValueError("t_final must be nonnegative")
    state = initial_state
    snaps = []
    wanted = sorted(set(snapshot_times))
    if any(t < 0 or t > t_final for t in wanted):
        raise ValueError("snapshot times must lie in [0, t_final]")
    if 0.0 in wanted:
        snaps.append((0.0, state))
    if t_final == 0.0:
        return EvolveResult(state, snaps, 0.0, 0)

    dt0 = dt if dt is not None else cfl_timestep(state.mesh, state.basis, cfl)
    plan = TimeStepper(dt0, t_final, tuple(wanted))
    e0 = energy(state) if energy_check else 0.0
    total = 0
    for t0, t1, n in plan.segments():
        h = (t1 - t0) / n
        data = state.data
        for i in range(n):
            data = _rk4_array(data, t0 + i * h, h, operator.rhs_data)
        state = state.with_data(data)
        total += n
        if energy_check and e0 > 0.0 and energy(state) > 10.0 * e0:
            raise RuntimeError("discrete energy grew more than tenfold; "
                               "time step dt=%g is unstable" % dt0)
        if t1 in wanted or t1 == t_final:
            snaps.append((t1, state))
    return EvolveResult(state, snaps, dt0, total)
