"""Advection demo: the scalar prototype of the flux-modification idea.

d(psi)/dt + d(psi)/dx = a1(t) delta'(x) is solved by moving the delta into
the unknown: psibar = psi - a1(t) delta(x) obeys

    d(psibar)/dt + d(psibar)/dx = -a1'(t) delta(x),

whose particular solution is H(x) g(t - x) with g = -a1'.  The demo evolves
psibar with the upwind flux modification at x = 0 and reports the delta
coefficient a1(t) of the full solution separately.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import timefn
from .integrate import _rk4_array, cfl_timestep
from .mesh import DistributionalPart, GridFunction, heaviside_on_grid
from .operators import AdvectionOperator
from .timefn import Zero


@dataclass
class AdvectionDemoResult:
    psibar: GridFunction
    exact: GridFunction
    delta_part: DistributionalPart
    dt: float
    n_steps: int


def advection_exact(mesh, basis, a1, t):
    """Particular solution H(x) g(t - x), g = -a1', with the sided H at 0."""
    g = timefn.scale(-1.0, a1.derivative())
    h = heaviside_on_grid(mesh, basis, "right_moving").values
    x = mesh.element_nodes(basis)
    return GridFunction(mesh, basis, h * np.asarray(g(t - x)))


def advection_demo(mesh, basis, a1, t_final, cfl=0.5):
    """Evolve the reduced advection problem from its exact initial data."""
    amplitude = timefn.scale(-1.0, a1.derivative())
    op = AdvectionOperator(mesh, basis, amplitude)
    u = advection_exact(mesh, basis, a1, 0.0).values
    dt0 = cfl_timestep(mesh, basis, cfl)
    n = max(1, int(math.ceil(t_final / dt0 - 1e-12)))
    dt = t_final / n
    for i in range(n):
        u = _rk4_array(u, i * dt, dt, op.rhs_values)
    return AdvectionDemoResult(
        GridFunction(mesh, basis, u),
        advection_exact(mesh, basis, a1, t_final),
        DistributionalPart(((0, a1),), Zero()),
        dt, n)
