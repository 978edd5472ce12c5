"""Nodal DG solver for 1+1 wave equations forced by delta derivatives.

The library is organized around small immutable building blocks:

- ``timefn``: closed-form time functions with exact derivatives
- ``reduction``: canonical reduction of delta-derivative sources
- ``spectral``: LGL reference-element machinery
- ``mesh``: domain partition (interface pinned at x = 0) and grid state
- ``operators``: upwind fluxes, interface source modification, the DG RHS
- ``integrate``: RK4 stepping with CFL step selection
- ``exact``: exact distributional solutions (closed forms and quadrature)
- ``diagnostics``: constraint monitoring and the impulsive-start offset
- ``cli``: experiment drivers writing CSV/JSON artifacts
"""

from .diagnostics import (ConstraintReport, apply_turnon, constraint,
                          offset_by_side, spurious_profile, spurious_solution)
from .exact import (ExactEvalError, ExactProblem, ExactValue, delta_part,
                    error_at_interface, exact_eval, exact_general,
                    green_quadrature, max_nodal_error, sample_reduced_state)
from .integrate import (EvolveResult, InitialData, TimeStepper, cfl_timestep,
                        evolve, step_rk4)
from .mesh import (DistributionalPart, GridFunction, Mesh, SidedPoint,
                   StateVector, build_mesh, energy, eval_sided,
                   heaviside_on_grid)
from .operators import (AdvectionOperator, FluxTriple, InterfaceMod, Potential,
                        WaveOperator, advection_rhs, interface_modification,
                        rhs, upwind_flux)
from .reduction import (ReducedSource, SourceSpec, reduce, reduce_iterative,
                        reduce_with_potential)
from .spectral import ElementBasis, build_basis, interpolate
from .timefn import (Constant, Cos, ErfWindow, Polynomial, Sin, TimeFunction,
                     Zero, derivative, evaluate)

__version__ = "0.1.0"
