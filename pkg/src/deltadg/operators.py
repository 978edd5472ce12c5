"""Semi-discrete DG operators for the first-order wave system.

Strong-form nodal DG with the diagonal LGL mass matrix: per element

    dU/dt = -(2/h) D F(U) - Vhat + (2/h) M^{-1} [(F(U) - F*) l]_endpoints,

with U = (psibar, pi, phi), flux F(U) = (0, phi, pi) and
Vhat = (pi, V psibar, 0).  Interfaces couple through an upwind flux built
from the characteristic variables w+- = (pi +- phi)/2 (w+ travels right and
is taken from the left element, w- travels left and is taken from the
right).  The delta forcing enters purely as a time-dependent addition to
the two one-sided numerical fluxes at the x = 0 interface; physical
boundaries are closed by ghost states whose incoming characteristic is
zero (Sommerfeld).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import timefn
from .mesh import GridFunction, StateVector
from .timefn import TimeFunction


@dataclass(frozen=True)
class FluxTriple:
    """Numerical flux per equation at one interface.

    ``pi`` is the flux entering the pi equation (the upwinded phi value,
    w+ - w-) and ``phi`` the flux entering the phi equation (the upwinded
    pi value, w+ + w-).  The psibar flux row is identically zero.
    """

    psibar: float
    pi: float
    phi: float


def upwind_flux(left_state, right_state):
    """Upwind flux from (pi, phi) endpoint values on either side.

    Written in average-plus-jump form so that identical states reproduce
    F(U) = (0, phi, pi) bit for bit.
    """
    pi_l, phi_l = left_state
    pi_r, phi_r = right_state
    flux_pi = 0.5 * (phi_l + phi_r) + 0.5 * (pi_l - pi_r)
    flux_phi = 0.5 * (pi_l + pi_r) + 0.5 * (phi_l - phi_r)
    return FluxTriple(0.0, flux_pi, flux_phi)


@dataclass(frozen=True)
class InterfaceMod:
    """Time-dependent flux additions at the x = 0 interface.

    L sources the left-moving characteristic (added to the left element's
    flux as (0, -L, +L)) and R the right-moving one (added to the right
    element's flux as (0, R, R)).
    """

    L: TimeFunction
    R: TimeFunction


def interface_modification(reduced):
    """L = (G + dF/dt)/2 and R = (G - dF/dt)/2 from a reduced source."""
    fdot = reduced.F.derivative()
    L = timefn.scale(0.5, timefn.add(reduced.G, fdot))
    R = timefn.scale(0.5, timefn.add(reduced.G, timefn.scale(-1.0, fdot)))
    return InterfaceMod(L, R)


@dataclass(frozen=True)
class Potential:
    """Potential V(x) registry: zero, constant, or gaussian A exp(-((x-x0)/sigma)^2)."""

    kind: str = "zero"
    c: float = 0.0
    amplitude: float = 0.0
    x0: float = 0.0
    sigma: float = 1.0

    def __post_init__(self):
        if self.kind not in ("zero", "constant", "gaussian"):
            raise ValueError("unknown potential kind %r" % (self.kind,))
        if self.kind == "gaussian" and self.sigma <= 0:
            raise ValueError("gaussian potential needs sigma > 0")

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if self.kind == "zero":
            return np.zeros_like(x)
        if self.kind == "constant":
            return np.full_like(x, self.c)
        return self.amplitude * np.exp(-(((x - self.x0) / self.sigma) ** 2))

    def value_at_zero(self):
        return float(self(0.0))

    def slope_at_zero(self):
        if self.kind in ("zero", "constant"):
            return 0.0
        return float(self.amplitude * (2.0 * self.x0 / self.sigma ** 2)
                     * math.exp(-((self.x0 / self.sigma) ** 2)))

    def is_zero(self):
        return self.kind == "zero" or (self.kind == "constant" and self.c == 0.0) \
            or (self.kind == "gaussian" and self.amplitude == 0.0)

    def sample(self, mesh, basis):
        return GridFunction(mesh, basis, self(mesh.element_nodes(basis)))

    def to_dict(self):
        if self.kind == "zero":
            return {"kind": "zero"}
        if self.kind == "constant":
            return {"kind": "constant", "c": self.c}
        return {"kind": "gaussian", "amplitude": self.amplitude,
                "x0": self.x0, "sigma": self.sigma}

    @classmethod
    def from_dict(cls, d):
        kind = d.get("kind", "zero")
        if kind == "zero":
            return cls()
        if kind == "constant":
            return cls(kind="constant", c=float(d["c"]))
        if kind == "gaussian":
            return cls(kind="gaussian", amplitude=float(d["amplitude"]),
                       x0=float(d.get("x0", 0.0)), sigma=float(d.get("sigma", 1.0)))
        raise ValueError("unknown potential kind %r" % (kind,))


class WaveOperator:
    """Precomputed right-hand side for one mesh/basis/potential/mod choice.

    The heavy pieces (differentiation matrix, inverse-mass lift factors,
    potential samples) are assembled once; ``rhs_data`` is then a pure
    function of (state array, t) and is safe to call from RK stages.
    """

    def __init__(self, mesh, basis, potential=None, mod=None):
        self.mesh = mesh
        self.basis = basis
        self.mod = mod
        h = mesh.widths
        self.scale = 2.0 / h
        w = basis.weights
        self.lift_l = 2.0 / (h * w[0])
        self.lift_r = 2.0 / (h * w[-1])
        self.d_t = basis.diff_matrix.T.copy()
        if potential is None or potential.is_zero():
            self.v = None
        else:
            self.v = potential.sample(mesh, basis).values
        # element indices flanking the x = 0 interface
        self.el_left = mesh.interface_index - 1
        self.el_right = mesh.interface_index

    def rhs_data(self, data, t):
        psibar, pi, phi = data
        e = self.mesh.n_elements
        sc = self.scale[:, None]

        dpsibar = -pi
        dpi = -sc * (phi @ self.d_t)
        dphi = -sc * (pi @ self.d_t)
        if self.v is not None:
            dpi -= self.v * psibar

        # one-sided states at the E+1 interfaces; zero ghosts realize the
        # Sommerfeld closure (only the ghost's incoming characteristic is
        # ever used by the upwinding, and it is zero)
        pi_l = np.empty(e + 1)
        phi_l = np.empty(e + 1)
        pi_r = np.empty(e + 1)
        phi_r = np.empty(e + 1)
        pi_l[0] = phi_l[0] = 0.0
        pi_r[e] = phi_r[e] = 0.0
        pi_l[1:] = pi[:, -1]
        phi_l[1:] = phi[:, -1]
        pi_r[:e] = pi[:, 0]
        phi_r[:e] = phi[:, 0]

        # average-plus-jump grouping (= characteristic upwinding, exact
        # consistency for equal states)
        fpi = 0.5 * (phi_l + phi_r) + 0.5 * (pi_l - pi_r)   # phi* for the pi eq
        fphi = 0.5 * (pi_l + pi_r) + 0.5 * (phi_l - phi_r)  # pi* for the phi eq

        dpi[:, 0] -= self.lift_l * (phi[:, 0] - fpi[:e])
        dpi[:, -1] += self.lift_r * (phi[:, -1] - fpi[1:])
        dphi[:, 0] -= self.lift_l * (pi[:, 0] - fphi[:e])
        dphi[:, -1] += self.lift_r * (pi[:, -1] - fphi[1:])

        if self.mod is not None:
            lv = float(self.mod.L(t))
            rv = float(self.mod.R(t))
            el, er = self.el_left, self.el_right
            # F*_left += (0, -L, +L); F*_right += (0, R, R); the lift sign
            # is -(F*-change) scaled by 2/(h w) at the touched endpoint
            dpi[el, -1] += self.lift_r[el] * lv
            dphi[el, -1] -= self.lift_r[el] * lv
            dpi[er, 0] += self.lift_l[er] * rv
            dphi[er, 0] += self.lift_l[er] * rv

        return np.stack([dpsibar, dpi, dphi])

    def __call__(self, data, t):
        return self.rhs_data(data, t)


def rhs(state, t, mesh=None, basis=None, potential=None, mod=None, bc="sommerfeld"):
    """One-shot semi-discrete RHS evaluation (builds a WaveOperator).

    Prefer constructing a WaveOperator once when stepping in time.
    """
    if bc != "sommerfeld":
        raise ValueError("only the sommerfeld boundary closure is supported")
    mesh = mesh or state.mesh
    basis = basis or state.basis
    if mesh is not state.mesh or basis is not state.basis:
        raise ValueError("state does not conform to the given mesh/basis")
    op = WaveOperator(mesh, basis, potential=potential, mod=mod)
    return state.with_data(op.rhs_data(state.data, t))


class AdvectionOperator:
    """Scalar upwind DG for d(psi)/dt = -d(psi)/dx with a delta source at 0.

    The numerical flux is the left value; at the x = 0 interface the right
    element's incoming flux gains amplitude(t).  The left boundary copies
    the interior value (free closure: constant states are steady, and the
    demo solutions vanish there anyway); outflow at x = b is pure upwind.
    """

    def __init__(self, mesh, basis, amplitude=None):
        self.mesh = mesh
        self.basis = basis
        self.amplitude = amplitude
        h = mesh.widths
        self.scale = 2.0 / h
        w = basis.weights
        self.lift_l = 2.0 / (h * w[0])
        self.d_t = basis.diff_matrix.T.copy()
        self.el_right = mesh.interface_index

    def rhs_values(self, u, t):
        e = self.mesh.n_elements
        du = -self.scale[:, None] * (u @ self.d_t)
        # upwind flux u* = u_left; at the right endpoint F - F* vanishes
        ustar = np.empty(e)
        ustar[0] = u[0, 0]
        ustar[1:] = u[:-1, -1]
        if self.amplitude is not None:
            ustar[self.el_right] += float(self.amplitude(t))
        du[:, 0] -= self.lift_l * (u[:, 0] - ustar)
        return du

    def __call__(self, u, t):
        return self.rhs_values(u, t)


def advection_rhs(psibar, t, mesh=None, basis=None, amplitude=None):
    """One-shot advection RHS on a GridFunction (spec surface)."""
    mesh = mesh or psibar.mesh
    basis = basis or psibar.basis
    op = AdvectionOperator(mesh, basis, amplitude=amplitude)
    return GridFunction(mesh, basis, op.rhs_values(psibar.values, t))
