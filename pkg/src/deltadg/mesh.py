"""Domain partition, grid functions, and the split state representation.

The mesh always carries a breakpoint at x = 0 (bitwise zero): the forcing
lives there and the solution is allowed to jump across it, so the point must
be an element interface.  Interface nodes are duplicated, each element owns
its own endpoint copy, and nothing is ever averaged across an interface.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .spectral import ElementBasis, interpolate
from .timefn import TimeFunction

LEFT = "left"
RIGHT = "right"


@dataclass(frozen=True)
class SidedPoint:
    """Point with a one-sided limit selector; side matters only at breakpoints."""

    x: float
    side: str = RIGHT

    def __post_init__(self):
        if self.side not in (LEFT, RIGHT):
            raise ValueError("side must be 'left' or 'right', got %r" % (self.side,))


@dataclass(frozen=True, eq=False)
class Mesh:
    """Partition a = x_0 < x_1 < ... < x_E = b with an interface at 0."""

    breakpoints: np.ndarray

    def __post_init__(self):
        bp = np.asarray(self.breakpoints, dtype=float)
        if bp.ndim != 1 or bp.size < 2:
            raise ValueError("need at least two breakpoints")
        if np.any(np.diff(bp) <= 0):
            raise ValueError("breakpoints must be strictly increasing")
        if not np.any(bp == 0.0):
            raise ValueError("no breakpoint at x = 0; the interface must sit "
                             "exactly on the source location")
        if bp[0] >= 0.0 or bp[-1] <= 0.0:
            raise ValueError("domain must satisfy a < 0 < b, got [%g, %g]"
                             % (bp[0], bp[-1]))
        bp = bp.copy()
        bp.setflags(write=False)
        object.__setattr__(self, "breakpoints", bp)

    @property
    def a(self):
        return float(self.breakpoints[0])

    @property
    def b(self):
        return float(self.breakpoints[-1])

    @property
    def n_elements(self):
        return self.breakpoints.size - 1

    @property
    def widths(self):
        return np.diff(self.breakpoints)

    @property
    def interface_index(self):
        """Breakpoint index j with x_j = 0."""
        return int(np.nonzero(self.breakpoints == 0.0)[0][0])

    def element_nodes(self, basis):
        """Physical node coordinates, shape (E, k+1); endpoints exact."""
        xl = self.breakpoints[:-1, None]
        xr = self.breakpoints[1:, None]
        x = xl + 0.5 * (basis.nodes[None, :] + 1.0) * (xr - xl)
        x[:, 0] = xl[:, 0]
        x[:, -1] = xr[:, 0]
        return x

    def element_of(self, x):
        """Index of the element whose interior contains x (ties go right)."""
        if x < self.a or x > self.b:
            raise ValueError("point %r outside domain [%g, %g]" % (x, self.a, self.b))
        idx = int(np.searchsorted(self.breakpoints, x, side="right")) - 1
        return min(max(idx, 0), self.n_elements - 1)


def build_mesh(a, b, elements):
    """Uniform mesh from an element count, or validate explicit breakpoints.

    A count is accepted only when the uniform partition of [a, b] places a
    breakpoint exactly at 0; otherwise this raises.
    """
    if np.ndim(elements) == 0:
        e = int(elements)
        if e < 1:
            raise ValueError("element count must be positive, got %r" % (elements,))
        if a >= b:
            raise ValueError("domain requires a < b, got [%g, %g]" % (a, b))
        j = -a * e / (b - a)
        if abs(j - round(j)) > 1e-9 * e:
            raise ValueError("uniform partition of [%g, %g] into %d elements has "
                             "no breakpoint at 0" % (a, b, e))
        bp = np.linspace(a, b, e + 1)
        bp[int(round(j))] = 0.0
        return Mesh(bp)
    bp = np.asarray(elements, dtype=float)
    if bp[0] != a or bp[-1] != b:
        raise ValueError("explicit breakpoints must span [a, b]")
    return Mesh(bp)


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Per-element nodal values, shape (E, k+1), on a shared mesh/basis."""

    mesh: Mesh
    basis: ElementBasis
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        expect = (self.mesh.n_elements, self.basis.n_nodes)
        if v.shape != expect:
            raise ValueError("grid values shape %r does not match mesh/basis %r"
                             % (v.shape, expect))
        object.__setattr__(self, "values", v)

    @classmethod
    def zeros(cls, mesh, basis):
        return cls(mesh, basis, np.zeros((mesh.n_elements, basis.n_nodes)))

    @classmethod
    def sample(cls, mesh, basis, fn):
        """Sample a plain callable fn(x) (vectorized) at all nodes."""
        return cls(mesh, basis, np.asarray(fn(mesh.element_nodes(basis)), dtype=float))

    @classmethod
    def sample_sided(cls, mesh, basis, fn):
        """Sample fn(x, sign) where sign is -1 on elements left of 0, +1 right.

        The sign argument resolves sgn(x) and H(x) at the duplicated x = 0
        nodes; away from 0 it simply equals sign(x).
        """
        x = mesh.element_nodes(basis)
        centers = 0.5 * (mesh.breakpoints[:-1] + mesh.breakpoints[1:])
        sign = np.where(centers < 0.0, -1.0, 1.0)[:, None] * np.ones_like(x)
        return cls(mesh, basis, np.asarray(fn(x, sign), dtype=float))

    def eval_sided(self, p):
        """One-sided value at a SidedPoint; interpolates off breakpoints."""
        bp = self.mesh.breakpoints
        hit = np.nonzero(bp == p.x)[0]
        if hit.size:
            j = int(hit[0])
            if j == 0:
                return float(self.values[0, 0])
            if j == self.mesh.n_elements:
                return float(self.values[-1, -1])
            if p.side == LEFT:
                return float(self.values[j - 1, -1])
            return float(self.values[j, 0])
        el = self.mesh.element_of(p.x)
        xl, xr = bp[el], bp[el + 1]
        xi = 2.0 * (p.x - xl) / (xr - xl) - 1.0
        return float(interpolate(self.basis, self.values[el], xi))


def eval_sided(u, p):
    """Module-level alias for GridFunction.eval_sided."""
    return u.eval_sided(p)


def heaviside_on_grid(mesh, basis, direction="right_moving"):
    """Nodal samples of the step function with the interface convention.

    right_moving: H(x), with the duplicated x=0 node set to 0 on elements
    left of the interface and 1 on elements to the right.  left_moving
    mirrors this for H(-x).
    """
    if direction not in ("right_moving", "left_moving"):
        raise ValueError("direction must be right_moving or left_moving")
    centers = 0.5 * (mesh.breakpoints[:-1] + mesh.breakpoints[1:])
    if direction == "right_moving":
        per_element = np.where(centers > 0.0, 1.0, 0.0)
    else:
        per_element = np.where(centers < 0.0, 1.0, 0.0)
    vals = np.repeat(per_element[:, None], basis.n_nodes, axis=1)
    return GridFunction(mesh, basis, vals)


@dataclass(frozen=True, eq=False)
class StateVector:
    """Classical fields (psibar, pi, phi) stacked as one (3, E, k+1) array.

    pi = -d(psibar)/dt and phi is the delta-free part of d(psibar)/dx; the
    subtracted distributional content is tracked separately in a
    DistributionalPart.
    """

    mesh: Mesh
    basis: ElementBasis
    data: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.data, dtype=float)
        expect = (3, self.mesh.n_elements, self.basis.n_nodes)
        if d.shape != expect:
            raise ValueError("state shape %r does not match %r" % (d.shape, expect))
        object.__setattr__(self, "data", d)

    @classmethod
    def zeros(cls, mesh, basis):
        return cls(mesh, basis, np.zeros((3, mesh.n_elements, basis.n_nodes)))

    @classmethod
    def from_fields(cls, psibar, pi, phi):
        if not (psibar.mesh is pi.mesh is phi.mesh):
            raise ValueError("fields must share one mesh")
        return cls(psibar.mesh, psibar.basis,
                   np.stack([psibar.values, pi.values, phi.values]))

    def with_data(self, data):
        return StateVector(self.mesh, self.basis, data)

    @property
    def psibar(self):
        return GridFunction(self.mesh, self.basis, self.data[0])

    @property
    def pi(self):
        return GridFunction(self.mesh, self.basis, self.data[1])

    @property
    def phi(self):
        return GridFunction(self.mesh, self.basis, self.data[2])


@dataclass(frozen=True)
class DistributionalPart:
    """Delta content carried outside the grid.

    ``coeffs`` holds (order m, c_m(t)) pairs: the full field is the grid
    psibar plus sum_m c_m(t) delta^(m)(x).  ``phi_delta`` records the delta
    coefficient removed from the auxiliary variable (phi_hat = phi + F(t)
    delta).
    """

    coeffs: tuple
    phi_delta: TimeFunction

    def __post_init__(self):
        orders = [m for m, _ in self.coeffs]
        if len(orders) != len(set(orders)):
            raise ValueError("duplicate delta orders in %r" % (orders,))
        object.__setattr__(self, "coeffs", tuple(self.coeffs))


def energy(state):
    """Discrete energy sum_j (h_j/2) sum_i w_i (pi^2 + phi^2)/2."""
    w = state.basis.weights
    h = state.mesh.widths
    dens = 0.5 * (state.data[1] ** 2 + state.data[2] ** 2)
    return float(np.sum(0.5 * h[:, None] * w[None, :] * dens))
