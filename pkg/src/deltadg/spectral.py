"""Reference-element machinery: LGL nodes, weights, differentiation matrix.

Nodes are the roots of (1 - x^2) P'_k(x), found by Newton iteration from
Chebyshev-Gauss-Lobatto initial guesses (tolerance 1e-15, at most 100
sweeps).  The differentiation matrix and the interpolation routine both use
barycentric weights, which stay well conditioned up to the supported degree.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MAX_DEGREE = 32


@dataclass(frozen=True, eq=False)
class ElementBasis:
    """Degree-k nodal basis on [-1, 1] built from LGL points.

    Attributes
    ----------
    degree : int
        Polynomial degree k; there are k+1 nodes including both endpoints.
    nodes, weights : ndarray, shape (k+1,)
        LGL quadrature nodes (ascending, nodes[0] = -1, nodes[-1] = +1) and
        positive weights summing to 2.
    diff_matrix : ndarray, shape (k+1, k+1)
        Nodal derivative operator: (diff_matrix @ u) samples du/dx at nodes.
    bary_weights : ndarray, shape (k+1,)
        Barycentric interpolation weights (normalized to unit max).
    """

    degree: int
    nodes: np.ndarray
    weights: np.ndarray
    diff_matrix: np.ndarray
    bary_weights: np.ndarray

    @property
    def n_nodes(self):
        return self.degree + 1


def lgl_nodes_weights(k):
    """LGL nodes and weights for degree k (k+1 points on [-1, 1])."""
    n = k + 1
    x = -np.cos(np.pi * np.arange(n) / k)
    p = np.zeros((n, n))
    for _ in range(100):
        x_old = x.copy()
        p[:, 0] = 1.0
        p[:, 1] = x
        for m in range(2, n):
            p[:, m] = ((2 * m - 1) * x * p[:, m - 1] - (m - 1) * p[:, m - 2]) / m
        x = x_old - (x * p[:, k] - p[:, k - 1]) / (n * p[:, k])
        if np.max(np.abs(x - x_old)) < 1e-15:
            break
    x[0], x[-1] = -1.0, 1.0
    w = 2.0 / (k * n * p[:, k] ** 2)
    return x, w


def _barycentric_weights(nodes):
    n = len(nodes)
    w = np.ones(n)
    for i in range(n):
        w[i] = 1.0 / np.prod(nodes[i] - np.delete(nodes, i))
    return w / np.max(np.abs(w))


def build_basis(k):
    """Construct the degree-k ElementBasis (1 <= k <= 32)."""
    if not 1 <= k <= MAX_DEGREE:
        raise ValueError("degree must be in 1..%d, got %r" % (MAX_DEGREE, k))
    nodes, weights = lgl_nodes_weights(k)
    bw = _barycentric_weights(nodes)
    n = k + 1
    d = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            if i != j:
                d[i, j] = (bw[j] / bw[i]) / (nodes[i] - nodes[j])
        d[i, i] = -np.sum(d[i, :])
    for arr in (nodes, weights, d, bw):
        arr.setflags(write=False)
    return ElementBasis(k, nodes, weights, d, bw)


def interpolate(basis, nodal_values, xi):
    """Barycentric Lagrange evaluation at xi in [-1, 1].

    Exact (bit-for-bit) at the nodes themselves.
    """
    nodal_values = np.asarray(nodal_values, dtype=float)
    if nodal_values.shape != (basis.n_nodes,):
        raise ValueError("expected %d nodal values, got shape %r"
                         % (basis.n_nodes, nodal_values.shape))
    if abs(xi) > 1.0 + 1e-12:
        raise ValueError("evaluation point %r outside [-1, 1]" % (xi,))
    diff = xi - basis.nodes
    hit = np.nonzero(diff == 0.0)[0]
    if hit.size:
        return nodal_values[hit[0]]
    r = basis.bary_weights / diff
    return float(np.dot(r, nodal_values) / np.sum(r))
