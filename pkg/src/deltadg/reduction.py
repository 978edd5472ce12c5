"""Canonical reduction of delta-derivative sources.

A forcing sum_n a_n(t) delta^(n)(x) on the wave equation can always be
traded for the two lowest orders, G(t) delta(x) + F(t) delta'(x), by moving
the higher-order content into the dependent variable.  The closed form is

    G = sum_n a_{2n}^{(2n)},        F = sum_n a_{2n+1}^{(2n)},
    b_m = sum_n a_{m+2n+2}^{(2n)}   (delta^(m) coefficient subtracted
                                     from the field, m = 0 .. N-2),

and ``reduce_iterative`` rebuilds the same result by the two-orders-at-a-time
substitution recursion, which serves as an independent cross-check of the
index bookkeeping.  The potential-free path is exact for any number of
derivatives; with a potential only max order 3 is supported.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import timefn
from .timefn import TimeFunction, Zero


@dataclass(frozen=True)
class SourceSpec:
    """Forcing terms as (derivative order n, amplitude a_n(t)) pairs."""

    terms: tuple

    def __post_init__(self):
        terms = tuple((int(n), f) for n, f in self.terms)
        orders = [n for n, _ in terms]
        if any(n < 0 for n in orders):
            raise ValueError("derivative orders must be nonnegative: %r" % (orders,))
        if len(orders) != len(set(orders)):
            raise ValueError("duplicate derivative orders: %r" % (orders,))
        object.__setattr__(self, "terms", terms)

    @property
    def max_order(self):
        return max((n for n, _ in self.terms), default=0)

    def amplitude(self, n):
        for m, f in self.terms:
            if m == n:
                return f
        return Zero()

    def to_dict(self):
        return {"terms": [[n, f.to_dict()] for n, f in self.terms]}

    @classmethod
    def from_dict(cls, d):
        return cls(tuple((int(n), timefn.from_dict(fd)) for n, fd in d["terms"]))


@dataclass(frozen=True)
class ReducedSource:
    """Canonical form: G delta + F delta', plus reconstruction coefficients.

    ``recon`` holds (m, b_m(t)) pairs; the original field is recovered as
    the reduced field plus sum_m b_m(t) delta^(m)(x).
    """

    G: TimeFunction
    F: TimeFunction
    recon: tuple

    def __post_init__(self):
        orders = [m for m, _ in self.recon]
        if len(orders) != len(set(orders)):
            raise ValueError("duplicate reconstruction orders: %r" % (orders,))
        object.__setattr__(self, "recon", tuple(self.recon))

    def is_source_free(self):
        return self.G.is_zero() and self.F.is_zero()


def _collect(pairs):
    """Keep only pairs whose amplitude tree is not identically zero."""
    return tuple((m, f) for m, f in pairs if not f.is_zero())


def reduce(src):
    """Closed-form canonical reduction (potential-free)."""
    n_max = src.max_order
    g = timefn.add(*(src.amplitude(2 * n).derivative(2 * n)
                     for n in range(n_max // 2 + 1)))
    f = timefn.add(*(src.amplitude(2 * n + 1).derivative(2 * n)
                     for n in range((n_max + 1) // 2)))
    recon = []
    for m in range(max(n_max - 1, 0)):
        b = timefn.add(*(src.amplitude(m + 2 * n + 2).derivative(2 * n)
                         for n in range((n_max - m) // 2)))
        recon.append((m, b))
    return ReducedSource(g, f, _collect(recon))


def reduce_iterative(src):
    """Same reduction via the substitution recursion (proof-style oracle).

    Each pass removes the top two derivative orders: subtract
    sum_n c_{n+2} delta^(n) from the field and fold d^2 c_{n+2}/dt^2 back
    into the source, until only orders 0 and 1 remain.
    """
    coeffs = {n: f for n, f in src.terms if not f.is_zero()}
    recon = {}
    while coeffs and max(coeffs) >= 2:
        m_top = max(coeffs)
        # pad to odd so orders drop in matched (even, odd) pairs
        if m_top % 2 == 0:
            m_top += 1
        new = {}
        for n in range(m_top - 1):
            c = coeffs.get(n + 2)
            if c is None:
                continue
            recon[n] = timefn.add(recon.get(n, Zero()), c)
            new[n] = c.derivative(2)
        for n in (0, 1):
            terms = [f for f in (coeffs.get(n), new.get(n)) if f is not None]
            if terms:
                new[n] = timefn.add(*terms)
        for n in list(new):
            if new[n].is_zero():
                del new[n]
        coeffs = new
    g = coeffs.get(0, Zero())
    f = coeffs.get(1, Zero())
    return ReducedSource(g, f, _collect(sorted(recon.items())))


def reduce_with_potential(src, v0, v1):
    """Reduction in the presence of a potential, valid up to order 3.

    v0 and v1 are the potential's value and slope at x = 0.  For orders
    beyond 3 no general closed form is available here.
    """
    if src.max_order > 3:
        raise ValueError("potential reduction supports max order 3, got %d"
                         % src.max_order)
    a0, a1 = src.amplitude(0), src.amplitude(1)
    a2, a3 = src.amplitude(2), src.amplitude(3)
    g = timefn.add(a0, a2.derivative(2),
                   timefn.scale(-v0, a2), timefn.scale(v1, a3))
    f = timefn.add(a1, a3.derivative(2), timefn.scale(-v0, a3))
    return ReducedSource(g, f, _collect([(0, a2), (1, a3)]))
