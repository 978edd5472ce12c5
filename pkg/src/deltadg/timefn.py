"""Closed-form scalar functions of time with exact derivatives of any order.

Source amplitudes, the canonical reduced amplitudes, and the smooth turn-on
window all need high-order time derivatives that stay exact: finite
differencing an amplitude would leak O(h^p) noise into an otherwise
spectrally accurate scheme.  Each node of the expression tree therefore
produces its own closed-form derivative, and trees are immutable so they can
be shared between threads and reused across runs.

The error function is evaluated with ``scipy.special.erf`` (Cephes/libm,
accurate to double precision, well below the 1e-15 requirement).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erf as _erf


class TimeFunction:
    """Base class for immutable closed-form functions of time.

    Subclasses implement ``__call__`` (works on scalars and ndarrays) and
    ``diff`` (first derivative as a new tree).
    """

    def __call__(self, t):
        raise NotImplementedError

    def diff(self):
        raise NotImplementedError

    def derivative(self, k=1):
        """Exact k-th derivative; ``derivative(0)`` is the function itself."""
        if k < 0:
            raise ValueError("derivative order must be >= 0, got %r" % (k,))
        f = self
        for _ in range(k):
            f = f.diff()
        return f

    def is_zero(self):
        """True only for trees that are identically zero by construction."""
        return False

    def to_dict(self):
        raise NotImplementedError


@dataclass(frozen=True)
class Zero(TimeFunction):
    def __call__(self, t):
        return np.zeros_like(np.asarray(t, dtype=float)) + 0.0

    def diff(self):
        return self

    def is_zero(self):
        return True

    def to_dict(self):
        return {"kind": "zero"}


@dataclass(frozen=True)
class Constant(TimeFunction):
    c: float

    def __call__(self, t):
        return np.full_like(np.asarray(t, dtype=float), self.c) + 0.0

    def diff(self):
        return Zero()

    def to_dict(self):
        return {"kind": "constant", "c": self.c}


@dataclass(frozen=True)
class Cos(TimeFunction):
    """cos(omega * t)."""

    omega: float = 1.0

    def __call__(self, t):
        return np.cos(self.omega * np.asarray(t, dtype=float))

    def diff(self):
        return Scaled(-self.omega, Sin(self.omega))

    def to_dict(self):
        return {"kind": "cos", "omega": self.omega}


@dataclass(frozen=True)
class Sin(TimeFunction):
    """sin(omega * t)."""

    omega: float = 1.0

    def __call__(self, t):
        return np.sin(self.omega * np.asarray(t, dtype=float))

    def diff(self):
        return Scaled(self.omega, Cos(self.omega))

    def to_dict(self):
        return {"kind": "sin", "omega": self.omega}


@dataclass(frozen=True)
class Polynomial(TimeFunction):
    """coeffs[0] + coeffs[1] t + coeffs[2] t^2 + ..."""

    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(float(c) for c in self.coeffs))

    def __call__(self, t):
        return np.polynomial.polynomial.polyval(np.asarray(t, dtype=float), self.coeffs)

    def diff(self):
        if len(self.coeffs) <= 1:
            return Zero()
        return Polynomial(tuple(i * c for i, c in enumerate(self.coeffs) if i > 0))

    def is_zero(self):
        return all(c == 0.0 for c in self.coeffs)

    def to_dict(self):
        return {"kind": "polynomial", "coeffs": list(self.coeffs)}


@dataclass(frozen=True)
class ErfWindow(TimeFunction):
    """Smooth turn-on window (erf(sqrt(rate) (t - tau/2)) + 1) / 2.

    Rises from ~0 at t=0 to 1 over the timescale ``tau``.  The parameter
    is named ``delta_hat`` to avoid any collision with the spatial delta
    distribution handled elsewhere in the package.
    """

    tau: float
    delta_hat: float

    def _z(self, t):
        return math.sqrt(self.delta_hat) * (np.asarray(t, dtype=float) - 0.5 * self.tau)

    def __call__(self, t):
        return 0.5 * (_erf(self._z(t)) + 1.0)

    def diff(self):
        return GaussHermite(0, self.tau, self.delta_hat)

    def to_dict(self):
        return {"kind": "erf_window", "tau": self.tau, "delta_hat": self.delta_hat}


@dataclass(frozen=True)
class GaussHermite(TimeFunction):
    """(-1)^n r^(n+1) / sqrt(pi) * H_n(z) exp(-z^2) with z = r (t - tau/2).

    This is the n-th derivative of the error-function window's first
    derivative (r = sqrt(delta_hat)); differentiating increments n, using
    d/dz [H_n e^{-z^2}] = -H_{n+1} e^{-z^2}.
    """

    n: int
    tau: float
    delta_hat: float

    def __call__(self, t):
        r = math.sqrt(self.delta_hat)
        z = r * (np.asarray(t, dtype=float) - 0.5 * self.tau)
        h_prev, h = np.zeros_like(z), np.ones_like(z)
        for m in range(self.n):
            h_prev, h = h, 2.0 * z * h - 2.0 * m * h_prev
        sign = -1.0 if self.n % 2 else 1.0
        return sign * r ** (self.n + 1) / math.sqrt(math.pi) * h * np.exp(-z * z)

    def diff(self):
        return GaussHermite(self.n + 1, self.tau, self.delta_hat)

    def to_dict(self):
        return {"kind": "gauss_hermite", "n": self.n, "tau": self.tau,
                "delta_hat": self.delta_hat}


@dataclass(frozen=True)
class Sum(TimeFunction):
    terms: tuple

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))

    def __call__(self, t):
        out = np.zeros_like(np.asarray(t, dtype=float)) + 0.0
        for f in self.terms:
            out = out + f(t)
        return out

    def diff(self):
        return add(*(f.diff() for f in self.terms))

    def is_zero(self):
        return all(f.is_zero() for f in self.terms)

    def to_dict(self):
        return {"kind": "sum", "terms": [f.to_dict() for f in self.terms]}


@dataclass(frozen=True)
class Product(TimeFunction):
    a: TimeFunction
    b: TimeFunction

    def __call__(self, t):
        return self.a(t) * self.b(t)

    def diff(self):
        return add(multiply(self.a.diff(), self.b), multiply(self.a, self.b.diff()))

    def is_zero(self):
        return self.a.is_zero() or self.b.is_zero()

    def to_dict(self):
        return {"kind": "product", "a": self.a.to_dict(), "b": self.b.to_dict()}


@dataclass(frozen=True)
class Scaled(TimeFunction):
    c: float
    inner: TimeFunction

    def __call__(self, t):
        return self.c * self.inner(t)

    def diff(self):
        return scale(self.c, self.inner.diff())

    def is_zero(self):
        return self.c == 0.0 or self.inner.is_zero()

    def to_dict(self):
        return {"kind": "scaled", "c": self.c, "inner": self.inner.to_dict()}


def add(*terms):
    """Sum of trees with zero terms pruned and nested sums flattened."""
    flat = []
    for f in terms:
        if f.is_zero():
            continue
        if isinstance(f, Sum):
            flat.extend(f.terms)
        else:
            flat.append(f)
    if not flat:
        return Zero()
    if len(flat) == 1:
        return flat[0]
    return Sum(tuple(flat))


def multiply(a, b):
    if a.is_zero() or b.is_zero():
        return Zero()
    return Product(a, b)


def scale(c, f):
    if c == 0.0 or f.is_zero():
        return Zero()
    if c == 1.0:
        return f
    if isinstance(f, Scaled):
        return scale(c * f.c, f.inner)
    return Scaled(float(c), f)


def evaluate(f, t):
    """Evaluate ``f`` at time ``t`` (spec surface for ``f(t)``)."""
    return f(t)


def derivative(f, k=1):
    """Exact k-th derivative of ``f`` as a new tree."""
    return f.derivative(k)


_KINDS = {
    "zero": lambda d: Zero(),
    "constant": lambda d: Constant(float(d["c"])),
    "cos": lambda d: Cos(float(d.get("omega", 1.0))),
    "sin": lambda d: Sin(float(d.get("omega", 1.0))),
    "polynomial": lambda d: Polynomial(tuple(d["coeffs"])),
    "erf_window": lambda d: ErfWindow(float(d["tau"]), float(d["delta_hat"])),
    "gauss_hermite": lambda d: GaussHermite(int(d["n"]), float(d["tau"]),
                                            float(d["delta_hat"])),
    "sum": lambda d: add(*(from_dict(x) for x in d["terms"])),
    "product": lambda d: multiply(from_dict(d["a"]), from_dict(d["b"])),
    "scaled": lambda d: scale(float(d["c"]), from_dict(d["inner"])),
}


def from_dict(d):
    """Build a TimeFunction from its tagged-dict form, e.g. {"kind": "cos"}."""
    try:
        kind = d["kind"]
    except (TypeError, KeyError):
        raise ValueError("time function spec must be a dict with a 'kind' tag, got %r" % (d,))
    if kind not in _KINDS:
        raise ValueError("unknown time function kind %r (expected one of %s)"
                         % (kind, ", ".join(sorted(_KINDS))))
    return _KINDS[kind](d)
