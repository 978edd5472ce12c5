from math import comb

import numpy as np


def fd_derivative(f, t, k, h0=0.4, levels=3):
    """Richardson-extrapolated central finite difference of order k.

    Independent oracle for the closed-form derivative trees (never touches
    the trees' own diff machinery).  Uses the binomial central stencil
    sum_j (-1)^j C(k,j) f(t + (k/2 - j) h) / h^k, whose points sit at
    half-integer offsets for odd k; its error expands in even powers of h,
    so Richardson halving removes h^2, h^4, ... terms.  Three levels keep
    the smallest step at h0/4, large enough that the 2^k/h^k roundoff
    amplification stays below the h^6 truncation floor for k <= 6.
    """
    if k == 0:
        return float(f(t))

    def central(h):
        acc = 0.0
        for j in range(k + 1):
            acc += (-1) ** j * comb(k, j) * float(f(t + (0.5 * k - j) * h))
        return acc / h ** k

    vals = [central(h0 / 2 ** i) for i in range(levels)]
    fac = 4.0
    while len(vals) > 1:
        vals = [(fac * b - a) / (fac - 1.0) for a, b in zip(vals, vals[1:])]
        fac *= 4.0
    return vals[0]


def gauss_points(n, a, b):
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (a + b) + 0.5 * (b - a) * x, 0.5 * (b - a) * w
