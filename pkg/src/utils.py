"""
Utility functions for the LL-G toolkit.

Provides helpers for elementwise evaluation, stable logarithms, finite
differences and the graded Gauss-Legendre rule used by the series module.
"""
import functools
import math

import numpy as np

from config import Config as C


def elementwise(method):
    """
    Decorate a method so it accepts scalars or arrays as its first argument.

    The wrapped method always receives a 1-d float array; a scalar input
    yields a Python float, an array input an array of the same shape.
    """
    @functools.wraps(method)
    def wrapper(self, x, *args, **kwargs):
        arr = np.asarray(x, dtype=float)
        out = method(self, np.atleast_1d(arr).ravel(), *args, **kwargs)
        if arr.ndim == 0:
            return float(out[0])
        return np.asarray(out, dtype=float).reshape(arr.shape)
    return wrapper


def log1mexp(t):
    """
    Compute log(1 - exp(-t)) for t >= 0 without cancellation.

    Switches between log(-expm1(-t)) and log1p(-exp(-t)) at t = log 2.

    Args:
        t: Non-negative scalar or array

    Returns:
        numpy.ndarray: log(1 - exp(-t)), -inf where t == 0
    """
    t = np.asarray(t, dtype=float)
    with np.errstate(divide='ignore'):
        return np.where(t > math.log(2.0),
                        np.log1p(-np.exp(-t)),
                        np.log(-np.expm1(-t)))


def numeric_gradient(func, x, steps):
    """
    Centered finite-difference gradient of a scalar function.

    Args:
        func: Callable mapping a parameter vector to a float
        x: Point of evaluation
        steps: Per-coordinate step sizes

    Returns:
        numpy.ndarray: Gradient estimate
    """
    x = np.asarray(x, dtype=float)
    grad = np.empty_like(x)
    for i, h in enumerate(steps):
        e = np.zeros_like(x)
        e[i] = h
        grad[i] = (func(x + e) - func(x - e)) / (2.0 * h)
    return grad


def numeric_hessian(func, x, steps):
    """
    Centered second-difference Hessian of a scalar function.

    Diagonal entries use [f(x+h) + f(x-h) - 2f(x)] / h^2, off-diagonal entries
    the four-point cross difference; the result is symmetrised.

    Args:
        func: Callable mapping a parameter vector to a float
        x: Point of evaluation
        steps: Per-coordinate step sizes

    Returns:
        numpy.ndarray: Hessian estimate (n, n)
    """
    x = np.asarray(x, dtype=float)
    n = len(x)
    hessian = np.zeros((n, n))
    f0 = func(x)
    basis = [np.eye(n)[i] * steps[i] for i in range(n)]
    for i in range(n):
        hi = basis[i]
        hessian[i, i] = (func(x + hi) + func(x - hi) - 2.0 * f0) / steps[i] ** 2
        for j in range(i + 1, n):
            hj = basis[j]
            value = (func(x + hi + hj) + func(x - hi - hj)
                     - func(x - hi + hj) - func(x + hi - hj)) / (4.0 * steps[i] * steps[j])
            hessian[i, j] = hessian[j, i] = value
    return hessian


@functools.lru_cache(maxsize=8)
def graded_gauss_legendre(nodes=C.GL_NODES, levels=C.GL_LEVELS):
    """
    Composite Gauss-Legendre rule on (0, 1) graded towards both endpoints.

    Panels are [2^-(m+1), 2^-m] / 2 mirrored around 1/2, so integrands with
    integrable endpoint singularities (log or power type) are resolved.

    Args:
        nodes: Gauss-Legendre nodes per panel
        levels: Number of dyadic panels on each half

    Returns:
        tuple: (abscissae, weights) as read-only arrays
    """
    ref_x, ref_w = np.polynomial.legendre.leggauss(nodes)
    edges = 0.5 * 2.0 ** -np.arange(levels + 1)
    xs, ws = [], []
    for hi, lo in zip(edges[:-1], edges[1:]):
        half = 0.5 * (hi - lo)
        mid = 0.5 * (hi + lo)
        x = mid + half * ref_x
        xs.extend([x, 1.0 - x])
        ws.extend([half * ref_w, half * ref_w])
    x = np.concatenate(xs)
    w = np.concatenate(ws)
    order = np.argsort(x)
    x, w = x[order], w[order]
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w
