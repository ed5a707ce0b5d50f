"""
Real negative branch of the Lambert W function.

W_{-1}(z) is the solution w <= -1 of w * exp(w) = z on -1/e <= z < 0. Values
start from the branch-point series (near -1/e) or from the asymptotic
expansion log(-z) - log(-log(-z)) (near 0) and are refined with Halley's
method.
"""
import logging

import numpy as np

from config import Config as C
from errors import DomainError

logger = logging.getLogger(__name__)

_EPS = np.finfo(float).eps


def _initial_guess(z, q):
    """
    Starting values for the Halley iteration.

    Args:
        z: Arguments in (-1/e, 0)
        q: The matching values of 1 + e*z

    Returns:
        numpy.ndarray: Initial approximations of W_{-1}(z)
    """
    p = -np.sqrt(2.0 * q)
    series = -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p ** 3
    l1 = np.log(-z)
    l2 = np.log(-l1)
    asymptotic = l1 - l2 + l2 / l1
    return np.where(z < C.LAMBERT_SERIES_CUTOFF, series, asymptotic)


def _halley(z, q):
    """Refine W_{-1}(z) by Halley's method until the relative step is tiny."""
    w = _initial_guess(z, q)
    active = np.ones(w.shape, dtype=bool)
    with np.errstate(divide='ignore', invalid='ignore'):
        for _ in range(C.LAMBERT_MAX_ITER):
            idx = np.flatnonzero(active)
            wa = w[idx]
            ew = np.exp(wa)
            f = wa * ew - z[idx]
            wp1 = wa + 1.0
            denom = ew * wp1 - (wa + 2.0) * f / (2.0 * wp1)
            step = np.where(np.isfinite(denom) & (denom != 0.0), f / denom, 0.0)
            w[idx] = wa - step
            done = ((np.abs(step) <= C.LAMBERT_RTOL * np.abs(w[idx]))
                    | (np.abs(f) <= _EPS * np.abs(z[idx])))
            active[idx[done]] = False
            if not active.any():
                break
        else:
            logger.warning("Halley iteration for W_-1 hit %d iterations on %d argument(s)",
                           C.LAMBERT_MAX_ITER, int(active.sum()))
    return np.minimum(w, -1.0)


def w_minus1(z):
    """
    Evaluate the negative real branch W_{-1} of the Lambert W function.

    Args:
        z: Scalar or array with -1/e <= z < 0

    Returns:
        float or numpy.ndarray: w <= -1 with w * exp(w) = z

    Raises:
        DomainError: If any argument is below -1/e, non-negative or not finite
    """
    z_arr = np.asarray(z, dtype=float)
    scalar = z_arr.ndim == 0
    z_arr = np.atleast_1d(z_arr)

    bad = ~np.isfinite(z_arr) | (z_arr < -C.INV_E) | (z_arr >= 0.0)
    if bad.any():
        raise DomainError(
            f"W_-1 is defined on [-1/e, 0); got {z_arr[bad][0]!r}")

    w = np.empty_like(z_arr)
    q = 1.0 + np.e * z_arr
    at_branch = (z_arr == -C.INV_E) | (q <= 0.0)
    near_branch = ~at_branch & (q < C.LAMBERT_BRANCH_GUARD)
    regular = ~(at_branch | near_branch)

    w[at_branch] = -1.0
    # Iteration is ill-conditioned this close to -1/e; the series is exact to rounding
    w[near_branch] = -1.0 - np.sqrt(2.0 * q[near_branch])
    if regular.any():
        w[regular] = _halley(z_arr[regular], q[regular])

    return float(w[0]) if scalar else w
