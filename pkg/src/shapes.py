"""
Critical points of the LL-G density and hazard rate.

Density critical points are the roots of

    g'/g - g / (G (b - log G)) + (a - 1) g / G = 0,

whose left side is d/dx log f. Hazard critical points are the roots of
d/dx log h = d/dx log f + h. Roots are bracketed by sign changes on a grid of
LL-G quantiles and refined with Brent's method.
"""
import logging
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy import optimize

from config import Config as C
from errors import DomainError

logger = logging.getLogger(__name__)


class CriticalKind(Enum):
    MAXIMUM = "maximum"
    MINIMUM = "minimum"
    INFLEXION = "inflexion"


class CurveKind(Enum):
    DENSITY = "density"
    HAZARD = "hazard"


@dataclass(frozen=True)
class CriticalPoint:
    """
    A stationary point of the density or hazard rate.

    Attributes:
        x: Location in the support interior
        kind: Maximum, minimum or inflexion
        source: Curve the point belongs to
        classifier_value: Second-order quantity whose sign gives the kind
        residual: Value of the root equation at x
        printed_residual: Hazard only, the residual of the printed hazard equation at x
    """
    x: float
    kind: CriticalKind
    source: CurveKind
    classifier_value: float
    residual: float
    printed_residual: float = None


def _pieces(d, x):
    """Return g'/g, g/G and b - log G at x."""
    base = d.baseline
    x = np.asarray(x, dtype=float)
    log_g = base.log_pdf(x)
    log_G = base.log_cdf(x)
    g = np.exp(log_g)
    with np.errstate(divide='ignore', invalid='ignore'):
        score = np.asarray(base.dpdf(x)) / g
        ratio = np.exp(log_g - log_G)
    return score, ratio, d.b - log_G


def _output(value, x):
    return float(value) if np.ndim(x) == 0 else np.asarray(value, dtype=float)


def density_equation(d, x):
    """
    Left side of the density critical-point equation, equal to d/dx log f.

    Args:
        d: LLGDistribution
        x: Scalar or array in the support interior

    Returns:
        float or numpy.ndarray: Equation value
    """
    score, ratio, B = _pieces(d, x)
    with np.errstate(divide='ignore', invalid='ignore'):
        value = score - ratio / B + (d.a - 1.0) * ratio
    return _output(value, x)


def _check_classifier_domain(d, x):
    log_G = d.baseline.log_cdf(np.asarray(x, dtype=float))
    singular = np.isneginf(log_G) | (d.b - log_G == 0.0)
    if np.any(singular):
        raise DomainError("Shape classifier is singular where G (b - log G) = 0")


def lambda_classifier(d, x):
    """
    Derivative of the density equation, i.e. d^2/dx^2 log f.

    Negative at a local maximum, positive at a local minimum.

    Args:
        d: LLGDistribution
        x: Scalar or array in the support interior

    Returns:
        float or numpy.ndarray: lambda(x)

    Raises:
        DomainError: Where G (b - log G) vanishes
    """
    _check_classifier_domain(d, x)
    base = d.baseline
    xa = np.asarray(x, dtype=float)
    score, ratio, B = _pieces(d, xa)
    curvature = np.asarray(base.d2pdf(xa)) / np.exp(base.log_pdf(xa)) - score ** 2
    value = (curvature
             + (d.a - 1.0) * (score * ratio - ratio ** 2)
             - (score * ratio * B - ratio ** 2 * (B - 1.0)) / B ** 2)
    return _output(value, x)


def lambda_classifier_printed(d, x):
    """
    lambda(x) with the last numerator term as printed, (b - log G)^2 - 1.

    Kept for auditing; it is not the derivative of the density equation.
    """
    _check_classifier_domain(d, x)
    base = d.baseline
    xa = np.asarray(x, dtype=float)
    score, ratio, B = _pieces(d, xa)
    curvature = np.asarray(base.d2pdf(xa)) / np.exp(base.log_pdf(xa)) - score ** 2
    value = (curvature
             + (d.a - 1.0) * (score * ratio - ratio ** 2)
             - (score * ratio * B ** 2 - ratio ** 2 * (B ** 2 - 1.0)) / B ** 3)
    return _output(value, x)


def hazard_equation(d, x):
    """
    d/dx log h, which is the density equation plus the hazard rate itself.

    Args:
        d: LLGDistribution
        x: Scalar or array in the support interior

    Returns:
        float or numpy.ndarray: Equation value
    """
    value = np.asarray(density_equation(d, x)) + np.asarray(d.hazard(x))
    return _output(value, x)


def hazard_equation_printed(d, x):
    """The printed hazard critical-point equation, evaluated term by term."""
    base = d.baseline
    xa = np.asarray(x, dtype=float)
    a, b = d.a, d.b
    g = np.exp(base.log_pdf(xa))
    log_G = base.log_cdf(xa)
    B = b - log_G
    G_am1 = np.exp((a - 1.0) * log_G)
    G_a = np.exp(a * log_G)
    inner = 1.0 + a * B
    with np.errstate(divide='ignore', invalid='ignore'):
        last = (g * G_am1 + a * G_am1 * inner ** 2) / ((1.0 + a * b - inner * G_a) * inner)
    value = np.asarray(density_equation(d, xa)) - last
    return _output(value, x)


def _log_hazard_curvature(d, x0, step):
    def log_h(x):
        return d.log_hazard(x)
    return (log_h(x0 + step) - 2.0 * log_h(x0) + log_h(x0 - step)) / step ** 2


def _classify(value):
    if abs(value) < C.INFLEXION_TOL:
        return CriticalKind.INFLEXION
    return CriticalKind.MAXIMUM if value < 0.0 else CriticalKind.MINIMUM


def _search_grid(d, grid_n):
    u = np.linspace(C.SHAPE_Q_LOW, C.SHAPE_Q_HIGH, int(grid_n))
    return np.unique(d.quantile(u))


def _bracket_roots(func, grid):
    """
    Refine every sign change of func on grid with Brent's method.

    Brackets whose refined residual stays large straddle a pole and are skipped.
    """
    values = np.asarray(func(grid), dtype=float)
    roots = []
    for i in range(len(grid) - 1):
        lo, hi = grid[i], grid[i + 1]
        f_lo, f_hi = values[i], values[i + 1]
        if not (np.isfinite(f_lo) and np.isfinite(f_hi)):
            continue
        if f_lo == 0.0:
            roots.append(lo)
            continue
        if f_lo * f_hi > 0.0:
            continue
        scale = max(abs(lo), abs(hi), hi - lo)
        root = optimize.brentq(lambda t: float(func(t)), lo, hi,
                               xtol=C.ROOT_XTOL * scale, maxiter=200)
        residual = float(func(root))
        if abs(residual) > C.ROOT_RESIDUAL_TOL:
            logger.debug("Discarding sign change at [%g, %g]: residual %.3g", lo, hi, residual)
            continue
        roots.append(root)
    return roots


def pdf_critical_points(d, grid_n=C.SHAPE_GRID_N):
    """
    Locate and classify the critical points of the LL-G density.

    Args:
        d: LLGDistribution
        grid_n: Number of search-grid points

    Returns:
        list: CriticalPoint entries in increasing x; empty for a monotone density
    """
    grid = _search_grid(d, grid_n)
    points = []
    for x0 in _bracket_roots(lambda t: density_equation(d, t), grid):
        value = lambda_classifier(d, x0)
        points.append(CriticalPoint(float(x0), _classify(value), CurveKind.DENSITY,
                                    float(value), float(density_equation(d, x0))))
    logger.info("Found %d density critical point(s) for %r", len(points), d)
    return points


def hazard_critical_points(d, grid_n=C.SHAPE_GRID_N):
    """
    Locate and classify the critical points of the LL-G hazard rate.

    Points are classified by a centered second difference of log h.

    Args:
        d: LLGDistribution
        grid_n: Number of search-grid points

    Returns:
        list: CriticalPoint entries in increasing x; empty for a monotone hazard
    """
    grid = _search_grid(d, grid_n)
    span = grid[-1] - grid[0]
    points = []
    for x0 in _bracket_roots(lambda t: hazard_equation(d, t), grid):
        step = C.FD_STEP * max(abs(x0), span / len(grid))
        value = _log_hazard_curvature(d, x0, step)
        points.append(CriticalPoint(float(x0), _classify(value), CurveKind.HAZARD,
                                    float(value), float(hazard_equation(d, x0)),
                                    float(hazard_equation_printed(d, x0))))
    logger.info("Found %d hazard critical point(s) for %r", len(points), d)
    return points
