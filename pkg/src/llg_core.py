"""
The Log-Lindley generated (LL-G) distribution.

For a baseline cdf G with density g and generator shapes a > 0, b >= 0:

    F(x) = [1 + ab - a log G(x)] G(x)^a / (1 + ab)
    f(x) = a^2 / (1 + ab) g(x) [b - log G(x)] G(x)^(a - 1)

Everything is evaluated from log G so the lower tail never meets 0 * inf.
The quantile inverts F in closed form through the W_{-1} branch of the
Lambert W function.
"""
import logging
import math
from dataclasses import dataclass

import numpy as np

from baselines import Baseline
from config import Config as C
from errors import DomainError, ParameterError
from lambert_w import w_minus1
from utils import elementwise

logger = logging.getLogger(__name__)

_SF_SERIES_COEFFS = np.array(
    [0.0, 0.0] + [(k - 1) / math.factorial(k) for k in range(2, C.SF_SERIES_TERMS + 2)])


def _one_minus_one_minus_y_exp_y(y):
    """
    Compute q(y) = 1 - (1 - y) e^y for y <= 0 without cancellation.

    Uses the power series sum_{k>=2} (k-1) y^k / k! for small |y|.
    """
    direct = -np.expm1(y) + y * np.exp(y)
    series = np.polynomial.polynomial.polyval(y, _SF_SERIES_COEFFS)
    return np.where(np.abs(y) < C.SF_SERIES_CUTOFF, series, direct)


@dataclass(frozen=True)
class LLGParams:
    """
    Generator shapes (a, b) together with the baseline that houses theta.

    Attributes:
        a: Generator shape, a > 0
        b: Generator shape, b >= 0
        baseline: Parent distribution G(x, theta)
    """
    a: float
    b: float
    baseline: Baseline

    def __post_init__(self):
        if not math.isfinite(self.a) or self.a <= 0.0:
            raise ParameterError(f"Generator shape a must be > 0; got {self.a}")
        if not math.isfinite(self.b) or self.b < 0.0:
            raise ParameterError(f"Generator shape b must be >= 0; got {self.b}")

    @property
    def c(self):
        """The constant 1 + ab that recurs throughout the family."""
        return 1.0 + self.a * self.b


class LLGDistribution:
    """
    LL-G distribution over a pluggable baseline.

    Instances are immutable; every method is a pure function of x except
    sample, which owns a generator seeded per call.
    """

    def __init__(self, params):
        """
        Initialize the distribution.

        Args:
            params: LLGParams instance
        """
        self._params = params

    @classmethod
    def from_values(cls, a, b, baseline):
        return cls(LLGParams(float(a), float(b), baseline))

    @property
    def params(self):
        return self._params

    @property
    def a(self):
        return self._params.a

    @property
    def b(self):
        return self._params.b

    @property
    def baseline(self):
        return self._params.baseline

    @property
    def support(self):
        return self.baseline.support

    def __repr__(self):
        return f"LLGDistribution(a={self.a:g}, b={self.b:g}, baseline={self.baseline})"

    def _log_g_clamped(self, x):
        return np.maximum(self.baseline.log_cdf(x), C.LOG_G_FLOOR)

    @elementwise
    def cdf(self, x):
        log_g = self.baseline.log_cdf(x)
        a, c = self.a, self._params.c
        with np.errstate(invalid='ignore', over='ignore'):
            value = (c - a * log_g) * np.exp(a * log_g) / c
        # G = 0 is the limit G^a log G -> 0
        return np.where(np.isneginf(log_g), 0.0, np.clip(value, 0.0, 1.0))

    @elementwise
    def sf(self, x):
        """Survival function 1 - F(x), accurate where F is close to 1."""
        log_g = self.baseline.log_cdf(x)
        a, b, c = self.a, self.b, self._params.c
        y = a * np.maximum(log_g, -np.finfo(float).max)
        with np.errstate(over='ignore', invalid='ignore'):
            value = (-a * b * np.expm1(y) + _one_minus_one_minus_y_exp_y(y)) / c
        return np.where(np.isneginf(log_g), 1.0, np.clip(value, 0.0, 1.0))

    @elementwise
    def log_pdf(self, x):
        base_log_pdf = self.baseline.log_pdf(x)
        log_g = self._log_g_clamped(x)
        a, b, c = self.a, self.b, self._params.c
        with np.errstate(divide='ignore', invalid='ignore'):
            value = (2.0 * math.log(a) - math.log(c) + base_log_pdf
                     + np.log(b - log_g) + (a - 1.0) * log_g)
        value = np.where(np.isfinite(base_log_pdf) | (base_log_pdf == np.inf), value, -np.inf)
        # b = 0 at G = 1: log(b - log G) = -inf, the density limit is 0
        return np.where(np.isnan(value), -np.inf, value)

    @elementwise
    def pdf(self, x):
        return np.exp(self.log_pdf(x))

    @elementwise
    def hazard(self, x):
        """
        Hazard rate f(x) / (1 - F(x)).

        Returns inf where the survival function underflows to 0 (support end).
        """
        f = self.pdf(x)
        s = self.sf(x)
        with np.errstate(divide='ignore', invalid='ignore'):
            h = np.where(s > 0.0, f / s, np.inf)
        if np.isinf(h).any():
            logger.debug("Hazard overflow at %d point(s) at the upper support end",
                         int(np.isinf(h).sum()))
        return h

    @elementwise
    def log_hazard(self, x):
        with np.errstate(divide='ignore'):
            return self.log_pdf(x) - np.log(self.sf(x))

    def lambert_argument(self, u):
        """Argument -(1+ab) u exp(-(1+ab)) passed to W_{-1}, floored at -1/e."""
        c = self._params.c
        z = -c * np.asarray(u, dtype=float) * math.exp(-c)
        return np.maximum(z, -C.INV_E)

    def log_baseline_level(self, u):
        """log G at the LL-G quantile of u: ((1+ab) + W_{-1}(z)) / a."""
        w = w_minus1(self.lambert_argument(u))
        return np.minimum((self._params.c + w) / self.a, 0.0)

    @elementwise
    def quantile(self, u):
        bad = ~((u > 0.0) & (u < 1.0))
        if bad.any():
            raise DomainError(f"Quantile needs u in (0, 1); got {u[bad][0]!r}")
        log_v = self.log_baseline_level(u)
        return np.asarray(self.baseline.quantile_from_log(log_v), dtype=float)

    def sample(self, n, seed):
        """
        Draw n variates by inverse-transform sampling.

        Args:
            n: Number of variates (>= 1)
            seed: Integer seed; equal seeds give identical output

        Returns:
            numpy.ndarray: n variates
        """
        if n < 1:
            raise DomainError(f"Sample size must be >= 1; got {n}")
        rng = np.random.default_rng(seed)
        u = rng.random(int(n))
        tiny = np.finfo(float).tiny
        u = np.clip(u, tiny, 1.0 - np.finfo(float).epsneg)
        return self.quantile(u)


def log_lindley_cdf(x, a, b):
    """Log-Lindley cdf on (0, 1): x^a (1 + ab - a log x) / (1 + ab)."""
    x = np.asarray(x, dtype=float)
    with np.errstate(divide='ignore', invalid='ignore'):
        value = x ** a * (1.0 + a * b - a * np.log(x)) / (1.0 + a * b)
    return np.where(x <= 0.0, 0.0, np.where(x >= 1.0, 1.0, value))
