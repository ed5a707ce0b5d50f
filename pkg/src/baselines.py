"""
Baseline (parent) distributions for the LL-G generator.

Each baseline supplies its cdf G, density g, their logarithms, the quantile
function, the first two x-derivatives of g (for the shape analysis) and the
parameter gradients of log g and G (for the analytic score).
"""
import math
from dataclasses import dataclass, fields
from enum import Enum, auto

import numpy as np
from scipy import special

from errors import DomainError, ParameterError
from utils import elementwise, log1mexp

_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)


class BaselineKind(Enum):
    UNIFORM01 = auto()
    NORMAL = auto()
    WEIBULL = auto()


def _check_probability(u):
    u = np.asarray(u, dtype=float)
    bad = ~((u > 0.0) & (u < 1.0))
    if bad.any():
        raise DomainError(f"Probability must lie in (0, 1); got {u[bad][0]!r}")


@dataclass(frozen=True)
class Baseline:
    """
    Base class for parent distributions G(x, theta).

    Subclasses are frozen dataclasses whose fields are the parameter vector
    theta, in the order reported by param_names.
    """
    kind = None
    name = None
    support = (-math.inf, math.inf)
    # Transform used by the optimizer for each parameter ('log' or 'identity')
    param_transforms = ()

    @property
    def param_names(self):
        return tuple(f.name for f in fields(self))

    @property
    def params(self):
        return {f.name: getattr(self, f.name) for f in fields(self)}

    def vector(self):
        """Return theta as a float array in param_names order."""
        return np.array([getattr(self, n) for n in self.param_names], dtype=float)

    def with_vector(self, theta):
        """Return a baseline of the same kind with parameters theta."""
        return type(self)(*(float(v) for v in theta))

    def in_support(self, x):
        x = np.asarray(x, dtype=float)
        lower, upper = self.support
        return (x > lower) & (x < upper)

    @elementwise
    def pdf(self, x):
        return np.exp(self.log_pdf(x))

    def quantile_from_log(self, log_u):
        """Quantile at u = exp(log_u); subclasses refine precision near u = 1."""
        return self.quantile(np.exp(log_u))

    def seed(self, x, v):
        """
        Linearised regression of data x on baseline probabilities v.

        Args:
            x: Sorted observations
            v: Baseline-scale plotting positions in (0, 1)

        Returns:
            numpy.ndarray: A starting value for theta
        """
        return np.array([], dtype=float)

    def __str__(self):
        inner = ", ".join(f"{k}={v:g}" for k, v in self.params.items())
        return f"{self.name}({inner})"


@dataclass(frozen=True)
class Uniform01(Baseline):
    """Uniform distribution on (0, 1); G(x) = x."""
    kind = BaselineKind.UNIFORM01
    name = "uniform"
    support = (0.0, 1.0)
    param_transforms = ()

    @elementwise
    def cdf(self, x):
        return np.clip(x, 0.0, 1.0)

    @elementwise
    def log_cdf(self, x):
        with np.errstate(divide='ignore'):
            return np.log(np.clip(x, 0.0, 1.0))

    @elementwise
    def log_pdf(self, x):
        return np.where((x >= 0.0) & (x <= 1.0), 0.0, -np.inf)

    @elementwise
    def quantile(self, u):
        _check_probability(u)
        return u.copy()

    def quantile_from_log(self, log_u):
        return np.exp(log_u)

    @elementwise
    def dpdf(self, x):
        return np.zeros_like(x)

    @elementwise
    def d2pdf(self, x):
        return np.zeros_like(x)

    def grad_log_pdf(self, x):
        return np.zeros((0, np.size(x)))

    def grad_cdf(self, x):
        return np.zeros((0, np.size(x)))


@dataclass(frozen=True)
class Normal(Baseline):
    """Normal distribution N(mu, sigma^2); G(x) = Phi((x - mu) / sigma)."""
    mu: float = 0.0
    sigma: float = 1.0

    kind = BaselineKind.NORMAL
    name = "normal"
    param_transforms = ('identity', 'log')

    def __post_init__(self):
        if not (math.isfinite(self.mu) and math.isfinite(self.sigma)) or self.sigma <= 0.0:
            raise ParameterError(
                f"Normal baseline needs finite mu and sigma > 0; got mu={self.mu}, sigma={self.sigma}")

    def _z(self, x):
        return (np.asarray(x, dtype=float) - self.mu) / self.sigma

    @elementwise
    def cdf(self, x):
        return special.ndtr(self._z(x))

    @elementwise
    def log_cdf(self, x):
        return special.log_ndtr(self._z(x))

    @elementwise
    def log_pdf(self, x):
        z = self._z(x)
        return -0.5 * z * z - math.log(self.sigma) - _LOG_SQRT_2PI

    @elementwise
    def quantile(self, u):
        _check_probability(u)
        return self.mu + self.sigma * special.ndtri(u)

    def quantile_from_log(self, log_u):
        log_u = np.asarray(log_u, dtype=float)
        lower = special.ndtri(np.exp(np.minimum(log_u, math.log(0.5))))
        upper = -special.ndtri(-np.expm1(np.maximum(log_u, math.log(0.5))))
        return self.mu + self.sigma * np.where(log_u <= math.log(0.5), lower, upper)

    @elementwise
    def dpdf(self, x):
        z = self._z(x)
        return -z / self.sigma * self.pdf(x)

    @elementwise
    def d2pdf(self, x):
        z = self._z(x)
        return (z * z - 1.0) / self.sigma ** 2 * self.pdf(x)

    def grad_log_pdf(self, x):
        z = self._z(np.atleast_1d(x))
        return np.vstack([z / self.sigma, (z * z - 1.0) / self.sigma])

    def grad_cdf(self, x):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        z = self._z(x)
        g = self.pdf(x)
        return np.vstack([-g, -z * g])

    def seed(self, x, v):
        slope, intercept = np.polyfit(special.ndtri(v), x, 1)
        return np.array([intercept, max(abs(slope), 1e-8)])


@dataclass(frozen=True)
class Weibull(Baseline):
    """Weibull distribution with G(x) = 1 - exp(-alpha x^beta), x > 0."""
    alpha: float = 1.0
    beta: float = 1.0

    kind = BaselineKind.WEIBULL
    name = "weibull"
    support = (0.0, math.inf)
    param_transforms = ('log', 'log')

    def __post_init__(self):
        for label, value in (('alpha', self.alpha), ('beta', self.beta)):
            if not math.isfinite(value) or value <= 0.0:
                raise ParameterError(f"Weibull baseline needs {label} > 0; got {value}")

    def _t(self, x):
        x = np.asarray(x, dtype=float)
        return self.alpha * np.power(np.maximum(x, 0.0), self.beta)

    @elementwise
    def cdf(self, x):
        return np.where(x > 0.0, -np.expm1(-self._t(x)), 0.0)

    @elementwise
    def log_cdf(self, x):
        return np.where(x > 0.0, log1mexp(self._t(x)), -np.inf)

    @elementwise
    def log_pdf(self, x):
        with np.errstate(divide='ignore', invalid='ignore'):
            value = (math.log(self.alpha) + math.log(self.beta)
                     + special.xlogy(self.beta - 1.0, np.maximum(x, 0.0)) - self._t(x))
        return np.where(x >= 0.0, value, -np.inf)

    @elementwise
    def quantile(self, u):
        _check_probability(u)
        return (-np.log1p(-u) / self.alpha) ** (1.0 / self.beta)

    def quantile_from_log(self, log_u):
        with np.errstate(divide='ignore'):
            t = -np.log(-np.expm1(np.asarray(log_u, dtype=float)))
        return (t / self.alpha) ** (1.0 / self.beta)

    def _score_x(self, x):
        # d/dx log g
        return (self.beta - 1.0) / x - self.alpha * self.beta * np.power(x, self.beta - 1.0)

    @elementwise
    def dpdf(self, x):
        return self.pdf(x) * self._score_x(x)

    @elementwise
    def d2pdf(self, x):
        s = self._score_x(x)
        ds = (-(self.beta - 1.0) / x ** 2
              - self.alpha * self.beta * (self.beta - 1.0) * np.power(x, self.beta - 2.0))
        return self.pdf(x) * (s * s + ds)

    def grad_log_pdf(self, x):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        xb = np.power(x, self.beta)
        logx = np.log(x)
        return np.vstack([1.0 / self.alpha - xb,
                          1.0 / self.beta + logx * (1.0 - self.alpha * xb)])

    def grad_cdf(self, x):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        xb = np.power(x, self.beta)
        t = self.alpha * xb
        surv = np.exp(-t)
        return np.vstack([xb * surv, t * np.log(x) * surv])

    def seed(self, x, v):
        slope, intercept = np.polyfit(np.log(x), np.log(-np.log1p(-v)), 1)
        return np.array([math.exp(intercept), max(slope, 1e-3)])


BASELINES = {
    'uniform': Uniform01,
    'normal': Normal,
    'weibull': Weibull,
}


def make_baseline(name, **params):
    """
    Build a baseline from its command-line name and keyword parameters.

    Args:
        name: One of "uniform", "normal", "weibull"
        **params: Parameters by name (mu, sigma / alpha, beta)

    Returns:
        Baseline: The constructed baseline

    Raises:
        ParameterError: If the name or a parameter name is unknown
    """
    try:
        cls = BASELINES[name.lower()]
    except KeyError:
        raise ParameterError(
            f"Unknown baseline '{name}'; expected one of {sorted(BASELINES)}") from None
    try:
        return cls(**{k: float(v) for k, v in params.items()})
    except TypeError as e:
        raise ParameterError(f"Bad parameters for baseline '{name}': {e}") from None
