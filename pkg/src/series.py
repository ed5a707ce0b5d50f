"""
Exp-G linear representation of the LL-G density.

The LL-G density is a mixture of exponentiated-G densities,

    f(x) = sum_i w_i h_{i+1}(x),   h_{i+1}(x) = (i + 1) g(x) G(x)^i,

with

    w_i = sum_{k>=i} a^2 (-1)^{k+i} / ((1+ab)(i+1)) C(k, i)
          [ b C(a-1, k) + sum_j sum_{l=0}^{j+1} (-1)^l / (j+1) C(j+1, l) C(a+l-1, k) ].

The inner l-sum is an order-(j+1) finite difference of C(a-1+l, k) in l and
collapses to (-1)^(j+1) C(a-1, k-j-1). Truncating the k-sum at K gives a
polynomial in G. In the monomial basis G^i its coefficients w_i cancel
catastrophically (terms of size C(K, K/2)), so w_i are accumulated with mpmath,
while every quantity that sums over i (reconstruction, sum of weights,
moments, mgf) is evaluated through the identical polynomial in the
(1 - G) basis, sum_k d_k (1 - G)^k, which is well conditioned.
"""
import logging
import math
from dataclasses import dataclass
from functools import cached_property

import mpmath
import numpy as np
from scipy import special

from config import Config as C
from errors import DomainError, SeriesDivergenceError
from utils import graded_gauss_legendre

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SeriesValue:
    """A truncated-series result with its tail diagnostic."""
    value: float
    tail: float
    converged: bool
    K: int
    J: int


def _basis_coefficients(a, b, K, J):
    """
    Coefficients d_k of f / g = sum_k d_k (1 - G)^k, k = 0..K.

    d_k = a^2/(1+ab) [ b (-1)^k C(a-1, k)
                       + sum_{j=0}^{min(J, k-1)} (-1)^(k-j-1) C(a-1, k-j-1) / (j+1) ]
    """
    m = np.arange(K + 1)
    alt = np.where(m % 2 == 0, 1.0, -1.0) * special.binom(a - 1.0, m)
    coeffs = np.empty(K + 1)
    for k in range(K + 1):
        j = np.arange(min(J, k - 1) + 1) if k >= 1 else np.arange(0)
        terms = alt[k - j - 1] / (j + 1.0)
        coeffs[k] = math.fsum([b * alt[k], *terms])
    return a * a / (1.0 + a * b) * coeffs


@dataclass(frozen=True)
class ExpGWeights:
    """
    Truncated exp-G expansion of an LL-G density.

    Attributes:
        a, b: Generator shapes
        K: Outer (k) truncation index
        J: Inner (j) truncation index
        basis: Coefficients d_k of the (1 - G)-basis polynomial
    """
    a: float
    b: float
    K: int
    J: int
    basis: np.ndarray

    @property
    def total(self):
        """sum_i w_i, computed as sum_k d_k / (k+1)."""
        k = np.arange(self.K + 1)
        return math.fsum(self.basis / (k + 1.0))

    @property
    def tail(self):
        return abs(self.total - 1.0)

    @property
    def _dps(self):
        # C(K, i) reaches 2^K, so keep about K log10(2) guard digits
        return C.SERIES_DPS + int(0.31 * self.K)

    @cached_property
    def w(self):
        """
        The weights w_0..w_K, accumulated in extended precision.

        Returns:
            numpy.ndarray: Weights rounded to double precision
        """
        with mpmath.workdps(self._dps):
            return np.array([float(w) for w in self._weights_mp()])

    def polynomial(self, v):
        """sum_i w_i (i+1) v^i, evaluated as sum_k d_k (1 - v)^k."""
        v = np.asarray(v, dtype=float)
        return np.polynomial.polynomial.polyval(1.0 - v, self.basis)

    def density(self, baseline, x):
        """
        Reconstruct sum_i w_i h_{i+1}(x) for a baseline.

        Args:
            baseline: The baseline distribution
            x: Scalar or array of points

        Returns:
            numpy.ndarray: Truncated-series density values
        """
        x = np.asarray(x, dtype=float)
        return baseline.pdf(x) * self.polynomial(baseline.cdf(x))

    def density_from_weights(self, baseline, x):
        """
        Reconstruct the density literally from w_i in extended precision.

        Slow; meant for cross-checking the weight vector at a few points.
        """
        g = baseline.pdf(float(x))
        G = baseline.cdf(float(x))
        with mpmath.workdps(self._dps):
            weights = self._weights_mp()
            G_mp = mpmath.mpf(G)
            total = mpmath.fsum(w * (i + 1) * G_mp ** i for i, w in enumerate(weights))
            return float(total * g)

    def _weights_mp(self):
        # Runs at the caller's working precision
        a = mpmath.mpf(self.a)
        b = mpmath.mpf(self.b)
        binoms = [mpmath.binomial(a - 1, m) for m in range(self.K + 1)]
        brackets = [b * binoms[k] + mpmath.fsum((-1) ** (j + 1) * binoms[k - j - 1] / (j + 1)
                                                for j in range(min(self.J, k - 1) + 1))
                    for k in range(self.K + 1)]
        scale = a * a / (1 + a * b)
        return [scale / (i + 1) * mpmath.fsum((-1) ** (k + i) * mpmath.binomial(k, i) * brackets[k]
                                              for k in range(i, self.K + 1))
                for i in range(self.K + 1)]


def expg_weights(a, b, K=C.SERIES_K, J=C.SERIES_J):
    """
    Build the truncated exp-G weights of an LL-G density.

    Args:
        a: Generator shape a > 0
        b: Generator shape b >= 0
        K: Outer truncation index (>= 1)
        J: Inner truncation index (>= 1)

    Returns:
        ExpGWeights: The truncated expansion
    """
    if K < 1 or J < 1:
        raise DomainError(f"Truncation indices must be >= 1; got K={K}, J={J}")
    basis = _basis_coefficients(float(a), float(b), int(K), int(J))
    basis.setflags(write=False)
    return ExpGWeights(float(a), float(b), int(K), int(J), basis)


def _series_value(weights, value, strict):
    tail = weights.tail
    converged = tail <= C.SERIES_DIVERGENCE
    if not converged:
        message = (f"Exp-G series tail |sum w - 1| = {tail:.3g} exceeds "
                   f"{C.SERIES_DIVERGENCE:g} at K={weights.K}, J={weights.J}")
        if strict:
            raise SeriesDivergenceError(message)
        logger.warning(message)
    return SeriesValue(float(value), float(tail), bool(converged), weights.K, weights.J)


def expg_moment(baseline, power, r):
    """
    E[Y^r] for Y ~ exp-G(power), by the graded Gauss-Legendre rule.

    Args:
        baseline: The baseline distribution
        power: Exponentiation power (i + 1)
        r: Moment order

    Returns:
        float: The moment
    """
    v, wq = graded_gauss_legendre()
    q = baseline.quantile(v)
    return math.fsum(wq * q ** r * power * v ** (power - 1))


def moment(d, r, K=C.SERIES_K, J=C.SERIES_J, strict=False):
    """
    The r-th moment sum_i w_i E[Y_{i+1}^r] of an LL-G distribution.

    The sum over i is carried inside one quadrature over v = G(x), so
    sum_i w_i E[Y_{i+1}^r] = int_0^1 Q_G(v)^r sum_i w_i (i+1) v^i dv.

    Args:
        d: LLGDistribution
        r: Positive integer order
        K, J: Truncation indices
        strict: Raise SeriesDivergenceError instead of warning on a poor tail

    Returns:
        SeriesValue: Moment with tail diagnostic
    """
    if int(r) != r or r < 1:
        raise DomainError(f"Moment order must be a positive integer; got {r}")
    weights = expg_weights(d.a, d.b, K, J)
    v, wq = graded_gauss_legendre()
    q = d.baseline.quantile(v)
    value = math.fsum(wq * q ** int(r) * weights.polynomial(v))
    return _series_value(weights, value, strict)


def mgf(d, t, K=C.SERIES_K, J=C.SERIES_J, strict=False):
    """
    Moment generating function sum_i w_i E[exp(t Y_{i+1})].

    Args:
        d: LLGDistribution
        t: Real argument
        K, J: Truncation indices
        strict: Raise SeriesDivergenceError instead of warning on a poor tail

    Returns:
        SeriesValue: M(t) with tail diagnostic
    """
    weights = expg_weights(d.a, d.b, K, J)
    v, wq = graded_gauss_legendre()
    q = d.baseline.quantile(v)
    with np.errstate(over='ignore'):
        value = math.fsum(wq * np.exp(t * q) * weights.polynomial(v))
    return _series_value(weights, value, strict)


def order_stat_pdf(d, k, n, x):
    """
    Density of the k-th order statistic of an i.i.d. LL-G sample of size n.

    f_{k,n}(x) = n! / ((n-k)! (k-1)!) sum_{j=0}^{n-k} C(n-k, j) (-1)^j f(x) F(x)^(k+j-1)

    Args:
        d: LLGDistribution
        k: Order index, 1 <= k <= n
        n: Sample size
        x: Scalar or array of points

    Returns:
        float or numpy.ndarray: Density values
    """
    if int(k) != k or int(n) != n or not 1 <= k <= n:
        raise DomainError(f"Order statistic needs 1 <= k <= n; got k={k}, n={n}")
    k, n = int(k), int(n)
    f = np.asarray(d.pdf(x), dtype=float)
    F = np.asarray(d.cdf(x), dtype=float)
    const = math.factorial(n) / (math.factorial(n - k) * math.factorial(k - 1))
    total = np.zeros_like(F)
    for j in range(n - k + 1):
        total = total + math.comb(n - k, j) * (-1) ** j * F ** (k + j - 1)
    out = const * f * total
    return float(out) if out.ndim == 0 else out
