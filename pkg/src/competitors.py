"""
Rival Weibull-based models for the comparison study.

Every model is a log-density over (alpha, beta) plus its own shape
parameters, fitted by the multi-start engine in mle. The Gompertz-Weibull
density as usually printed does not integrate to one; it is fitted and
reported but never designated best.
"""
import logging
import math
from enum import Enum

import numpy as np
from scipy import special

from baselines import BaselineKind, Weibull
from config import Config as C
from errors import ParameterError
from mle import LikelihoodModel, LLGModel, ParameterSpace, maximize, plotting_positions
from utils import log1mexp

logger = logging.getLogger(__name__)

# Largest exponent passed to exp in the Gompertz term
_GW_EXP_CAP = 700.0


class CompetitorKind(Enum):
    LLW = "llw"
    TW = "tw"
    GW = "gw"
    LOW = "low"
    LIW = "liw"
    OLW = "olw"
    WW = "ww"
    MOW = "mow"
    MCW = "mcw"
    KW = "kw"
    BW = "bw"
    WEIBULL = "weibull"

    @classmethod
    def parse(cls, name):
        try:
            return cls(name.lower())
        except ValueError:
            raise ParameterError(
                f"Unknown model '{name}'; expected one of {[k.value for k in cls]}") from None


QUARANTINED = frozenset({CompetitorKind.GW})

# Reduction to the plain Weibull, used as an extra optimizer start
NESTED_AT = {
    CompetitorKind.MOW: {'a': 1.0},
    CompetitorKind.KW: {'a': 1.0, 'b': 1.0},
    CompetitorKind.BW: {'a': 1.0, 'b': 1.0},
    CompetitorKind.MCW: {'a': 1.0, 'b': 1.0, 'c': 1.0},
}


def _weibull_terms(x, alpha, beta):
    """Return log g, t = alpha x^beta and log G of the Weibull baseline."""
    t = alpha * np.power(x, beta)
    log_g = math.log(alpha) + math.log(beta) + (beta - 1.0) * np.log(x) - t
    return log_g, t, log1mexp(t)


def _log1m_pow(log_G, p):
    """log(1 - G^p) from log G."""
    return log1mexp(-p * log_G)


def _log_weibull(x, alpha, beta):
    return _weibull_terms(x, alpha, beta)[0]


def _log_tw(x, alpha, beta, a, b):
    log_g, _, log_G = _weibull_terms(x, alpha, beta)
    return (math.log(2.0) + math.log(a) + math.log(b) + log_g + (a * b - 1.0) * log_G
            + _log1m_pow(log_G, b) + (a - 1.0) * np.log1p(-np.expm1(b * log_G)))


def _log_gw(x, alpha, beta, a, b):
    t = alpha * np.power(x, beta)
    growth = b * t
    value = (math.log(a) + math.log(alpha) + math.log(beta) + (beta - 1.0) * np.log(x)
             + (1.0 + b) * t - (a / b) * np.expm1(np.minimum(growth, _GW_EXP_CAP)))
    return np.where(growth > _GW_EXP_CAP, -np.inf, value)


def _log_low(x, alpha, beta, a, b):
    t = alpha * np.power(x, beta)
    return (math.log(a) + a * math.log(b) + math.log(alpha) + math.log(beta)
            + (beta - 1.0) * np.log(x) - (a + 1.0) * np.log(b + t))


def _log_liw(x, alpha, beta, a):
    t = alpha * np.power(x, beta)
    return (2.0 * math.log(a) - math.log1p(a) + math.log(alpha) + math.log(beta)
            + (beta - 1.0) * np.log(x) - a * t + np.log1p(t))


def _log_olw(x, alpha, beta, a):
    t = alpha * np.power(x, beta)
    return (2.0 * math.log(a) - math.log1p(a) + math.log(alpha) + math.log(beta)
            + (beta - 1.0) * np.log(x) + 2.0 * t - a * np.expm1(t))


def _log_ww(x, alpha, beta, a, b):
    log_g, _, log_G = _weibull_terms(x, alpha, beta)
    s = -log_G
    return math.log(a) + math.log(b) + log_g + s + (b - 1.0) * np.log(s) - a * np.power(s, b)


def _log_mow(x, alpha, beta, a):
    log_g, t, _ = _weibull_terms(x, alpha, beta)
    return math.log(a) + log_g - 2.0 * np.log1p(-(1.0 - a) * np.exp(-t))


def _log_mcw(x, alpha, beta, a, b, c):
    log_g, _, log_G = _weibull_terms(x, alpha, beta)
    return (math.log(c) - special.betaln(a / c, b) + log_g
            + (a - 1.0) * log_G + (b - 1.0) * _log1m_pow(log_G, c))


def _log_kw(x, alpha, beta, a, b):
    log_g, _, log_G = _weibull_terms(x, alpha, beta)
    return math.log(a) + math.log(b) + log_g + (a - 1.0) * log_G + (b - 1.0) * _log1m_pow(log_G, a)


def _log_bw(x, alpha, beta, a, b):
    t = alpha * np.power(x, beta)
    log_G = log1mexp(t)
    return (math.log(alpha) + math.log(beta) + (beta - 1.0) * np.log(x) - b * t
            + (a - 1.0) * log_G - special.betaln(a, b))


_DENSITIES = {
    CompetitorKind.TW: (('alpha', 'beta', 'a', 'b'), _log_tw),
    CompetitorKind.GW: (('alpha', 'beta', 'a', 'b'), _log_gw),
    CompetitorKind.LOW: (('alpha', 'beta', 'a', 'b'), _log_low),
    CompetitorKind.LIW: (('alpha', 'beta', 'a'), _log_liw),
    CompetitorKind.OLW: (('alpha', 'beta', 'a'), _log_olw),
    CompetitorKind.WW: (('alpha', 'beta', 'a', 'b'), _log_ww),
    CompetitorKind.MOW: (('alpha', 'beta', 'a'), _log_mow),
    CompetitorKind.MCW: (('alpha', 'beta', 'a', 'b', 'c'), _log_mcw),
    CompetitorKind.KW: (('alpha', 'beta', 'a', 'b'), _log_kw),
    CompetitorKind.BW: (('alpha', 'beta', 'a', 'b'), _log_bw),
    CompetitorKind.WEIBULL: (('alpha', 'beta'), _log_weibull),
}


def competitor_log_pdf(kind, params, x):
    """
    Log-density of a rival model.

    Args:
        kind: CompetitorKind or model name (not "llw")
        params: Parameters in (alpha, beta, a, b, c) order, as applicable
        x: Scalar or array of points

    Returns:
        float or numpy.ndarray: log f(x); -inf for x <= 0

    Raises:
        ParameterError: If the parameter count is wrong or any parameter is <= 0
    """
    if isinstance(kind, str):
        kind = CompetitorKind.parse(kind)
    names, func = _DENSITIES[kind]
    params = [float(p) for p in params]
    if len(params) != len(names):
        raise ParameterError(f"Model '{kind.value}' takes {len(names)} parameters; got {len(params)}")
    bad = [n for n, p in zip(names, params) if not (math.isfinite(p) and p > 0.0)]
    if bad:
        raise ParameterError(f"Model '{kind.value}' needs positive {', '.join(bad)}")
    xa = np.asarray(x, dtype=float)
    inside = xa > 0.0
    with np.errstate(all='ignore'):
        value = func(np.where(inside, xa, 1.0), *params)
    value = np.where(inside, value, -np.inf)
    value = np.where(np.isnan(value), -np.inf, value)
    return float(value) if xa.ndim == 0 else value


class CompetitorModel(LikelihoodModel):
    """A rival model with (alpha, beta) and its extra shape parameters."""
    profile_indices = (0, 1)

    def __init__(self, kind):
        if isinstance(kind, str):
            kind = CompetitorKind.parse(kind)
        if kind is CompetitorKind.LLW:
            raise ParameterError("The LL-W model is fitted through LLGModel")
        names, _ = _DENSITIES[kind]
        super().__init__(ParameterSpace(names, ('log',) * len(names)))
        self.kind = kind
        self.name = kind.value

    @property
    def quarantined(self):
        return self.kind in QUARANTINED

    def log_pdf(self, params, x):
        return competitor_log_pdf(self.kind, params, x)

    def starts(self, x, n_starts, rng):
        xs = np.sort(x)
        alpha, beta = Weibull().seed(xs, plotting_positions(len(xs)))
        grid = C.COMPETITOR_GRIDS[self.kind.name]
        extras = self.param_names[2:]
        combos = [()]
        for name in extras:
            combos = [c + (v,) for c in combos for v in grid[name]]
        base = [np.array([alpha, beta, *combo]) for combo in combos]
        starts = [base[i] if i < len(base) else self.jitter(base[i % len(base)], rng)
                  for i in range(n_starts)]
        if self.kind in NESTED_AT:
            starts.append(self._nested_start(x))
        return starts

    def _nested_start(self, x):
        """The reduction point of this model, seeded from the Weibull fit."""
        weibull = maximize(CompetitorModel(CompetitorKind.WEIBULL), x, n_starts=1)
        reduction = NESTED_AT[self.kind]
        return np.array([*weibull.estimates, *(reduction[n] for n in self.param_names[2:])])


def model_for(name):
    """
    Build the likelihood model behind a command-line model name.

    Args:
        name: "llw", "lln", "llu" or a rival model name

    Returns:
        LikelihoodModel: The model
    """
    key = name.lower()
    if key == 'lln':
        return LLGModel(BaselineKind.NORMAL)
    if key == 'llu':
        return LLGModel(BaselineKind.UNIFORM01)
    kind = CompetitorKind.parse(key)
    if kind is CompetitorKind.LLW:
        return LLGModel(BaselineKind.WEIBULL)
    return CompetitorModel(kind)


def competitor_fit(kind, data, n_starts=C.N_STARTS, seed=0, workers=1):
    """
    Fit one model of the comparison study by maximum likelihood.

    Args:
        kind: CompetitorKind or model name
        data: Dataset or 1-d array of positive observations
        n_starts: Number of optimizer starts (the nested start comes on top)
        seed: Seed for the start jitter
        workers: Thread-pool size

    Returns:
        FitResult: The fit
    """
    name = kind.value if isinstance(kind, CompetitorKind) else kind
    model = model_for(name)
    if getattr(model, 'quarantined', False):
        logger.info("Model '%s' does not normalise; its fit is reported but not ranked", name)
    return maximize(model, data, n_starts, seed, workers)
