"""Shared fixtures: the guinea-pig survival data and published parameter sets."""

import numpy as np
import pytest

from baselines import Normal, Uniform01, Weibull
from competitors import competitor_fit
from dataset import load_dataset
from llg_core import LLGDistribution
from mle import fit

# Published maximum-likelihood estimates for the survival data
LLW_ESTIMATES = {'a': 14.024860, 'b': 0.047958, 'alpha': 0.230493, 'beta': 0.547514}
WEIBULL_ESTIMATES = {'alpha': 0.0028431, 'beta': 1.2587947}
WEIBULL_STD_ERRORS = {'alpha': 0.0020601, 'beta': 0.1406885}

# The published Weibull point is not stationary; this is the actual optimum
WEIBULL_MLE = {'alpha': 0.00142204, 'beta': 1.3931869}
WEIBULL_MLE_NEG2LOGLIK = 794.2953

# Published -2 log L for every model of the comparison
PUBLISHED_NEG2LOGLIK = {
    'llw': 779.7472,
    'tw': 780.1929,
    'gw': 798.7376,
    'low': 783.3026,
    'liw': 788.9608,
    'olw': 796.4631,
    'ww': 780.3174,
    'mow': 792.0679,
    'mcw': 780.0641,
    'kw': 780.2858,
    'bw': 780.0632,
    'weibull': 795.6583,
}


@pytest.fixture(scope="session")
def bjerkedal():
    return load_dataset("bjerkedal")


@pytest.fixture(scope="session")
def bjerkedal_x(bjerkedal):
    return bjerkedal.array()


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


@pytest.fixture(scope="session")
def llw_published():
    p = LLW_ESTIMATES
    return LLGDistribution.from_values(p['a'], p['b'], Weibull(p['alpha'], p['beta']))


@pytest.fixture
def log_lindley():
    """LL-G over the uniform baseline with a = 1, b = 0, i.e. f(x) = -log x."""
    return LLGDistribution.from_values(1.0, 0.0, Uniform01())


@pytest.fixture(params=["uniform", "normal", "weibull"])
def llg_any(request):
    """One LL-G distribution per baseline kind."""
    baseline = {
        "uniform": Uniform01(),
        "normal": Normal(0.5, 1.5),
        "weibull": Weibull(0.8, 1.7),
    }[request.param]
    return LLGDistribution.from_values(2.5, 0.5, baseline)


@pytest.fixture(scope="session")
def llw_fit(bjerkedal):
    return fit(bjerkedal)


@pytest.fixture(scope="session")
def weibull_fit(bjerkedal):
    return competitor_fit("weibull", bjerkedal)
