"""
Information criteria and the model-comparison table.

Smaller values are better for every criterion. Rows are ordered by AIC;
each criterion column also records which row is best among the models that
fitted and integrate to one.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

from competitors import QUARANTINED, CompetitorKind, competitor_fit, model_for
from config import Config as C
from errors import FitError

logger = logging.getLogger(__name__)

# Table order; also the final tie-break when sorting rows
MODEL_ORDER = ('llw', 'tw', 'gw', 'low', 'liw', 'olw', 'ww', 'mow', 'mcw', 'kw', 'bw',
               'weibull', 'lln')
ALL_MODELS = MODEL_ORDER[:12]


@dataclass(frozen=True)
class Criteria:
    """AIC, CAIC, BIC and HQIC; CAIC is None when n <= k + 1, HQIC when n < 3."""
    aic: float
    caic: float
    bic: float
    hqic: float


def criteria(neg2loglik, k, n):
    """
    Compute the four information criteria with natural logarithms.

    AIC = -2l + 2k, CAIC = -2l + 2kn/(n-k-1), BIC = -2l + k log n,
    HQIC = -2l + 2k log log n.

    Args:
        neg2loglik: -2 times the maximized log-likelihood
        k: Number of free parameters
        n: Sample size

    Returns:
        Criteria: The four values
    """
    aic = neg2loglik + 2.0 * k
    caic = neg2loglik + 2.0 * k * n / (n - k - 1) if n > k + 1 else None
    bic = neg2loglik + k * math.log(n)
    hqic = neg2loglik + 2.0 * k * math.log(math.log(n)) if n >= 3 else None
    if caic is None:
        logger.debug("CAIC unavailable for k=%d, n=%d", k, n)
    return Criteria(aic, caic, bic, hqic)


@dataclass(frozen=True)
class ComparisonRow:
    """
    One model's line in the comparison table.

    Attributes:
        model: Model name
        neg2loglik: -2 loglik at the fit (nan when the fit failed)
        aic, caic, bic, hqic: Information criteria (None when unavailable)
        k: Parameter count
        converged: The fit produced an estimate that met the simplex tolerances
        quarantined: The model density does not integrate to one
        unbounded: The likelihood has no maximum on the data; criteria are None
        best_in: Criteria for which this row is the best eligible row
        fit: The FitResult, or None when every start diverged
    """
    model: str
    neg2loglik: float
    aic: float
    caic: float
    bic: float
    hqic: float
    k: int
    converged: bool
    quarantined: bool
    unbounded: bool = False
    best_in: tuple = ()
    fit: object = None

    @property
    def eligible(self):
        return (self.fit is not None and math.isfinite(self.neg2loglik)
                and not (self.quarantined or self.unbounded))

    def value(self, criterion):
        return getattr(self, criterion)


def _row(name, fit):
    kind = next((k for k in CompetitorKind if k.value == name), None)
    quarantined = kind in QUARANTINED
    if fit is None:
        k = model_for(name).k
        return ComparisonRow(name, math.nan, None, None, None, None, k, False, quarantined)
    if fit.unbounded:
        return ComparisonRow(name, math.nan, None, None, None, None, fit.k, fit.converged,
                             quarantined, unbounded=True, fit=fit)
    crit = criteria(fit.neg2loglik, fit.k, fit.n)
    return ComparisonRow(name, fit.neg2loglik, crit.aic, crit.caic, crit.bic, crit.hqic,
                         fit.k, fit.converged, quarantined, fit=fit)


def _fit_one(name, data, n_starts, seed):
    try:
        return competitor_fit(name, data, n_starts, seed)
    except FitError as e:
        logger.warning("Fit of '%s' failed: %s", name, e)
        return None


def _sort_key(row):
    aic = row.aic if row.aic is not None and math.isfinite(row.aic) else math.inf
    order = MODEL_ORDER.index(row.model) if row.model in MODEL_ORDER else len(MODEL_ORDER)
    return (aic, row.k, order)


def mark_best(rows):
    """Return rows with best_in filled for each criterion among eligible rows."""
    best = {}
    for criterion in C.CRITERIA:
        candidates = [r for r in rows if r.eligible and r.value(criterion) is not None]
        if candidates:
            winner = min(candidates, key=lambda r: (r.value(criterion), _sort_key(r)))
            best.setdefault(winner.model, []).append(criterion)
    return [replace(r, best_in=tuple(best.get(r.model, ()))) for r in rows]


def compare(data, models, n_starts=C.N_STARTS, seed=0, workers=1):
    """
    Fit each model and tabulate its information criteria.

    Args:
        data: Dataset or 1-d array of positive observations
        models: Iterable of model names (or CompetitorKind members)
        n_starts: Optimizer starts per model
        seed: Seed shared by every model fit
        workers: Models fitted concurrently

    Returns:
        list: ComparisonRow entries sorted by AIC, then k, then table order
    """
    names = [m.value if isinstance(m, CompetitorKind) else m.lower() for m in models]
    names = list(dict.fromkeys(names))
    for name in names:
        model_for(name)

    def run(name):
        return _fit_one(name, data, n_starts, seed)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            fits = list(pool.map(run, names))
    else:
        fits = [run(name) for name in names]

    rows = sorted((_row(name, fit) for name, fit in zip(names, fits)), key=_sort_key)
    return mark_best(rows)
