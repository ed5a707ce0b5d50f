"""
Maximum-likelihood fitting of LL-G models.

Provides the LL-G log-likelihood, its analytic score and (a, b) Hessian
block, a multi-start Nelder-Mead engine shared with the competitor models,
and the observed information with standard errors.
"""
import itertools
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, fields

import numpy as np
from scipy import optimize

from baselines import BASELINES, BaselineKind, Normal, Uniform01, Weibull
from config import Config as C
from errors import DataError, DomainError, FitError, LLGError, ParameterError
from llg_core import LLGDistribution, LLGParams
from utils import numeric_hessian

logger = logging.getLogger(__name__)

_TRANSFORMS = {
    'log': (np.log, np.exp),
    'identity': (lambda v: v, lambda v: v),
}


class ParameterSpace:
    """
    Named parameter vector with the optimizer's per-coordinate transforms.

    Positive parameters are optimized on the log scale, unconstrained ones
    (the Normal location) as they are.
    """

    def __init__(self, names, transforms):
        if len(names) != len(transforms):
            raise ParameterError("Each parameter needs exactly one transform")
        self.names = tuple(names)
        self.transforms = tuple(transforms)

    def __len__(self):
        return len(self.names)

    def to_internal(self, params):
        params = np.asarray(params, dtype=float)
        return np.array([_TRANSFORMS[t][0](v) for t, v in zip(self.transforms, params)])

    def to_external(self, xi):
        xi = np.asarray(xi, dtype=float)
        with np.errstate(over='ignore'):
            return np.array([_TRANSFORMS[t][1](v) for t, v in zip(self.transforms, xi)])


@dataclass(frozen=True)
class StartSummary:
    """Outcome of one optimizer start."""
    index: int
    start: tuple
    objective: float
    converged: bool
    message: str
    n_evals: int
    trace: tuple


@dataclass(frozen=True)
class StandardErrors:
    """
    Square roots of the inverse-information diagonal.

    Attributes:
        values: One entry per parameter; None where unavailable
        pseudo_inverse: True when the information was singular or indefinite
        condition: 2-norm condition number of the information matrix
    """
    values: tuple
    pseudo_inverse: bool
    condition: float


@dataclass(frozen=True)
class FitResult:
    """
    A maximum-likelihood fit.

    Attributes:
        model: Model name ("llw", "mow", ...)
        param_names: Parameter names in estimate order
        estimates: Point estimates
        std_errors: Standard errors, None where unavailable
        se_pseudo_inverse: Standard errors came from a pseudo-inverse
        neg2loglik: -2 loglik at the estimates
        converged: The chosen start met the simplex tolerances
        n_evals: Objective evaluations over all starts
        starts_used: Number of optimizer starts
        hessian_condition: Condition number of the observed information
        n: Sample size
        k: Number of free parameters
        starts: Per-start summaries in start order
        unbounded: The likelihood ran off to infinity; estimates mark where the search stopped
    """
    model: str
    param_names: tuple
    estimates: tuple
    std_errors: tuple
    se_pseudo_inverse: bool
    neg2loglik: float
    converged: bool
    n_evals: int
    starts_used: int
    hessian_condition: float
    n: int
    k: int
    starts: tuple = ()
    unbounded: bool = False

    @property
    def loglik(self):
        return -0.5 * self.neg2loglik

    @property
    def params(self):
        return dict(zip(self.param_names, self.estimates))

    @property
    def best_start(self):
        return min(self.starts, key=lambda s: (s.objective, s.index)) if self.starts else None


def _values(data):
    values = np.asarray(getattr(data, 'values', data), dtype=float)
    if values.ndim != 1 or values.size == 0:
        raise DataError("Data must be a non-empty one-dimensional sequence")
    if not np.all(np.isfinite(values)):
        raise DataError("Data contain NaN or infinite values")
    return values


def plotting_positions(n):
    """Median-rank plotting positions (i - 0.3) / (n + 0.4), i = 1..n."""
    i = np.arange(1, n + 1)
    return (i - C.PLOTTING_POSITION_SHIFT) / (n + 1.0 - 2.0 * C.PLOTTING_POSITION_SHIFT)


class LikelihoodModel:
    """
    A parametric family fitted by maximum likelihood.

    Subclasses define name, the parameter space, log_pdf and their starting
    heuristics; loglik, validation and the optimizer plumbing live here.
    """
    name = None
    support = (0.0, math.inf)

    def __init__(self, space):
        self.space = space

    @property
    def param_names(self):
        return self.space.names

    @property
    def k(self):
        return len(self.space)

    # Indices optimized in the profile stage, the rest held at their start values
    profile_indices = ()

    def log_pdf(self, params, x):
        raise NotImplementedError

    def loglik(self, params, x):
        """Sum of log densities; -inf when any term is not finite or cannot be evaluated."""
        try:
            with np.errstate(all='ignore'):
                total = float(np.sum(self.log_pdf(params, x)))
        except (LLGError, ValueError, ArithmeticError):
            # math.log of an underflowed parameter raises ValueError
            return -math.inf
        return total if math.isfinite(total) else -math.inf

    def validate(self, x):
        lower, upper = self.support
        outside = ~((x > lower) & (x < upper))
        if outside.any():
            raise DataError(
                f"Model '{self.name}' needs data in ({lower:g}, {upper:g}); "
                f"got {x[outside][0]!r}")

    def starts(self, x, n_starts, rng):
        """Return n_starts starting vectors in external coordinates."""
        raise NotImplementedError

    def jitter(self, start, rng):
        xi = self.space.to_internal(start)
        return self.space.to_external(xi + C.START_JITTER * rng.standard_normal(len(xi)))


class LLGModel(LikelihoodModel):
    """LL-G model over one baseline kind; parameters (a, b, *theta)."""

    NAMES = {
        BaselineKind.WEIBULL: 'llw',
        BaselineKind.NORMAL: 'lln',
        BaselineKind.UNIFORM01: 'llu',
    }

    def __init__(self, baseline_kind=BaselineKind.WEIBULL):
        if isinstance(baseline_kind, str):
            baseline_kind = BASELINES[baseline_kind.lower()].kind
        self.baseline_kind = baseline_kind
        self.baseline_cls = {Weibull.kind: Weibull, Normal.kind: Normal,
                             Uniform01.kind: Uniform01}[baseline_kind]
        theta_names = tuple(f.name for f in fields(self.baseline_cls))
        super().__init__(ParameterSpace(('a', 'b') + theta_names,
                                        ('log', 'log') + self.baseline_cls.param_transforms))
        self.name = self.NAMES[baseline_kind]
        self.support = self.baseline_cls.support
        self.profile_indices = tuple(range(2, self.k))

    def baseline(self, params):
        return self.baseline_cls(*(float(v) for v in params[2:]))

    def distribution(self, params):
        return LLGDistribution(LLGParams(float(params[0]), float(params[1]), self.baseline(params)))

    def log_pdf(self, params, x):
        return self.distribution(params).log_pdf(x)

    def loglik(self, params, x):
        """
        l = 2n log a - n log(1+ab) + sum log g + (a-1) sum log G + sum log(b - log G)
        """
        try:
            a, b = float(params[0]), float(params[1])
            LLGParams(a, b, None)
            base = self.baseline(params)
        except LLGError:
            return -math.inf
        n = len(x)
        with np.errstate(all='ignore'):
            log_G = np.maximum(base.log_cdf(x), C.LOG_G_FLOOR)
            total = (2.0 * n * math.log(a) - n * math.log1p(a * b)
                     + np.sum(base.log_pdf(x)) + (a - 1.0) * np.sum(log_G)
                     + np.sum(np.log(b - log_G)))
        total = float(total)
        return total if math.isfinite(total) else -math.inf

    def printed_loglik(self, params, x):
        """The log-likelihood with +n log(1+ab), as sometimes printed."""
        a, b = float(params[0]), float(params[1])
        return self.loglik(params, x) + 2.0 * len(x) * math.log1p(a * b)

    def score(self, params, x):
        """
        Analytic gradient of loglik.

        U_a = 2n/a - nb/(1+ab) + sum log G
        U_b = -na/(1+ab) + sum 1/(b - log G)
        U_theta = sum dg/g + (a-1) sum dG/G - sum dG / (G (b - log G))

        Returns:
            numpy.ndarray: Gradient in (a, b, *theta) order

        Raises:
            DomainError: If the log-likelihood is not finite at params
        """
        if not math.isfinite(self.loglik(params, x)):
            raise DomainError(
                f"Score of '{self.name}' is undefined where the log-likelihood is not finite")
        a, b = float(params[0]), float(params[1])
        base = self.baseline(params)
        n = len(x)
        c = 1.0 + a * b
        log_G = np.maximum(base.log_cdf(x), C.LOG_G_FLOOR)
        B = b - log_G
        u_a = 2.0 * n / a - n * b / c + np.sum(log_G)
        u_b = -n * a / c + np.sum(1.0 / B)
        G = np.exp(log_G)
        dG_over_G = base.grad_cdf(x) / G
        u_theta = (np.sum(base.grad_log_pdf(x), axis=1)
                   + (a - 1.0) * np.sum(dG_over_G, axis=1)
                   - np.sum(dG_over_G / B, axis=1))
        return np.concatenate([[u_a, u_b], u_theta])

    def analytic_hessian_block(self, params, x):
        """
        Second derivatives of loglik in (a, b).

        Returns:
            numpy.ndarray: [[l_aa, l_ab], [l_ab, l_bb]]
        """
        a, b = float(params[0]), float(params[1])
        base = self.baseline(params)
        n = len(x)
        c2 = (1.0 + a * b) ** 2
        B = b - base.log_cdf(x)
        h11 = -2.0 * n / a ** 2 + n * b ** 2 / c2
        h12 = -n / c2
        h22 = n * a ** 2 / c2 - np.sum(B ** -2.0)
        return np.array([[h11, h12], [h12, h22]])

    def theta_seed(self, x, a, b):
        """
        Regress the data on baseline probabilities implied by (a, b).

        Plotting positions are mapped through the Log-Lindley quantile so the
        linearised fit targets G(x) rather than F(x).
        """
        xs = np.sort(x)
        ll_uniform = LLGDistribution.from_values(a, b, Uniform01())
        v = np.exp(ll_uniform.log_baseline_level(plotting_positions(len(xs))))
        v = np.clip(v, 1e-12, 1.0 - 1e-12)
        return self.baseline_cls().seed(xs, v)

    def starts(self, x, n_starts, rng):
        grid = list(itertools.product(C.A_GRID, C.B_GRID))
        starts = []
        for i in range(n_starts):
            a, b = grid[i % len(grid)]
            start = np.concatenate([[a, b], self.theta_seed(x, a, b)])
            starts.append(start if i < len(grid) else self.jitter(start, rng))
        return starts


class _Objective:
    """Negative loglik in internal coordinates with an evaluation counter."""

    def __init__(self, model, x):
        self.model = model
        self.x = x
        self.n_evals = 0

    def __call__(self, xi):
        self.n_evals += 1
        params = self.model.space.to_external(xi)
        if not np.all(np.isfinite(params)):
            return C.OBJECTIVE_PENALTY
        value = -self.model.loglik(params, self.x)
        return value if math.isfinite(value) else C.OBJECTIVE_PENALTY


def _profile(objective, xi0, indices):
    """Optimize the coordinates in indices with the others held fixed."""
    if not indices or len(indices) == len(xi0):
        return xi0
    idx = list(indices)

    def partial(sub):
        xi = xi0.copy()
        xi[idx] = sub
        return objective(xi)

    res = optimize.minimize(partial, xi0[idx], method='Nelder-Mead',
                            options={'maxfev': C.PROFILE_MAXFEV, 'xatol': 1e-6, 'fatol': 1e-8})
    xi = xi0.copy()
    if res.fun < partial(xi0[idx]):
        xi[idx] = res.x
    return xi


def _run_start(model, x, index, start):
    """Profile stage, then Nelder-Mead with polish restarts from the incumbent."""
    objective = _Objective(model, x)
    trace = []

    def record(intermediate_result):
        trace.append(float(intermediate_result.fun))

    options = {'xatol': C.NM_XATOL, 'fatol': C.NM_FATOL,
               'maxfev': C.NM_MAXFEV_PER_PARAM * model.k, 'adaptive': model.k > 2}
    xi = _profile(objective, model.space.to_internal(start), model.profile_indices)
    res = optimize.minimize(objective, xi, method='Nelder-Mead', callback=record, options=options)
    for _ in range(C.POLISH_RESTARTS):
        again = optimize.minimize(objective, res.x, method='Nelder-Mead',
                                  callback=record, options=options)
        improved = again.fun < res.fun - C.NM_FATOL
        if again.fun <= res.fun:
            res = again
        if not improved:
            break
    value = float(res.fun)
    finite = value < C.OBJECTIVE_PENALTY
    converged = bool(res.success) and finite
    if not converged:
        logger.debug("Start %d of '%s' did not converge: %s", index, model.name, res.message)
    return StartSummary(index, tuple(float(v) for v in start), value, converged,
                        str(res.message), objective.n_evals, tuple(trace)), res.x


def observed_information(model, params, x):
    """
    Negative Hessian of loglik in the natural (untransformed) parameter coordinates.

    Centered second differences with steps 1e-4 max(|p|, 1), shrunk for
    positive parameters so every evaluation stays inside the parameter space.

    Returns:
        numpy.ndarray: Observed information (k, k)
    """
    params = np.asarray(params, dtype=float)
    steps = C.HESSIAN_STEP * np.maximum(np.abs(params), 1.0)
    positive = np.array([t == 'log' for t in model.space.transforms])
    steps = np.where(positive, np.minimum(steps, 0.5 * np.abs(params)), steps)
    hessian = numeric_hessian(lambda p: model.loglik(p, x), params, steps)
    return -hessian


def standard_errors(info):
    """
    Standard errors from an observed information matrix.

    A Cholesky factorization certifies positive definiteness; otherwise the
    pseudo-inverse is used and the result is flagged.

    Args:
        info: Symmetric information matrix

    Returns:
        StandardErrors: Per-parameter values (None where unavailable)
    """
    info = np.asarray(info, dtype=float)
    if not np.all(np.isfinite(info)):
        logger.warning("Observed information has non-finite entries; standard errors unavailable")
        return StandardErrors(tuple([None] * len(info)), True, math.inf)
    condition = float(np.linalg.cond(info))
    try:
        np.linalg.cholesky(info)
        cov = np.linalg.inv(info)
        pseudo = False
    except np.linalg.LinAlgError:
        logger.warning("Observed information is singular or indefinite; using the pseudo-inverse")
        cov = np.linalg.pinv(info)
        pseudo = True
    diag = np.diag(cov)
    values = tuple(float(math.sqrt(v)) if np.isfinite(v) and v > 0.0 else None for v in diag)
    return StandardErrors(values, pseudo, condition)


def maximize(model, data, n_starts=C.N_STARTS, seed=0, workers=1):
    """
    Multi-start maximum-likelihood fit of any LikelihoodModel.

    Starts run independently (optionally in a thread pool) and are merged
    deterministically: lowest objective, then lowest start index.

    Args:
        model: LikelihoodModel
        data: Dataset or 1-d array of observations
        n_starts: Number of optimizer starts
        seed: Seed for the start jitter
        workers: Thread-pool size; 1 runs sequentially

    Returns:
        FitResult: The best fit with standard errors

    Raises:
        DataError: If the data fall outside the model support
        FitError: If every start diverged
    """
    x = _values(data)
    model.validate(x)
    if n_starts < 1:
        raise ParameterError(f"n_starts must be >= 1; got {n_starts}")
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    starts = model.starts(x, int(n_starts), rng)

    def run(item):
        return _run_start(model, x, *item)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(run, enumerate(starts)))
    else:
        outcomes = [run(item) for item in enumerate(starts)]

    summaries = tuple(s for s, _ in outcomes)
    finite = [i for i, s in enumerate(summaries) if s.objective < C.OBJECTIVE_PENALTY]
    if not finite:
        raise FitError(f"All {len(starts)} starts diverged for model '{model.name}'",
                       [{'start': s.index, 'message': s.message, 'objective': s.objective}
                        for s in summaries])
    converged = [i for i in finite if summaries[i].converged]
    pool_idx = converged or finite
    best = min(pool_idx, key=lambda i: (summaries[i].objective, i))
    if not converged:
        logger.warning("No start of '%s' met the simplex tolerances; reporting the best one", model.name)

    estimates = model.space.to_external(outcomes[best][1])
    neg2loglik = -2.0 * model.loglik(estimates, x)
    bound = C.LOGLIK_BOUND_PER_OBS * len(x)
    unbounded = (summaries[best].objective < -bound or not math.isfinite(neg2loglik)
                 or neg2loglik < -2.0 * bound)
    if unbounded:
        logger.warning("Likelihood of '%s' is unbounded on these data (-2logL reached %.6g); "
                       "no standard errors", model.name, neg2loglik)
        ses = StandardErrors(tuple([None] * model.k), False, math.inf)
    else:
        ses = standard_errors(observed_information(model, estimates, x))
        logger.info("Fitted '%s': -2logL = %.6f after %d starts",
                    model.name, neg2loglik, len(starts))
    return FitResult(
        model=model.name,
        param_names=model.param_names,
        estimates=tuple(float(v) for v in estimates),
        std_errors=ses.values,
        se_pseudo_inverse=ses.pseudo_inverse,
        neg2loglik=neg2loglik,
        converged=summaries[best].converged,
        n_evals=sum(s.n_evals for s in summaries),
        starts_used=len(starts),
        hessian_condition=ses.condition,
        n=len(x),
        k=model.k,
        starts=summaries,
        unbounded=unbounded,
    )


def fit(data, baseline_kind=BaselineKind.WEIBULL, n_starts=C.N_STARTS, seed=0, workers=1):
    """
    Fit an LL-G model over the given baseline kind.

    Args:
        data: Dataset or 1-d array of observations
        baseline_kind: BaselineKind or baseline name
        n_starts: Number of optimizer starts
        seed: Seed for the start jitter
        workers: Thread-pool size

    Returns:
        FitResult: The fit
    """
    return maximize(LLGModel(baseline_kind), data, n_starts, seed, workers)
