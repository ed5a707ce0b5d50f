"""Tests for the LL-G likelihood, score, optimizer and standard errors."""

import math

import numpy as np
import pytest

from baselines import BaselineKind, Normal, Uniform01, Weibull
from errors import DataError, DomainError, FitError, ParameterError
from llg_core import LLGDistribution
from mle import (LikelihoodModel, LLGModel, ParameterSpace, fit, maximize, observed_information,
                 plotting_positions, standard_errors)
from selection import criteria
from utils import numeric_gradient

from conftest import LLW_ESTIMATES, PUBLISHED_NEG2LOGLIK

LLW_VECTOR = [LLW_ESTIMATES[n] for n in ('a', 'b', 'alpha', 'beta')]


class _Flat(LikelihoodModel):
    """A model whose likelihood is zero everywhere."""
    name = "flat"

    def __init__(self):
        super().__init__(ParameterSpace(('p',), ('log',)))

    def log_pdf(self, params, x):
        return np.full(len(x), -np.inf)

    def starts(self, x, n_starts, rng):
        return [np.array([1.0 + i]) for i in range(n_starts)]


class _Runaway(_Flat):
    """A model whose log-likelihood grows without limit in p."""
    name = "runaway"

    def log_pdf(self, params, x):
        return np.full(len(x), float(params[0]))


class _Raising(_Flat):
    """A model whose density evaluation fails the way math.log(0.0) does."""
    name = "raising"

    def log_pdf(self, params, x):
        raise ValueError("math domain error")


@pytest.fixture(scope="module")
def weibull_sample():
    d = LLGDistribution.from_values(2.0, 0.8, Weibull(0.5, 1.4))
    return d.sample(50, seed=17)


@pytest.fixture(scope="module")
def normal_sample():
    d = LLGDistribution.from_values(1.5, 0.3, Normal(1.0, 2.0))
    return d.sample(50, seed=19)


def _random_llw(rng):
    return np.array([rng.uniform(0.5, 5.0), rng.uniform(0.1, 3.0),
                     rng.uniform(0.2, 1.5), rng.uniform(0.6, 2.5)])


def _random_lln(rng):
    return np.array([rng.uniform(0.5, 5.0), rng.uniform(0.1, 3.0),
                     rng.uniform(-1.0, 2.0), rng.uniform(0.8, 3.0)])


class TestParameterSpace:

    def test_round_trip(self, rng):
        space = ParameterSpace(('a', 'b', 'mu', 'sigma'), ('log', 'log', 'identity', 'log'))
        p = np.array([2.5, 0.01, -3.2, 7.0])
        np.testing.assert_allclose(space.to_external(space.to_internal(p)), p, rtol=1e-14)

    def test_mismatched_transforms(self):
        with pytest.raises(ParameterError):
            ParameterSpace(('a', 'b'), ('log',))

    def test_model_names(self):
        assert LLGModel().param_names == ('a', 'b', 'alpha', 'beta')
        assert LLGModel("normal").param_names == ('a', 'b', 'mu', 'sigma')
        assert LLGModel(BaselineKind.UNIFORM01).param_names == ('a', 'b')
        assert LLGModel("normal").space.transforms == ('log', 'log', 'identity', 'log')
        assert LLGModel().name == "llw"
        assert LLGModel().k == 4


class TestLoglik:

    def test_single_observation(self):
        model = LLGModel(BaselineKind.UNIFORM01)
        assert model.loglik([1.0, 0.0], np.array([math.exp(-1.0)])) == pytest.approx(0.0, abs=1e-15)

    def test_published_estimates(self, bjerkedal_x):
        value = -2.0 * LLGModel().loglik(LLW_VECTOR, bjerkedal_x)
        assert value == pytest.approx(PUBLISHED_NEG2LOGLIK['llw'], abs=0.05)

    def test_printed_form_disagrees(self, bjerkedal_x):
        value = -2.0 * LLGModel().printed_loglik(LLW_VECTOR, bjerkedal_x)
        assert abs(value - PUBLISHED_NEG2LOGLIK['llw']) > 1.0

    def test_matches_sum_of_log_densities(self, weibull_sample, rng):
        model = LLGModel()
        for _ in range(5):
            params = _random_llw(rng)
            expected = float(np.sum(model.distribution(params).log_pdf(weibull_sample)))
            assert model.loglik(params, weibull_sample) == pytest.approx(expected, rel=1e-10)

    def test_boundary_observation_gives_minus_infinity(self):
        model = LLGModel(BaselineKind.UNIFORM01)
        assert model.loglik([2.0, 0.0], np.array([0.5, 1.0])) == -math.inf

    def test_invalid_parameters_give_minus_infinity(self, weibull_sample):
        model = LLGModel()
        assert model.loglik([-1.0, 0.5, 1.0, 1.0], weibull_sample) == -math.inf
        assert model.loglik([1.0, 0.5, 0.0, 1.0], weibull_sample) == -math.inf

    def test_failed_evaluation_gives_minus_infinity(self):
        assert _Raising().loglik([1.0], np.array([1.0, 2.0])) == -math.inf


class TestScore:

    @pytest.mark.parametrize("kind, sample, draw", [
        ("weibull", "weibull_sample", _random_llw),
        ("normal", "normal_sample", _random_lln),
    ])
    def test_matches_finite_differences(self, kind, sample, draw, rng, request):
        x = request.getfixturevalue(sample)
        model = LLGModel(kind)
        for _ in range(20):
            params = draw(rng)
            steps = 1e-6 * np.maximum(np.abs(params), 1.0)
            fd = numeric_gradient(lambda p: model.loglik(p, x), params, steps)
            np.testing.assert_allclose(model.score(params, x), fd, rtol=1e-5, atol=1e-5)

    def test_large_b(self, weibull_sample):
        model = LLGModel()
        params = np.array([3.0, 1e3, 0.5, 1.4])
        steps = np.array([1e-6, 1e-1, 1e-6, 1e-6])
        fd = numeric_gradient(lambda p: model.loglik(p, weibull_sample), params, steps)
        u_b = model.score(params, weibull_sample)[1]
        assert np.sign(u_b) == np.sign(fd[1])
        assert u_b == pytest.approx(fd[1], rel=1e-3)

    def test_undefined_where_loglik_is_not_finite(self):
        model = LLGModel(BaselineKind.UNIFORM01)
        with pytest.raises(DomainError):
            model.score([2.0, 0.0], np.array([0.5, 1.0]))
        with pytest.raises(DomainError):
            LLGModel().score([-1.0, 0.5, 1.0, 1.0], np.array([0.5, 1.0]))

    def test_floors_log_cdf_like_loglik(self):
        params = np.array([2.0, 0.5, 1.0, 2.0])
        x = np.array([1e-200, 0.5, 1.0])
        assert math.isfinite(LLGModel().loglik(params, x))
        assert np.all(np.isfinite(LLGModel().score(params, x)))


class TestInformation:

    @pytest.mark.parametrize("kind, sample, draw", [
        ("weibull", "weibull_sample", _random_llw),
        ("normal", "normal_sample", _random_lln),
    ])
    def test_analytic_block(self, kind, sample, draw, rng, request):
        x = request.getfixturevalue(sample)
        model = LLGModel(kind)
        for _ in range(5):
            params = draw(rng)
            info = observed_information(model, params, x)
            np.testing.assert_allclose(info, info.T, atol=1e-6 * np.abs(info).max())
            np.testing.assert_allclose(-info[:2, :2], model.analytic_hessian_block(params, x),
                                       rtol=1e-4, atol=1e-4)

    def test_identity(self):
        ses = standard_errors(np.eye(2))
        assert ses.values == (1.0, 1.0)
        assert not ses.pseudo_inverse
        assert ses.condition == pytest.approx(1.0)

    def test_diagonal(self):
        ses = standard_errors(np.diag([4.0, 25.0]))
        assert ses.values == pytest.approx((0.5, 0.2))

    def test_singular(self):
        ses = standard_errors(np.array([[1.0, 1.0], [1.0, 1.0]]))
        assert ses.pseudo_inverse
        assert ses.values == pytest.approx((0.5, 0.5))

    def test_indefinite(self):
        ses = standard_errors(np.diag([1.0, -1.0]))
        assert ses.pseudo_inverse
        assert ses.values[0] == pytest.approx(1.0)
        assert ses.values[1] is None

    def test_non_finite(self):
        ses = standard_errors(np.array([[1.0, np.nan], [np.nan, 1.0]]))
        assert ses.values == (None, None)
        assert ses.pseudo_inverse


class TestStarts:

    def test_plotting_positions(self):
        np.testing.assert_allclose(plotting_positions(3), [0.7 / 3.4, 1.7 / 3.4, 2.7 / 3.4])

    def test_grid_then_jitter(self, weibull_sample):
        model = LLGModel()
        starts = model.starts(weibull_sample, 14, np.random.default_rng(0))
        assert len(starts) == 14
        assert [tuple(s[:2]) for s in starts[:3]] == [(0.5, 0.01), (0.5, 0.5), (0.5, 2.0)]
        assert all(np.all(s[2:] > 0.0) for s in starts)
        assert not np.allclose(starts[12], starts[0])

    def test_uniform_baseline_has_no_theta(self):
        model = LLGModel(BaselineKind.UNIFORM01)
        starts = model.starts(np.array([0.2, 0.5, 0.7]), 3, np.random.default_rng(0))
        assert all(len(s) == 2 for s in starts)


class TestFit:

    def test_published_optimum(self, llw_fit):
        published = PUBLISHED_NEG2LOGLIK['llw']
        assert llw_fit.neg2loglik <= 779.75
        assert llw_fit.neg2loglik > published - 0.2
        crit = criteria(llw_fit.neg2loglik, llw_fit.k, llw_fit.n)
        for value, printed in zip((crit.aic, crit.caic, crit.bic, crit.hqic),
                                  (787.7472, 788.3442, 796.8539, 791.3726)):
            assert value == pytest.approx(printed, abs=0.2)

    def test_stored_value_is_recomputed(self, llw_fit, bjerkedal_x):
        assert llw_fit.neg2loglik == -2.0 * LLGModel().loglik(llw_fit.estimates, bjerkedal_x)
        assert llw_fit.loglik == -0.5 * llw_fit.neg2loglik

    def test_stationary(self, llw_fit, bjerkedal_x):
        score = LLGModel().score(llw_fit.estimates, bjerkedal_x)
        assert np.abs(score).max() < 1e-2

    def test_metadata(self, llw_fit):
        assert llw_fit.model == "llw"
        assert llw_fit.n == 72
        assert llw_fit.k == 4
        assert llw_fit.starts_used == 12
        assert len(llw_fit.starts) == 12
        assert llw_fit.n_evals == sum(s.n_evals for s in llw_fit.starts)
        assert set(llw_fit.params) == {'a', 'b', 'alpha', 'beta'}
        assert len(llw_fit.std_errors) == 4
        assert llw_fit.best_start.objective <= 0.5 * llw_fit.neg2loglik + 1e-9

    def test_trace_is_monotone(self, llw_fit):
        for start in llw_fit.starts:
            assert np.all(np.diff(start.trace) <= 0.0)

    def test_mle_beats_truth_two_parameters(self):
        truth = [1.8, 0.6]
        x = LLGDistribution.from_values(*truth, Uniform01()).sample(2000, seed=23)
        model = LLGModel(BaselineKind.UNIFORM01)
        result = fit(x, BaselineKind.UNIFORM01)
        assert result.neg2loglik <= -2.0 * model.loglik(truth, x)
        assert result.converged

    def test_mle_beats_truth_weibull(self):
        truth = [3.0, 0.4, 0.2, 1.3]
        x = LLGDistribution.from_values(3.0, 0.4, Weibull(0.2, 1.3)).sample(300, seed=29)
        result = fit(x)
        assert result.neg2loglik <= -2.0 * LLGModel().loglik(truth, x)

    def test_deterministic(self):
        x = LLGDistribution.from_values(2.0, 1.0, Uniform01()).sample(100, seed=31)
        first = fit(x, "uniform", n_starts=3, seed=4)
        second = fit(x, "uniform", n_starts=3, seed=4)
        threaded = fit(x, "uniform", n_starts=3, seed=4, workers=3)
        assert first == second
        assert first.estimates == threaded.estimates
        assert first.neg2loglik == threaded.neg2loglik


class TestFitErrors:

    def test_negative_data(self):
        with pytest.raises(DataError):
            fit(np.array([1.0, -2.0, 3.0]))

    def test_outside_unit_interval(self):
        with pytest.raises(DataError):
            fit(np.array([0.2, 1.5]), BaselineKind.UNIFORM01)

    @pytest.mark.parametrize("data", [np.array([]), np.array([1.0, np.nan]), np.ones((2, 2))])
    def test_bad_arrays(self, data):
        with pytest.raises(DataError):
            fit(data)

    def test_no_starts(self):
        with pytest.raises(ParameterError):
            fit(np.array([1.0, 2.0]), n_starts=0)

    def test_unbounded_likelihood_is_flagged(self):
        result = maximize(_Runaway(), np.array([1.0, 2.0]), n_starts=2)
        assert result.unbounded
        assert result.std_errors == (None,)
        assert not result.se_pseudo_inverse

    def test_bounded_fit_is_not_flagged(self, llw_fit):
        assert not llw_fit.unbounded

    def test_all_starts_diverge(self):
        with pytest.raises(FitError) as info:
            maximize(_Flat(), np.array([1.0, 2.0]), n_starts=3)
        assert [d['start'] for d in info.value.diagnostics] == [0, 1, 2]
