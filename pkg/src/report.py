"""
Report module for the LL-G toolkit.

Renders fits, comparison tables, critical points, moments and dataset
summaries as aligned text (fixed decimals) or as JSON lines carrying full
precision, and reads the fit ledger back into pandas.
"""
import json
import logging
import math
import os

import pandas as pd

from config import Config as C
from selection import criteria

logger = logging.getLogger(__name__)

# Likelihood-based columns; empty when a likelihood has no maximum
SCORE_KEYS = ('neg2loglik', 'aic', 'caic', 'bic', 'hqic')


def _fixed(value, decimals=C.TABLE_DECIMALS):
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return "n/a"
    return f"{value:.{decimals}f}"


def _json_number(value):
    if value is None or (isinstance(value, float) and not math.isfinite(value)):
        return None
    return float(value)


def summary_stats(dataset):
    """
    Summary statistics of a dataset.

    Returns:
        dict: Min, Max, Mean, Median, Mode, Std Dev and Count
    """
    series = pd.Series(dataset.values, dtype=float)
    stats = series.agg(['min', 'max', 'mean', 'median', 'std']).fillna(0)
    mode = series.mode()
    return {
        "Min": float(stats['min']),
        "Max": float(stats['max']),
        "Mean": float(stats['mean']),
        "Median": float(stats['median']),
        "Mode": float(mode.iloc[0]) if not mode.empty else None,
        "Std Dev": float(stats['std']),
        "Count": len(series),
    }


def format_summary(dataset, as_json=False):
    stats = summary_stats(dataset)
    if as_json:
        return json.dumps({'dataset': dataset.label, **stats})
    lines = [f"dataset: {dataset.label}"]
    for name, value in stats.items():
        shown = value if name == "Count" else _fixed(value)
        lines.append(f"{name:<8} {shown}")
    return "\n".join(lines)


def fit_record(fit, dataset_label=None):
    """A JSON-ready dictionary for one fit; an unbounded fit carries no criteria."""
    if fit.unbounded:
        scores = dict.fromkeys(SCORE_KEYS)
    else:
        crit = criteria(fit.neg2loglik, fit.k, fit.n)
        scores = {'neg2loglik': _json_number(fit.neg2loglik), 'aic': _json_number(crit.aic),
                  'caic': _json_number(crit.caic), 'bic': _json_number(crit.bic),
                  'hqic': _json_number(crit.hqic)}
    record = {
        'model': fit.model,
        'dataset': dataset_label,
        'n': fit.n,
        'k': fit.k,
        'estimates': {n: _json_number(v) for n, v in zip(fit.param_names, fit.estimates)},
        'std_errors': {n: _json_number(v) for n, v in zip(fit.param_names, fit.std_errors)},
        'se_pseudo_inverse': fit.se_pseudo_inverse,
        **scores,
        'unbounded': fit.unbounded,
        'converged': fit.converged,
        'n_evals': fit.n_evals,
        'starts_used': fit.starts_used,
        'hessian_condition': _json_number(fit.hessian_condition),
    }
    return record


def format_fit(fit, dataset_label=None, as_json=False):
    """
    Render a fit as text or a JSON line.

    Args:
        fit: FitResult
        dataset_label: Provenance label of the data
        as_json: Emit one JSON object instead of text

    Returns:
        str: The rendering
    """
    record = fit_record(fit, dataset_label)
    if as_json:
        return json.dumps(record)
    lines = [f"model: {fit.model}   n = {fit.n}   k = {fit.k}"]
    frame = pd.DataFrame({
        'estimate': [_fixed(v) for v in fit.estimates],
        'std_error': [_fixed(v) for v in fit.std_errors],
    }, index=list(fit.param_names))
    lines.append(frame.to_string())
    if fit.se_pseudo_inverse:
        lines.append("warning: information matrix singular, standard errors from pseudo-inverse")
    if fit.unbounded:
        lines.append("warning: likelihood unbounded on these data, "
                     "estimates mark where the search stopped")
    for key in SCORE_KEYS:
        shown = "unbounded" if fit.unbounded else _fixed(record[key])
        lines.append(f"{key:<11}{shown}")
    lines.append(f"converged  {'yes' if fit.converged else 'no'}")
    return "\n".join(lines)


def comparison_frame(rows):
    """
    The comparison table as a DataFrame in row order.

    The "best" column lists the criteria for which the row is best.
    """
    return pd.DataFrame([{
        'model': r.model,
        'k': r.k,
        'neg2loglik': r.neg2loglik,
        'aic': r.aic,
        'caic': r.caic,
        'bic': r.bic,
        'hqic': r.hqic,
        'converged': r.converged,
        'quarantined': r.quarantined,
        'unbounded': r.unbounded,
        'best': ",".join(r.best_in),
    } for r in rows])


def format_comparison(rows, as_json=False):
    """Render comparison rows as an aligned table or JSON lines."""
    if as_json:
        return "\n".join(json.dumps({
            'model': r.model, 'k': r.k,
            'neg2loglik': _json_number(r.neg2loglik),
            'aic': _json_number(r.aic), 'caic': _json_number(r.caic),
            'bic': _json_number(r.bic), 'hqic': _json_number(r.hqic),
            'converged': r.converged, 'quarantined': r.quarantined,
            'unbounded': r.unbounded, 'best': list(r.best_in),
        }) for r in rows)
    frame = comparison_frame(rows)
    for col in SCORE_KEYS:
        cells = frame[col].map(_fixed)
        frame[col] = cells.where(~frame['unbounded'], "unbounded")
    frame = frame.drop(columns='unbounded')
    frame['best'] = frame['best'].map(lambda s: "*" + s if s else "")
    return frame.to_string(index=False)


def format_critical_points(points, as_json=False):
    if as_json:
        return "\n".join(json.dumps({
            'source': p.source.value, 'x': p.x, 'kind': p.kind.value,
            'classifier': p.classifier_value, 'residual': p.residual,
            'printed_residual': p.printed_residual,
        }) for p in points)
    if not points:
        return "no interior critical points"
    frame = pd.DataFrame({
        'curve': [p.source.value for p in points],
        'x': [_fixed(p.x) for p in points],
        'kind': [p.kind.value for p in points],
        'classifier': [f"{p.classifier_value:.6e}" for p in points],
    })
    return frame.to_string(index=False)


def format_moments(values, as_json=False):
    """
    Render series moments.

    Args:
        values: Mapping of order r to SeriesValue
        as_json: Emit JSON lines
    """
    if as_json:
        return "\n".join(json.dumps({'r': r, 'value': v.value, 'tail': v.tail,
                                     'converged': v.converged, 'K': v.K, 'J': v.J})
                         for r, v in values.items())
    frame = pd.DataFrame({
        'r': list(values),
        'moment': [_fixed(v.value) for v in values.values()],
        'tail': [f"{v.tail:.3e}" for v in values.values()],
        'converged': ['yes' if v.converged else 'no' for v in values.values()],
    })
    return frame.to_string(index=False)


def load_ledger(path=C.FITS_LOG_PATH):
    """
    Load the fit ledger written by DataCollector.

    Args:
        path: Ledger location

    Returns:
        pandas.DataFrame: Ledger rows with numeric columns coerced; empty if missing
    """
    if not os.path.exists(path):
        logger.warning("Fit ledger not found at %s", path)
        return pd.DataFrame()
    ledger = pd.read_csv(path, dtype={'Run_ID': str})
    for col in ('n', 'k', 'neg2loglik', 'aic', 'caic', 'bic', 'hqic', 'converged'):
        if col in ledger.columns:
            ledger[col] = pd.to_numeric(ledger[col], errors='coerce')
    return ledger


def format_ledger(ledger, as_json=False):
    """Render a loaded ledger as a table or one JSON line per recorded fit."""
    if ledger.empty:
        return "" if as_json else "no fits recorded"
    if as_json:
        return ledger.to_json(orient='records', lines=True).rstrip("\n")
    return ledger.to_string(index=False)
