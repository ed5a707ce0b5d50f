"""
Fit ledger for the LL-G toolkit.

Appends one CSV row per fitted model so results from separate command-line
runs can be collected and compared later.
"""
import csv
import json
import logging
import os

from config import Config as C
from selection import criteria

logger = logging.getLogger(__name__)

LEDGER_HEADER = [
    "Run_ID", "dataset", "n", "model", "k", "neg2loglik",
    "aic", "caic", "bic", "hqic", "converged", "params",
]


class DataCollector:
    """Handles the fit ledger, logging to a CSV file."""

    current_run_id = None
    path = C.FITS_LOG_PATH

    @staticmethod
    def _ensure_data_dir_exists():
        """Ensures the directory for the ledger exists."""
        log_dir = os.path.dirname(DataCollector.path)
        if log_dir and not os.path.exists(log_dir):
            os.makedirs(log_dir)

    @staticmethod
    def _get_next_run_id():
        """
        Determines the next Run_ID by reading the largest ID in the ledger.

        Returns:
            str: A zero-padded string ID (e.g., "0001")
        """
        DataCollector._ensure_data_dir_exists()
        max_id_val = 0
        try:
            with open(DataCollector.path, 'r', newline='', encoding='utf-8') as f:
                reader = csv.reader(f)
                next(reader, None)  # Skip header
                for row in reader:
                    if row and row[0]:
                        try:
                            max_id_val = max(max_id_val, int(row[0]))
                        except ValueError:
                            # Not an ID, skip
                            pass
        except FileNotFoundError:
            pass
        return f"{max_id_val + 1:04d}"

    @staticmethod
    def initialize(path=None):
        """
        Creates the ledger with its header if needed and picks the run ID.

        Args:
            path: Ledger location; defaults to the configured path
        """
        if path is not None:
            DataCollector.path = path
        DataCollector._ensure_data_dir_exists()
        DataCollector.current_run_id = DataCollector._get_next_run_id()

        needs_header = (not os.path.exists(DataCollector.path)
                        or os.path.getsize(DataCollector.path) == 0)
        with open(DataCollector.path, 'a', newline='', encoding='utf-8') as f:
            if needs_header:
                csv.writer(f).writerow(LEDGER_HEADER)
        logger.info("Fit ledger %s, run %s", DataCollector.path, DataCollector.current_run_id)

    @staticmethod
    def log_fit(dataset_label, fit):
        """
        Appends one fitted model to the ledger.

        Args:
            dataset_label: Provenance label of the data
            fit: FitResult to record
        """
        if DataCollector.current_run_id is None:
            DataCollector.initialize()

        if fit.unbounded:
            # No maximum: leave the likelihood columns blank
            scores = [""] * 5
        else:
            crit = criteria(fit.neg2loglik, fit.k, fit.n)
            scores = ["" if v is None else repr(v)
                      for v in (fit.neg2loglik, crit.aic, crit.caic, crit.bic, crit.hqic)]
        with open(DataCollector.path, 'a', newline='', encoding='utf-8') as f:
            csv.writer(f).writerow([
                DataCollector.current_run_id,
                dataset_label,
                fit.n,
                fit.model,
                fit.k,
                *scores,
                int(fit.converged),
                json.dumps(fit.params),
            ])
