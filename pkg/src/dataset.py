"""
Datasets: parsing, loading and the embedded Bjerkedal fixture.

Input is UTF-8 text with numbers separated by any mix of whitespace and
commas; lines whose first non-blank character is '#' are comments.
"""
import logging
import math
import re
import sys
from dataclasses import dataclass

import numpy as np

from config import Config as C
from errors import DataError

logger = logging.getLogger(__name__)

_TOKEN = re.compile(r'[^,\s]+')

# Survival times in days of 72 guinea pigs infected with virulent tubercle bacilli
BJERKEDAL = (
    12, 15, 22, 24, 24, 32, 32, 33, 34, 38, 38, 43, 44, 48, 52, 53, 54, 54,
    55, 56, 57, 58, 58, 59, 60, 60, 60, 60, 61, 62, 63, 65, 65, 67, 68, 70,
    70, 72, 73, 75, 76, 76, 81, 83, 84, 85, 87, 91, 95, 96, 98, 99, 109, 110,
    121, 127, 129, 131, 143, 146, 146, 175, 175, 211, 233, 258, 258, 263, 297,
    341, 341, 376,
)
BJERKEDAL_SUM = 7187


@dataclass(frozen=True)
class Dataset:
    """
    An ordered collection of observations with a provenance label.

    Attributes:
        values: Observations in input order
        label: Where the data came from
    """
    values: tuple
    label: str

    def __post_init__(self):
        if not self.values:
            raise DataError("A dataset needs at least one observation")
        if not all(math.isfinite(v) for v in self.values):
            raise DataError("A dataset cannot contain NaN or infinite values")

    @property
    def n(self):
        return len(self.values)

    def array(self):
        return np.asarray(self.values, dtype=float)

    def require_positive(self):
        """Raise DataError unless every value is > 0."""
        bad = [v for v in self.values if v <= 0.0]
        if bad:
            raise DataError(f"Dataset '{self.label}' must be positive for this model; got {bad[0]!r}")


def parse_dataset(source, label="stdin"):
    """
    Parse numbers from a byte stream or text.

    Args:
        source: bytes, str, or a binary/text file object
        label: Provenance label for the dataset

    Returns:
        Dataset: The parsed observations

    Raises:
        DataError: On undecodable input, an unparseable token or no numbers
    """
    if hasattr(source, 'read'):
        source = source.read()
    if isinstance(source, bytes):
        try:
            source = source.decode('utf-8')
        except UnicodeDecodeError as e:
            raise DataError(f"Input is not valid UTF-8: {e}") from None

    values = []
    for line_no, line in enumerate(source.splitlines(), start=1):
        if line.lstrip().startswith('#'):
            continue
        for match in _TOKEN.finditer(line):
            token = match.group()
            try:
                value = float(token)
            except ValueError:
                raise DataError(f"Cannot parse '{token}' as a number",
                                line=line_no, column=match.start() + 1) from None
            if not math.isfinite(value):
                raise DataError(f"Non-finite value '{token}'",
                                line=line_no, column=match.start() + 1)
            values.append(value)

    if not values:
        raise DataError(f"No observations found in '{label}'")
    logger.info("Parsed %d observations from %s", len(values), label)
    return Dataset(tuple(values), label)


def load_dataset(name):
    """
    Load a dataset by fixture name, file path, or '-' for standard input.

    Args:
        name: "bjerkedal", a path, or "-"

    Returns:
        Dataset: The loaded observations
    """
    if name.lower() == C.FIXTURE_NAME:
        return Dataset(tuple(float(v) for v in BJERKEDAL), C.FIXTURE_NAME)
    if name == '-':
        return parse_dataset(sys.stdin.buffer, label="stdin")
    try:
        with open(name, 'rb') as f:
            return parse_dataset(f, label=name)
    except OSError as e:
        raise DataError(f"Cannot read dataset '{name}': {e.strerror}") from None
