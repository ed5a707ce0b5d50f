"""
Module containing all configuration constants for the LL-G toolkit.
"""
import math


class Config:
    """
    Configuration class containing all numerical settings and constants.

    Includes tolerances for the special functions, truncation defaults for the
    series machinery, optimizer settings, start grids for the likelihood fits,
    command-line exit codes and file paths needed throughout the package.
    """
    # Project name
    PROJECT_NAME = "llg-toolkit"
    REPORT_NAME = "Log-Lindley generated family: model comparison"

    # Lambert W (negative branch)
    LAMBERT_RTOL = 1e-14
    LAMBERT_MAX_ITER = 50
    LAMBERT_BRANCH_GUARD = 1e-14
    # Series initial guess is used for z below this value, asymptotic guess above
    LAMBERT_SERIES_CUTOFF = -0.25
    INV_E = math.exp(-1.0)

    # Generator numerics
    G_FLOOR = 1e-300
    LOG_G_FLOOR = math.log(1e-300)
    # |y| below this switches the survival function to its power series
    SF_SERIES_CUTOFF = 0.1
    SF_SERIES_TERMS = 18

    # Series (exp-G expansion)
    SERIES_K = 80
    SERIES_J = 80
    SERIES_DIVERGENCE = 1e-2
    SERIES_DPS = 60
    # Graded Gauss-Legendre rule on (0, 1)
    GL_NODES = 24
    GL_LEVELS = 44
    MOMENT_ORDERS = (1, 2, 3, 4)

    # Shapes
    SHAPE_GRID_N = 2048
    SHAPE_Q_LOW = 1e-6
    SHAPE_Q_HIGH = 1.0 - 1e-6
    ROOT_XTOL = 1e-10
    ROOT_RESIDUAL_TOL = 1e-8
    INFLEXION_TOL = 1e-8
    FD_STEP = 1e-5

    # Maximum likelihood
    N_STARTS = 12
    A_GRID = (0.5, 1.0, 5.0, 15.0)
    B_GRID = (0.01, 0.5, 2.0)
    START_JITTER = 0.1
    NM_XATOL = 1e-9
    NM_FATOL = 1e-10
    NM_MAXFEV_PER_PARAM = 4000
    PROFILE_MAXFEV = 600
    POLISH_RESTARTS = 6
    HESSIAN_STEP = 1e-4
    OBJECTIVE_PENALTY = 1e100
    # A fit whose loglik exceeds this per observation is treated as unbounded
    LOGLIK_BOUND_PER_OBS = 1e3
    PLOTTING_POSITION_SHIFT = 0.3

    # Competitor shape grids (extra parameters on top of Weibull alpha, beta)
    COMPETITOR_GRIDS = {
        'TW': {'a': (0.5, 2.0, 6.0), 'b': (0.5, 2.0, 5.0)},
        'GW': {'a': (0.5, 2.0, 5.0), 'b': (0.1, 1.0, 5.0)},
        'LOW': {'a': (0.5, 1.5, 5.0), 'b': (1.0, 10.0, 30.0)},
        'LIW': {'a': (0.01, 0.1, 1.0)},
        'OLW': {'a': (0.005, 0.05, 0.5)},
        'WW': {'a': (0.5, 2.0, 10.0), 'b': (0.5, 1.0, 2.0)},
        'MOW': {'a': (0.5, 5.0, 20.0, 80.0)},
        'MCW': {'a': (1.0, 5.0, 15.0), 'b': (0.5, 1.0), 'c': (0.5, 1.5)},
        'KW': {'a': (1.0, 10.0, 50.0), 'b': (0.5, 1.5)},
        'BW': {'a': (1.0, 5.0, 15.0), 'b': (0.5, 1.0)},
        'LLW': {},
        'WEIBULL': {},
    }

    # Model selection
    CRITERIA = ('neg2loglik', 'aic', 'caic', 'bic', 'hqic')

    # Command line
    EXIT_OK = 0
    EXIT_USAGE = 1
    EXIT_DATA = 2
    EXIT_FIT = 3
    TABLE_DECIMALS = 6

    # File names
    FITS_LOG_PATH = "data/fits.csv"
    FIXTURE_NAME = "bjerkedal"
