import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from paleywiener import CoefficientTable, RadialMeasure

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

# filled by tests/test_acceptance.py, printed after the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(line)


@pytest.fixture
def unit_disc():
    return RadialMeasure.disc(1.0)


@pytest.fixture
def unit_point_mass():
    return RadialMeasure.point_mass(1.0)


def random_table(rng, dim=1, degree=10, kind="power-series", density=1.0, scale=1.0):
    """Random complex coefficients of moderate size on a random subset of indices."""
    from paleywiener._validation import multi_indices

    idx = multi_indices(dim, degree)
    keep = rng.uniform(size=idx.shape[0]) < density
    values = scale * (rng.normal(size=idx.shape[0]) + 1j * rng.normal(size=idx.shape[0]))
    values[~keep] = 0
    return CoefficientTable.from_dense(values, dim, degree, kind=kind)


def rel_close(a, b, tol):
    return abs(a - b) <= tol * max(abs(b), 1e-300)


def log_gamma_lower(n, x):
    """log of the lower incomplete gamma function gamma(n+1, x), via scipy's regularized form."""
    from scipy.special import gammainc

    return math.log(gammainc(n + 1, x)) + math.lgamma(n + 1)
