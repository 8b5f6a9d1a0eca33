import cmath
import math

import numpy as np
import pytest
from scipy.integrate import dblquad

from paleywiener import (CoefficientTable, PolydiscDomain, groch_consistency_check,
                         scale_to_bargmann_side, theta_eval)
from paleywiener.exceptions import ParameterError
from paleywiener.theta import EXACT_SCALE_1D, PRINTED_SCALE_1D


def theta_oracle(coeffs, r, x):
    """Theta at a real point by adaptive Cartesian quadrature over the disc."""

    def integrand(eta, y):
        w = complex(y, eta)
        F = sum(c * w ** n / math.sqrt(math.factorial(n)) for n, c in enumerate(coeffs))
        return F * cmath.exp(-(y * y + eta * eta) + 0.5j * y * eta - 0.5 * (x - y) ** 2 - 1j * x * eta)

    def part(fn):
        val, _ = dblquad(lambda eta, y: fn(integrand(eta, y)), -r, r,
                         lambda y: -math.sqrt(max(r * r - y * y, 0.0)),
                         lambda y: math.sqrt(max(r * r - y * y, 0.0)),
                         epsabs=1e-13, epsrel=1e-12)
        return val

    return complex(part(lambda v: v.real), part(lambda v: v.imag))


@pytest.mark.parametrize("coeffs,x", [([1.0], 0.0), ([1.0], 0.8), ([0.0, 1.0], -0.5),
                                      ([0.5, 0.0, 1j], 1.3)])
def test_theta_matches_adaptive_quadrature(coeffs, x):
    F = CoefficientTable.from_dense(coeffs, 1, len(coeffs) - 1)
    D = PolydiscDomain(1.0)
    assert theta_eval(F, D, x) == pytest.approx(theta_oracle(coeffs, 1.0, x), abs=1e-10)


def test_theta_batch_and_single_point_agree():
    F = CoefficientTable.from_dense([1.0, 0.5j, 0.25], 1, 2)
    D = PolydiscDomain(1.5)
    xs = np.array([-1.0, 0.0, 2.0])
    batch = theta_eval(F, D, xs[:, None])
    assert batch.shape == (3,)
    for x, v in zip(xs, batch):
        assert theta_eval(F, D, x) == pytest.approx(v, rel=1e-14)


def test_theta_convergence_record_and_zero_table():
    F = CoefficientTable.monomial((1,))
    _, info = theta_eval(F, PolydiscDomain(1.0), 0.3, full_output=True)
    assert info.converged
    assert theta_eval(CoefficientTable.zeros(1, 3), PolydiscDomain(1.0), 0.3) == 0


def test_theta_two_dimensional_product_factorizes():
    """For F = e_0 the integrand splits into one-dimensional factors."""
    F2 = CoefficientTable.monomial((0, 0))
    F1 = CoefficientTable.monomial((0,))
    v2 = theta_eval(F2, PolydiscDomain((1.0, 0.7)), [0.2, -0.4], n_radial=24, n_angle=32)
    v1 = (theta_eval(F1, PolydiscDomain(1.0), 0.2, n_radial=24, n_angle=32)
          * theta_eval(F1, PolydiscDomain(0.7), -0.4, n_radial=24, n_angle=32))
    assert v2 == pytest.approx(v1, rel=1e-12)


def test_theta_validation():
    with pytest.raises(ParameterError):
        theta_eval(CoefficientTable.monomial((0,), kind="hermite-series"), PolydiscDomain(1.0), 0)
    with pytest.raises(ParameterError):
        theta_eval(CoefficientTable.monomial((0, 0)), PolydiscDomain(1.0), 0)
    with pytest.raises(ParameterError):
        PolydiscDomain(-1.0)


def test_scale_constants():
    assert EXACT_SCALE_1D == pytest.approx(2 * math.pi ** 1.25, rel=1e-15)
    assert PRINTED_SCALE_1D == pytest.approx(7.034121046896072, rel=1e-15)


def test_scale_to_bargmann_side_shrinks_domain():
    F0, D0 = scale_to_bargmann_side(CoefficientTable.monomial((0,)), PolydiscDomain(2.0))
    assert D0.radii[0] == pytest.approx(2.0 / math.sqrt(2))
    u = np.array([[0.3 + 0.1j]])
    assert F0(u)[0] == pytest.approx(EXACT_SCALE_1D * math.exp(-1.5 * 0.1), rel=1e-14)
    with pytest.raises(ParameterError):
        scale_to_bargmann_side(CoefficientTable.monomial((0,)), PolydiscDomain(1.0), "other")


@pytest.mark.parametrize("n", [0, 1, 2])
def test_groch_check_converges_under_doubling(n):
    F = CoefficientTable.monomial((n,))
    D = PolydiscDomain(1.0)
    coarse = groch_consistency_check(F, D, N=10, scale=1)
    fine = groch_consistency_check(F, D, N=10, scale=2)
    assert fine.discrepancy <= 1e-4
    assert fine.discrepancy < coarse.discrepancy
    assert fine.orders["theta"] == tuple(2 * k for k in coarse.orders["theta"])


def test_groch_check_as_printed_scaling_is_inconsistent():
    F = CoefficientTable.monomial((0,))
    rep = groch_consistency_check(F, PolydiscDomain(1.0), N=10, scale=2, convention="as-printed")
    assert rep.discrepancy > 0.1


def test_groch_check_zero_and_limits():
    D = PolydiscDomain(1.0)
    assert groch_consistency_check(CoefficientTable.zeros(1, 2), D).discrepancy == 0.0
    with pytest.raises(ParameterError):
        groch_consistency_check(CoefficientTable.monomial((0,)), D, N=21)
    with pytest.raises(ParameterError):
        groch_consistency_check(CoefficientTable.monomial((0, 0)), PolydiscDomain((1.0, 1.0)))


@pytest.mark.parametrize("x", [0.5, 1.0, 2.0])
def test_theta_of_constant_is_even(x):
    F = CoefficientTable.monomial((0,))
    D = PolydiscDomain(1.0)
    assert theta_eval(F, D, -x) == pytest.approx(theta_eval(F, D, x), abs=1e-14)


def test_theta_of_constant_at_origin_grows_with_radius():
    F = CoefficientTable.monomial((0,))
    values = [theta_eval(F, PolydiscDomain(r), 0.0).real for r in (0.25, 0.5, 1.0, 2.0)]
    assert all(b > a for a, b in zip(values, values[1:]))


def test_theta_is_linear_in_the_table():
    from conftest import random_table

    rng = np.random.default_rng(8)
    F, G = random_table(rng, degree=8), random_table(rng, degree=8)
    D = PolydiscDomain(1.3)
    xs = np.linspace(-2, 2, 7)[:, None]
    lhs = theta_eval(F + G * (2 - 1j), D, xs)
    rhs = theta_eval(F, D, xs) + (2 - 1j) * theta_eval(G, D, xs)
    assert np.max(np.abs(lhs - rhs)) <= 1e-9 * max(1.0, np.max(np.abs(rhs)))
