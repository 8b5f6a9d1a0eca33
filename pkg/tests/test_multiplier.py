import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.special import gammainc

from paleywiener import (CoefficientTable, RadialMeasure, apply_multiplier, diagonal_consistency,
                         invert_multiplier, sandwich_profile, theorem_map_table, verify_theorem)
from paleywiener.exceptions import DomainError, ParameterError, UnsupportedMeasureError

from conftest import random_table


def test_apply_multiplier_on_disc_monomials():
    nu = RadialMeasure.disc(1.0)
    for n in (0, 1, 5, 30):
        out = apply_multiplier(CoefficientTable.monomial((n,)), nu)
        # sigma_n / n! = regularized lower incomplete gamma
        assert complex(out[(n,)]).real == pytest.approx(gammainc(n + 1, 1.0), rel=1e-10)


def test_apply_multiplier_keeps_phase_for_measures():
    rng = np.random.default_rng(0)
    F = random_table(rng, dim=2, degree=6)
    G = apply_multiplier(F, RadialMeasure.annulus(0.5, 1.0, dim=2))
    assert np.array_equal(G.phase, F.phase) and np.array_equal(G.indices, F.indices)


def test_distributional_multiplier_flips_phase_for_negative_values():
    nu = RadialMeasure.distributional([(1.0, 1, -1.0)])
    out = apply_multiplier(CoefficientTable.monomial((0,)), nu)
    # sigma_0 = -2/e
    assert complex(out[(0,)]) == pytest.approx(-2 / math.e, rel=1e-14)


def test_vanishing_distributional_multiplier_drops_entry():
    nu = RadialMeasure.distributional([(1.0, 0, 1.0), (1.0, 0, -1.0)])
    out = apply_multiplier(CoefficientTable.monomial((2,)), nu)
    assert len(out) == 0


def test_invert_refuses_distributions_and_mismatched_dims():
    F = CoefficientTable.monomial((1,))
    with pytest.raises(UnsupportedMeasureError):
        invert_multiplier(F, RadialMeasure.distributional([(1.0, 0, 1.0)]))
    with pytest.raises(ParameterError):
        apply_multiplier(F, RadialMeasure.disc(dim=2))
    with pytest.raises(ParameterError):
        apply_multiplier(CoefficientTable.monomial((1,), kind="hermite-series"), RadialMeasure.disc())


measures = st.sampled_from([
    RadialMeasure.disc(1.0),
    RadialMeasure.disc(0.3, dim=2),
    RadialMeasure.annulus(0.5, 2.0),
    RadialMeasure.point_mass(1.7, weight=0.2),
    RadialMeasure.point_mass((0.4, 1.1), weight=3.0),
])


@given(st.integers(0, 2 ** 32 - 1), measures)
def test_inverse_undoes_apply_in_log_domain(seed, nu):
    F = random_table(np.random.default_rng(seed), dim=nu.dim, degree=30, density=0.8)
    back = invert_multiplier(apply_multiplier(F, nu), nu)
    assert np.array_equal(back.indices, F.indices)
    assert np.max(np.abs(back.log_mag - F.log_mag), initial=0) <= 1e-12
    assert np.max(np.abs(back.phase - F.phase), initial=0) <= 1e-12


@given(st.integers(0, 2 ** 32 - 1), measures)
def test_multiplier_is_linear(seed, nu):
    rng = np.random.default_rng(seed)
    F = random_table(rng, dim=nu.dim, degree=8)
    G = random_table(rng, dim=nu.dim, degree=8)
    lhs = apply_multiplier(F + G * 2.0, nu).to_dense()
    rhs = apply_multiplier(F, nu).to_dense() + 2.0 * apply_multiplier(G, nu).to_dense()
    assert np.allclose(lhs, rhs, rtol=1e-12, atol=1e-15 * np.max(np.abs(rhs)))


@given(st.integers(0, 2 ** 32 - 1))
def test_multiplier_is_a_contraction_for_small_discs(seed):
    """sigma_alpha / alpha! <= 1 for any probability-like radial density, so norms shrink."""
    from paleywiener import pair

    F = random_table(np.random.default_rng(seed), degree=20)
    G = apply_multiplier(F, RadialMeasure.disc(1.0))
    assert pair(G, G).real <= pair(F, F).real


def test_theorem_map_table_values():
    assert theorem_map_table("T2-1", 1.0).order_in == pytest.approx(1 / 3)
    assert theorem_map_table("T2-2", 2.0).order_in == pytest.approx(2 / 3)
    assert theorem_map_table("T2-3", 1 / 6).order_in == pytest.approx(0.25)
    t1 = theorem_map_table("T1-s", 0.25)
    assert t1.order_in == t1.order_out == 0.25 and len(t1.statements) == 4
    t3 = theorem_map_table("T3-1", 0.5)
    assert t3.input_space.family == "factorial" and t3.output_space.family == "stretched"


@pytest.mark.parametrize("case,order,msg", [
    ("T2-3", 0.75, "T2-3 requires σ < 1/2, got σ = 0.75"),
    ("T2-2", 0.5, "T2-2 requires σ > 1/2, got σ = 0.5"),
    ("T1-s", 0.5, "T1-s requires 0 < s < 1/2, got s = 0.5"),
])
def test_theorem_map_table_domain_errors(case, order, msg):
    with pytest.raises(DomainError) as err:
        theorem_map_table(case, order)
    assert str(err.value) == msg


def test_theorem_map_table_unknown_case():
    with pytest.raises(ParameterError):
        theorem_map_table("T9", 1.0)
    with pytest.raises(DomainError):
        theorem_map_table("T3-2", 0.4)


@given(st.floats(0.01, 20.0))
def test_parameter_maps_are_consistent(sigma):
    """Each map sends sigma0 back to sigma through its inverse formula."""
    s0 = theorem_map_table("T2-1", sigma).order_in
    assert s0 / (1 - 2 * s0) == pytest.approx(sigma, rel=1e-9)
    if sigma > 0.5:
        s0 = theorem_map_table("T2-2", sigma).order_in
        assert s0 / (2 * s0 - 1) == pytest.approx(sigma, rel=1e-9)
    if sigma < 0.5:
        s0 = theorem_map_table("T2-3", sigma).order_in
        assert s0 / (1 + 2 * s0) == pytest.approx(sigma, rel=1e-9)


def test_verify_theorem_report_shape():
    rep = verify_theorem("T2-1", 1.0, RadialMeasure.point_mass(1.0), N=40)
    d = json.loads(rep.to_json())
    assert set(d) == {"case", "order_in", "expected_order_out", "fitted_order_out", "family",
                      "side", "pass", "details"}
    assert d["pass"] is True and d["order_in"] == pytest.approx(1 / 3)


def test_verify_theorem_refuses_distributions():
    with pytest.raises(UnsupportedMeasureError):
        verify_theorem("T2-1", 1.0, RadialMeasure.distributional([(1.0, 0, 1.0)]))


def test_diagonal_consistency_point_mass_two_dimensions():
    res = diagonal_consistency(RadialMeasure.point_mass((0.8, 1.2)), degree=6, n_points=8)
    assert res["max_error"] < 1e-10


def test_sandwich_profile_shape():
    rows = sandwich_profile(RadialMeasure.disc(), 0.25, degrees=(30, 60))
    assert [r["N"] for r in rows] == [30, 60]
    assert all(r["tail_max"] <= r["window_max"] for r in rows)
