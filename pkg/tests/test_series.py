import cmath
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from paleywiener import (CoefficientTable, LogComplex, SeriesFormatError, SeriesOverflowError,
                         bargmann_coeff_map, inverse_bargmann_coeff_map, log_factorial,
                         monomial_eval, pair, parse_series_csv, read_series_csv, series_eval,
                         series_values, write_series_csv)
from paleywiener.exceptions import ParameterError
from paleywiener.series import format_series_csv

from conftest import random_table


def test_log_factorial_examples():
    assert log_factorial((0, 0, 0)) == 0.0
    assert log_factorial((3,)) == pytest.approx(1.791759469, abs=1e-9)
    assert log_factorial((2, 1)) == pytest.approx(0.693147181, abs=1e-9)


@pytest.mark.parametrize("n", [0, 1, 7, 50, 170, 300, 500])
def test_log_factorial_matches_exact_integer_factorial(n):
    exact = math.log(math.factorial(n)) if n < 171 else sum(math.log(k) for k in range(2, n + 1))
    assert log_factorial((n,)) == pytest.approx(exact, rel=1e-12, abs=1e-15)


def test_log_factorial_multi_index_sums_axes():
    assert log_factorial((5, 200, 3)) == pytest.approx(
        math.lgamma(6) + math.lgamma(201) + math.lgamma(4), rel=1e-13)


def test_monomial_eval_examples():
    assert complex(monomial_eval((0,), [3 + 4j])) == 1
    assert complex(monomial_eval((2,), [2.0])) == pytest.approx(2.828427125, abs=1e-9)
    assert complex(monomial_eval((1, 1), [1j, 1.0])) == pytest.approx(1j, abs=1e-15)


def test_monomial_eval_zero_coordinate_gives_exact_zero():
    v = monomial_eval((2, 1), [0.0, 1.0])
    assert v.is_zero and v.phase == 0.0


def test_logcomplex_zero_is_canonical():
    z = LogComplex(-math.inf, 1.3)
    assert z.phase == 0.0 and complex(z) == 0


def test_logcomplex_phase_normalized():
    assert 0 <= LogComplex(0.0, -0.5).phase < 2 * math.pi
    assert LogComplex(0.0, 2 * math.pi).phase == 0.0


@given(st.floats(-690.0, 690.0), st.floats(-math.pi, math.pi))
def test_logcomplex_round_trip(log_r, theta):
    value = cmath.rect(math.exp(log_r), theta)
    back = complex(LogComplex.from_complex(value))
    assert abs(back - value) <= 8 * np.finfo(float).eps * abs(value)


def test_logcomplex_rejects_nan_and_plus_inf():
    with pytest.raises(ParameterError):
        LogComplex(math.nan)
    with pytest.raises(ParameterError):
        LogComplex(math.inf)


def test_series_eval_constant_and_single_monomial():
    F = CoefficientTable.monomial((0,), value=1.0)
    assert series_eval(F, [7 - 2j]) == 1
    G = CoefficientTable.monomial((1,), degree=4)
    assert series_eval(G, [3j]) == pytest.approx(3j)


def test_series_eval_exponential():
    n = np.arange(41)
    log_c = -0.5 * np.array([math.lgamma(k + 1) for k in n])
    F = CoefficientTable.from_log_dense(log_c, np.zeros(41), 1, 40)
    assert series_eval(F, [1.0]) == pytest.approx(math.e, abs=1e-9)
    assert series_eval(F, [2 - 1j]) == pytest.approx(cmath.exp(2 - 1j), abs=1e-9)


def test_series_eval_overflow_reports_log_value():
    F = CoefficientTable.from_dict({(0,): LogComplex(800.0)}, 1, 0)
    with pytest.raises(SeriesOverflowError) as err:
        series_eval(F, [1.0])
    assert err.value.log_value.log_mag == pytest.approx(800.0)
    assert series_eval(F, [1.0], log_result=True).log_mag == pytest.approx(800.0)


def test_series_eval_wrong_kind_and_length():
    h = CoefficientTable.monomial((0,), kind="hermite-series")
    with pytest.raises(ParameterError):
        series_eval(h, [0.0])
    with pytest.raises(ParameterError):
        series_eval(CoefficientTable.monomial((0, 0)), [0.0])


def test_series_values_agrees_with_series_eval():
    rng = np.random.default_rng(3)
    F = random_table(rng, dim=2, degree=8)
    pts = rng.normal(size=(5, 2)) + 1j * rng.normal(size=(5, 2))
    batch = series_values(F, pts)
    for p, v in zip(pts, batch):
        assert v == pytest.approx(series_eval(F, p), rel=1e-12)


def test_pair_examples():
    one = CoefficientTable.monomial((0,))
    assert pair(one, one) == 1
    assert pair(one, CoefficientTable.monomial((1,))) == 0
    F = CoefficientTable.from_dense(2.0 ** -np.arange(31), 1, 30)
    assert pair(F, F).real == pytest.approx(4 / 3 - 4 ** -30 * 4 / 3, abs=1e-12)


def test_pair_rejects_mixed_kinds():
    with pytest.raises(ParameterError):
        pair(CoefficientTable.monomial((0,)), CoefficientTable.monomial((0,), kind="hermite-series"))


def test_bargmann_coeff_map_examples():
    h = CoefficientTable.monomial((0,), kind="hermite-series")
    F = bargmann_coeff_map(h)
    assert F.kind == "power-series" and complex(F[(0,)]) == 1
    empty = bargmann_coeff_map(CoefficientTable.zeros(2, 5, kind="hermite-series"))
    assert empty.kind == "power-series" and len(empty) == 0
    with pytest.raises(ParameterError):
        bargmann_coeff_map(F)


table_seeds = st.integers(0, 2 ** 32 - 1)


@given(table_seeds, st.integers(1, 2))
def test_bargmann_map_is_bit_identical_relabeling(seed, dim):
    f = random_table(np.random.default_rng(seed), dim=dim, degree=6, kind="hermite-series",
                     density=0.6)
    F = bargmann_coeff_map(f)
    assert np.array_equal(F.log_mag, f.log_mag) and np.array_equal(F.phase, f.phase)
    assert inverse_bargmann_coeff_map(F) == f


@given(table_seeds)
def test_pair_is_hermitian_positive(seed):
    F = random_table(np.random.default_rng(seed), degree=12, density=0.7)
    v = pair(F, F)
    assert abs(v.imag) <= 1e-12 * max(1.0, v.real)
    assert v.real >= 0
    assert (v.real == 0) == (len(F) == 0)


@given(table_seeds, table_seeds)
def test_cauchy_schwarz(s1, s2):
    F = random_table(np.random.default_rng(s1), degree=12, density=0.7)
    G = random_table(np.random.default_rng(s2), degree=12, density=0.7)
    lhs = abs(pair(F, G)) ** 2
    rhs = pair(F, F).real * pair(G, G).real
    assert lhs <= rhs * (1 + 1e-12) + 1e-12


@given(table_seeds, st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False),
       st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False))
def test_series_eval_linear(seed, a, b):
    rng = np.random.default_rng(seed)
    F = random_table(rng, degree=20)
    G = random_table(rng, degree=20)
    z = complex(*rng.uniform(-1.5, 1.5, 2))
    combo = F * a + G * b if a != 0 and b != 0 else None
    if combo is None:
        return
    lhs = series_eval(combo, [z])
    rhs = a * series_eval(F, [z]) + b * series_eval(G, [z])
    scale = abs(a) * sum(abs(v) for v in F.values()) + abs(b) * sum(abs(v) for v in G.values())
    assert abs(lhs - rhs) <= 1e-10 * max(abs(rhs), 1e-3 * scale)


def test_table_is_immutable():
    F = CoefficientTable.monomial((1,))
    with pytest.raises(AttributeError):
        F.degree = 3
    with pytest.raises(ValueError):
        F.log_mag[0] = 1.0


def test_table_validation():
    with pytest.raises(ParameterError):
        CoefficientTable(1, 2, [[3]], [0.0])
    with pytest.raises(ParameterError):
        CoefficientTable(1, 2, [[1], [1]], [0.0, 0.0])
    with pytest.raises(ParameterError):
        CoefficientTable(5, 2)
    with pytest.raises(ParameterError):
        CoefficientTable(1, 2, kind="laurent")


def test_missing_indices_are_zero_and_zeros_dropped():
    F = CoefficientTable.from_dict({(0, 1): 2.0, (1, 0): 0.0}, 2, 3)
    assert len(F) == 1 and F[(1, 0)].is_zero and (0, 1) in F


def test_add_sub_in_log_domain():
    rng = np.random.default_rng(5)
    F, G = random_table(rng, degree=6), random_table(rng, degree=6)
    assert np.allclose((F + G).to_dense(), F.to_dense() + G.to_dense(), rtol=1e-13, atol=1e-14)
    assert len(F - F) == 0 or np.max(np.abs((F - F).to_dense())) < 1e-14


def test_csv_round_trip_is_exact(tmp_path):
    rng = np.random.default_rng(11)
    F = random_table(rng, dim=2, degree=7, density=0.5)
    path = tmp_path / "f.csv"
    write_series_csv(F, path, comments=["provenance line"])
    G = read_series_csv(path)
    assert G == F
    text = path.read_text(encoding="utf-8")
    assert text.startswith("# provenance line\n") and "\r" not in text


def test_csv_omits_exact_zeros():
    F = CoefficientTable.from_dense([1.0, 0.0, 2.0], 1, 2)
    rows = format_series_csv(F).strip().split("\n")[3:]
    assert [r.split(",")[0] for r in rows] == ["0", "2"]


@pytest.mark.parametrize("text,line", [
    ("", None),
    ("dim,degree\n1,2\n", 1),
    ("dim,degree,kind\n1,2,laurent\n", 2),
    ("dim,degree,kind\n1,2,power-series\nalpha_1,log_mag,phase\n0,0\n", 4),
    ("dim,degree,kind\n1,2,power-series\nalpha_1,log_mag,phase\n3,0,0\n", 4),
    ("dim,degree,kind\n1,2,power-series\nalpha_1,log_mag,phase\n0,0,0\n0,1,0\n", 5),
    ("dim,degree,kind\n1,2,power-series\nalpha_1,log_mag,phase\n0,nan,0\n", 4),
])
def test_csv_errors_carry_line_numbers(text, line):
    with pytest.raises(SeriesFormatError) as err:
        parse_series_csv(text)
    if line is not None:
        assert err.value.line == line and str(err.value).startswith(f"line {line}:")


def test_csv_accepts_minus_inf_and_comments():
    text = "# c\ndim,degree,kind\n1,2,power-series\nalpha_1,log_mag,phase\n0,-inf,0\n1,0.5,1\n"
    F = parse_series_csv(text)
    assert len(F) == 1 and F[(1,)].log_mag == 0.5
