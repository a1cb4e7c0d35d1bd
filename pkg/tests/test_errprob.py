"""Tests for block-error evaluation, series identities, and the contour product."""

import math
import random
from fractions import Fraction

import pytest

from cyclepoisson.combinatorics import binomial, factorial
from cyclepoisson.errors import (
    CoverageError,
    ToleranceNotMetError,
    ValidationError,
)
from cyclepoisson.errprob import (
    ErrProbQuery,
    contour_power_average,
    default_contour_radius,
    expected_block_error,
    hadamard_contour,
    hadamard_split_report,
    inner_power_sum,
    known_series_check,
)
from cyclepoisson.series import Series, geometric_series, monomial
from cyclepoisson.table import EnsembleParams, fill_table


@pytest.fixture(scope="module")
def n4_setup():
    params = EnsembleParams(n=4, r=Fraction(1, 2))  # m = 2
    table = fill_table(params, vmax=4)
    return params, table


# ----------------------------------------------------------------------
# query construction
# ----------------------------------------------------------------------


def test_query_x_value(n4_setup):
    params, table = n4_setup
    q = ErrProbQuery(params, Fraction(1, 10), table)
    assert q.x == Fraction(1, 18)  # 2(1/10) / ((9/10) * 4)
    assert q.x_split == q.x * 16
    assert ErrProbQuery(params, "1/10", table).x == q.x


def test_query_rejects_bad_epsilon(n4_setup):
    params, table = n4_setup
    with pytest.raises(ValidationError):
        ErrProbQuery(params, Fraction(1), table)
    with pytest.raises(ValidationError):
        ErrProbQuery(params, Fraction(11, 10), table)
    with pytest.raises(ValidationError):
        ErrProbQuery(params, Fraction(-1, 10), table)


def test_query_rejects_table_mismatch(n4_setup):
    params, _table = n4_setup
    other = fill_table(EnsembleParams.from_checks(3), vmax=3)
    with pytest.raises(ValidationError):
        ErrProbQuery(params, Fraction(1, 10), other)


# ----------------------------------------------------------------------
# expected block error
# ----------------------------------------------------------------------


def test_expected_block_error_zero_epsilon(n4_setup):
    params, table = n4_setup
    result = expected_block_error(ErrProbQuery(params, Fraction(0), table))
    assert result.value == 0


def test_expected_block_error_duplicate_evaluation(n4_setup):
    # independent re-summation straight off the entries dict, bypassing the
    # per-v breakdown path
    params, table = n4_setup
    eps = Fraction(1, 10)
    q = ErrProbQuery(params, eps, table)
    result = expected_block_error(q)
    n = params.n
    direct = Fraction(0)
    for (v, t, _s), a in table.entries.items():
        if t < 1:
            continue
        direct += binomial(n, v) * factorial(v) * q.x**v * a
    direct *= (1 - eps) ** n
    assert result.value == direct
    assert result.value > 0


def test_expected_block_error_breakdown(n4_setup):
    params, table = n4_setup
    eps = Fraction(1, 3)
    result = expected_block_error(ErrProbQuery(params, eps, table))
    assert [v for v, _ in result.per_v] == [1, 2, 3, 4]
    total = sum((term for _, term in result.per_v), Fraction(0))
    assert result.value == (1 - eps) ** params.n * total


def test_expected_block_error_coverage(n4_setup):
    params, _table = n4_setup
    shallow = fill_table(params, vmax=3)
    with pytest.raises(CoverageError) as err:
        expected_block_error(ErrProbQuery(params, Fraction(1, 10), shallow))
    assert err.value.missing == [4]


def test_equal_m_parameterizations_share_level_sums():
    a = fill_table(EnsembleParams(n=4, r=Fraction(1, 2)), vmax=4)
    b = fill_table(EnsembleParams.from_checks(2), vmax=2)
    for v in (1, 2):
        assert a.level_sum(v) == b.level_sum(v)


# ----------------------------------------------------------------------
# inner power sums and the rearrangement
# ----------------------------------------------------------------------


def test_inner_power_sum_hand_case(n4_setup):
    params, table = n4_setup
    x = Fraction(1)
    inner = inner_power_sum(table, 1, 0, x, params.n)
    # v=1: C(4,1) 1! A(1,1,0) x / 4^2 with A(1,1,0) = 1
    assert inner.terms[0] == (1, Fraction(1, 4))
    # v=2: C(4,2) 2! A(2,1,0) x^2 / 4^4 with A(2,1,0) = 1/4
    assert inner.terms[1] == (2, Fraction(3, 256))
    assert inner.value == sum((t for _, t in inner.terms), Fraction(0))


def test_inner_power_sum_zero_column(n4_setup):
    params, table = n4_setup
    inner = inner_power_sum(table, 2, 1, Fraction(3, 7), params.n)
    assert inner.value == 0
    assert inner.terms == ()


def test_rearrangement_identity(n4_setup):
    params, table = n4_setup
    eps = Fraction(2, 7)
    q = ErrProbQuery(params, eps, table)
    full = expected_block_error(q)
    profiles = {(t, s) for (v, t, s) in table.entries if v >= 1}
    split = sum(
        (
            inner_power_sum(table, t, s, q.x_split, params.n).value
            for t, s in sorted(profiles)
        ),
        Fraction(0),
    )
    assert (1 - eps) ** params.n * split == full.value


# ----------------------------------------------------------------------
# known series
# ----------------------------------------------------------------------


def test_known_series_identities():
    report = known_series_check(5, Fraction(3))
    assert report.scaled_identity_ok
    assert report.plain_identity_ok
    assert "polynomial identities" in report.note


def test_known_series_identities_sweep():
    rng = random.Random(13)
    for n in range(1, 31):
        for _ in range(3):
            x = Fraction(rng.randint(-100, 100), rng.randint(1, 20))
            report = known_series_check(n, x)
            assert report.scaled_identity_ok
            assert report.plain_identity_ok


def test_known_series_factorial_divergence():
    report = known_series_check(5, Fraction(1, 2))
    assert report.factorial_diverges
    assert not report.factorial_trivial
    assert report.first_ratio_above_one == 2
    assert report.first_ratio_above_one <= 10


def test_known_series_factorial_trivial_at_zero():
    report = known_series_check(5, Fraction(0))
    assert report.factorial_trivial
    assert not report.factorial_diverges
    assert report.first_ratio_above_one is None


# ----------------------------------------------------------------------
# root-test split report
# ----------------------------------------------------------------------


@pytest.fixture(scope="module")
def m3_deep():
    return fill_table(EnsembleParams(n=12, r=Fraction(3, 4)), vmax=12)  # m = 3


def test_split_report_factorial_radius(m3_deep):
    # A(v,1,0) = 3/(2^v v!), so the factorial sequence is 3/2^v and the
    # window estimate approaches 1/2 from above
    report = hadamard_split_report(m3_deep, 1, 0, 12, x_grid=[1, 10])
    est = {e.series_id: e for e in report.estimates}
    fac = est["factorial"]
    assert fac.window == (7, 12)
    assert 0.5 < fac.estimate < 0.65
    assert 1.5 < fac.radius < 2.0
    assert fac.verdict == "finite-radius"
    assert dict(fac.per_x)[Fraction(1)] == "bounded"
    assert dict(fac.per_x)[Fraction(10)] == "divergent"
    assert "one (t,s)" in report.note


def test_split_report_zero_column(m3_deep):
    report = hadamard_split_report(m3_deep, 3, 1, 12, x_grid=[5])
    for e in report.estimates:
        assert e.verdict == "infinite-radius"
        assert math.isinf(e.radius)
        assert dict(e.per_x)[Fraction(5)] == "bounded"


def test_split_report_window_too_short():
    table = fill_table(EnsembleParams.from_checks(3), vmax=3)
    with pytest.raises(CoverageError):
        hadamard_split_report(table, 1, 0, 3)


def test_split_report_csv(m3_deep):
    csv = hadamard_split_report(m3_deep, 1, 0, 12).to_csv()
    lines = csv.strip().split("\n")
    assert lines[0] == "t,s,series_id,v_window,root_test_estimate,verdict"
    assert len(lines) == 4
    for line in lines[1:]:
        assert len(line.split(",")) == 6
        assert line.startswith("1,0,")


# ----------------------------------------------------------------------
# contour quadrature
# ----------------------------------------------------------------------


def test_contour_orthogonality():
    rho = 0.7
    for j in (1, -1, 5, -5, 63, -63):
        # rounding noise scales with the term magnitude rho^j
        assert abs(contour_power_average(j, rho, 64)) < 1e-12 * max(1.0, rho**j)
    assert abs(contour_power_average(0, rho, 64) - 1) < 1e-12
    # j = N wraps around to rho^N
    assert abs(contour_power_average(64, rho, 64) - rho**64) < 1e-12


def test_contour_geometric_case():
    f = geometric_series(16)
    g = geometric_series(16)
    exact = float(f.hadamard(g).evaluate(Fraction(1, 4)))
    result = hadamard_contour(f, g, 0.25, rho=0.5)
    assert result.nodes <= 256
    assert abs(result.value.real - exact) < 1e-8
    assert abs(result.value.imag) < 1e-8


def test_contour_default_radius():
    assert abs(default_contour_radius(0.25) - 0.6) < 1e-12
    clamped = default_contour_radius(0.81)
    assert 0.81 < clamped < 1.0
    with pytest.raises(ValidationError):
        default_contour_radius(1.5)


def test_contour_single_term():
    f = monomial(2, 8)
    g = monomial(2, 8)
    result = hadamard_contour(f, g, 0.5, tol=1e-12)
    assert abs(result.value - 0.25) < 1e-10


def test_contour_at_zero():
    f = Series([2, 3, 4])
    g = Series([5, 1, 1])
    result = hadamard_contour(f, g, 0)
    assert result.value == 10
    assert result.nodes == 0
    assert result.error_estimate == 0.0


def test_contour_tolerance_not_met():
    f = geometric_series(24)
    g = geometric_series(24)
    with pytest.raises(ToleranceNotMetError) as err:
        hadamard_contour(f, g, 0.9, rho=0.95, tol=1e-30, max_nodes=64)
    assert err.value.nodes == 64
    assert err.value.best_value is not None


def test_contour_validation():
    f = geometric_series(4)
    with pytest.raises(ValidationError):
        hadamard_contour(f, f, 0.25, start_nodes=3)
    with pytest.raises(ValidationError):
        hadamard_contour(f, f, 0.25, rho=-0.5)
    with pytest.raises(ValidationError):
        hadamard_contour(f, f, 0.25, start_nodes=8, max_nodes=4)
