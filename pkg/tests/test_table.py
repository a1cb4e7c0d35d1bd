"""Tests for the constellation coefficient table.

The s = 0 boundary layer has an independent closed-form oracle
(block_partition_count over labeled endpoints) and the whole table is
reconciled against a brute-force census of endpoint assignments for small m.
"""

from fractions import Fraction

import pytest

from cyclepoisson.combinatorics import binomial, block_partition_count, factorial
from cyclepoisson.errors import GuardError, ValidationError
from cyclepoisson.table import (
    BaseConfig,
    EnsembleParams,
    boundary_coefficient,
    boundary_layer,
    brute_force_profile_counts,
    constellation_count,
    fill_table,
    growth_exponent,
    growth_profile,
    profile_reconciliation,
    stopping_set_count,
    verify_table,
)


# ----------------------------------------------------------------------
# parameters
# ----------------------------------------------------------------------


def test_params_basic():
    p = EnsembleParams(n=100, r=Fraction(1, 2))
    assert p.m == 50
    assert p.k == 51


def test_params_from_checks():
    p = EnsembleParams.from_checks(7)
    assert (p.n, p.m, p.k) == (7, 7, 8)
    assert p.r == 0


def test_params_validation():
    with pytest.raises(ValidationError):
        EnsembleParams(n=0, r=Fraction(0))
    with pytest.raises(ValidationError):
        EnsembleParams(n=10, r=Fraction(1))
    with pytest.raises(ValidationError):
        EnsembleParams(n=10, r=Fraction(-1, 2))
    # (1-r)*n must come out integral
    with pytest.raises(ValidationError):
        EnsembleParams(n=4, r=Fraction(1, 3))


# ----------------------------------------------------------------------
# closed forms against independent oracles
# ----------------------------------------------------------------------


def test_constellation_count():
    p = EnsembleParams.from_checks(3)
    assert constellation_count(p, 0) == 1
    assert constellation_count(p, 2) == 81
    assert constellation_count(p, 4) == 0  # v beyond n
    assert constellation_count(p, -1) == 0


def test_boundary_single_variable():
    # one variable on t=1 check: both endpoints on the same check, m ways,
    # and A(1,1,0) = m/2 after dividing by 1! * 2^1
    for m in (1, 2, 5, 9):
        p = EnsembleParams.from_checks(m)
        assert boundary_coefficient(p, 1, 1) == Fraction(m, 2)
        assert stopping_set_count(p, 1, 1) == m


def test_boundary_frozen_values():
    p = EnsembleParams.from_checks(100)
    assert boundary_coefficient(p, 2, 2) == Fraction(7425, 2)
    assert stopping_set_count(p, 2, 2) == 29700
    # cross-check the v! 2^v weight between the two forms
    assert factorial(2) * 2**2 * Fraction(7425, 2) == 29700


def test_stopping_set_small_m():
    p = EnsembleParams.from_checks(3)
    assert stopping_set_count(p, 1, 1) == 3
    assert stopping_set_count(p, 2, 2) == 18
    assert stopping_set_count(p, 1, 2) == 0  # two checks need at least 4 endpoints
    assert stopping_set_count(p, 2, 17) == 0  # t beyond m


def test_stopping_set_matches_partition_oracle():
    # binom(m,t) choices of the check set, then ordered covers of the 2v
    # labeled endpoints by t blocks of size >= 2
    for m, v, t in [(3, 2, 1), (3, 2, 2), (4, 3, 2), (5, 3, 3), (6, 4, 2)]:
        p = EnsembleParams.from_checks(m)
        expect = binomial(m, t) * block_partition_count(2 * v, t, 2)
        assert stopping_set_count(p, v, t) == expect


def test_boundary_rejects_degenerate_indices():
    p = EnsembleParams.from_checks(4)
    with pytest.raises(ValidationError):
        boundary_coefficient(p, 0, 1)
    with pytest.raises(ValidationError):
        boundary_coefficient(p, 1, 0)


def test_brute_force_profile_counts_m3_v1():
    counts = brute_force_profile_counts(3, 1)
    assert counts == {(1, 0): 3, (0, 2): 6}
    assert sum(counts.values()) == 9


def test_brute_force_profile_counts_sum():
    for m, v in [(2, 2), (3, 2), (4, 1)]:
        counts = brute_force_profile_counts(m, v)
        assert sum(counts.values()) == m ** (2 * v)


def test_brute_force_guard():
    with pytest.raises(GuardError):
        brute_force_profile_counts(10, 10)


# ----------------------------------------------------------------------
# recurrence fill
# ----------------------------------------------------------------------


def test_fill_small_frozen_values():
    p = EnsembleParams.from_checks(3)
    table = fill_table(p, vmax=2)
    assert table.value(0, 0, 0) == 1
    assert table.value(1, 1, 0) == Fraction(3, 2)
    assert table.value(1, 1, 1) == 0  # nothing at v=0 feeds it
    assert table.value(2, 1, 0) == Fraction(3, 8)
    assert table.value(2, 1, 1) == 3
    assert table.value(2, 1, 2) == Fraction(3, 2)
    assert table.value(2, 2, 0) == Fraction(9, 4)


def test_fill_depends_on_m_only():
    a = fill_table(EnsembleParams(n=200, r=Fraction(1, 2)), vmax=3)
    b = fill_table(EnsembleParams.from_checks(100), vmax=3)
    assert a == b


def test_fill_threads_bit_identical():
    p = EnsembleParams.from_checks(8)
    assert fill_table(p, vmax=5, threads=1) == fill_table(p, vmax=5, threads=4)


def test_fill_resume_matches_full():
    p = EnsembleParams.from_checks(5)
    full = fill_table(p, vmax=4)
    part = fill_table(p, vmax=2)
    resumed = fill_table(p, vmax=4, start_from=part)
    assert resumed == full
    # resuming below the existing depth trims back down
    trimmed = fill_table(p, vmax=2, start_from=full)
    assert trimmed == part


def test_fill_resume_rejects_mismatch():
    part = fill_table(EnsembleParams.from_checks(5), vmax=2)
    with pytest.raises(ValidationError):
        fill_table(EnsembleParams.from_checks(6), vmax=4, start_from=part)


def test_fill_vmax_bounds():
    p = EnsembleParams(n=4, r=Fraction(1, 2))  # m = 2
    with pytest.raises(ValidationError):
        fill_table(p, vmax=5)
    with pytest.raises(ValidationError):
        fill_table(p, vmax=-1)


def test_origin_value_never_feeds_recurrence():
    # the only recurrence term reading level v-1 at t-1 carries a factor s,
    # so A(0,0,0) is inert: both base configs yield the same v >= 1 entries
    p = EnsembleParams.from_checks(4)
    seeded = fill_table(p, vmax=3, base=BaseConfig.UNIT_ORIGIN)
    empty = fill_table(p, vmax=3, base=BaseConfig.EMPTY)
    stripped = {k: v for k, v in seeded.entries.items() if k[0] >= 1}
    assert stripped == empty.entries


def test_verify_table_clean():
    table = fill_table(EnsembleParams.from_checks(6), vmax=6)
    assert verify_table(table) == []


def test_verify_table_flags_corruption():
    table = fill_table(EnsembleParams.from_checks(4), vmax=3)
    table.entries[(2, 1, 1)] += 1
    problems = verify_table(table)
    assert problems
    assert any("(2,1,1)" in msg or "(3," in msg for msg in problems)


def test_level_sum_is_positive():
    table = fill_table(EnsembleParams.from_checks(5), vmax=4)
    for v in range(1, 5):
        assert table.level_sum(v) > 0


# ----------------------------------------------------------------------
# census reconciliation
# ----------------------------------------------------------------------


def test_reconciliation_boundary_matches():
    table = fill_table(EnsembleParams.from_checks(3), vmax=3)
    rows = profile_reconciliation(table, v_limit=3)
    for row in rows:
        if row["s"] == 0 and row["t"] >= 1:
            assert row["match"], row


def test_reconciliation_documents_s_mismatch():
    # the s >= 1 entries do not count degree-(exactly 1) profiles: first
    # disagreement at m=3 is (v=2, t=1, s=2), weighted table 12 vs census 36
    table = fill_table(EnsembleParams.from_checks(3), vmax=2)
    rows = {(r["v"], r["t"], r["s"]): r for r in profile_reconciliation(table, 2)}
    row = rows[(2, 1, 2)]
    assert row["table_count"] == 12
    assert row["oracle_count"] == 36
    assert not row["match"]
    # while (v=2, t=1, s=1) happens to agree
    assert rows[(2, 1, 1)]["table_count"] == rows[(2, 1, 1)]["oracle_count"] == 24


# ----------------------------------------------------------------------
# growth exponents
# ----------------------------------------------------------------------


def test_growth_exponent_first_point():
    import math

    table = fill_table(EnsembleParams.from_checks(100), vmax=1)
    g = growth_exponent(table, 1, 1)
    assert abs(g - math.log10(0.5)) < 1e-12


def test_growth_exponent_undefined_below_t():
    table = fill_table(EnsembleParams.from_checks(10), vmax=2)
    with pytest.raises(ValidationError):
        growth_exponent(table, 1, 2)


def test_boundary_layer_matches_fill():
    p = EnsembleParams.from_checks(6)
    table = fill_table(p, vmax=5)
    layer = boundary_layer(6, 5, [1, 2, 3])
    for t, per_v in layer.items():
        for v, val in per_v.items():
            assert table.value(v, t, 0) == val
    # and nothing extra: every nonzero boundary value is reported
    for (v, t, s), val in table.entries.items():
        if s == 0 and t in (1, 2, 3) and v >= 1:
            assert layer[t][v] == val


def test_boundary_layer_frozen_values():
    layer = boundary_layer(100, 3, [1, 2])
    assert layer[1][1] == Fraction(50)
    assert layer[2][2] == Fraction(7425, 2)


def test_boundary_layer_validation():
    with pytest.raises(ValidationError):
        boundary_layer(5, 3, [0])
    with pytest.raises(ValidationError):
        boundary_layer(5, 3, [6])
    assert boundary_layer(5, 3, []) == {}


def test_growth_profile_first_point():
    import math

    prof = growth_profile(100, 2, [1])
    v, g = prof[1][0]
    assert v == 1
    assert abs(g - math.log10(0.5)) < 1e-12
