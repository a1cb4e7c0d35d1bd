"""Sampling, peeling, and block-error estimation.

The exhaustive enumerator is the oracle for the Monte Carlo path, and the
peeling decoder cross-checks the union-find failure test: the two are
independent implementations of the same failure event.
"""

import math
import random
from fractions import Fraction

import pytest

from cyclepoisson.errors import GuardError, ValidationError
from cyclepoisson.simulator import (
    RNG_ID,
    CounterRng,
    SampledCode,
    _build_lut,
    _chunk_draws,
    _erasure_fails,
    _range_failures,
    estimate_block_error,
    exhaustive_block_error,
    peel,
    replay_trial,
    sample_code,
    splitmix64_at,
    wilson_interval,
)
from cyclepoisson.table import EnsembleParams


def params_for(n, m):
    # r = 1 - m/n gives exactly m checks
    return EnsembleParams(n=n, r=Fraction(n - m, n))


P11 = params_for(1, 1)
P22 = params_for(2, 2)
P33 = params_for(3, 3)


# ----------------------------------------------------------------------
# rng stream
# ----------------------------------------------------------------------


def test_splitmix64_reference_vectors():
    # first outputs of the canonical implementation at seed 0
    assert splitmix64_at(0, 0) == 0xE220A8397B1DCDAF
    assert splitmix64_at(0, 1) == 0x6E789E6AA1B965F4
    assert splitmix64_at(0, 2) == 0x06C45D188009454F


def test_counter_addressing_is_stateless():
    # position k of seed s equals output k of the sequential stream
    rng = CounterRng(seed=99)
    seq = [rng.next_u53() for _ in range(10)]
    assert rng.position == 10
    assert seq == [splitmix64_at(99, k) >> 11 for k in range(10)]
    # jumping straight to a position gives the same draw
    late = CounterRng(seed=99, position=7)
    assert late.next_u53() == seq[7]


def test_chunk_draws_match_scalar_stream():
    u_end, u_erase = _chunk_draws(42, start=5, count=3, n=3)
    rng = CounterRng(42, position=5 * 9)
    for row in range(3):
        manual = [rng.next_u53() for _ in range(9)]
        got = [int(x) for x in u_end[row]] + [int(x) for x in u_erase[row]]
        assert got == manual


def test_uniform_index_m1_and_range():
    rng = CounterRng(7)
    assert all(rng.uniform_index(1) == 0 for _ in range(50))
    rng = CounterRng(7)
    draws = [rng.uniform_index(6) for _ in range(1000)]
    assert set(draws) <= set(range(6))
    assert len(set(draws)) == 6


def test_endpoint_frequencies_near_uniform():
    m = 5
    total = 100_000
    rng = CounterRng(20260816)
    counts = [0] * m
    for _ in range(total):
        counts[rng.uniform_index(m)] += 1
    expect = total / m
    sigma = math.sqrt(total * (1 / m) * (1 - 1 / m))
    for c in counts:
        assert abs(c - expect) < 4 * sigma


def test_erasure_rate_matches_epsilon():
    p, q = 1, 3
    total = 100_000
    rng = CounterRng(31337)
    hits = sum(rng.erased(p, q) for _ in range(total))
    sigma = math.sqrt(total * (p / q) * (1 - p / q))
    assert abs(hits - total * p / q) < 4 * sigma


def test_erasure_draw_extremes():
    rng = CounterRng(5)
    assert not any(rng.erased(0, 1) for _ in range(100))
    rng = CounterRng(5)
    assert all(rng.erased(1, 1) for _ in range(100))


# ----------------------------------------------------------------------
# code sampling
# ----------------------------------------------------------------------


def test_sample_code_consumes_2n_draws():
    params = params_for(4, 3)
    rng = CounterRng(11)
    code = sample_code(params, rng)
    assert rng.position == 8
    assert len(code.endpoint_assignment) == 8
    assert all(0 <= e < 3 for e in code.endpoint_assignment)


def test_sample_code_deterministic():
    params = params_for(5, 4)
    a = sample_code(params, CounterRng(123))
    b = sample_code(params, CounterRng(123))
    assert a.endpoint_assignment == b.endpoint_assignment


def test_sampled_code_validation():
    with pytest.raises(ValidationError):
        SampledCode(params=P22, endpoint_assignment=(0, 1, 0))
    with pytest.raises(ValidationError):
        SampledCode(params=P22, endpoint_assignment=(0, 1, 0, 2))


# ----------------------------------------------------------------------
# peeling decoder
# ----------------------------------------------------------------------


def make_code(n, m, pairs):
    flat = tuple(e for pair in pairs for e in pair)
    return SampledCode(params=params_for(n, m), endpoint_assignment=flat)


def test_peel_empty_and_tree_cases():
    # variables 0..2 form a path; variable 3 stays unerased throughout
    code = make_code(4, 4, [(0, 1), (1, 2), (2, 3), (0, 0)])
    assert peel(code, []) == frozenset()
    assert peel(code, [0, 1, 2]) == frozenset()
    assert peel(code, [1]) == frozenset()


def test_peel_self_loop_sticks():
    code = make_code(3, 3, [(1, 1), (0, 2), (0, 2)])
    assert peel(code, [0]) == frozenset({0})
    assert peel(code, [1]) == frozenset()
    assert peel(code, [0, 1]) == frozenset({0})


def test_peel_double_edge_sticks():
    # two parallel variables between checks 0 and 1, plus a pendant
    code = make_code(3, 3, [(0, 1), (1, 0), (1, 2)])
    assert peel(code, [0, 1]) == frozenset({0, 1})
    assert peel(code, [0, 1, 2]) == frozenset({0, 1})
    assert peel(code, [0, 2]) == frozenset()


def test_peel_rejects_bad_variable():
    code = make_code(2, 2, [(0, 1), (1, 0)])
    with pytest.raises(ValidationError):
        peel(code, [2])


def test_peel_residual_is_stopping_set():
    # post: residual checks all carry >= 2 residual endpoints, and the
    # residual is itself a peeling fixpoint
    rng = random.Random(404)
    n, m = 7, 5
    for _ in range(200):
        pairs = [(rng.randrange(m), rng.randrange(m)) for _ in range(n)]
        code = make_code(n, m, pairs)
        erased = [i for i in range(n) if rng.random() < 0.6]
        residual = peel(code, erased)
        assert residual <= set(erased)
        touched = [0] * m
        for i in residual:
            a, b = code.endpoints_of(i)
            touched[a] += 1
            touched[b] += 1
        assert all(t == 0 or t >= 2 for t in touched)
        assert peel(code, residual) == residual


def test_peel_agrees_with_cycle_test():
    # the residual is nonempty exactly when the erased multigraph has a
    # cycle; union-find and peeling are independent implementations
    rng = random.Random(902)
    n, m = 6, 5
    for _ in range(400):
        flat = [rng.randrange(m) for _ in range(2 * n)]
        code = SampledCode(params=params_for(n, m), endpoint_assignment=tuple(flat))
        erased = [i for i in range(n) if rng.random() < 0.5]
        stuck = bool(peel(code, erased))
        assert stuck == _erasure_fails(flat, erased, m)


# ----------------------------------------------------------------------
# wilson interval
# ----------------------------------------------------------------------


def test_wilson_published_value():
    lo, hi = wilson_interval(1, 10)
    assert abs(lo - 0.0179) < 1e-3
    assert abs(hi - 0.4042) < 1e-3


def test_wilson_boundaries_exact():
    assert wilson_interval(0, 50)[0] == 0.0
    assert wilson_interval(50, 50)[1] == 1.0


def test_wilson_contains_point_estimate():
    rng = random.Random(3)
    for _ in range(100):
        trials = rng.randrange(1, 5000)
        failures = rng.randrange(trials + 1)
        lo, hi = wilson_interval(failures, trials)
        assert lo <= failures / trials <= hi
        assert 0.0 <= lo <= hi <= 1.0


def test_wilson_validation():
    with pytest.raises(ValidationError):
        wilson_interval(1, 0)
    with pytest.raises(ValidationError):
        wilson_interval(5, 4)


# ----------------------------------------------------------------------
# exhaustive oracle
# ----------------------------------------------------------------------


def test_exhaustive_single_check_closures():
    # n=m=1: the lone variable is always a self-loop, so P = eps; with
    # m=1 and n=2 every erased variable is a self-loop: P = 1-(1-eps)^2
    assert exhaustive_block_error(P11, Fraction(2, 7)) == Fraction(2, 7)
    eps = Fraction(2, 7)
    assert exhaustive_block_error(params_for(2, 1), eps) == 1 - (1 - eps) ** 2


def test_exhaustive_two_variables_two_checks():
    # with m=2 the full-erasure pattern always fails (either a self-loop
    # or two parallel edges) and a single erased variable fails iff
    # self-looped, which has probability 1/2; the total collapses to eps
    eps = Fraction(3, 11)
    assert exhaustive_block_error(P22, eps) == eps
    assert exhaustive_block_error(P22, Fraction(1, 2)) == Fraction(1, 2)


def test_exhaustive_full_erasure_is_certain_failure():
    # n variables on n checks leave no room for a forest
    assert exhaustive_block_error(P11, 1) == 1
    assert exhaustive_block_error(P22, 1) == 1
    assert exhaustive_block_error(P33, 1) == 1


def test_exhaustive_zero_epsilon():
    assert exhaustive_block_error(P33, 0) == 0


def test_exhaustive_frozen_value():
    assert exhaustive_block_error(P33, Fraction(1, 3)) == Fraction(83, 243)


def test_exhaustive_guards():
    with pytest.raises(GuardError):
        exhaustive_block_error(params_for(12, 2), Fraction(1, 2))
    with pytest.raises(GuardError):
        exhaustive_block_error(params_for(16, 1), Fraction(1, 2))


# ----------------------------------------------------------------------
# monte carlo estimator
# ----------------------------------------------------------------------


def test_estimate_frozen_regression():
    res = estimate_block_error(P22, Fraction(1, 2), trials=1000, seed=42)
    assert res.failures == 499
    assert res.p_hat == 0.499
    assert res.rng == RNG_ID


def test_estimate_thread_count_invariance():
    kwargs = dict(epsilon=Fraction(1, 2), trials=1000, seed=42)
    base = estimate_block_error(P22, **kwargs)
    for threads in (2, 3, 7):
        assert estimate_block_error(P22, threads=threads, **kwargs).failures == 499
    assert base.ci95[0] < base.p_hat < base.ci95[1]


def test_estimate_matches_peeling_replay():
    # the batched cycle test and the per-trial peeling decoder must agree
    # trial by trial; the replay also pins the draw addressing
    params = P33
    eps = Fraction(2, 5)
    res = estimate_block_error(params, eps, trials=300, seed=17)
    replayed = [replay_trial(params, eps, 17, i) for i in range(300)]
    assert sum(t.failed for t in replayed) == res.failures
    for t in replayed:
        assert t.erased <= set(range(3))
        assert t.residual <= t.erased


def test_estimate_epsilon_extremes():
    assert estimate_block_error(P22, 0, trials=500, seed=9).failures == 0
    for params in (P11, P22, P33):
        res = estimate_block_error(params, 1, trials=500, seed=9)
        assert res.failures == 500
        assert res.p_hat == 1.0
        assert res.ci95[1] == 1.0


def test_estimate_within_3_sigma_of_exhaustive():
    cases = [
        (P22, Fraction(1, 2), 200_000, 7),
        (P33, Fraction(1, 3), 200_000, 23),
    ]
    for params, eps, trials, seed in cases:
        exact = float(exhaustive_block_error(params, eps))
        res = estimate_block_error(params, eps, trials=trials, seed=seed)
        sigma = math.sqrt(exact * (1 - exact) / trials)
        assert abs(res.p_hat - exact) < 3 * sigma


def test_estimate_ci_shrinks_with_trials():
    a = estimate_block_error(P33, Fraction(1, 3), trials=20_000, seed=4)
    b = estimate_block_error(P33, Fraction(1, 3), trials=40_000, seed=4)
    width = lambda r: r.ci95[1] - r.ci95[0]
    assert width(b) < width(a)
    # roughly the 1/sqrt(2) law
    assert 0.6 < width(b) / width(a) < 0.8


def test_estimate_wide_rationals_use_exact_path():
    # q >= 2048 leaves the fast uint64 lane; results must stay
    # deterministic and agree with the scalar replay
    params = P22
    eps = Fraction(1500, 2999)
    res = estimate_block_error(params, eps, trials=200, seed=11)
    res2 = estimate_block_error(params, eps, trials=200, seed=11, threads=4)
    assert res.failures == res2.failures
    assert res.failures == sum(
        replay_trial(params, eps, 11, i).failed for i in range(200)
    )


def test_estimate_large_m_endpoints_exact():
    # m >= 2048 also leaves the uint64 lane; check endpoint decoding
    # against the scalar rng directly
    m = 2500
    params = EnsembleParams.from_checks(m)
    u_end, _ = _chunk_draws(77, start=0, count=3, n=m)
    mapped = (u_end.astype(object) * m) >> 53
    rng = CounterRng(77)
    for row in range(3):
        expect = [rng.uniform_index(m) for _ in range(2 * m)]
        assert [int(x) for x in mapped[row]] == expect
        rng.position += m  # skip the erasure slots of this trial
    res = estimate_block_error(params, Fraction(9, 10), trials=60, seed=77)
    assert res.failures == sum(
        replay_trial(params, Fraction(9, 10), 77, i).failed for i in range(60)
    )


def test_lut_and_direct_paths_agree():
    params = P33
    lut = _build_lut(params)
    p, q = 2, 5
    with_lut = _range_failures(13, 0, 5000, params, p, q, lut)
    without = _range_failures(13, 0, 5000, params, p, q, None)
    assert with_lut == without


def test_estimate_validation():
    with pytest.raises(ValidationError):
        estimate_block_error(P22, Fraction(3, 2), trials=10, seed=1)
    with pytest.raises(ValidationError):
        estimate_block_error(P22, Fraction(1, 2), trials=0, seed=1)
    with pytest.raises(ValidationError):
        estimate_block_error(P22, Fraction(1, 2), trials=10, seed=1, threads=0)


def test_result_json_shape():
    res = estimate_block_error(P22, Fraction(1, 2), trials=1000, seed=42)
    doc = res.to_json_dict()
    assert doc == {
        "format": "cpsim/1",
        "n": 2,
        "r": "0",
        "m": 2,
        "epsilon": "1/2",
        "trials": 1000,
        "seed": 42,
        "rng": "splitmix64-ctr/v1",
        "failures": 499,
        "p_hat": 0.499,
        "ci95": [res.ci95[0], res.ci95[1]],
    }
    assert all(isinstance(x, float) for x in doc["ci95"])
