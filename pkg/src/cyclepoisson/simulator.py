"""Monte Carlo sampling of the ensemble with a peeling decoder.

A sampled code is a multigraph: n degree-2 variables drop their 2n endpoint
draws i.i.d. uniformly on m checks (self-loops and multi-edges allowed and
counted with multiplicity).  Erasing each variable independently with
probability eps and peeling (repeatedly un-erasing any variable that is the
only erased endpoint on some check) either clears everything or stalls on
the maximal stopping set inside the erased set; a block error is a
nonempty residual, equivalently a cycle in the erased multigraph.

Reproducibility contract (rng id "splitmix64-ctr/v1"): draw number j of
trial i is the splitmix64 output at counter position i*3n + j, so results
are bit-identical for any thread count or batch size.  A trial owns
exactly 3n positions: 2n endpoint draws (variable 0 endpoint 0, endpoint
1, variable 1 endpoint 0, ...) followed by n erasure draws (variable 0
first).  Each 64-bit output is truncated to its top 53 bits u; an
endpoint index is (u * m) >> 53 and variable j is erased iff
u * q < p * 2**53 for eps = p/q.  All of that is integer arithmetic, so
every platform agrees exactly.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import GuardError, ValidationError
from .table import EnsembleParams

__all__ = [
    "RNG_ID",
    "CounterRng",
    "splitmix64_at",
    "SampledCode",
    "sample_code",
    "peel",
    "TrialReplay",
    "replay_trial",
    "wilson_interval",
    "SimResult",
    "estimate_block_error",
    "exhaustive_block_error",
]

RNG_ID = "splitmix64-ctr/v1"

_M64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB

# numpy uint64 copies; mixing any plain python int into uint64 arrays would
# silently promote to float64
_U = np.uint64
_GOLDEN_U = _U(_GOLDEN)
_MIX1_U = _U(_MIX1)
_MIX2_U = _U(_MIX2)

LUT_GUARD = 1 << 20
EXHAUSTIVE_CODE_GUARD = 10**7
EXHAUSTIVE_MASK_GUARD = 1 << 15

_BATCH = 1 << 16
_NP_SAFE = 1 << 11  # u53 * factor stays below 2^64 for factors under this


def splitmix64_at(seed: int, position: int) -> int:
    """The splitmix64 output at an absolute counter position."""
    z = (seed + (position + 1) * _GOLDEN) & _M64
    z ^= z >> 30
    z = (z * _MIX1) & _M64
    z ^= z >> 27
    z = (z * _MIX2) & _M64
    z ^= z >> 31
    return z


def _splitmix_np(seed: int, positions: np.ndarray) -> np.ndarray:
    z = (positions + _U(1)) * _GOLDEN_U + _U(seed)
    z ^= z >> _U(30)
    z *= _MIX1_U
    z ^= z >> _U(27)
    z *= _MIX2_U
    z ^= z >> _U(31)
    return z


@dataclass
class CounterRng:
    """Counter-addressed splitmix64 stream; state is just (seed, position)."""

    seed: int
    position: int = 0

    def __post_init__(self):
        self.seed = int(self.seed) & _M64
        if self.position < 0:
            raise ValidationError("position must be >= 0")

    def next_u53(self) -> int:
        z = splitmix64_at(self.seed, self.position)
        self.position += 1
        return z >> 11

    def uniform_index(self, m: int) -> int:
        return (self.next_u53() * m) >> 53

    def erased(self, p: int, q: int) -> bool:
        return self.next_u53() * q < p << 53


@dataclass(frozen=True)
class SampledCode:
    """One multigraph draw: endpoint 2i and 2i+1 are variable i's checks."""

    params: EnsembleParams
    endpoint_assignment: tuple[int, ...]

    def __post_init__(self):
        n, m = self.params.n, self.params.m
        ep = tuple(int(e) for e in self.endpoint_assignment)
        object.__setattr__(self, "endpoint_assignment", ep)
        if len(ep) != 2 * n:
            raise ValidationError("need exactly 2n endpoints, got %d" % len(ep))
        if any(not 0 <= e < m for e in ep):
            raise ValidationError("endpoint index outside [0, m)")

    def endpoints_of(self, variable: int) -> tuple[int, int]:
        return (
            self.endpoint_assignment[2 * variable],
            self.endpoint_assignment[2 * variable + 1],
        )


def sample_code(params: EnsembleParams, rng: CounterRng) -> SampledCode:
    """Draw one code, consuming exactly 2n rng outputs."""
    m = params.m
    endpoints = tuple(rng.uniform_index(m) for _ in range(2 * params.n))
    return SampledCode(params=params, endpoint_assignment=endpoints)


def peel(code: SampledCode, erased) -> frozenset[int]:
    """Run the peeling decoder; returns the residual erased set.

    A check carrying exactly one erased endpoint resolves that endpoint's
    variable; repeat to fixpoint.  The residual is the unique maximal
    stopping set inside `erased`: every check it touches carries at least
    two residual endpoints (a double edge on one check is already stuck).
    """
    n, m = code.params.n, code.params.m
    alive = set()
    for i in erased:
        i = int(i)
        if not 0 <= i < n:
            raise ValidationError("erased variable %d outside 0..n-1" % i)
        alive.add(i)
    deg = [0] * m
    incident: list[set[int]] = [set() for _ in range(m)]
    for i in alive:
        a, b = code.endpoints_of(i)
        deg[a] += 1
        deg[b] += 1
        incident[a].add(i)
        incident[b].add(i)
    stack = [c for c in range(m) if deg[c] == 1]
    while stack:
        c = stack.pop()
        if deg[c] != 1:
            continue
        i = next(v for v in incident[c] if v in alive)
        alive.discard(i)
        for e in code.endpoints_of(i):
            deg[e] -= 1
            incident[e].discard(i)
            if deg[e] == 1:
                stack.append(e)
    return frozenset(alive)


def _erasure_fails(endpoints, erased_vars, m: int) -> bool:
    """Cycle test on the erased multigraph by union-find.

    Equivalent to a nonempty peeling residual: the residual is the 2-core,
    and a multigraph has a nonempty 2-core iff it contains a cycle (a
    self-loop or multi-edge counts).
    """
    count = len(erased_vars)
    if count == 0:
        return False
    if count == 1:
        i = erased_vars[0]
        return endpoints[2 * i] == endpoints[2 * i + 1]
    parent = list(range(m))

    def find(c):
        while parent[c] != c:
            parent[c] = parent[parent[c]]
            c = parent[c]
        return c

    for i in erased_vars:
        ra, rb = find(endpoints[2 * i]), find(endpoints[2 * i + 1])
        if ra == rb:
            return True
        parent[ra] = rb
    return False


@dataclass(frozen=True)
class TrialReplay:
    trial: int
    code: SampledCode
    erased: frozenset[int]
    residual: frozenset[int]

    @property
    def failed(self) -> bool:
        return bool(self.residual)


def replay_trial(
    params: EnsembleParams, epsilon, seed: int, trial: int
) -> TrialReplay:
    """Reconstruct one trial of an estimate run, decoding it with `peel`.

    Uses the same counter addressing as the batched estimator, so the
    replayed failure indicator matches the batch bit for bit; the decoding
    path is the independent peeling implementation rather than the cycle
    test.
    """
    eps = Fraction(epsilon)
    n = params.n
    rng = CounterRng(seed, position=3 * n * trial)
    code = sample_code(params, rng)
    p, q = eps.numerator, eps.denominator
    erased = frozenset(i for i in range(n) if rng.erased(p, q))
    return TrialReplay(
        trial=trial, code=code, erased=erased, residual=peel(code, erased)
    )


# ----------------------------------------------------------------------
# batched estimation
# ----------------------------------------------------------------------


def _build_lut(params: EnsembleParams) -> np.ndarray:
    """Failure flag for every (code, erasure mask) pair, mask in low bits."""
    n, m = params.n, params.m
    size = m ** (2 * n) << n
    lut = np.zeros(size, dtype=bool)
    masks = [
        [i for i in range(n) if mask >> i & 1] for mask in range(1 << n)
    ]
    for code_idx, endpoints in enumerate(itertools.product(range(m), repeat=2 * n)):
        # itertools varies the LAST slot fastest; index accordingly
        idx = 0
        for e in endpoints:
            idx = idx * m + e
        base = idx << n
        for mask, erased in enumerate(masks):
            if _erasure_fails(endpoints, erased, m):
                lut[base + mask] = True
    return lut


def _chunk_draws(seed: int, start: int, count: int, n: int):
    per = 3 * n
    base = np.arange(start, start + count, dtype=np.uint64) * _U(per)
    positions = base[:, None] + np.arange(per, dtype=np.uint64)[None, :]
    u = _splitmix_np(seed, positions) >> _U(11)
    return u[:, : 2 * n], u[:, 2 * n :]


def _chunk_failures(
    seed: int,
    start: int,
    count: int,
    params: EnsembleParams,
    p: int,
    q: int,
    lut: np.ndarray | None,
) -> int:
    n, m = params.n, params.m
    u_end, u_erase = _chunk_draws(seed, start, count, n)
    if m < _NP_SAFE:
        endpoints = (u_end * _U(m)) >> _U(53)
    else:
        endpoints = (u_end.astype(object) * m) >> 53
    if q < _NP_SAFE:
        erased = (u_erase * _U(q)) < _U(p << 53)
    else:
        erased = (u_erase.astype(object) * q) < (p << 53)
        erased = erased.astype(bool)
    if lut is not None and m < _NP_SAFE:
        idx = np.zeros(count, dtype=np.uint64)
        for j in range(2 * n):
            idx = idx * _U(m) + endpoints[:, j]
        idx <<= _U(n)
        mask = np.zeros(count, dtype=np.uint64)
        for j in range(n):
            mask |= erased[:, j].astype(np.uint64) << _U(j)
        return int(lut[idx + mask].sum())
    failures = 0
    ep_rows = endpoints.tolist()
    er_rows = erased.tolist()
    for row, flags in zip(ep_rows, er_rows):
        erased_vars = [i for i in range(n) if flags[i]]
        if _erasure_fails([int(e) for e in row], erased_vars, m):
            failures += 1
    return failures


def _range_failures(seed, lo, hi, params, p, q, lut) -> int:
    failures = 0
    start = lo
    while start < hi:
        count = min(_BATCH, hi - start)
        failures += _chunk_failures(seed, start, count, params, p, q, lut)
        start += count
    return failures


_Z95 = 1.959963984540054


def wilson_interval(failures: int, trials: int) -> tuple[float, float]:
    """95% Wilson score interval; always contains failures/trials."""
    if trials < 1:
        raise ValidationError("trials must be >= 1")
    if not 0 <= failures <= trials:
        raise ValidationError("failures outside 0..trials")
    p = failures / trials
    z2 = _Z95 * _Z95
    denom = 1.0 + z2 / trials
    center = (p + z2 / (2 * trials)) / denom
    half = _Z95 * math.sqrt(p * (1 - p) / trials + z2 / (4 * trials * trials)) / denom
    # at the boundaries the score equation has an exact root the float
    # arithmetic misses by one ulp
    lo = 0.0 if failures == 0 else max(0.0, center - half)
    hi = 1.0 if failures == trials else min(1.0, center + half)
    return (lo, hi)


@dataclass(frozen=True)
class SimResult:
    params: EnsembleParams
    epsilon: Fraction
    trials: int
    seed: int
    failures: int
    p_hat: float
    ci95: tuple[float, float]
    rng: str = RNG_ID

    def to_json_dict(self) -> dict:
        eps = self.epsilon
        return {
            "format": "cpsim/1",
            "n": self.params.n,
            "r": str(self.params.r),
            "m": self.params.m,
            "epsilon": "%d/%d" % (eps.numerator, eps.denominator),
            "trials": self.trials,
            "seed": self.seed,
            "rng": self.rng,
            "failures": self.failures,
            "p_hat": self.p_hat,
            "ci95": [self.ci95[0], self.ci95[1]],
        }


def estimate_block_error(
    params: EnsembleParams,
    epsilon,
    trials: int,
    seed: int,
    threads: int = 1,
) -> SimResult:
    """Monte Carlo estimate of the block-error probability.

    Per trial: sample a code, erase variables i.i.d. with probability
    epsilon, fail iff the erased multigraph has a cycle (= nonempty
    peeling residual).  The failure count is fully determined by (seed,
    params, epsilon, trials), regardless of `threads`: trials are sharded
    into contiguous ranges whose counts just add up.

    Unlike the analytic query, epsilon = 1 is a perfectly good simulation
    input here.
    """
    eps = Fraction(epsilon)
    if not 0 <= eps <= 1:
        raise ValidationError("epsilon must lie in [0, 1], got %s" % (eps,))
    if trials < 1:
        raise ValidationError("trials must be >= 1")
    if threads < 1:
        raise ValidationError("threads must be >= 1")
    seed = int(seed) & _M64
    n, m = params.n, params.m
    p, q = eps.numerator, eps.denominator
    lut = None
    if m ** (2 * n) << n <= LUT_GUARD:
        lut = _build_lut(params)
    if threads == 1:
        failures = _range_failures(seed, 0, trials, params, p, q, lut)
    else:
        per = trials // threads
        extra = trials % threads
        ranges = []
        lo = 0
        for i in range(threads):
            hi = lo + per + (1 if i < extra else 0)
            if hi > lo:
                ranges.append((lo, hi))
            lo = hi
        with ThreadPoolExecutor(max_workers=threads) as pool:
            failures = sum(
                pool.map(
                    lambda pair: _range_failures(
                        seed, pair[0], pair[1], params, p, q, lut
                    ),
                    ranges,
                )
            )
    p_hat = failures / trials
    return SimResult(
        params=params,
        epsilon=eps,
        trials=trials,
        seed=seed,
        failures=failures,
        p_hat=p_hat,
        ci95=wilson_interval(failures, trials),
    )


def exhaustive_block_error(params: EnsembleParams, epsilon) -> Fraction:
    """Exact failure probability by enumerating codes and erasure patterns.

    Averages the failure indicator over all m^(2n) equiprobable codes and
    all 2^n erasure masks with their epsilon-weights.  Guarded: it is a
    tiny-instance oracle, not a production path.

    Raises:
        GuardError: m^(2n) > 10^7 or 2^n > 2^15.
    """
    eps = Fraction(epsilon)
    if not 0 <= eps <= 1:
        raise ValidationError("epsilon must lie in [0, 1], got %s" % (eps,))
    n, m = params.n, params.m
    n_codes = m ** (2 * n)
    if n_codes > EXHAUSTIVE_CODE_GUARD:
        raise GuardError("m^(2n) = %d exceeds %d" % (n_codes, EXHAUSTIVE_CODE_GUARD))
    if 1 << n > EXHAUSTIVE_MASK_GUARD:
        raise GuardError("2^n exceeds %d" % (EXHAUSTIVE_MASK_GUARD,))
    if eps == 0:
        return Fraction(0)
    weights = [eps**k * (1 - eps) ** (n - k) for k in range(n + 1)]
    masks = [
        ([i for i in range(n) if mask >> i & 1]) for mask in range(1 << n)
    ]
    total = Fraction(0)
    for endpoints in itertools.product(range(m), repeat=2 * n):
        for erased in masks:
            if _erasure_fails(endpoints, erased, m):
                total += weights[len(erased)]
    return total / n_codes
