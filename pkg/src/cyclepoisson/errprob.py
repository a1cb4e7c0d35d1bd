"""Expected block-error evaluation and series-boundedness analysis.

The expected number of failing erased sets under iterative decoding over
the binary erasure channel comes out of the coefficient table as the exact
finite sum

    E_B = (1-eps)^n * sum_v C(n,v) v! x^v * sum_{t,s} A(v,t,s),

with x = 2 eps / ((1-eps) m^2).  The same sum rearranges into per-(t,s)
inner power sums with the n^{2v} factored out of x, and the question of
bounding those inner series leads to the Hadamard product machinery: exact
finite identities, a divergence demonstration, root-test radius estimates
per coefficient sequence, and a contour-integral evaluation of the
Hadamard product of two truncated series.

E_B is an expected count of failing constellations, not a probability; no
value <= 1 is asserted anywhere, and the Monte Carlo estimator in the
simulator module is the independent point of comparison.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .combinatorics import binomial, factorial, log_fraction
from .errors import CoverageError, ToleranceNotMetError, ValidationError
from .series import Series
from .table import CoeffTable, EnsembleParams

__all__ = [
    "ErrProbQuery",
    "ErrProbResult",
    "InnerSum",
    "expected_block_error",
    "inner_power_sum",
    "KnownSeriesReport",
    "known_series_check",
    "SequenceEstimate",
    "HadamardSplitReport",
    "hadamard_split_report",
    "ContourResult",
    "hadamard_contour",
    "contour_power_average",
    "default_contour_radius",
]


@dataclass(frozen=True)
class ErrProbQuery:
    """Evaluation request: parameters, erasure probability, filled table.

    x is recomputed on construction as 2 eps/((1-eps) m^2); the variant
    with n^{2v} factored out (x_split = x * n^2) is exposed for the
    per-(t,s) rearrangement.  eps = 1 is rejected: x would divide by zero.
    """

    params: EnsembleParams
    epsilon: Fraction
    table: CoeffTable
    x: Fraction = field(init=False)

    def __post_init__(self):
        eps = Fraction(self.epsilon)
        object.__setattr__(self, "epsilon", eps)
        if not 0 <= eps <= 1:
            raise ValidationError("epsilon must lie in [0, 1], got %s" % (eps,))
        if eps == 1:
            raise ValidationError("epsilon = 1 leaves x undefined (division by zero)")
        if self.table.m != self.params.m:
            raise ValidationError(
                "table has m=%d but parameters have m=%d"
                % (self.table.m, self.params.m)
            )
        m = self.params.m
        object.__setattr__(self, "x", 2 * eps / ((1 - eps) * m * m))

    @property
    def x_split(self) -> Fraction:
        """x with the n^{2v} scaling factored out: 2 eps/((1-eps)(1-r)^2)."""
        return self.x * self.params.n**2


def _require_depth(table: CoeffTable, n: int) -> None:
    if table.vmax < n:
        missing = list(range(table.vmax + 1, n + 1))
        raise CoverageError(
            "table reaches v=%d but the sum needs v up to %d (missing %s)"
            % (table.vmax, n, missing),
            missing=missing,
        )


@dataclass(frozen=True)
class ErrProbResult:
    value: Fraction
    per_v: tuple[tuple[int, Fraction], ...]
    epsilon: Fraction
    x: Fraction

    def __float__(self) -> float:
        return float(self.value)


def expected_block_error(query: ErrProbQuery) -> ErrProbResult:
    """Exact finite evaluation of E_B with a per-v term breakdown.

    The v-th term is C(n,v) v! x^v * sum_{t>=1,s} A(v,t,s); the total is
    (1-eps)^n times their sum.  The per_v breakdown carries the terms
    before that prefactor.

    Raises:
        CoverageError: the table is shallower than v = n.
    """
    n = query.params.n
    _require_depth(query.table, n)
    per_v = []
    total = Fraction(0)
    for v in range(1, n + 1):
        term = (
            binomial(n, v)
            * factorial(v)
            * query.x**v
            * query.table.level_sum(v)
        )
        per_v.append((v, term))
        total += term
    value = (1 - query.epsilon) ** n * total
    return ErrProbResult(
        value=value, per_v=tuple(per_v), epsilon=query.epsilon, x=query.x
    )


@dataclass(frozen=True)
class InnerSum:
    t: int
    s: int
    value: Fraction
    terms: tuple[tuple[int, Fraction], ...]


def inner_power_sum(table: CoeffTable, t: int, s: int, x, n: int) -> InnerSum:
    """The fixed-(t,s) inner sum S = sum_v C(n,v) v! A(v,t,s) x^v / n^{2v}.

    Returns the exact value with the full per-v term list.  Summing these
    over every (t,s) and multiplying by (1-eps)^n recovers
    expected_block_error when x carries the n^{2v}-factored-out scaling.

    Raises:
        CoverageError: the table is shallower than v = n.
    """
    if n < 1:
        raise ValidationError("n must be >= 1")
    _require_depth(table, n)
    x = Fraction(x)
    terms = []
    total = Fraction(0)
    for v in range(1, n + 1):
        a = table.value(v, t, s)
        if not a:
            continue
        term = binomial(n, v) * factorial(v) * a * x**v / Fraction(n) ** (2 * v)
        terms.append((v, term))
        total += term
    return InnerSum(t=t, s=s, value=total, terms=tuple(terms))


# ----------------------------------------------------------------------
# known finite identities and the factorial divergence
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class KnownSeriesReport:
    n: int
    x: Fraction
    scaled_identity_ok: bool  # sum C(n,v) x^v / n^{2v} == (1 + x/n^2)^n
    plain_identity_ok: bool  # sum C(n,v) x^v == (1 + x)^n
    factorial_diverges: bool
    factorial_trivial: bool  # x == 0: the factorial series is just 1
    ratios: tuple[tuple[int, Fraction], ...]
    first_ratio_above_one: int | None
    note: str


_IDENTITY_NOTE = (
    "both binomial identities are polynomial identities in x and hold for "
    "every x at finite n; the |x|<1 proviso sometimes attached to them is "
    "not needed here"
)


def known_series_check(n: int, x) -> KnownSeriesReport:
    """Check the two finite binomial identities exactly; flag the factorial sum.

    The factorial series sum_v v! x^v has term ratio (v+1) x, unbounded for
    any x != 0, so it diverges everywhere; the report lists the first few
    ratios and where they cross 1.
    """
    if n < 1:
        raise ValidationError("n must be >= 1")
    x = Fraction(x)
    n2 = Fraction(n) ** 2
    scaled = sum(
        (binomial(n, v) * x**v / n2**v for v in range(n + 1)), Fraction(0)
    )
    plain = sum((binomial(n, v) * x**v for v in range(n + 1)), Fraction(0))
    ratios = tuple((v, (v + 1) * abs(x)) for v in range(1, 13))
    first = next((v for v, r in ratios if r > 1), None)
    return KnownSeriesReport(
        n=n,
        x=x,
        scaled_identity_ok=scaled == (1 + x / n2) ** n,
        plain_identity_ok=plain == (1 + x) ** n,
        factorial_diverges=x != 0,
        factorial_trivial=x == 0,
        ratios=ratios,
        first_ratio_above_one=first,
        note=_IDENTITY_NOTE,
    )


# ----------------------------------------------------------------------
# root-test radius estimates for the three candidate splits
# ----------------------------------------------------------------------

SERIES_IDS = ("factorial", "factorial-over-n2v", "binomial-over-n2v")

_SPLIT_NOTE = (
    "estimates apply to one (t,s) coefficient column at a time; bounding "
    "the sum over all (t,s) remains outstanding"
)


@dataclass(frozen=True)
class SequenceEstimate:
    series_id: str
    window: tuple[int, int]
    estimate: float  # sup over the window of |c_v|^(1/v); 0 for all-zero
    radius: float  # 1/estimate, inf when the window is all zero
    verdict: str  # zero-radius | finite-radius | infinite-radius
    per_x: tuple[tuple[Fraction, str], ...]  # bounded | divergent | boundary


@dataclass(frozen=True)
class HadamardSplitReport:
    t: int
    s: int
    n: int
    estimates: tuple[SequenceEstimate, ...]
    note: str

    def to_csv(self) -> str:
        lines = ["t,s,series_id,v_window,root_test_estimate,verdict"]
        for est in self.estimates:
            lines.append(
                "%d,%d,%s,%d-%d,%.12g,%s"
                % (self.t, self.s, est.series_id, est.window[0], est.window[1],
                   est.estimate, est.verdict)
            )
        return "\n".join(lines) + "\n"


def _root_test(coeffs: dict[int, Fraction], window: range) -> tuple[float, float]:
    """Sup of |c_v|^(1/v) over the window via exact logs, plus 1/sup."""
    best = 0.0
    for v in window:
        c = coeffs.get(v)
        if c:
            best = max(best, math.exp(log_fraction(abs(c), base="e") / v))
    if best == 0.0:
        return 0.0, math.inf
    return best, 1.0 / best


def hadamard_split_report(
    table: CoeffTable, t: int, s: int, n: int, x_grid=()
) -> HadamardSplitReport:
    """Root-test radius estimates for the three candidate splits of one column.

    The sequences are {v! A(v,t,s)}, {v! A(v,t,s)/n^{2v}} and
    {C(n,v) A(v,t,s)/n^{2v}}.  The root test runs over the trailing half of
    the available v-range (at least 5 points); it is a window estimate of
    the limsup, not a proof.  Each x in x_grid gets a verdict per sequence:
    bounded when |x| is below the estimated radius, divergent above,
    boundary at it.

    Raises:
        CoverageError: fewer than 5 points in the trailing window.
    """
    if n < 1:
        raise ValidationError("n must be >= 1")
    vmax = table.vmax
    start = vmax // 2 + 1
    window = range(start, vmax + 1)
    if len(window) < 5:
        raise CoverageError(
            "root-test window %d-%d has %d points, need at least 5"
            % (start, vmax, len(window)),
            missing=list(range(vmax + 1, vmax + (5 - len(window)) + 1)),
        )
    n2 = Fraction(n) ** 2
    column = {v: table.value(v, t, s) for v in range(1, vmax + 1)}
    sequences = {
        "factorial": {v: factorial(v) * a for v, a in column.items()},
        "factorial-over-n2v": {
            v: factorial(v) * a / n2**v for v, a in column.items()
        },
        "binomial-over-n2v": {
            v: binomial(n, v) * a / n2**v for v, a in column.items()
        },
    }
    estimates = []
    for sid in SERIES_IDS:
        est, radius = _root_test(sequences[sid], window)
        if math.isinf(radius):
            verdict = "infinite-radius"
        elif radius == 0.0:
            verdict = "zero-radius"
        else:
            verdict = "finite-radius"
        per_x = []
        for x in x_grid:
            x = Fraction(x)
            ax = abs(x)
            if ax < radius:
                per_x.append((x, "bounded"))
            elif ax == radius:
                per_x.append((x, "boundary"))
            else:
                per_x.append((x, "divergent"))
        estimates.append(
            SequenceEstimate(
                series_id=sid,
                window=(start, vmax),
                estimate=est,
                radius=radius,
                verdict=verdict,
                per_x=tuple(per_x),
            )
        )
    return HadamardSplitReport(
        t=t, s=s, n=n, estimates=tuple(estimates), note=_SPLIT_NOTE
    )


# ----------------------------------------------------------------------
# Hadamard product by contour quadrature
# ----------------------------------------------------------------------


def contour_power_average(j: int, rho: float, nodes: int) -> complex:
    """(1/N) sum_k w_k^j on the circle of radius rho.

    Discrete orthogonality: exactly rho^j when N divides j (in particular
    1 at j=0) and 0 for every other |j| < N, up to float rounding.  This is
    the identity the Hadamard quadrature rests on.
    """
    if nodes < 1:
        raise ValidationError("nodes must be >= 1")
    total = 0j
    for k in range(nodes):
        w = rho * cmath.exp(2j * cmath.pi * k / nodes)
        total += w**j
    return total / nodes


def default_contour_radius(z) -> float:
    """sqrt(|z|) widened by 1.2, clamped inside (|z|, 1); needs |z| < 1."""
    az = abs(z)
    if az >= 1:
        raise ValidationError(
            "no default radius for |z| >= 1; pass rho explicitly"
        )
    rho = 1.2 * math.sqrt(az)
    if rho >= 1.0:
        rho = (az + 1.0) / 2
    return rho


@dataclass(frozen=True)
class ContourResult:
    value: complex
    error_estimate: float
    nodes: int


def hadamard_contour(
    f: Series,
    g: Series,
    z,
    rho: float | None = None,
    tol: float = 1e-8,
    start_nodes: int = 4,
    max_nodes: int = 1 << 14,
) -> ContourResult:
    """Evaluate the Hadamard product F(z) = sum a_n b_n z^n by quadrature.

    Trapezoidal quadrature of (1/2 pi i) integral of f(w) g(z/w) dw/w on
    the circle |w| = rho, with f and g evaluated as the truncated
    polynomials they are.  Node count doubles from start_nodes until two
    successive estimates differ by less than tol.

    z = 0 short-circuits to a_0 b_0 exactly.

    Raises:
        ValidationError: bad rho/node arguments.
        ToleranceNotMetError: node cap reached; carries the best estimate,
            the last successive difference, and the node count.
    """
    if start_nodes < 4 or start_nodes & (start_nodes - 1):
        raise ValidationError("start_nodes must be a power of two >= 4")
    if max_nodes < start_nodes:
        raise ValidationError("max_nodes must be >= start_nodes")
    if z == 0:
        value = complex(f.coef(0)) * complex(g.coef(0))
        return ContourResult(value=value, error_estimate=0.0, nodes=0)
    if rho is None:
        rho = default_contour_radius(z)
    if rho <= 0:
        raise ValidationError("rho must be positive")
    zc = complex(z)

    def estimate(nodes: int) -> complex:
        total = 0j
        for k in range(nodes):
            w = rho * cmath.exp(2j * cmath.pi * k / nodes)
            total += f.evaluate(w) * g.evaluate(zc / w)
        return total / nodes

    nodes = start_nodes
    prev = estimate(nodes)
    while nodes < max_nodes:
        nodes *= 2
        cur = estimate(nodes)
        diff = abs(cur - prev)
        if diff < tol:
            return ContourResult(value=cur, error_estimate=diff, nodes=nodes)
        prev = cur
    raise ToleranceNotMetError(
        "no convergence to %g within %d nodes" % (tol, max_nodes),
        best_value=prev,
        error_estimate=diff if max_nodes > start_nodes else math.inf,
        nodes=nodes,
    )
