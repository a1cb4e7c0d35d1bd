"""Constellation coefficient tables for the cycle Poisson ensemble.

The ensemble has n degree-2 variable nodes whose 2n edge endpoints land
uniformly and independently on m = (1-r)n check nodes (a multigraph; both
endpoints of a variable may hit the same check).  The table A(v, t, s) is a
three-index family of exact rationals over 0 <= v <= vmax, 1 <= t <= m,
0 <= s <= m-t (plus a pluggable v = 0 origin):

* the s = 0 boundary layer has the closed form
  A(v, t, 0) = binom(m, t) * (2v-1)!! * [x^(2v)] (e^x - 1 - x)^t,
* every s >= 1 entry is defined by the three-term recurrence
  s * A(v,t,s) = A(v-1,t,s-2)*(m-t-s+2)*(m-t-s+1)   (when s >= 2)
              + A(v-1,t,s-1)*(m-t-s+1)*t
              + A(v-1,t-1,s)*(m-t-s+1)*s,
  divided exactly by s.

Entries outside the support are zero.  v! * 2^v * A(v, t, 0) equals the
number of endpoint assignments of v variables whose image is exactly t
checks, each covered at least twice (a stopping set on t checks); the
intended meaning of s >= 1 entries (checks of degree exactly one) is checked
against the brute-force profile oracle rather than assumed, see
profile_reconciliation.
"""

from __future__ import annotations

import enum
import itertools
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .combinatorics import binomial, double_factorial_odd, factorial, log_fraction
from .errors import GuardError, TableFormatError, ValidationError
from .series import Series, poisson_block_series

__all__ = [
    "EnsembleParams",
    "BaseConfig",
    "CoeffTable",
    "constellation_count",
    "stopping_set_count",
    "boundary_coefficient",
    "brute_force_profile_counts",
    "fill_table",
    "verify_table",
    "profile_reconciliation",
    "growth_exponent",
    "boundary_layer",
    "growth_profile",
    "save_table",
    "load_table",
]

BRUTE_FORCE_GUARD = 10**8

_HEADER_MAGIC = "CPTABLE 1"
_HEADER_RE = re.compile(r"^m=(0|[1-9][0-9]*) vmax=(0|[1-9][0-9]*) base=([a-z-]+)$")
_ROW_RE = re.compile(
    r"^(0|[1-9][0-9]*) (0|[1-9][0-9]*) (0|[1-9][0-9]*) (-?(?:0|[1-9][0-9]*))/([1-9][0-9]*)$"
)


@dataclass(frozen=True)
class EnsembleParams:
    """Cycle Poisson ensemble parameters.

    n variable nodes of degree 2, design rate r, m = (1-r)n check nodes,
    and the shifted check count k = m + 1 used by the differential operator.
    """

    n: int
    r: Fraction
    m: int = field(init=False)
    k: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "r", Fraction(self.r))
        if self.n < 1:
            raise ValidationError("n must be >= 1, got %r" % (self.n,))
        if not 0 <= self.r < 1:
            raise ValidationError("rate must satisfy 0 <= r < 1, got %s" % (self.r,))
        m_exact = (1 - self.r) * self.n
        if m_exact.denominator != 1:
            raise ValidationError("(1-r)*n must be an integer, got %s" % (m_exact,))
        object.__setattr__(self, "m", int(m_exact))
        object.__setattr__(self, "k", int(m_exact) + 1)

    @classmethod
    def from_checks(cls, m: int) -> "EnsembleParams":
        """Parameters for table-only work: the table depends on m alone."""
        return cls(n=m, r=Fraction(0))


class BaseConfig(enum.Enum):
    """Pluggable v=0 / t=0 convention for the recurrence origin."""

    UNIT_ORIGIN = "unit-origin"  # A(0,0,0) = 1, everything else at v=0 zero
    EMPTY = "empty"  # the whole v=0 plane zero

    def level_zero(self) -> dict[tuple[int, int, int], Fraction]:
        if self is BaseConfig.UNIT_ORIGIN:
            return {(0, 0, 0): Fraction(1)}
        return {}

    @classmethod
    def from_label(cls, label: str) -> "BaseConfig":
        for cfg in cls:
            if cfg.value == label:
                return cfg
        raise ValidationError("unknown base config %r" % (label,))


class CoeffTable:
    """Sparse exact-rational table of A(v, t, s) coefficients.

    Absent entries are zero.  Equality is on (m, vmax, base, entries): two
    parameterizations with the same check count carry identical tables.
    """

    def __init__(
        self,
        params: EnsembleParams,
        vmax: int,
        base: BaseConfig,
        entries: dict[tuple[int, int, int], Fraction],
        declared_vmax: int | None = None,
    ):
        self.params = params
        self.vmax = vmax
        self.base = base
        self.entries = entries
        self.declared_vmax = vmax if declared_vmax is None else declared_vmax

    @property
    def m(self) -> int:
        return self.params.m

    @property
    def is_partial(self) -> bool:
        return self.vmax < self.declared_vmax

    def value(self, v: int, t: int, s: int) -> Fraction:
        return self.entries.get((v, t, s), Fraction(0))

    def level_items(self, v: int):
        return sorted(
            (key, val) for key, val in self.entries.items() if key[0] == v
        )

    def level_sum(self, v: int) -> Fraction:
        """Sum of A(v, t, s) over t >= 1 and all s."""
        return sum(
            (val for (vv, t, _s), val in self.entries.items() if vv == v and t >= 1),
            Fraction(0),
        )

    def __eq__(self, other):
        if not isinstance(other, CoeffTable):
            return NotImplemented
        return (
            self.m == other.m
            and self.vmax == other.vmax
            and self.base == other.base
            and self.entries == other.entries
        )

    __hash__ = None

    def __repr__(self):
        return "CoeffTable(m=%d, vmax=%d, base=%s, %d entries)" % (
            self.m,
            self.vmax,
            self.base.value,
            len(self.entries),
        )


# ----------------------------------------------------------------------
# closed forms and oracles
# ----------------------------------------------------------------------


def constellation_count(params: EnsembleParams, v: int) -> int:
    """Endpoint assignments of v degree-2 variables: m^(2v) for 0 <= v <= n."""
    if v < 0 or v > params.n:
        return 0
    return params.m ** (2 * v)


def stopping_set_count(params: EnsembleParams, v: int, t: int) -> int:
    """Assignments of v variables covering exactly t checks, each at least twice.

    Closed form binom(m,t) * (2v)! * [x^(2v)] (e^x - 1 - x)^t; always a
    nonnegative integer.
    """
    if v < 0 or t < 0:
        raise ValidationError("stopping_set_count needs v, t >= 0")
    if t > params.m:
        return 0
    coef = poisson_block_series(t, 2 * v).coef(2 * v)
    val = binomial(params.m, t) * factorial(2 * v) * coef
    if val.denominator != 1:
        raise ValidationError("stopping-set count is not integral: %s" % (val,))
    return int(val)


def boundary_coefficient(params: EnsembleParams, v: int, t: int) -> Fraction:
    """The s = 0 layer: binom(m,t) * (2v-1)!! * [x^(2v)] (e^x - 1 - x)^t.

    Zero whenever v < t (the series has nothing below x^(2t)).
    """
    if v < 1 or t < 1:
        raise ValidationError("boundary_coefficient needs v >= 1 and t >= 1")
    if t > params.m:
        return Fraction(0)
    coef = poisson_block_series(t, 2 * v).coef(2 * v)
    return binomial(params.m, t) * double_factorial_odd(v) * coef


def brute_force_profile_counts(m: int, v: int) -> dict[tuple[int, int], int]:
    """Exhaustive degree-profile census of all m^(2v) endpoint assignments.

    For each assignment of 2v labeled endpoints to m checks, classify the
    profile (t, s) with t = checks of degree >= 2 and s = checks of degree
    exactly 1.  Returns counts per profile; they sum to m^(2v).  This is the
    independent oracle the table semantics are reconciled against.
    """
    if m < 1 or v < 0:
        raise ValidationError("brute_force_profile_counts needs m >= 1, v >= 0")
    total = m ** (2 * v)
    if total > BRUTE_FORCE_GUARD:
        raise GuardError(
            "m^(2v) = %d exceeds the enumeration guard %d" % (total, BRUTE_FORCE_GUARD)
        )
    counts: dict[tuple[int, int], int] = {}
    for assign in itertools.product(range(m), repeat=2 * v):
        deg = [0] * m
        for c in assign:
            deg[c] += 1
        t = sum(1 for d in deg if d >= 2)
        s = sum(1 for d in deg if d == 1)
        counts[(t, s)] = counts.get((t, s), 0) + 1
    return counts


# ----------------------------------------------------------------------
# recurrence fill
# ----------------------------------------------------------------------


def _recurrence_rhs(value, m: int, v: int, t: int, s: int) -> Fraction:
    """Right-hand side of the three-term recurrence at (v, t, s), s >= 1."""
    u = m - t - s
    rhs = Fraction(0)
    if s >= 2:
        rhs += value(v - 1, t, s - 2) * (u + 2) * (u + 1)
    rhs += value(v - 1, t, s - 1) * (u + 1) * t
    rhs += value(v - 1, t - 1, s) * (u + 1) * s
    return rhs


def _boundary_level(params: EnsembleParams, v: int) -> dict[tuple[int, int, int], Fraction]:
    """All nonzero s = 0 entries of level v, one incremental power sweep."""
    m = params.m
    out: dict[tuple[int, int, int], Fraction] = {}
    order = 2 * v
    base = poisson_block_series(1, order)
    power = Series([Fraction(1)] + [Fraction(0)] * order)
    dfo = double_factorial_odd(v)
    for t in range(1, min(v, m) + 1):  # zero above t = v, nothing to store
        power = power * base
        coef = power.coef(order)
        if coef:
            out[(v, t, 0)] = binomial(m, t) * dfo * coef
    return out


def fill_table(
    params: EnsembleParams,
    vmax: int,
    base: BaseConfig = BaseConfig.UNIT_ORIGIN,
    threads: int = 1,
    start_from: CoeffTable | None = None,
) -> CoeffTable:
    """Fill A(v, t, s) level by level up to vmax.

    Level v depends only on level v-1, so levels fill in increasing v; the
    entries inside a level are independent and may be computed concurrently
    (threads > 1), with bit-identical results either way.  `start_from`
    resumes from an existing table with the same m and base (its levels are
    trusted as-is).

    Raises:
        ValidationError: vmax outside 0..n, or mismatched resume table.
    """
    if vmax < 0 or vmax > params.n:
        raise ValidationError("vmax must lie in 0..n, got %r" % (vmax,))
    m = params.m
    entries: dict[tuple[int, int, int], Fraction] = {}
    first_level = 1
    if start_from is not None:
        if start_from.m != m or start_from.base != base:
            raise ValidationError("resume table does not match (m, base)")
        entries.update(
            (key, val) for key, val in start_from.entries.items() if key[0] <= vmax
        )
        first_level = min(start_from.vmax, vmax) + 1
    else:
        entries.update(base.level_zero())

    def value(v, t, s):
        return entries.get((v, t, s), Fraction(0))

    def cell(v, t, s):
        rhs = _recurrence_rhs(value, m, v, t, s)
        return (v, t, s), rhs / s

    for v in range(first_level, vmax + 1):
        level = _boundary_level(params, v)
        todo = [(v, t, s) for t in range(1, m + 1) for s in range(1, m - t + 1)]
        if threads > 1 and todo:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                results = list(pool.map(lambda key: cell(*key), todo))
        else:
            results = [cell(*key) for key in todo]
        for key, val in results:
            if val:
                level[key] = val
        entries.update(level)
    return CoeffTable(params, vmax, base, entries)


def verify_table(table: CoeffTable) -> list[str]:
    """Independent recheck of every invariant; returns violation messages.

    Rechecks, independent of fill order: support (nothing stored outside the
    index ranges, v = 0 plane matches the base config), the three-term
    recurrence at every (v, t, s) with s >= 1 in support (including entries
    stored as zero by omission), and the boundary identity
    v! * 2^v * A(v,t,0) == stopping_set_count(v, t).
    """
    m = table.m
    bad: list[str] = []
    origin = table.base.level_zero()
    for (v, t, s), val in sorted(table.entries.items()):
        if val == 0:
            bad.append("stored zero at (%d,%d,%d)" % (v, t, s))
        if v == 0:
            if origin.get((v, t, s)) != val:
                bad.append("v=0 entry (%d,%d,%d)=%s conflicts with base %s"
                           % (v, t, s, val, table.base.value))
            continue
        if v > table.vmax or not (1 <= t <= m) or not (0 <= s <= m - t):
            bad.append("entry outside support at (%d,%d,%d)" % (v, t, s))
    for v in range(1, table.vmax + 1):
        for t in range(1, m + 1):
            expected = factorial(v) * 2**v * table.value(v, t, 0)
            if expected != stopping_set_count(table.params, v, t):
                bad.append("boundary identity fails at (v=%d,t=%d)" % (v, t))
            for s in range(1, m - t + 1):
                rhs = _recurrence_rhs(table.value, m, v, t, s)
                if s * table.value(v, t, s) != rhs:
                    bad.append("recurrence fails at (%d,%d,%d)" % (v, t, s))
    return bad


def profile_reconciliation(table: CoeffTable, v_limit: int) -> list[dict]:
    """Compare v! * 2^v * A(v,t,s) against the brute-force profile census.

    One row per (v, profile) observed on either side, with both counts and a
    match flag.  This documents what the recurrence entries do and do not
    count; disagreement is a reported outcome, not an error.
    """
    rows: list[dict] = []
    for v in range(1, min(v_limit, table.vmax) + 1):
        oracle = brute_force_profile_counts(table.m, v)
        profiles = set(oracle)
        profiles.update((t, s) for (vv, t, s) in table.entries if vv == v)
        weight = factorial(v) * 2**v
        for t, s in sorted(profiles):
            table_count = weight * table.value(v, t, s)
            oracle_count = oracle.get((t, s), 0)
            rows.append(
                {
                    "v": v,
                    "t": t,
                    "s": s,
                    "table_count": table_count,
                    "oracle_count": oracle_count,
                    "match": table_count == oracle_count,
                }
            )
    return rows


# ----------------------------------------------------------------------
# growth exponents
# ----------------------------------------------------------------------


def growth_exponent(table: CoeffTable, v: int, t: int, base=10) -> float:
    """log_base of A(v,t,0) / binom(m,t), to at least 12 significant digits.

    The rational is exact and can have hundreds of digits; the log goes
    through the digit-count path, never through a float conversion of the
    full value.

    Raises:
        ValidationError: when A(v,t,0) <= 0 (in particular whenever v < t).
    """
    val = table.value(v, t, 0)
    if val <= 0:
        raise ValidationError(
            "growth exponent undefined at (v=%d, t=%d): A(v,t,0) = %s" % (v, t, val)
        )
    return log_fraction(val / binomial(table.m, t), base=base)


def boundary_layer(m: int, vmax: int, t_values) -> dict[int, dict[int, Fraction]]:
    """Exact s = 0 boundary values A(v, t, 0) for the requested t's.

    One incremental power sweep of (e^x - 1 - x)^t at order 2*vmax covers
    every t at once; this is how deep profiles (m = 100, v up to 100) stay
    cheap without filling the full three-index table.
    """
    t_set = {int(t) for t in t_values}
    if not t_set:
        return {}
    if min(t_set) < 1:
        raise ValidationError("t values must be >= 1")
    if max(t_set) > m:
        raise ValidationError("t values must not exceed m = %d" % (m,))
    order = 2 * vmax
    base = poisson_block_series(1, order)
    power = Series([Fraction(1)] + [Fraction(0)] * order)
    dfo = [double_factorial_odd(v) for v in range(vmax + 1)]
    out: dict[int, dict[int, Fraction]] = {}
    for t in range(1, max(t_set) + 1):
        power = power * base
        if t in t_set:
            ct = binomial(m, t)
            out[t] = {
                v: ct * dfo[v] * power.coef(2 * v)
                for v in range(t, vmax + 1)
                if power.coef(2 * v)
            }
    return out


def growth_profile(m: int, vmax: int, t_values, base=10) -> dict[int, list[tuple[int, float]]]:
    """Growth exponents g(v) = log(A(v,t,0)/binom(m,t)) per requested t.

    Rows run over the v where the exponent is defined (v >= t).
    """
    layer = boundary_layer(m, vmax, t_values)
    out: dict[int, list[tuple[int, float]]] = {}
    for t, vals in layer.items():
        ct = binomial(m, t)
        out[t] = [(v, log_fraction(vals[v] / ct, base=base)) for v in sorted(vals)]
    return out


# ----------------------------------------------------------------------
# CPTABLE file format
# ----------------------------------------------------------------------


def save_table(table: CoeffTable, path) -> None:
    """Write the canonical CPTABLE text format.

    Line 1: "CPTABLE 1".  Line 2: "m=<m> vmax=<vmax> base=<name>".  Then one
    row per nonzero entry, "<v> <t> <s> <num>/<den>" in lowest terms with a
    positive denominator, sorted lexicographically by (v, t, s), LF endings.
    Zero entries are omitted.
    """
    if table.is_partial:
        raise ValidationError("refusing to save a partial table as complete")
    lines = [_HEADER_MAGIC, "m=%d vmax=%d base=%s" % (table.m, table.vmax, table.base.value)]
    for (v, t, s), val in sorted(table.entries.items()):
        lines.append("%d %d %d %d/%d" % (v, t, s, val.numerator, val.denominator))
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def load_table(path) -> CoeffTable:
    """Load and validate a CPTABLE file; partial files load resumable.

    Validation: header magic and fields, row syntax, lowest-terms
    normalization with positive denominator, strictly increasing (v, t, s)
    order, no zero values, indices inside the declared support, v = 0 rows
    consistent with the base config.

    Completeness: the file is complete iff its maximum stored v equals the
    declared vmax and the final line parses.  Otherwise the maximal stored
    level may have lost a suffix, so it is dropped and the table comes back
    with vmax = (last complete v) and is_partial = True; fill_table can
    resume from it.  A file whose final declared level was truncated at a
    line boundary is indistinguishable from a complete one, which is the
    cost of omitting zero rows.
    """
    with open(path, "r", newline="") as fh:
        content = fh.read()
    lines = content.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
        clean_tail = True
    else:
        clean_tail = False  # no final newline: last line may be cut mid-token
    if not lines or lines[0] != _HEADER_MAGIC:
        raise TableFormatError("bad magic, expected %r" % (_HEADER_MAGIC,), line=1)
    if len(lines) < 2:
        raise TableFormatError("missing header line", line=2)
    header = _HEADER_RE.match(lines[1])
    if not header:
        raise TableFormatError("bad header %r" % (lines[1],), line=2)
    m = int(header.group(1))
    declared_vmax = int(header.group(2))
    base = BaseConfig.from_label(header.group(3))
    params = EnsembleParams.from_checks(m) if m >= 1 else None
    if params is None:
        raise TableFormatError("m must be >= 1", line=2)

    entries: dict[tuple[int, int, int], Fraction] = {}
    prev_key = None
    truncated_row = None
    for idx, line in enumerate(lines[2:], start=3):
        row = _ROW_RE.match(line)
        last = idx == len(lines)
        if not row or (last and not clean_tail):
            if last:
                truncated_row = idx  # suffix loss: treat as partial, drop it
                break
            raise TableFormatError("bad row %r" % (line,), line=idx)
        v, t, s = int(row.group(1)), int(row.group(2)), int(row.group(3))
        num, den = int(row.group(4)), int(row.group(5))
        val = Fraction(num, den)
        if val == 0:
            raise TableFormatError("zero entries must be omitted", line=idx)
        if val.numerator != num or val.denominator != den:
            raise TableFormatError("%d/%d is not in lowest terms" % (num, den), line=idx)
        key = (v, t, s)
        if prev_key is not None and key <= prev_key:
            raise TableFormatError("rows out of order at %r" % (key,), line=idx)
        prev_key = key
        if v > declared_vmax:
            raise TableFormatError("v exceeds declared vmax", line=idx)
        if v == 0:
            if base.level_zero().get(key) != val:
                raise TableFormatError(
                    "v=0 row conflicts with base=%s" % (base.value,), line=idx
                )
        elif not (1 <= t <= m) or not (0 <= s <= m - t):
            raise TableFormatError("indices outside support", line=idx)
        entries[key] = val

    max_v = max((key[0] for key in entries), default=0)
    complete = truncated_row is None and max_v == declared_vmax
    if complete:
        vmax = declared_vmax
        for key, val in base.level_zero().items():
            if entries.get(key) != val:
                raise TableFormatError(
                    "complete file is missing base row %r" % (key,), line=3
                )
    else:
        vmax = max(max_v - 1, 0)
        entries = {key: val for key, val in entries.items() if key[0] <= vmax}
        # level 0 is defined by the base config; restore it on partial loads
        if vmax >= 0:
            for key, val in base.level_zero().items():
                entries.setdefault(key, val)
    return CoeffTable(params, vmax, base, entries, declared_vmax=declared_vmax)
