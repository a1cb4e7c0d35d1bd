"""Exact polynomial analysis of the table's differential operator.

The three-term recurrence behind the coefficient table translates, index
shift by index shift, into a second-order linear differential operator on
the generating function G(x,y,z) = sum A(v,t,s) x^v y^t z^s:

    z dG/dz = x z { F + D d/dy + E' d/dz + A d2/dy2 + C d2/dz2
                    + 2B d2/dydz } G.

This module builds the six coefficient polynomials exactly, classifies the
(y,z) plane by the sign of the discriminant B^2 - AC, reproduces the
y = alpha*z case split, and checks the operator against a filled table by
applying it to the truncated G and listing every monomial of the residual
that lies in the interior window.

Two variants of the d2/dy2 slot are carried side by side.  The
classification set (`pde_coefficients`) uses A = y^2 (y - 1), which all of
the region machinery here takes as ground truth.  The operator obtained by
translating the recurrence term by term has A = y^2 (z - 1) instead
(`recurrence_pde_coefficients`); it is the variant that actually
annihilates the table, so the residual check defaults to it and
`residual_reconciliation` runs both and reports the difference.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import ValidationError
from .table import CoeffTable, EnsembleParams

__all__ = [
    "Poly1",
    "Poly2",
    "Poly3",
    "Root",
    "PointClassification",
    "RegionMap",
    "AlphaSubstitution",
    "AlphaCase",
    "ResidualReport",
    "pde_coefficients",
    "recurrence_pde_coefficients",
    "discriminant",
    "classify_point",
    "region_map",
    "alpha_substitution",
    "alpha_discriminant",
    "printed_f",
    "printed_expansion",
    "quadratic_roots",
    "alpha_case",
    "expansion_audit",
    "pde_residual",
    "residual_reconciliation",
    "HYPERBOLIC",
    "PARABOLIC",
    "ELLIPTIC",
]

HYPERBOLIC = "hyperbolic"
PARABOLIC = "parabolic"
ELLIPTIC = "elliptic"


def _rational(value) -> Fraction:
    """Coerce an exact coefficient; floats are refused to keep arithmetic exact."""
    if isinstance(value, float):
        raise ValidationError("float coefficients are not exact: %r" % (value,))
    return Fraction(value)


def _label_of_sign(value, tol=0) -> str:
    if value > tol:
        return HYPERBOLIC
    if value < -tol:
        return ELLIPTIC
    return PARABOLIC


# ----------------------------------------------------------------------
# sparse exact polynomials
# ----------------------------------------------------------------------


class Poly1:
    """Sparse exact univariate polynomial (variable named z throughout)."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean: dict[int, Fraction] = {}
        items = terms.items() if isinstance(terms, dict) else (terms or ())
        for deg, coeff in items:
            coeff = _rational(coeff)
            if coeff:
                deg = int(deg)
                acc = clean.get(deg, Fraction(0)) + coeff
                if acc:
                    clean[deg] = acc
                else:
                    clean.pop(deg, None)
        self.terms = clean

    @property
    def degree(self) -> int:
        """Degree of the polynomial; -1 for the zero polynomial."""
        return max(self.terms, default=-1)

    def coeff(self, deg: int) -> Fraction:
        return self.terms.get(deg, Fraction(0))

    def is_zero(self) -> bool:
        return not self.terms

    def evaluate(self, z):
        if isinstance(z, float):
            return sum(float(c) * z**d for d, c in self.terms.items())
        z = Fraction(z)
        return sum((c * z**d for d, c in self.terms.items()), Fraction(0))

    def scale(self, factor) -> "Poly1":
        factor = _rational(factor)
        return Poly1({d: c * factor for d, c in self.terms.items()})

    def shift_degree(self, k: int) -> "Poly1":
        return Poly1({d + k: c for d, c in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, Poly1):
            return NotImplemented
        return self.terms == other.terms

    __hash__ = None

    def __repr__(self):
        if not self.terms:
            return "Poly1(0)"
        parts = []
        for deg in sorted(self.terms, reverse=True):
            parts.append("%s*z^%d" % (self.terms[deg], deg))
        return "Poly1(%s)" % " + ".join(parts)


class Poly2:
    """Sparse exact polynomial in (y, z); zero coefficients are never stored."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean: dict[tuple[int, int], Fraction] = {}
        items = terms.items() if isinstance(terms, dict) else (terms or ())
        for key, coeff in items:
            coeff = _rational(coeff)
            if coeff:
                key = (int(key[0]), int(key[1]))
                acc = clean.get(key, Fraction(0)) + coeff
                if acc:
                    clean[key] = acc
                else:
                    clean.pop(key, None)
        self.terms = clean

    @classmethod
    def const(cls, value) -> "Poly2":
        return cls({(0, 0): value})

    @classmethod
    def y(cls) -> "Poly2":
        return cls({(1, 0): 1})

    @classmethod
    def z(cls) -> "Poly2":
        return cls({(0, 1): 1})

    def is_zero(self) -> bool:
        return not self.terms

    def _coerced(self, other):
        if isinstance(other, Poly2):
            return other
        if isinstance(other, (int, Fraction)):
            return Poly2.const(other)
        return None

    def __add__(self, other):
        other = self._coerced(other)
        if other is None:
            return NotImplemented
        merged = dict(self.terms)
        out = list(merged.items()) + list(other.terms.items())
        return Poly2(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly2({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerced(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = _rational(other)
            return Poly2({k: c * other for k, c in self.terms.items()})
        if not isinstance(other, Poly2):
            return NotImplemented
        out: list = []
        for (a1, b1), c1 in self.terms.items():
            for (a2, b2), c2 in other.terms.items():
                out.append(((a1 + a2, b1 + b2), c1 * c2))
        return Poly2(out)

    __rmul__ = __mul__

    def __pow__(self, exp: int):
        if exp < 0:
            raise ValidationError("negative exponent")
        out = Poly2.const(1)
        for _ in range(exp):
            out = out * self
        return out

    def evaluate(self, y, z):
        if isinstance(y, float) or isinstance(z, float):
            yf, zf = float(y), float(z)
            return sum(float(c) * yf**a * zf**b for (a, b), c in self.terms.items())
        y, z = Fraction(y), Fraction(z)
        return sum(
            (c * y**a * z**b for (a, b), c in self.terms.items()), Fraction(0)
        )

    def substitute_y(self, alpha) -> Poly1:
        """Exact substitution y = alpha*z, collapsing to a polynomial in z."""
        alpha = _rational(alpha)
        out: list = []
        for (a, b), c in self.terms.items():
            out.append((a + b, c * alpha**a))
        return Poly1(out)

    def __eq__(self, other):
        if not isinstance(other, Poly2):
            return NotImplemented
        return self.terms == other.terms

    __hash__ = None

    def __repr__(self):
        if not self.terms:
            return "Poly2(0)"
        parts = []
        for a, b in sorted(self.terms, reverse=True):
            parts.append("%s*y^%d*z^%d" % (self.terms[(a, b)], a, b))
        return "Poly2(%s)" % " + ".join(parts)


class Poly3:
    """Sparse exact polynomial in (x, y, z) with partial derivatives in y, z."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean: dict[tuple[int, int, int], Fraction] = {}
        items = terms.items() if isinstance(terms, dict) else (terms or ())
        for key, coeff in items:
            coeff = _rational(coeff)
            if coeff:
                key = (int(key[0]), int(key[1]), int(key[2]))
                acc = clean.get(key, Fraction(0)) + coeff
                if acc:
                    clean[key] = acc
                else:
                    clean.pop(key, None)
        self.terms = clean

    @classmethod
    def from_table(cls, table: CoeffTable, trunc: tuple[int, int, int]) -> "Poly3":
        bv, bt, bs = trunc
        return cls(
            {
                key: val
                for key, val in table.entries.items()
                if key[0] <= bv and key[1] <= bt and key[2] <= bs
            }
        )

    def is_zero(self) -> bool:
        return not self.terms

    def coeff(self, v: int, t: int, s: int) -> Fraction:
        return self.terms.get((v, t, s), Fraction(0))

    def diff_y(self) -> "Poly3":
        return Poly3(
            {(v, t - 1, s): c * t for (v, t, s), c in self.terms.items() if t}
        )

    def diff_z(self) -> "Poly3":
        return Poly3(
            {(v, t, s - 1): c * s for (v, t, s), c in self.terms.items() if s}
        )

    def shift(self, dv: int, dt: int, ds: int) -> "Poly3":
        return Poly3(
            {(v + dv, t + dt, s + ds): c for (v, t, s), c in self.terms.items()}
        )

    def __add__(self, other):
        if not isinstance(other, Poly3):
            return NotImplemented
        return Poly3(list(self.terms.items()) + list(other.terms.items()))

    def __sub__(self, other):
        if not isinstance(other, Poly3):
            return NotImplemented
        return Poly3(
            list(self.terms.items())
            + [(k, -c) for k, c in other.terms.items()]
        )

    def scale(self, factor) -> "Poly3":
        factor = _rational(factor)
        return Poly3({k: c * factor for k, c in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, Poly3):
            return NotImplemented
        return self.terms == other.terms

    __hash__ = None

    def __repr__(self):
        return "Poly3(%d terms)" % len(self.terms)


# ----------------------------------------------------------------------
# operator coefficients and the discriminant
# ----------------------------------------------------------------------


def pde_coefficients(params: EnsembleParams) -> dict[str, Poly2]:
    """The classification coefficient set.

    A = y^2 (y-1), B = y(2z^2 - y - z)/2, C = z(z^2 - y),
    D = y(2-k)(2z-1), E' = (2-k)(2z^2 - y), F = (k^2 - 3k + 2) z,
    with k = m + 1 from the parameters.  A, B, C are k-free; the region
    analysis below depends on them alone.
    """
    k = params.k
    y, z = Poly2.y(), Poly2.z()
    return {
        "A": y**2 * (y - 1),
        "B": y * (2 * z**2 - y - z) * Fraction(1, 2),
        "C": z * (z**2 - y),
        "D": y * (2 * z - 1) * (2 - k),
        "E'": (2 * z**2 - y) * (2 - k),
        "F": z * (k * k - 3 * k + 2),
    }


def recurrence_pde_coefficients(params: EnsembleParams) -> dict[str, Poly2]:
    """Coefficient set translated directly from the three-term recurrence.

    Identical to `pde_coefficients` except the second-y-derivative slot,
    which comes out as A = y^2 (z-1).  This is the set whose operator
    annihilates the filled table (see `pde_residual`).
    """
    y, z = Poly2.y(), Poly2.z()
    out = pde_coefficients(params)
    out["A"] = y**2 * (z - 1)
    return out


_DISCRIMINANT: Poly2 | None = None


def discriminant(params: EnsembleParams | None = None) -> Poly2:
    """Exact B^2 - AC.  Independent of k, so the parameters are optional."""
    global _DISCRIMINANT
    if _DISCRIMINANT is None:
        coeffs = pde_coefficients(EnsembleParams.from_checks(1))
        _DISCRIMINANT = coeffs["B"] * coeffs["B"] - coeffs["A"] * coeffs["C"]
    if params is not None:
        coeffs = pde_coefficients(params)
        check = coeffs["B"] * coeffs["B"] - coeffs["A"] * coeffs["C"]
        if check != _DISCRIMINANT:
            raise ValidationError("discriminant unexpectedly depends on k")
    return _DISCRIMINANT


@dataclass(frozen=True)
class PointClassification:
    y: object
    z: object
    value: object
    label: str


def classify_point(y, z, tol=0) -> PointClassification:
    """Label a point by the sign of B^2 - AC.

    Exact inputs (int, Fraction, str) give exact sign decisions and ignore
    tol; float inputs evaluate in float arithmetic and compare against tol
    (default 0, so near-parabolic float points classify by their rounded
    sign unless the caller opts into a tolerance).
    """
    disc = discriminant()
    if isinstance(y, float) or isinstance(z, float):
        value = disc.evaluate(float(y), float(z))
        return PointClassification(y, z, value, _label_of_sign(value, tol))
    y, z = Fraction(y), Fraction(z)
    value = disc.evaluate(y, z)
    return PointClassification(y, z, value, _label_of_sign(value))


@dataclass
class RegionMap:
    points: list[PointClassification]
    grid_n: int

    def counts(self) -> dict[str, int]:
        out = {HYPERBOLIC: 0, PARABOLIC: 0, ELLIPTIC: 0}
        for p in self.points:
            out[p.label] += 1
        return out

    def to_csv(self) -> str:
        lines = ["y,z,discriminant,label"]
        for p in self.points:
            lines.append("%s,%s,%s,%s" % (p.y, p.z, p.value, p.label))
        return "\n".join(lines) + "\n"


def region_map(y_range, z_range, grid_n: int) -> RegionMap:
    """Classify an evenly spaced grid_n x grid_n grid of exact rational points.

    Grid points are y_lo + i*(y_hi-y_lo)/(grid_n-1), likewise in z, so the
    range endpoints are always included.  Rows run y-major.
    """
    if grid_n < 2:
        raise ValidationError("grid_n must be >= 2")
    y_lo, y_hi = (Fraction(v) for v in y_range)
    z_lo, z_hi = (Fraction(v) for v in z_range)
    ys = [y_lo + Fraction(i, grid_n - 1) * (y_hi - y_lo) for i in range(grid_n)]
    zs = [z_lo + Fraction(j, grid_n - 1) * (z_hi - z_lo) for j in range(grid_n)]
    points = [classify_point(y, z) for y in ys for z in zs]
    return RegionMap(points=points, grid_n=grid_n)


# ----------------------------------------------------------------------
# the y = alpha*z substitution
# ----------------------------------------------------------------------


def printed_f(alpha) -> Poly1:
    """The printed quadratic f(z) = (4-alpha) z^2 - 3(1+alpha) z + 1+alpha+alpha^2.

    Carried verbatim as a claim to audit; the exact counterpart is the
    `exact` field of `alpha_substitution`.
    """
    alpha = _rational(alpha)
    return Poly1({2: 4 - alpha, 1: -3 * (1 + alpha), 0: 1 + alpha + alpha**2})


@dataclass(frozen=True)
class AlphaSubstitution:
    alpha: Fraction
    exact: Poly1  # y = alpha*z substituted into 4(B^2 - AC)
    printed: Poly1  # alpha^2 z^4 f(z) with the printed f
    printed_f: Poly1
    equal: bool


def alpha_substitution(alpha) -> AlphaSubstitution:
    """Substitute y = alpha*z into 4(B^2 - AC), exactly, and compare.

    The exact result is alpha^2 z^4 (4(1-alpha) z^2 + 4 alpha (alpha-1) z
    + (alpha-1)^2), which vanishes identically at alpha = 1.  The printed
    claim alpha^2 z^4 f(z) is computed alongside; `equal` records whether
    the two polynomials agree (they do only where both degenerate, e.g.
    alpha = 0).
    """
    alpha = _rational(alpha)
    exact = (4 * discriminant()).substitute_y(alpha)
    f = printed_f(alpha)
    printed = f.shift_degree(4).scale(alpha**2)
    return AlphaSubstitution(
        alpha=alpha, exact=exact, printed=printed, printed_f=f, equal=exact == printed
    )


def alpha_discriminant(alpha) -> Fraction:
    """Quadratic discriminant of the printed f, via both stated forms.

    Evaluates 9(1+a)^2 - 4(4-a)(1+a+a^2) and (a-1)(4a^2+a+7); the two are
    the same cubic 4a^3 - 3a^2 + 6a - 7 and the call cross-checks them.
    """
    a = _rational(alpha)
    expanded = 9 * (1 + a) ** 2 - 4 * (4 - a) * (1 + a + a * a)
    factored = (a - 1) * (4 * a * a + a + 7)
    if expanded != factored:
        raise ValidationError("discriminant forms disagree at alpha=%s" % (a,))
    return factored


# ----------------------------------------------------------------------
# roots and the case split
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class Root:
    """A real root, exact when lo == hi, otherwise a validated interval."""

    lo: Fraction
    hi: Fraction
    multiplicity: int = 1

    @property
    def exact(self) -> Fraction | None:
        return self.lo if self.lo == self.hi else None

    @property
    def midpoint(self) -> float:
        return float((self.lo + self.hi) / 2)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo


def _rational_sqrt(q: Fraction) -> Fraction | None:
    """Exact square root of a nonnegative rational, or None."""
    rn = math.isqrt(q.numerator)
    rd = math.isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        return Fraction(rn, rd)
    return None


def _sqrt_interval(q: Fraction, width: Fraction) -> tuple[Fraction, Fraction]:
    """Rational bracket [lo, hi] with lo^2 <= q <= hi^2 and hi - lo < width."""
    lo, hi = Fraction(0), max(Fraction(1), q)
    while hi - lo >= width:
        mid = (lo + hi) / 2
        if mid * mid <= q:
            lo = mid
        else:
            hi = mid
    return lo, hi


ROOT_WIDTH = Fraction(1, 10**10)


def quadratic_roots(poly: Poly1, width: Fraction = ROOT_WIDTH) -> list[Root]:
    """Real roots of a polynomial of degree <= 2, sorted increasing.

    Exact roots whenever the quadratic discriminant is a rational square
    (and always in the linear and double-root cases); otherwise validated
    rational intervals narrower than `width`.

    Raises:
        ValidationError: degree above 2, or the zero polynomial (every z
            is a root).
    """
    if poly.degree > 2:
        raise ValidationError("quadratic_roots handles degree <= 2 only")
    if poly.is_zero():
        raise ValidationError("the zero polynomial has no isolated roots")
    a, b, c = poly.coeff(2), poly.coeff(1), poly.coeff(0)
    if a == 0:
        if b == 0:
            return []  # nonzero constant
        r = -c / b
        return [Root(r, r)]
    disc = b * b - 4 * a * c
    if disc < 0:
        return []
    if disc == 0:
        r = -b / (2 * a)
        return [Root(r, r, multiplicity=2)]
    s = _rational_sqrt(disc)
    if s is not None:
        roots = sorted([(-b - s) / (2 * a), (-b + s) / (2 * a)])
        return [Root(r, r) for r in roots]
    lo, hi = _sqrt_interval(disc, width * abs(2 * a))
    pairs = []
    for sign in (-1, 1):
        e1 = (-b + sign * lo) / (2 * a)
        e2 = (-b + sign * hi) / (2 * a)
        pairs.append(Root(min(e1, e2), max(e1, e2)))
    pairs.sort(key=lambda r: r.lo)
    return pairs


@dataclass(frozen=True)
class AlphaCase:
    """One branch of the case split along the ray y = alpha*z.

    `index` runs 0..5: alpha = 0, 0 < alpha < 1, alpha = 1, 1 < alpha < 4,
    alpha = 4, alpha > 4.  `roots` are those of the printed f, and
    `classify` labels a z value by the exact sign of alpha^2 z^4 f(z),
    i.e. against the printed form (the exact substitution is a separate
    comparison, see `alpha_substitution`).
    """

    alpha: Fraction
    index: int
    f: Poly1
    roots: tuple[Root, ...]

    def classify(self, z) -> str:
        z = Fraction(z)
        value = self.alpha**2 * z**4 * self.f.evaluate(z)
        return _label_of_sign(value)


def alpha_case(alpha) -> AlphaCase:
    alpha = _rational(alpha)
    if alpha == 0:
        index = 0
    elif alpha < 1:
        index = 1
    elif alpha == 1:
        index = 2
    elif alpha < 4:
        index = 3
    elif alpha == 4:
        index = 4
    else:
        index = 5
    if alpha < 0:
        # negative rays are not part of the stated split; classify still works
        index = -1
    f = printed_f(alpha)
    return AlphaCase(alpha=alpha, index=index, f=f, roots=tuple(quadratic_roots(f)))


# ----------------------------------------------------------------------
# printed-expansion audit
# ----------------------------------------------------------------------


def printed_expansion() -> Poly2:
    """The printed expanded form of 4(B^2 - AC), transcribed term by term.

    y^2 (4z^4 - 3z^3 + z^2 + y^2 - yz^3 - 3yz^3 + yz); the two yz^3 terms
    collapse to -4yz^3 when collected.  This polynomial does NOT equal the
    exact expansion y^2 (4z^4 - 4yz^3 - 4yz^2 + 4y^2 z + y^2 + z^2 - 2yz);
    `expansion_audit` measures the disagreement point by point.
    """
    y, z = Poly2.y(), Poly2.z()
    bracket = (
        4 * z**4
        - 3 * z**3
        + z**2
        + y**2
        - y * z**3
        - 3 * y * z**3
        + y * z
    )
    return y**2 * bracket


def _random_fraction(rng: random.Random, span: int = 120, den: int = 24) -> Fraction:
    return Fraction(rng.randint(-span, span), rng.randint(1, den))


@dataclass
class AuditReport:
    """Point-by-point comparison of exact vs printed forms."""

    expansion_rows: list[dict]
    alpha_rows: list[dict]

    def summary(self) -> dict:
        def tally(rows):
            eq = sum(1 for r in rows if r["equal"])
            return {"total": len(rows), "equal": eq, "unequal": len(rows) - eq}

        return {
            "expansion": tally(self.expansion_rows),
            "alpha_form": tally(self.alpha_rows),
        }

    def to_csv(self) -> str:
        lines = ["kind,a,b,exact,printed,equal"]
        for r in self.expansion_rows:
            lines.append(
                "expansion,%s,%s,%s,%s,%s"
                % (r["y"], r["z"], r["exact"], r["printed"], r["equal"])
            )
        for r in self.alpha_rows:
            lines.append(
                "alpha-form,%s,%s,%s,%s,%s"
                % (r["alpha"], r["z"], r["exact"], r["printed"], r["equal"])
            )
        return "\n".join(lines) + "\n"


def expansion_audit(n_points: int = 1000, seed: int = 20260816) -> AuditReport:
    """Evaluate exact vs printed forms at random rational points.

    Two comparisons per seed stream: the expanded discriminant claim
    (exact 4(B^2-AC) against `printed_expansion`) and the substituted
    claim (exact substitution against alpha^2 z^4 f(z)).  Disagreement is
    the expected outcome at generic points; the report records it rather
    than asserting it away.
    """
    if n_points < 1:
        raise ValidationError("n_points must be >= 1")
    rng = random.Random(seed)
    exact4 = 4 * discriminant()
    printed = printed_expansion()
    expansion_rows = []
    for _ in range(n_points):
        y = _random_fraction(rng)
        z = _random_fraction(rng)
        ev = exact4.evaluate(y, z)
        pv = printed.evaluate(y, z)
        expansion_rows.append(
            {"y": y, "z": z, "exact": ev, "printed": pv, "equal": ev == pv}
        )
    alpha_rows = []
    for _ in range(n_points):
        a = _random_fraction(rng)
        z = _random_fraction(rng)
        sub = alpha_substitution(a)
        ev = sub.exact.evaluate(z)
        pv = sub.printed.evaluate(z)
        alpha_rows.append(
            {"alpha": a, "z": z, "exact": ev, "printed": pv, "equal": ev == pv}
        )
    return AuditReport(expansion_rows=expansion_rows, alpha_rows=alpha_rows)


# ----------------------------------------------------------------------
# residual check against a filled table
# ----------------------------------------------------------------------


def _operator_terms(coeffs: dict[str, Poly2]) -> list[tuple[Poly2, int, int]]:
    """Bracket terms as (coefficient polynomial, d/dy order, d/dz order)."""
    return [
        (coeffs["F"], 0, 0),
        (coeffs["D"], 1, 0),
        (coeffs["E'"], 0, 1),
        (coeffs["A"], 2, 0),
        (coeffs["C"], 0, 2),
        (2 * coeffs["B"], 1, 1),
    ]


def _falling(n: int, k: int) -> int:
    out = 1
    for i in range(k):
        out *= n - i
    return out


@dataclass
class ResidualReport:
    operator: str
    trunc: tuple[int, int, int]
    residual: Poly3
    interior_nonzero: list[tuple[tuple[int, int, int], Fraction]]
    excluded: list[tuple[tuple[int, int, int], Fraction]]

    @property
    def passed(self) -> bool:
        return not self.interior_nonzero

    def to_json_dict(self) -> dict:
        bv, bt, bs = self.trunc
        return {
            "operator": self.operator,
            "window": {"vmax": bv, "tmax": bt, "smax": bs, "v_min": 1, "t_min": 1},
            "nonzero_monomials": [
                {"v": v, "t": t, "s": s, "value": str(val)}
                for (v, t, s), val in self.interior_nonzero
            ],
            "excluded_monomials_count": len(self.excluded),
            "excluded_monomials": [
                {"v": v, "t": t, "s": s, "value": str(val)}
                for (v, t, s), val in self.excluded
            ],
            "pass": self.passed,
        }


def pde_residual(
    table: CoeffTable,
    trunc: tuple[int, int, int] | None = None,
    coefficients: dict[str, Poly2] | None = None,
    operator_name: str | None = None,
) -> ResidualReport:
    """Apply the operator to the truncated G and report the residual.

    Builds G from the table entries inside the trunc box (vmax, tmax,
    smax), forms z dG/dz - x z {bracket} G exactly, and splits the
    residual's nonzero monomials into the interior window versus excluded
    boundary monomials.  A monomial (v,t,s) is interior iff v >= 1, t >= 1
    and every table index any operator term reads for it is either inside
    the trunc box or provably zero (outside the table's support, or on the
    v=0 plane away from the base configuration).  Nonzero interior
    monomials falsify the operator against the table; excluded ones are
    truncation edge effects and are listed, not judged.

    The default coefficient set is `recurrence_pde_coefficients`, the
    variant that the table actually satisfies.
    """
    m = table.m
    if trunc is None:
        trunc = (table.vmax, m, max(m - 1, 0))
    bv, bt, bs = trunc
    if bv < 0 or bv > table.vmax:
        raise ValidationError("trunc vmax must lie in 0..table.vmax")
    if bt < 0 or bt > m or bs < 0 or bs > max(m - 1, 0):
        raise ValidationError("trunc (tmax, smax) outside the table support")
    if coefficients is None:
        coefficients = recurrence_pde_coefficients(table.params)
        if operator_name is None:
            operator_name = "recurrence"
    elif operator_name is None:
        operator_name = "custom"
    ops = _operator_terms(coefficients)

    G = Poly3.from_table(table, trunc)
    residual = Poly3({k: c * k[2] for k, c in G.terms.items() if k[2]})  # z dG/dz
    for poly, p, q in ops:
        d = G
        for _ in range(p):
            d = d.diff_y()
        for _ in range(q):
            d = d.diff_z()
        for (a, b), w in poly.terms.items():
            residual = residual - d.shift(1, a, b + 1).scale(w)

    base_rows = table.base.level_zero()

    def known(ref: tuple[int, int, int]) -> bool:
        rv, rt, rs = ref
        if rv < 0 or rt < 0 or rs < 0:
            return True  # no such coefficient anywhere
        if rv <= bv and rt <= bt and rs <= bs:
            return True  # inside the box: value was in G
        if rv == 0:
            return ref not in base_rows
        return not (1 <= rt <= m and 0 <= rs <= m - rt)  # outside support

    def interior(v: int, t: int, s: int) -> bool:
        if v < 1 or t < 1:
            return False
        if s and not known((v, t, s)):  # the z dG/dz read
            return False
        for poly, p, q in ops:
            for (a, b), _w in poly.terms.items():
                rt, rs = t + p - a, s + q - b - 1
                if _falling(rt, p) == 0 or _falling(rs, q) == 0:
                    continue  # derivative weight vanishes: nothing is read
                if not known((v - 1, rt, rs)):
                    return False
        return True

    interior_nonzero = []
    excluded = []
    for key in sorted(residual.terms):
        val = residual.terms[key]
        if interior(*key):
            interior_nonzero.append((key, val))
        else:
            excluded.append((key, val))
    return ResidualReport(
        operator=operator_name,
        trunc=trunc,
        residual=residual,
        interior_nonzero=interior_nonzero,
        excluded=excluded,
    )


def residual_reconciliation(
    table: CoeffTable, trunc: tuple[int, int, int] | None = None
) -> dict[str, ResidualReport]:
    """Run the residual check under both coefficient sets.

    Returns reports keyed "recurrence" and "printed".  The two differ only
    in the d2/dy2 slot (y^2(z-1) vs y^2(y-1)); on a correctly filled table
    the first passes and the second reports the slot difference, monomial
    by monomial.
    """
    return {
        "recurrence": pde_residual(
            table,
            trunc,
            recurrence_pde_coefficients(table.params),
            operator_name="recurrence",
        ),
        "printed": pde_residual(
            table, trunc, pde_coefficients(table.params), operator_name="printed"
        ),
    }
