"""Character map of the classification surface y^2 z^2 - y^3 z."""

from fractions import Fraction

from cyclepoisson import alpha_case, alpha_discriminant, classify_point, region_map

GLYPH = {"hyperbolic": "+", "parabolic": ".", "elliptic": "o"}

N = 41
rm = region_map((Fraction(-4), Fraction(4)), (Fraction(-4), Fraction(4)), N)

# points come back row-major in y; render with z increasing left to right
rows = {}
for pt in rm.points:
    rows.setdefault(pt.y, []).append(GLYPH[pt.label])

print("y^2 z^2 - y^3 z over [-4,4]^2  (+ hyperbolic, . parabolic, o elliptic)")
for y in sorted(rows, reverse=True):
    print("".join(rows[y]))

print()
for y, z in ((2, 1), (2, 2), (3, 2)):
    c = classify_point(y, z)
    print("point (%d,%d): %s, value %s" % (y, z, c.label, c.value))

print()
print("along the ray z = alpha*y the sign is governed by a cubic in alpha:")
for alpha in (0, Fraction(1, 2), 1, 2):
    case = alpha_case(alpha)
    d = alpha_discriminant(alpha)
    roots = ", ".join(
        "[%s, %s]" % (float(r.lo), float(r.hi)) for r in case.roots
    ) or "none"
    print("  alpha=%-4s disc=%-8s real roots in z: %s" % (alpha, d, roots))
