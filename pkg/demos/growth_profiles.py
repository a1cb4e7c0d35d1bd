"""How fast the boundary coefficients grow.

A(v,t,0) at fixed t grows super-exponentially in v.  This prints the
base-10 exponent profile g(v) = log10(A(v,t,0) / C(m,t)) for a medium
ensemble; the committed reports/appendix directory holds the same sweep
at m = 100, written by `cyclepoisson table exponents`.
"""

import math

from cyclepoisson import binomial, boundary_layer, log10_fraction

M = 30
T_VALUES = (1, 2, 5, 10, 15)

layer = boundary_layer(M, M, T_VALUES)

header = "  v " + "".join("%10s" % ("t=%d" % t) for t in T_VALUES)
print("g(v) = log10(A(v,t,0)/C(m,t)) at m=%d" % M)
print(header)
for v in range(1, M + 1):
    cells = []
    for t in T_VALUES:
        val = layer[t].get(v)
        if val is None or val == 0:
            cells.append("%10s" % "-")
        else:
            g = log10_fraction(val) - math.log10(binomial(M, t))
            cells.append("%10.3f" % g)
    print("%4d%s" % (v, "".join(cells)))

top = max(
    log10_fraction(val)
    for per_t in layer.values()
    for val in per_t.values()
    if val > 0
)
print()
print("largest raw exponent in this sweep: log10 A = %.3f" % top)
print("(the m=100 sweep in reports/appendix tops out near 149.3 for g)")
