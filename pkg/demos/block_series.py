"""Where the coefficients come from.

The generating series (e^x - 1 - x)^t enumerates ways to distribute an
even number of endpoint slots over t checks so that every check receives
at least two.  Scaling the 2v-th coefficient by (2v-1)!! turns slot
distributions into pairings, which is the quantity the tables tabulate.
"""

from fractions import Fraction

from cyclepoisson import (
    block_partition_count,
    double_factorial_odd,
    factorial,
    poisson_block_series,
)


def main() -> None:
    print("coefficients of (e^x - 1 - x)^t, t = 3:")
    series = poisson_block_series(3, 12)
    for k in range(6, 13):
        print("  [x^%-2d] = %s" % (k, series.coef(k)))

    print()
    print("(2v)! times [x^2v] counts surjections onto blocks of size >= 2:")
    for t in range(1, 5):
        for v in range(t, 6):
            series = poisson_block_series(t, 2 * v)
            lhs = factorial(2 * v) * series.coef(2 * v)
            rhs = block_partition_count(2 * v, t, 2)
            flag = "ok" if lhs == rhs else "MISMATCH"
            print("  t=%d v=%d  %8d  %s" % (t, v, lhs, flag))

    # the same coefficient under the pairing normalization
    v = 4
    series = poisson_block_series(2, 2 * v)
    paired = double_factorial_odd(2 * v - 1) * series.coef(2 * v)
    print()
    print("pairing-normalized coefficient at t=2, v=4:", paired)

    print()
    print("partial sums of the series at x = 1/2 approach the exact value:")
    x = Fraction(1, 2)
    exact = None
    for order in (4, 8, 16, 32):
        s = poisson_block_series(2, order)
        val = s.evaluate(x)
        exact = val
        print("  order %2d: %s" % (order, float(val)))
    print("  (exact rational at order 32: %s)" % exact)


if __name__ == "__main__":
    main()
