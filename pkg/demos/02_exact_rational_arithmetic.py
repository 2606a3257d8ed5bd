"""Solving with exact rational arithmetic.

The recursion uses only field operations, so it runs unchanged over
arbitrary-precision fractions: no rounding, no dependency threshold, and
provably exact answers on ill-conditioned integer matrices that defeat
float64 (the 10x10 Pascal matrix has condition number 4e9).
"""

from fractions import Fraction

from rankrls import RATIONAL, exact, pascal, pinv_from_scratch, solve_batch

P = pascal(10)
print("pascal(10), top-left corner:")
for row in P[:3, :5]:
    print("   ", list(row))

inverse = pinv_from_scratch(P, scalar=RATIONAL)
expected = exact.pascal_inverse(10)
print("recursive rational inverse equals the exact integer inverse:",
      (inverse == expected).all())
print("largest inverse entry:", max(inverse.flat))

# Rational targets propagate exactly.
x, rank = solve_batch(P[:4, :4], [Fraction(1, 3)] * 4, scalar=RATIONAL)
print("exact solution of a 4x4 Pascal system with targets 1/3:")
print("   ", list(x))

# Rank decisions are exact too: a tiny but non-zero rejection is new
# information, never noise.
tiny = [Fraction(0)] * 3 + [Fraction(1, 10**60)]
A = [[1, 0, 0, 0], tiny]
x, rank = solve_batch(A, [1, 1], scalar=RATIONAL)
print("rank with a 1e-60 magnitude independent row:", rank)
print("recovered coefficient:", x[3])
