"""Compositional inverse of x - x^2 and the Catalan numbers.

The formal inverse is computed by the contraction iteration and compared
with Lagrange's coefficient formula, which shares no code with it.
"""

from fractions import Fraction

from tatejac import Domain, PolyMap, TateSeries, formal_inverse, lagrange_oracle

Q = Domain.rational()
x = TateSeries.variable(0, 1, Q)
f = x - x * x

g = formal_inverse(PolyMap([f]), 10)[0]
print("inverse of x - x^2:", g)
print("Lagrange oracle:   ", lagrange_oracle(f, 10))
print("f(g(x)) =", f(g))

f2 = x + Fraction(1, 3) * x**3 - 2 * x**4
print()
print("inverse of", f2, ":")
print(" ", formal_inverse(PolyMap([f2]), 8)[0])
