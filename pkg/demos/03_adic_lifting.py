"""Lifting an inverse from Z/5 to Z/5^4.

Modulo 5 the map x + 5x^2 is the identity, so g0 = x inverts it there.
Each corrective step at least doubles the power of 5 dividing the error
g o f - x; the ledger shows this happening.
"""

from tatejac import Domain, PolyMap, TateSeries, adic_lift_inverse
from tatejac.maps import map_compose
from tatejac.oracles import generate_tame, perturb

dom = Domain.truncated(5, 4)
x = TateSeries.variable(0, 1, dom)
F = PolyMap([x + 5 * x * x])

res = adic_lift_inverse(F, PolyMap([x]), degree=16)
for step in res.ledger:
    print(f"step {step.step}: error valuation {step.error_valuation} (need >= {step.required})")
print("lifted inverse:", res.inverse[0])
print("g o f =", map_compose(res.inverse, F.truncate(16))[0])

# the same in two variables with a tame map perturbed by multiples of 5
pair = generate_tame(3, 2, 2, 3, dom)
F2 = perturb(pair.F, 1, 5, 3)
res2 = adic_lift_inverse(F2, pair.G, degree=10)
print()
print("perturbed tame map:", F2)
print("valuations:", [s.error_valuation for s in res2.ledger])
