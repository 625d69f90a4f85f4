"""A point where F takes the value (1, ..., 1).

For a map with invertible Jacobian, evaluating the formal inverse at the
all-ones vector gives b with F(b) = (1, ..., 1), read off modulo p^N.
"""

from tatejac import Domain, PolyMap, TateSeries, unimodular_witness
from tatejac.oracles import generate_tame

dom = Domain.truncated(5, 4)
x = TateSeries.variable(0, 1, dom)
rep = unimodular_witness(PolyMap([x + 5 * x * x]), 16)
b = rep.outcome["b"][0]
print(f"f = x + 5x^2 over Z/625: b = {b}, f(b) = {(b + 5 * b * b) % 625}")
for c in rep.caveats:
    print("  caveat:", c)

print()
for p in (2, 3, 7, 31, 97):
    pair = generate_tame(p, 3, 2, 3, Domain.truncated(p, 3))
    out = unimodular_witness(pair.F, 12).outcome
    print(f"p = {p:>2}: b = {out['b']}, F(b) = {out['F_of_b']}")
