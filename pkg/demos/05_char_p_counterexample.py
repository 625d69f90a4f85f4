"""Why X - X^2 has no inverse with decaying coefficients over (Z, (2)).

Its Jacobian determinant 1 - 2X is a unit in the Tate algebra, yet the
formal inverse has odd Catalan coefficients at every power-of-two degree.
Modulo 2 the map is not even a bijection of Z/2.
"""

from tatejac import char_p_report

rep = char_p_report(2, 1, 64)
out = rep.outcome
print("det JF is a Tate unit:", out["tate_unit"], "-", out["tate_unit_reason"])
print("degrees with odd coefficients:", out["valuation_zero_degrees"])
print("bijective mod 2:", out["bijective_mod_c"])
print(out["conclusion"])

print()
rep3 = char_p_report(3, 2, 12)
print("c = 3, n = 2: valuation-0 degrees", rep3.outcome["valuation_zero_degrees"])
print("agrees with the univariate Lagrange oracle:", rep3.outcome["lagrange_agreement"])
