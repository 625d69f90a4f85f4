"""When is a power series invertible over Z/m^N?

A series is a unit exactly when its constant term is a unit and every other
coefficient is divisible by each prime dividing m.  This script checks a few
series and inverts the ones that pass.
"""

from tatejac import Domain, tate_invert_unit, tate_is_unit
from tatejac.io import parse_series

for text, dom in [
    ("1 + 5x", Domain.truncated(5, 3)),
    ("3 + 5x", Domain.truncated(5, 3)),
    ("1 + x", Domain.truncated(5, 3)),
    ("5 + 6x", Domain.truncated(12, 2)),
    ("5 + 2x", Domain.truncated(12, 2)),
]:
    f = parse_series(text, dom)
    check = tate_is_unit(f)
    print(f"{text:>8} over {dom}: {'unit' if check else 'not a unit'} ({check.reason})")
    if check:
        inv = tate_invert_unit(f, cap=6)
        print(f"{'':>10}inverse = {inv}")
        print(f"{'':>10}check   = {f * inv}")
