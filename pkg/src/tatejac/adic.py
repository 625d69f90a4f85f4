"""Coefficient domains: ideal-adic rings at exact or truncated precision.

Three concrete rings stand in for an abstract pair (R, I):

* ``truncated_adic``  -- R = Z, I = (m), elements stored in Z/m^N;
* ``exact_integer_adic`` -- R = Z, I = (m), exact integers;
* ``rational_discrete`` -- R = Q, I = (0), exact rationals.

All three are Hausdorff before truncation.  Series code stores *raw*
canonical values (``int`` or ``Fraction``) and calls the :class:`Domain`
methods directly; :class:`AdicElement` is the user-facing wrapper.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

from .errors import DomainMismatchError, NotAUnitError, PreconditionError

#: Valuation of elements lying in every power of I (zero, or zero at precision N).
TOP = math.inf


class Kind(str, Enum):
    TRUNCATED = "truncated_adic"
    EXACT = "exact_integer_adic"
    RATIONAL = "rational_discrete"


@lru_cache(maxsize=None)
def prime_factors(m: int) -> tuple[int, ...]:
    """Distinct prime factors of ``m`` by trial division."""
    if m < 1:
        raise ValueError(f"expected a positive integer, got {m}")
    out = []
    d = 2
    while d * d <= m:
        if m % d == 0:
            out.append(d)
            while m % d == 0:
                m //= d
        d += 1 if d == 2 else 2
    if m > 1:
        out.append(m)
    return tuple(out)


def radical(m: int) -> int:
    """Product of the distinct primes dividing ``m``; generates sqrt((m)) in Z."""
    return math.prod(prime_factors(m))


def is_prime(p: int) -> bool:
    return p >= 2 and prime_factors(p) == (p,)


@dataclass(frozen=True)
class Domain:
    kind: Kind
    m: int | None = None
    N: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        if self.kind is Kind.RATIONAL:
            if self.m is not None or self.N is not None:
                raise ValueError("rational_discrete takes no modulus or precision")
            return
        if self.m is None or self.m < 2:
            raise ValueError(f"modulus must be an integer >= 2, got {self.m}")
        if self.kind is Kind.TRUNCATED:
            if self.N is None or self.N < 1:
                raise ValueError(f"precision must be a positive integer, got {self.N}")
        elif self.N is not None:
            raise ValueError("exact_integer_adic takes no precision")

    # constructors -------------------------------------------------------
    @classmethod
    def truncated(cls, m: int, N: int) -> Domain:
        return cls(Kind.TRUNCATED, m, N)

    @classmethod
    def exact(cls, m: int) -> Domain:
        return cls(Kind.EXACT, m)

    @classmethod
    def rational(cls) -> Domain:
        return cls(Kind.RATIONAL)

    @classmethod
    def from_json(cls, obj: dict) -> Domain:
        kind = Kind(obj["kind"])
        if kind is Kind.TRUNCATED:
            return cls.truncated(int(obj["m"]), int(obj["N"]))
        if kind is Kind.EXACT:
            return cls.exact(int(obj["m"]))
        return cls.rational()

    def to_json(self) -> dict:
        out = {"kind": self.kind.value}
        if self.m is not None:
            out["m"] = self.m
        if self.N is not None:
            out["N"] = self.N
        return out

    def __str__(self):
        if self.kind is Kind.TRUNCATED:
            return f"Z/{self.m}^{self.N}"
        if self.kind is Kind.EXACT:
            return f"(Z,({self.m}))"
        return "Q"

    # structure ----------------------------------------------------------
    @property
    def is_adic(self) -> bool:
        return self.kind is not Kind.RATIONAL

    @property
    def modulus(self) -> int | None:
        """m^N for truncated domains, ``None`` otherwise."""
        if self.kind is Kind.TRUNCATED:
            return self.m**self.N
        return None

    def residue_domain(self) -> Domain:
        """The domain modelling R/I, i.e. Z/m (precision one)."""
        if not self.is_adic:
            raise PreconditionError("R/I is only modelled for adic domains")
        return Domain.truncated(self.m, 1)

    def with_precision(self, N: int) -> Domain:
        if not self.is_adic:
            raise PreconditionError("precision applies to adic domains only")
        return Domain.truncated(self.m, N)

    # raw values ---------------------------------------------------------
    def coerce(self, x) -> int | Fraction:
        """Canonical representative of ``x`` (int, Fraction or decimal string)."""
        if isinstance(x, str):
            x = Fraction(x.strip())
        if isinstance(x, bool) or not isinstance(x, Rational):
            raise TypeError(f"cannot coerce {x!r} into {self}")
        if self.kind is Kind.RATIONAL:
            return Fraction(x)
        num, den = x.numerator, x.denominator
        if den == 1:
            return self.norm(int(num))
        if self.kind is Kind.EXACT:
            raise PreconditionError(f"{x} is not an integer")
        if math.gcd(den, self.m) != 1:
            raise PreconditionError(f"denominator of {x} is not a unit in {self}")
        M = self.modulus
        return num * pow(den, -1, M) % M

    def norm(self, v):
        if self.kind is Kind.TRUNCATED:
            return v % self.modulus
        if self.kind is Kind.RATIONAL:
            return Fraction(v)
        return v

    def one(self):
        return self.norm(1)

    def zero(self):
        return self.norm(0)

    def add(self, a, b):
        return self.norm(a + b)

    def sub(self, a, b):
        return self.norm(a - b)

    def mul(self, a, b):
        return self.norm(a * b)

    def neg(self, a):
        return self.norm(-a)

    def is_unit(self, v) -> bool:
        if self.kind is Kind.TRUNCATED:
            return math.gcd(v, self.m) == 1
        if self.kind is Kind.EXACT:
            return v in (1, -1)
        return v != 0

    def inverse(self, v):
        if not self.is_unit(v):
            raise NotAUnitError(f"{v} is not a unit in {self}")
        if self.kind is Kind.TRUNCATED:
            return pow(v, -1, self.modulus)
        if self.kind is Kind.EXACT:
            return v
        return 1 / Fraction(v)

    def valuation(self, v):
        """Largest k with v in I^k; :data:`TOP` for zero (or zero mod m^N)."""
        if v == 0:
            return TOP
        if self.kind is Kind.RATIONAL:
            return 0
        v = abs(v)
        k = 0
        while v % self.m == 0:
            v //= self.m
            k += 1
        return k

    def in_radical(self, v) -> bool:
        if self.kind is Kind.RATIONAL:
            return v == 0
        # rad(m) divides m^N, so this is well defined on residues mod m^N
        return v % radical(self.m) == 0

    def reduce_from(self, source: Domain, v):
        """Image of a raw value of ``source`` under the canonical map into ``self``."""
        if source == self:
            return v
        if self.kind is Kind.TRUNCATED and source.is_adic and source.m == self.m:
            if source.kind is Kind.EXACT or source.N >= self.N:
                return v % self.modulus
        if self.kind is Kind.RATIONAL and source.kind is Kind.EXACT:
            return Fraction(v)
        if self.kind is Kind.EXACT and source.kind is Kind.RATIONAL:
            return self.coerce(v)
        if self.kind is Kind.TRUNCATED and source.kind is Kind.RATIONAL:
            return self.coerce(v)
        raise DomainMismatchError(f"no canonical map {source} -> {self}")

    def element(self, x) -> AdicElement:
        return AdicElement(self.coerce(x), self)


@dataclass(frozen=True)
class AdicElement:
    value: int | Fraction
    domain: Domain

    def __post_init__(self):
        object.__setattr__(self, "value", self.domain.coerce(self.value))

    def _check(self, other) -> AdicElement:
        if not isinstance(other, AdicElement):
            return AdicElement(other, self.domain)
        if other.domain != self.domain:
            raise DomainMismatchError(f"incompatible domains {self.domain} and {other.domain}")
        return other

    def __add__(self, other):
        other = self._check(other)
        return AdicElement(self.domain.add(self.value, other.value), self.domain)

    def __sub__(self, other):
        other = self._check(other)
        return AdicElement(self.domain.sub(self.value, other.value), self.domain)

    def __mul__(self, other):
        other = self._check(other)
        return AdicElement(self.domain.mul(self.value, other.value), self.domain)

    __radd__ = __add__
    __rmul__ = __mul__

    def __neg__(self):
        return AdicElement(self.domain.neg(self.value), self.domain)

    def __pow__(self, k: int):
        if self.domain.kind is Kind.TRUNCATED:
            return AdicElement(pow(self.value, k, self.domain.modulus), self.domain)
        return AdicElement(self.value**k, self.domain)

    def is_unit(self) -> bool:
        return self.domain.is_unit(self.value)

    def inverse(self) -> AdicElement:
        return AdicElement(self.domain.inverse(self.value), self.domain)

    def valuation(self):
        return self.domain.valuation(self.value)

    def in_radical(self) -> bool:
        return self.domain.in_radical(self.value)

    def __str__(self):
        return str(self.value)


def ring_arith(a: AdicElement, b: AdicElement, op: str) -> AdicElement:
    """``op`` is one of ``"add"``, ``"sub"``, ``"mul"``."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def is_unit(a: AdicElement) -> bool:
    return a.is_unit()


def invert_unit(a: AdicElement) -> AdicElement:
    return a.inverse()


def ideal_valuation(a: AdicElement):
    return a.valuation()


def in_radical(a: AdicElement) -> bool:
    return a.in_radical()


def parse_domain(text: str) -> Domain:
    """Parse the compact CLI form: ``z-adic:M:N``, ``z-exact:M`` or ``q``."""
    parts = text.strip().lower().split(":")
    try:
        if parts[0] in ("z-adic", "truncated", "truncated_adic") and len(parts) == 3:
            return Domain.truncated(int(parts[1]), int(parts[2]))
        if parts[0] in ("z-exact", "exact", "exact_integer_adic") and len(parts) == 2:
            return Domain.exact(int(parts[1]))
        if parts[0] in ("q", "rational", "rational_discrete") and len(parts) == 1:
            return Domain.rational()
    except ValueError as exc:
        raise ValueError(f"bad domain {text!r}: {exc}") from None
    raise ValueError(f"bad domain {text!r}; expected z-adic:M:N, z-exact:M or q")
