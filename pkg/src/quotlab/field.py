"""Exact base fields: the rationals (gmpy2.mpq) and prime fields F_p.

Internally a rational is an ``mpq`` and a prime-field element is a plain int
in ``range(p)``.  The public ``Fp`` wrapper exists so that user-supplied
scalars carry their modulus and cannot be mixed by accident.
"""

import os
from dataclasses import dataclass
from fractions import Fraction

import gmpy2
from gmpy2 import mpq

from .errors import ArithmeticDomainError

DEFAULT_PRIME = 65537


def _is_prime(p):
    return p > 2 and gmpy2.is_prime(p)


@dataclass(frozen=True)
class Fp:
    """An element of F_p that remembers p."""

    value: int
    p: int

    def __post_init__(self):
        object.__setattr__(self, "value", self.value % self.p)

    def _other(self, other):
        if isinstance(other, Fp):
            if other.p != self.p:
                raise ArithmeticDomainError(f"cannot mix F_{self.p} and F_{other.p}")
            return other.value
        if isinstance(other, int):
            return other % self.p
        raise ArithmeticDomainError(f"cannot combine F_{self.p} element with {type(other).__name__}")

    def __add__(self, other):
        return Fp(self.value + self._other(other), self.p)

    __radd__ = __add__

    def __sub__(self, other):
        return Fp(self.value - self._other(other), self.p)

    def __rsub__(self, other):
        return Fp(self._other(other) - self.value, self.p)

    def __mul__(self, other):
        return Fp(self.value * self._other(other), self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return Fp(-self.value, self.p)

    def inverse(self):
        if self.value == 0:
            raise ZeroDivisionError("zero has no inverse")
        return Fp(pow(self.value, self.p - 2, self.p), self.p)

    def __truediv__(self, other):
        return self * Fp(self._other(other), self.p).inverse()

    def __eq__(self, other):
        if isinstance(other, Fp):
            return self.p == other.p and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.p))

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"Fp({self.value}, {self.p})"


@dataclass(frozen=True)
class Field:
    """Q when ``p`` is None, otherwise F_p for an odd prime p."""

    p: int | None = None

    def __post_init__(self):
        if self.p is not None and not _is_prime(self.p):
            raise ArithmeticDomainError(f"{self.p} is not an odd prime")

    @property
    def is_rational(self):
        return self.p is None

    @property
    def characteristic(self):
        return 0 if self.p is None else self.p

    @property
    def zero(self):
        return mpq(0) if self.p is None else 0

    @property
    def one(self):
        return mpq(1) if self.p is None else 1

    def __call__(self, x):
        """Convert ``x`` to the internal representation of this field."""
        if self.p is None:
            if isinstance(x, Fp):
                raise ArithmeticDomainError("prime-field element used where a rational is expected")
            if isinstance(x, str):
                return mpq(x.strip())
            if isinstance(x, float):
                raise ArithmeticDomainError("floating point scalars are not accepted")
            if isinstance(x, Fraction):
                return mpq(x.numerator, x.denominator)
            return mpq(x)
        if isinstance(x, Fp):
            if x.p != self.p:
                raise ArithmeticDomainError(f"cannot mix F_{x.p} and F_{self.p}")
            return x.value
        if isinstance(x, str):
            x = mpq(x.strip())
        if isinstance(x, (Fraction,)) or type(x).__name__ == "mpq":
            num, den = int(x.numerator), int(x.denominator)
            if den % self.p == 0:
                raise ArithmeticDomainError(f"denominator divisible by {self.p}")
            return num * pow(den, self.p - 2, self.p) % self.p
        if isinstance(x, bool) or not isinstance(x, int):
            if isinstance(x, float):
                raise ArithmeticDomainError("floating point scalars are not accepted")
            x = int(x)
        return x % self.p

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("zero has no inverse")
        if self.p is None:
            return mpq(1) / a
        return pow(a, self.p - 2, self.p)

    def norm(self, a):
        return a if self.p is None else a % self.p

    def to_json(self, a):
        """Rationals become "p/q" strings (or "p" for integers); F_p elements become ints."""
        if self.p is None:
            a = mpq(a)
            if a.denominator == 1:
                return str(a.numerator)
            return f"{a.numerator}/{a.denominator}"
        return int(a) % self.p

    def public(self, a):
        """Internal value to user-facing scalar (mpq or Fp)."""
        return mpq(a) if self.p is None else Fp(int(a), self.p)

    def label(self):
        return "rational" if self.p is None else f"F_{self.p}"

    def evidence(self):
        """How results over this field are labeled."""
        return "verified" if self.p is None else "char-p evidence"

    def spec(self):
        return "rational" if self.p is None else {"prime": self.p}

    def signed(self, a):
        """Representative in (-p/2, p/2] for printing; identity over Q."""
        if self.p is None:
            return a
        a %= self.p
        return a - self.p if a > self.p // 2 else a


QQ = Field()


def prime_field(p=DEFAULT_PRIME):
    return Field(p)


def parse_field(spec):
    """Accept "rational", "p:<prime>", {"prime": p} or None."""
    if spec is None or spec == "rational":
        return QQ
    if isinstance(spec, dict):
        if "prime" in spec:
            return Field(int(spec["prime"]))
        raise ArithmeticDomainError(f"unknown field spec {spec!r}")
    if isinstance(spec, Field):
        return spec
    if isinstance(spec, str) and spec.startswith("p:"):
        return Field(int(spec[2:]))
    raise ArithmeticDomainError(f"unknown field spec {spec!r}")


def default_field():
    """Field selected by QUOTLAB_FIELD (rational unless set)."""
    return parse_field(os.environ.get("QUOTLAB_FIELD", "rational"))


def infer_field(values, fallback=None):
    """Field implied by a collection of user scalars; Fp entries must agree on p."""
    primes = {v.p for v in values if isinstance(v, Fp)}
    if len(primes) > 1:
        raise ArithmeticDomainError(f"mixed moduli {sorted(primes)}")
    if primes:
        p = primes.pop()
        for v in values:
            if not isinstance(v, (Fp, int)):
                raise ArithmeticDomainError("prime-field entries mixed with non-integer rationals")
        return Field(p)
    return fallback if fallback is not None else QQ
