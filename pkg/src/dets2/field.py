"""Exact scalar fields: the rationals and prime fields GF(p).

Matrices in this package store *raw* values for speed (``Fraction`` over Q,
``int`` residues in ``[0, p)`` over GF(p)) next to the :class:`FieldSpec`
that interprets them.  :class:`Scalar` wraps a raw value together with its
field for code that wants operator syntax and protection against mixing
fields.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Union

Raw = Union[int, Fraction]

MAX_PRIME = 1 << 62

# Deterministic Miller-Rabin witnesses, valid for every n < 3.3e24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


class FieldError(ValueError):
    """Invalid field construction, mixed fields, or division by zero."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for b in _MR_BASES:
        if n % b == 0:
            return n == b
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """Either Q (``prime is None``) or GF(prime)."""

    prime: int | None = None

    def __post_init__(self):
        p = self.prime
        if p is None:
            return
        if isinstance(p, bool) or not isinstance(p, int):
            raise FieldError(f"modulus must be an integer, got {p!r}")
        if not 2 <= p < MAX_PRIME:
            raise FieldError(f"modulus {p} outside [2, 2^62)")
        if not is_prime(p):
            raise FieldError(f"modulus {p} is not prime")

    @classmethod
    def rational(cls) -> "FieldSpec":
        return cls(None)

    @classmethod
    def gf(cls, p: int) -> "FieldSpec":
        return cls(p)

    @property
    def is_rational(self) -> bool:
        return self.prime is None

    @property
    def tag(self) -> str:
        return "Q" if self.prime is None else f"GF({self.prime})"

    def __str__(self):
        return self.tag

    # -- element construction -------------------------------------------

    @property
    def zero(self) -> Raw:
        return Fraction(0) if self.prime is None else 0

    @property
    def one(self) -> Raw:
        return Fraction(1) if self.prime is None else 1

    def coerce(self, x: Any) -> Raw:
        """Map an int, Fraction, Scalar or scalar string into this field."""
        if isinstance(x, Scalar):
            if x.field != self:
                raise FieldError(f"cannot use {x.field.tag} scalar in {self.tag}")
            return x.value
        if isinstance(x, str):
            return self.parse(x)
        if isinstance(x, bool):
            x = int(x)
        if self.prime is None:
            if isinstance(x, (int, Fraction)):
                return Fraction(x)
            raise FieldError(f"cannot coerce {x!r} to a rational")
        if isinstance(x, int):
            return x % self.prime
        if isinstance(x, Fraction):
            return self.div(x.numerator % self.prime, x.denominator % self.prime)
        raise FieldError(f"cannot coerce {x!r} to {self.tag}")

    def parse(self, text: str) -> Raw:
        """Parse ``"a"`` or ``"a/b"``.  Over GF(p) a fraction means a * b^-1."""
        s = text.strip()
        try:
            if "/" in s:
                num, den = s.split("/")
                num, den = int(num), int(den)
            else:
                num, den = int(s), 1
        except ValueError:
            raise FieldError(f"malformed scalar {text!r}") from None
        if den == 0:
            raise FieldError(f"zero denominator in scalar {text!r}")
        if self.prime is None:
            return Fraction(num, den)
        return self.div(num % self.prime, den % self.prime)

    def format(self, a: Raw) -> str:
        if self.prime is None:
            a = Fraction(a)
            return str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"
        return str(a)

    def random(self, rng: random.Random, bound: int = 10) -> Raw:
        """Uniform over GF(p); over Q a small fraction with |num| <= bound."""
        if self.prime is None:
            return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))
        return rng.randrange(self.prime)

    # -- raw arithmetic ---------------------------------------------------

    def add(self, a: Raw, b: Raw) -> Raw:
        return a + b if self.prime is None else (a + b) % self.prime

    def sub(self, a: Raw, b: Raw) -> Raw:
        return a - b if self.prime is None else (a - b) % self.prime

    def mul(self, a: Raw, b: Raw) -> Raw:
        return a * b if self.prime is None else a * b % self.prime

    def neg(self, a: Raw) -> Raw:
        return -a if self.prime is None else -a % self.prime

    def inv(self, a: Raw) -> Raw:
        if a == 0:
            raise FieldError(f"inverse of zero in {self.tag}")
        if self.prime is None:
            return 1 / Fraction(a)
        return pow(a, -1, self.prime)

    def div(self, a: Raw, b: Raw) -> Raw:
        return self.mul(a, self.inv(b))

    def sign(self, k: int) -> Raw:
        """(-1)**k as a field element."""
        return self.one if k % 2 == 0 else self.neg(self.one)

    # -- JSON -------------------------------------------------------------

    def to_json(self) -> Any:
        return "rational" if self.prime is None else {"prime": self.prime}

    @classmethod
    def from_json(cls, obj: Any) -> "FieldSpec":
        if obj in ("rational", "Q", None):
            return cls.rational()
        if isinstance(obj, dict) and set(obj) == {"prime"}:
            return cls.gf(obj["prime"])
        raise FieldError(f'field must be "rational" or {{"prime": p}}, got {obj!r}')


Q = FieldSpec.rational()


@dataclass(frozen=True)
class Scalar:
    """A field element that knows its field.  Mixing fields raises."""

    value: Raw
    field: FieldSpec = Q

    def __post_init__(self):
        object.__setattr__(self, "value", self.field.coerce(self.value))

    def _other(self, other: Any) -> Raw:
        if isinstance(other, Scalar):
            if other.field != self.field:
                raise FieldError(f"mixed fields: {self.field.tag} and {other.field.tag}")
            return other.value
        if isinstance(other, (int, Fraction)):
            return self.field.coerce(other)
        return NotImplemented

    def _wrap(self, raw: Raw) -> "Scalar":
        return Scalar(raw, self.field)

    def __add__(self, other):
        b = self._other(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.field.add(self.value, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._other(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.field.sub(self.value, b))

    def __rsub__(self, other):
        b = self._other(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.field.sub(b, self.value))

    def __mul__(self, other):
        b = self._other(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.field.mul(self.value, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._other(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.field.div(self.value, b))

    def __neg__(self):
        return self._wrap(self.field.neg(self.value))

    def inverse(self) -> "Scalar":
        return self._wrap(self.field.inv(self.value))

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.field == other.field and self.value == other.value
        if isinstance(other, (int, Fraction)):
            return self.value == self.field.coerce(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.field))

    def __bool__(self):
        return self.value != 0

    def __str__(self):
        return self.field.format(self.value)

    def __repr__(self):
        return f"Scalar({self}, {self.field.tag})"
