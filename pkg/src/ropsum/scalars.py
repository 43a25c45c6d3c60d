"""Exact scalar arithmetic over the rationals and small prime fields.

Every constant in the package is a :class:`FieldElem` tagged with its
:class:`FieldDescriptor`; mixing elements of different fields raises
``FieldMismatch``.  Rationals are backed by ``fractions.Fraction`` (always
stored reduced, positive denominator); prime-field values are ints in
``[0, p)``.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Optional, Union

from .errors import DivisionByZero, FieldMismatch, ParseError, PreconditionViolated

MAX_PRIME = 2**31


def is_prime(p: int) -> bool:
    """Trial-division primality check, adequate for machine-word moduli."""
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


class FieldDescriptor:
    """The ambient field: the rationals, or F_p for a prime 2 <= p < 2^31."""

    __slots__ = ("kind", "p")

    def __init__(self, kind: str, p: Optional[int] = None):
        if kind == "rationals":
            if p is not None:
                raise PreconditionViolated("the rational field has no modulus")
        elif kind == "prime":
            if p is None or not (2 <= p < MAX_PRIME) or not is_prime(p):
                raise PreconditionViolated("modulus must be a prime in [2, 2^31)")
        else:
            raise PreconditionViolated("unknown field kind %r" % kind)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "p", p)

    def __setattr__(self, name, value):
        raise AttributeError("FieldDescriptor is immutable")

    @property
    def characteristic(self) -> int:
        return 0 if self.kind == "rationals" else self.p

    def zero(self) -> "FieldElem":
        return self.elem(0)

    def one(self) -> "FieldElem":
        return self.elem(1)

    def elem(self, value: Union[int, Fraction, "FieldElem"]) -> "FieldElem":
        """Coerce an int, Fraction or FieldElem into this field."""
        if isinstance(value, FieldElem):
            if value.field != self:
                raise FieldMismatch("element of %s used in %s" % (value.field, self))
            return value
        if self.kind == "rationals":
            return FieldElem(self, Fraction(value))
        if isinstance(value, Fraction):
            den = value.denominator % self.p
            if den == 0:
                raise DivisionByZero("denominator vanishes mod %d" % self.p)
            return FieldElem(self, value.numerator * pow(den, -1, self.p) % self.p)
        return FieldElem(self, value % self.p)

    def elements(self):
        """Iterate all field elements (prime fields only)."""
        if self.kind == "rationals":
            raise PreconditionViolated("cannot enumerate the rationals")
        return (FieldElem(self, v) for v in range(self.p))

    def __eq__(self, other):
        return (
            isinstance(other, FieldDescriptor)
            and self.kind == other.kind
            and self.p == other.p
        )

    def __hash__(self):
        return hash((self.kind, self.p))

    def __repr__(self):
        return "Q" if self.kind == "rationals" else "F_%d" % self.p


QQ = FieldDescriptor("rationals")


def prime_field(p: int) -> FieldDescriptor:
    return FieldDescriptor("prime", p)


class FieldElem:
    """An immutable exact scalar in a fixed field.

    Arithmetic accepts ints (coerced into the element's field) or elements
    of the same field.  All operations are pure.
    """

    __slots__ = ("field", "value")

    def __init__(self, field: FieldDescriptor, value):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "value", value)

    def __setattr__(self, name, value):
        raise AttributeError("FieldElem is immutable")

    def _coerce(self, other):
        if isinstance(other, FieldElem):
            if other.field != self.field:
                raise FieldMismatch(
                    "cannot combine %s element with %s element"
                    % (self.field, other.field)
                )
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.elem(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self.field.kind == "rationals":
            return FieldElem(self.field, self.value + other.value)
        return FieldElem(self.field, (self.value + other.value) % self.field.p)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self.field.kind == "rationals":
            return FieldElem(self.field, self.value - other.value)
        return FieldElem(self.field, (self.value - other.value) % self.field.p)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self.field.kind == "rationals":
            return FieldElem(self.field, self.value * other.value)
        return FieldElem(self.field, (self.value * other.value) % self.field.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __neg__(self):
        if self.field.kind == "rationals":
            return FieldElem(self.field, -self.value)
        return FieldElem(self.field, (-self.value) % self.field.p)

    def inverse(self) -> "FieldElem":
        if self.is_zero():
            raise DivisionByZero("inverse of zero in %s" % self.field)
        if self.field.kind == "rationals":
            return FieldElem(self.field, 1 / self.value)
        return FieldElem(self.field, pow(self.value, -1, self.field.p))

    def is_zero(self) -> bool:
        return self.value == 0

    def is_one(self) -> bool:
        return self.value == 1

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.field.elem(other)
        if not isinstance(other, FieldElem):
            return NotImplemented
        return self.field == other.field and self.value == other.value

    def __hash__(self):
        return hash((self.field, self.value))

    def __repr__(self):
        return "FieldElem(%r, %s)" % (self.field, format_scalar(self))

    def __str__(self):
        return format_scalar(self)


def sqrt_in_field(x: FieldElem) -> Optional[FieldElem]:
    """A square root of x in its own field, or None when none exists.

    Over the rationals a root exists iff x >= 0 and both the numerator and
    the denominator of the reduced form are perfect squares.  Over F_p the
    Euler criterion screens non-residues, then the root is found by direct
    search; of the two roots the smaller representative is returned.
    """
    field = x.field
    if field.kind == "rationals":
        v = x.value
        if v < 0:
            return None
        rn = math.isqrt(v.numerator)
        rd = math.isqrt(v.denominator)
        if rn * rn != v.numerator or rd * rd != v.denominator:
            return None
        return FieldElem(field, Fraction(rn, rd))
    p = field.p
    v = x.value
    if v == 0:
        return field.zero()
    if p > 2 and pow(v, (p - 1) // 2, p) != 1:
        return None
    for r in range(1, p // 2 + 1):
        if r * r % p == v:
            return FieldElem(field, r)
    return None


_MOD_RE = re.compile(r"^([+-]?\d+)\s+mod\s+(\d+)$")
_RAT_RE = re.compile(r"^([+-]?\d+)\s*/\s*(\d+)$")
_INT_RE = re.compile(r"^[+-]?\d+$")


def parse_scalar(text: str, field: FieldDescriptor) -> FieldElem:
    """Parse ``k``, ``p/q`` or ``k mod p`` in the context of ``field``."""
    s = text.strip()
    m = _MOD_RE.match(s)
    if m:
        if field.kind != "prime":
            raise ParseError("'mod' scalar %r in a rational context" % s)
        if int(m.group(2)) != field.p:
            raise ParseError(
                "scalar %r has modulus %s, field is F_%d" % (s, m.group(2), field.p)
            )
        return field.elem(int(m.group(1)))
    m = _RAT_RE.match(s)
    if m:
        num, den = int(m.group(1)), int(m.group(2))
        if den == 0:
            raise ParseError("zero denominator in %r" % s)
        return field.elem(Fraction(num, den))
    if _INT_RE.match(s):
        return field.elem(int(s))
    raise ParseError("cannot parse scalar %r" % text)


def format_scalar(x: FieldElem) -> str:
    """Canonical text form: ``-3/4`` over the rationals, ``k`` over F_p."""
    return str(x.value)
