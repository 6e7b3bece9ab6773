"""Exact scalar arithmetic: the rationals and prime fields.

No floating point anywhere.  Rational scalars are ``fractions.Fraction``
(always in lowest terms with positive denominator); prime-field scalars are
``Fp`` residues reduced to ``[0, p)`` and carrying their modulus.  Both kinds
support ``+ - * /``, equality, hashing, and truthiness (zero is falsy), which
is all the linear algebra and the verifiers rely on.
"""

from __future__ import annotations

from fractions import Fraction


class FieldError(ValueError):
    """Raised for malformed scalars or impossible coercions."""


class Fp:
    """A residue modulo a prime p."""

    __slots__ = ("value", "p")

    def __init__(self, value: int, p: int):
        self.value = value % p
        self.p = p

    def _coerce(self, other) -> "Fp":
        if isinstance(other, Fp):
            if other.p != self.p:
                raise FieldError(f"mixed moduli {self.p} and {other.p}")
            return other
        if isinstance(other, int):
            return Fp(other, self.p)
        raise FieldError(f"cannot coerce {other!r} into F_{self.p}")

    def __add__(self, other):
        other = self._coerce(other)
        return Fp(self.value + other.value, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        return Fp(self.value - other.value, self.p)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        return Fp(self.value * other.value, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other.value == 0:
            raise ZeroDivisionError(f"division by zero in F_{self.p}")
        return Fp(self.value * pow(other.value, -1, self.p), self.p)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __neg__(self):
        return Fp(-self.value, self.p)

    def __bool__(self):
        return self.value != 0

    def __eq__(self, other):
        if isinstance(other, Fp):
            return self.p == other.p and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.p, self.value))

    def __repr__(self):
        return f"Fp({self.value}, {self.p})"

    def __str__(self):
        return str(self.value)


class RationalField:
    """The field of rational numbers; scalars are ``Fraction``."""

    name = "q"

    @property
    def zero(self):
        return Fraction(0)

    @property
    def one(self):
        return Fraction(1)

    def scalar(self, x):
        """Coerce an int, Fraction, or 'a/b' string into a Fraction."""
        if isinstance(x, Fraction):
            return x
        if isinstance(x, int):
            return Fraction(x)
        if isinstance(x, str):
            try:
                return Fraction(x)
            except (ValueError, ZeroDivisionError) as exc:
                raise FieldError(f"bad rational scalar {x!r}: {exc}") from None
        raise FieldError(f"cannot coerce {x!r} into Q")

    def abs_numerator(self, x) -> int:
        return abs(x.numerator)

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("RationalField")

    def __repr__(self):
        return "QQ"


class PrimeField:
    """The field F_p for a prime p; scalars are ``Fp`` residues."""

    def __init__(self, p: int):
        if p < 2 or any(p % q == 0 for q in range(2, int(p**0.5) + 1)):
            raise FieldError(f"{p} is not prime")
        self.p = p
        self.name = f"fp:{p}"

    @property
    def zero(self):
        return Fp(0, self.p)

    @property
    def one(self):
        return Fp(1, self.p)

    def scalar(self, x):
        if isinstance(x, Fp):
            if x.p != self.p:
                raise FieldError(f"residue mod {x.p} used in F_{self.p}")
            return x
        if isinstance(x, int):
            return Fp(x, self.p)
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise FieldError(f"denominator of {x} vanishes mod {self.p}")
            return Fp(x.numerator, self.p) / Fp(x.denominator, self.p)
        if isinstance(x, str):
            return self.scalar(QQ.scalar(x))
        raise FieldError(f"cannot coerce {x!r} into F_{self.p}")

    def abs_numerator(self, x) -> int:
        # pivot-size proxy: the canonical representative
        return x.value

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("PrimeField", self.p))

    def __repr__(self):
        return f"GF({self.p})"


QQ = RationalField()


def field_by_name(name: str):
    """Resolve 'q' or 'fp:<prime>' (the CLI --field syntax)."""
    if name == "q":
        return QQ
    if name.startswith("fp:"):
        try:
            p = int(name[3:])
        except ValueError:
            raise FieldError(f"bad prime in field name {name!r}") from None
        return PrimeField(p)
    raise FieldError(f"unknown field {name!r} (expected 'q' or 'fp:<prime>')")
