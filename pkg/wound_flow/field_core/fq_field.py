import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

import galois

from wound_flow.errors import ParameterError, WoundError


class NotPresent(WoundError):
    pass


class FqField:
    """The finite field F_q with q = p^m.

    Elements are plain integers 0 .. q-1 in the digit convention of :mod:`galois`:
    the base-p digit i of an element is its coefficient of x^i modulo the defining
    polynomial. The prime field F_p therefore sits inside as the integers 0 .. p-1.

    The defining polynomial is the lexicographically smallest irreducible polynomial
    of degree m over F_p, so serialized elements are reproducible between runs.
    Multiplication goes through discrete-log tables, addition through Zech logarithms.

    :param p: Characteristic, must be prime.
    :type p: int
    :param m: Degree over the prime field.
    :type m: int
    :raises ParameterError: When p is not prime or m < 1.
    """

    def __init__(self, p: int, m: int = 1) -> None:
        if m < 1:
            raise ParameterError(f"Extension degree must be positive, got {m}.")
        if not galois.is_prime(p):
            raise ParameterError(f"Characteristic must be prime, got {p}.")
        self.p = p
        self.m = m
        self.q = p ** m
        self.modulus = galois.irreducible_poly(p, m, method="min")
        if not self.modulus.is_irreducible():
            raise ParameterError(f"Modulus {self.modulus} is reducible over F_{p}.")
        if m == 1:
            self.GF = galois.GF(p)
        else:
            self.GF = galois.GF(self.q, irreducible_poly=self.modulus)

        # log/antilog tables over the cyclic group F_q^*
        self._order = self.q - 1
        generator = self.GF.primitive_element
        self._exp = []
        power = self.GF(1)
        for _ in range(self._order):
            self._exp.append(int(power))
            power = power * generator
        self._log = [-1] * self.q
        for i, value in enumerate(self._exp):
            self._log[value] = i
        shifted = self.GF(self._exp) + self.GF(1)
        self._zech = [self._log[int(value)] for value in shifted]  # -1 where 1 + g^n = 0
        self._minus_one = self._exp[self._order // 2] if p != 2 else 1
        logging.debug(f"Constructed field {self.descriptor}.")

    @property
    def descriptor(self) -> str:
        coeffs = ",".join(str(int(c)) for c in self.modulus.coeffs)
        return f"{self.p}^{self.m}:{coeffs}"

    def __repr__(self) -> str:
        return f"FqField({self.descriptor})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FqField) and self.p == other.p and self.m == other.m

    def __hash__(self) -> int:
        return hash((self.p, self.m))

    #-------------------#
    # integer-coded ops #
    #-------------------#

    def add(self, a: int, b: int) -> int:
        if a == 0:
            return b
        if b == 0:
            return a
        if self.p == 2:
            return a ^ b
        la = self._log[a]
        z = self._zech[(self._log[b] - la) % self._order]
        if z < 0:
            return 0
        return self._exp[(la + z) % self._order]

    def neg(self, a: int) -> int:
        if a == 0 or self.p == 2:
            return a
        return self.mul(a, self._minus_one)

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[(self._log[a] + self._log[b]) % self._order]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("Inverse of zero in a finite field.")
        return self._exp[(-self._log[a]) % self._order]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def power(self, a: int, e: int) -> int:
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("Negative power of zero in a finite field.")
            return 1 if e == 0 else 0
        return self._exp[(self._log[a] * e) % self._order]

    def frobenius(self, a: int, e: int = 1) -> int:
        return self.power(a, self.p ** e)

    def pth_root(self, a: int) -> int:
        """Unique y with y^p = a; F_q is perfect so this always exists."""
        return self.power(a, self.q // self.p)

    def from_int(self, n: int) -> int:
        return n % self.p

    def log(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("Discrete log of zero.")
        return self._log[a]

    def generator_power(self, n: int) -> int:
        return self._exp[n % self._order]

    def digits(self, a: int) -> list[int]:
        """Base-p digits of a, lowest first, always m entries."""
        out = []
        for _ in range(self.m):
            a, r = divmod(a, self.p)
            out.append(r)
        return out

    def from_digits(self, digits: list[int]) -> int:
        value = 0
        for d in reversed(digits):
            value = value * self.p + (d % self.p)
        return value

    def elements(self) -> Iterator[int]:
        return iter(range(self.q))

    def element(self, value: int) -> "FqElem":
        if not 0 <= value < self.q:
            raise ParameterError(f"{value} does not code an element of F_{self.q}.")
        return FqElem(self, value)

    def to_text(self, a: int) -> str:
        return ",".join(str(d) for d in reversed(self.digits(a)))

    def from_text(self, text: str) -> int:
        parts = [int(c) for c in text.split(",")]
        if len(parts) > self.m:
            raise ParameterError(f"Element '{text}' has more than {self.m} coordinates.")
        return self.from_digits(list(reversed(parts)))

    def is_pminus1_power(self, a: int) -> bool:
        """True iff a is a (p-1)st power in this field: a = 0 or a^((Q-1)/(p-1)) = 1."""
        if a == 0:
            return True
        return self.power(a, self._order // (self.p - 1)) == 1


@dataclass(frozen=True)
class FqElem:
    """A field element bound to its field, with the usual operators.

    Integers mixed into arithmetic are read as elements of the prime field.
    """
    owner: FqField
    value: int

    def _coerce(self, other: "FqElem | int") -> int:
        if isinstance(other, FqElem):
            if other.owner != self.owner:
                raise ParameterError(f"Cannot combine elements of {self.owner} and {other.owner}.")
            return other.value
        return self.owner.from_int(other)

    @property
    def coeffs(self) -> list[int]:
        return self.owner.digits(self.value)

    def __add__(self, other: "FqElem | int") -> "FqElem":
        return FqElem(self.owner, self.owner.add(self.value, self._coerce(other)))

    __radd__ = __add__

    def __sub__(self, other: "FqElem | int") -> "FqElem":
        return FqElem(self.owner, self.owner.sub(self.value, self._coerce(other)))

    def __rsub__(self, other: "FqElem | int") -> "FqElem":
        return FqElem(self.owner, self.owner.sub(self._coerce(other), self.value))

    def __neg__(self) -> "FqElem":
        return FqElem(self.owner, self.owner.neg(self.value))

    def __mul__(self, other: "FqElem | int") -> "FqElem":
        return FqElem(self.owner, self.owner.mul(self.value, self._coerce(other)))

    __rmul__ = __mul__

    def __truediv__(self, other: "FqElem | int") -> "FqElem":
        return FqElem(self.owner, self.owner.div(self.value, self._coerce(other)))

    def __pow__(self, e: int) -> "FqElem":
        return FqElem(self.owner, self.owner.power(self.value, e))

    def inverse(self) -> "FqElem":
        return FqElem(self.owner, self.owner.inv(self.value))

    def is_zero(self) -> bool:
        return self.value == 0

    def __str__(self) -> str:
        return self.owner.to_text(self.value)


@lru_cache(maxsize=None)
def get_field(p: int, m: int = 1) -> FqField:
    """Shared field instance for (p, m); building the tables is the expensive part."""
    return FqField(p, m)


def pth_root(x: FqElem) -> FqElem:
    return FqElem(x.owner, x.owner.pth_root(x.value))


def is_pminus1_power(x: FqElem) -> bool:
    return x.owner.is_pminus1_power(x.value)


def _smallest_root(coeffs_low_to_high: list[int], field: FqField) -> int | None:
    poly = galois.Poly(field.GF(list(reversed(coeffs_low_to_high))))
    roots = sorted(int(r) for r in poly.roots())
    return roots[0] if roots else None


@lru_cache(maxsize=None)
def subfield_embedding(small: FqField, big: FqField) -> tuple[int, ...]:
    """Table of a field embedding small -> big, indexed by the integer code of the small element.

    The image of the small field's generator is the smallest root of its modulus inside
    the big field, so the choice is deterministic.

    :raises ParameterError: When small is not a subfield of big.
    """
    if small.p != big.p or big.m % small.m != 0:
        raise ParameterError(f"{small} does not embed into {big}.")
    if small.m == 1:
        return tuple(range(small.q))
    modulus = [int(c) for c in reversed(small.modulus.coeffs)]
    rho = _smallest_root(modulus, big)
    if rho is None:
        raise ParameterError(f"Modulus of {small} has no root in {big}.")
    powers = [1]
    for _ in range(small.m - 1):
        powers.append(big.mul(powers[-1], rho))
    table = []
    for value in range(small.q):
        image = 0
        for digit, rho_power in zip(small.digits(value), powers):
            if digit:
                image = big.add(image, big.mul(digit, rho_power))
        table.append(image)
    return tuple(table)


def find_zeta(field: FqField) -> FqElem:
    """An element of F_{p^2} - F_p inside the given field.

    For p = 2 the result is a primitive cube root of unity, the smallest root of x^2 + x + 1.

    :raises NotPresent: When F_{p^2} is not a subfield, i.e. m is odd.
    """
    if field.m % 2 == 1:
        raise NotPresent(f"F_{field.p ** 2} is not contained in F_{field.q}.")
    if field.p == 2:
        return FqElem(field, _smallest_root([1, 1, 1], field))
    square = field.p * field.p
    for value in range(field.p, field.q):
        if field.power(value, square) == value and field.power(value, field.p) != value:
            return FqElem(field, value)
    raise NotPresent(f"No element of F_{square} - F_{field.p} found in F_{field.q}.")
