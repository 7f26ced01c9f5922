from dataclasses import dataclass
from functools import lru_cache
from typing import Any

import galois
import numpy as np

from wound_flow.errors import ParameterError
from wound_flow.field_core import FqElem, FqField
from wound_flow.function_field.places import Place, valuation
from wound_flow.function_field.poly import Poly, coeff_text, poly_inverse_mod
from wound_flow.function_field.ratfn import RatFn


@dataclass(frozen=True)
class LaurentLocal:
    """Truncated Laurent series sum_{i >= minval} c_i u^i + O(u^prec) in the canonical uniformizer u of a place.

    Coefficients are integer codes of the residue field k(v) and cover exactly the
    indices minval .. prec-1. Nothing is known beyond prec. The leading stored
    coefficient is nonzero, and a series with no known nonzero coefficient has
    minval == prec and no coefficients.
    """
    place: Place
    minval: int
    prec: int
    coeffs: tuple[int, ...]

    @classmethod
    def build(cls, place: Place, start: int, prec: int, coeffs: list[int] | tuple[int, ...]) -> "LaurentLocal":
        """Normalizing constructor: cuts at prec and strips leading zeros."""
        coeffs = list(coeffs[:max(prec - start, 0)])
        coeffs += [0] * (prec - start - len(coeffs))
        lead = 0
        while lead < len(coeffs) and coeffs[lead] == 0:
            lead += 1
        if lead == len(coeffs):
            return cls(place, prec, prec, ())
        return cls(place, start + lead, prec, tuple(coeffs[lead:]))

    @classmethod
    def zero(cls, place: Place, prec: int) -> "LaurentLocal":
        return cls(place, prec, prec, ())

    @classmethod
    def monomial(cls, place: Place, c: int, n: int, prec: int) -> "LaurentLocal":
        """c u^n + O(u^prec), c a code of k(v)."""
        return cls.build(place, n, prec, [c])

    @classmethod
    def constant(cls, place: Place, c: int, prec: int) -> "LaurentLocal":
        """Constant of F_q embedded in k(v)."""
        return cls.build(place, 0, prec, [place.residue_field.embedding[c]])

    @property
    def residue_field(self) -> FqField:
        return self.place.residue_field.field

    def is_zero(self) -> bool:
        """True when no nonzero coefficient is known, i.e. the series is O(u^prec)."""
        return not self.coeffs

    def valuation(self) -> int:
        """Index of the first nonzero coefficient, prec for O(u^prec)."""
        return self.minval

    def coefficient(self, i: int) -> int:
        if i >= self.prec:
            raise ParameterError(f"Coefficient {i} is beyond the precision {self.prec}.")
        if i < self.minval:
            return 0
        return self.coeffs[i - self.minval]

    def _check(self, other: "LaurentLocal") -> None:
        if other.place != self.place:
            raise ParameterError(f"Series at {self.place} and {other.place} cannot be combined.")

    def _coerce(self, other: Any, prec: int) -> "LaurentLocal":
        if isinstance(other, LaurentLocal):
            self._check(other)
            return other
        if isinstance(other, RatFn):
            return expand(other, self.place, prec)
        if isinstance(other, FqElem):
            return LaurentLocal.constant(self.place, other.value, prec)
        if isinstance(other, int):
            return LaurentLocal.constant(self.place, self.place.base.from_int(other), prec)
        return NotImplemented

    #------------#
    # arithmetic #
    #------------#

    def __add__(self, other: Any) -> "LaurentLocal":
        other = self._coerce(other, self.prec)
        if other is NotImplemented:
            return other
        K = self.residue_field
        prec = min(self.prec, other.prec)
        start = min(self.minval, other.minval, prec)
        out = [0] * (prec - start)
        for i, c in enumerate(self.coeffs):
            if self.minval + i < prec:
                out[self.minval + i - start] = c
        for i, c in enumerate(other.coeffs):
            k = other.minval + i
            if k < prec and c:
                out[k - start] = K.add(out[k - start], c)
        return LaurentLocal.build(self.place, start, prec, out)

    __radd__ = __add__

    def __neg__(self) -> "LaurentLocal":
        K = self.residue_field
        return LaurentLocal(self.place, self.minval, self.prec, tuple(K.neg(c) for c in self.coeffs))

    def __sub__(self, other: Any) -> "LaurentLocal":
        other = self._coerce(other, self.prec)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other: Any) -> "LaurentLocal":
        other = self._coerce(other, self.prec)
        if other is NotImplemented:
            return other
        return other + (-self)

    def scale(self, c: int) -> "LaurentLocal":
        """Multiply by the residue-field constant with code c."""
        K = self.residue_field
        if c == 0:
            return LaurentLocal.zero(self.place, self.prec)
        return LaurentLocal(self.place, self.minval, self.prec, tuple(K.mul(c, a) for a in self.coeffs))

    def __mul__(self, other: Any) -> "LaurentLocal":
        if isinstance(other, (FqElem, int)):
            code = other.value if isinstance(other, FqElem) else self.place.base.from_int(other)
            return self.scale(self.place.residue_field.embedding[code])
        if isinstance(other, RatFn):
            if other.is_zero():
                return LaurentLocal.zero(self.place, self.prec)
            o = valuation(other, self.place)
            other = expand(other, self.place, o + self.prec - self.minval)
        other = self._coerce(other, self.prec)
        if other is NotImplemented:
            return other
        K = self.residue_field
        prec = min(self.minval + other.prec, other.minval + self.prec)
        start = self.minval + other.minval
        if self.is_zero() or other.is_zero() or prec <= start:
            return LaurentLocal.zero(self.place, prec)
        n = prec - start
        out = [0] * n
        b = other.coeffs
        for i, a in enumerate(self.coeffs[:n]):
            if a == 0:
                continue
            for j in range(min(len(b), n - i)):
                if b[j]:
                    out[i + j] = K.add(out[i + j], K.mul(a, b[j]))
        return LaurentLocal.build(self.place, start, prec, out)

    __rmul__ = __mul__

    def inverse(self) -> "LaurentLocal":
        """Series inverse, keeping the relative precision.

        :raises ZeroDivisionError: When no nonzero coefficient is known.
        """
        if self.is_zero():
            raise ZeroDivisionError(f"Cannot invert O(u^{self.prec}).")
        K = self.residue_field
        a = self.coeffs
        n = len(a)
        b0 = K.inv(a[0])
        b = [b0]
        for k in range(1, n):
            acc = 0
            for j in range(1, min(k, len(a) - 1) + 1):
                if a[j] and b[k - j]:
                    acc = K.add(acc, K.mul(a[j], b[k - j]))
            b.append(K.neg(K.mul(b0, acc)))
        return LaurentLocal.build(self.place, -self.minval, -self.minval + n, b)

    def __truediv__(self, other: Any) -> "LaurentLocal":
        if isinstance(other, RatFn):
            return self * other.inverse()
        other = self._coerce(other, self.prec)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other: Any) -> "LaurentLocal":
        return self.inverse() * other

    def frobenius(self, e: int = 1) -> "LaurentLocal":
        """Raise to the power p^e; exact on precision since (x + O(u^P))^p = x^p + O(u^(pP))."""
        K = self.residue_field
        step = K.p ** e
        if self.is_zero():
            return LaurentLocal.zero(self.place, self.prec * step)
        out = [0] * (step * (len(self.coeffs) - 1) + 1)
        for i, c in enumerate(self.coeffs):
            out[i * step] = K.frobenius(c, e)
        return LaurentLocal.build(self.place, self.minval * step, self.prec * step, out)

    def __pow__(self, n: int) -> "LaurentLocal":
        if n < 0:
            return self.inverse() ** (-n)
        p = self.residue_field.p
        e = 0
        while n and n % p == 0:
            n //= p
            e += 1
        if n == 0:
            return LaurentLocal.constant(self.place, 1, self.prec - self.minval)
        result = None
        base = self
        while n:
            if n & 1:
                result = base if result is None else result * base
            n >>= 1
            if n:
                base = base * base
        return result.frobenius(e) if e else result

    def shift(self, n: int) -> "LaurentLocal":
        """Multiply by u^n."""
        return LaurentLocal(self.place, self.minval + n, self.prec + n, self.coeffs)

    def truncate(self, prec: int) -> "LaurentLocal":
        if prec >= self.prec:
            return self
        start = min(self.minval, prec)
        return LaurentLocal.build(self.place, start, prec, self.coeffs)

    def agrees_with(self, other: "LaurentLocal", upto: int | None = None) -> bool:
        """Coefficientwise equality below upto (default: the common precision)."""
        self._check(other)
        limit = min(self.prec, other.prec) if upto is None else upto
        if limit > min(self.prec, other.prec):
            return False
        return (self - other).truncate(limit).is_zero()

    #---------------#
    # serialization #
    #---------------#

    def __str__(self) -> str:
        K = self.residue_field
        if self.is_zero():
            return f"v={self.place}; 0 + O(u^{self.prec})"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            text = coeff_text(K, c)
            if c >= K.p:
                text = f"({text})"
            terms.append(text if i == 0 else (f"{text}*u" if i == 1 else f"{text}*u^{i}"))
        return f"v={self.place}; u^{self.minval}*({' + '.join(terms)}) + O(u^{self.prec})"

    def to_dict(self) -> dict:
        return {"place": str(self.place), "minval": self.minval, "prec": self.prec,
                "coeffs": list(self.coeffs), "text": str(self)}

    @classmethod
    def from_dict(cls, base: FqField, data: dict) -> "LaurentLocal":
        place = Place.parse(base, data["place"])
        return cls.build(place, int(data["minval"]), int(data["prec"]), [int(c) for c in data["coeffs"]])


class LocalRing:
    """The completion k_v as a coefficient ring, at a working precision.

    :param place: The place v.
    :type place: Place
    :param prec: Absolute precision used when embedding global elements.
    :type prec: int
    """

    def __init__(self, place: Place, prec: int) -> None:
        self.place = place
        self.prec = prec

    def __eq__(self, other: object) -> bool:
        return isinstance(other, LocalRing) and self.place == other.place

    def __hash__(self) -> int:
        return hash(("k_v", self.place))

    def __repr__(self) -> str:
        return f"k_{self.place}"

    @property
    def characteristic(self) -> int:
        return self.place.base.p

    def zero(self) -> LaurentLocal:
        return LaurentLocal.zero(self.place, self.prec)

    def one(self) -> LaurentLocal:
        return LaurentLocal.constant(self.place, 1, self.prec)

    def embed(self, x: Any) -> LaurentLocal:
        if isinstance(x, LaurentLocal):
            return x
        if isinstance(x, RatFn):
            return expand(x, self.place, self.prec)
        if isinstance(x, FqElem):
            return LaurentLocal.constant(self.place, x.value, self.prec)
        return LaurentLocal.constant(self.place, self.place.base.from_int(x), self.prec)

    def contains(self, x: object) -> bool:
        return isinstance(x, LaurentLocal) and x.place == self.place


#-----------#
# expansion #
#-----------#

def _series_divide(K: FqField, a: list[int], b: list[int], n: int) -> list[int]:
    """First n coefficients of a/b as power series, b[0] != 0."""
    inv_b0 = K.inv(b[0])
    out = []
    for k in range(n):
        acc = a[k] if k < len(a) else 0
        for j in range(1, min(k, len(b) - 1) + 1):
            if b[j] and out[k - j]:
                acc = K.sub(acc, K.mul(b[j], out[k - j]))
        out.append(K.mul(acc, inv_b0))
    return out


@lru_cache(maxsize=None)
def _coordinate_inverse(v: Place) -> tuple[Any, int]:
    """Inverse of the F_p-matrix whose rows are the k(v)-digits of e_b * theta^j."""
    rf = v.residue_field
    K, base = rf.field, v.base
    d = v.degree
    rows = []
    theta_power = 1
    theta_powers = []
    for _ in range(d):
        theta_powers.append(theta_power)
        theta_power = K.mul(theta_power, rf.theta)
    for b in range(base.m):
        e_b = rf.embedding[base.p ** b]
        for j in range(d):
            rows.append(K.digits(K.mul(e_b, theta_powers[j])))
    GFp = galois.GF(base.p)
    return np.linalg.inv(GFp(np.array(rows, dtype=int))), d


def _coordinates(v: Place, c: int) -> list[int]:
    """The a_j in F_q with c = sum_j a_j theta^j in k(v)."""
    inverse, d = _coordinate_inverse(v)
    K, base = v.residue_field.field, v.base
    GFp = type(inverse)
    vec = GFp(np.array(K.digits(c), dtype=int)) @ inverse
    out = [0] * d
    for b in range(base.m):
        for j in range(d):
            digit = int(vec[b * d + j])
            if digit:
                out[j] += digit * base.p ** b
    return out


@lru_cache(maxsize=None)
def _teichmuller_powers(v: Place, r: int) -> tuple[Poly, ...]:
    """Theta^j mod pi^r for j < deg v, Theta the root of unity in O_v lifting T mod pi."""
    pi = v.poly
    modulus = pi ** r
    q_d = v.base.q ** v.degree
    e = 1
    while q_d ** e < r:
        e += 1
    theta = Poly.variable(v.base) % modulus
    for _ in range(v.base.m * v.degree * e):
        theta = theta.frobenius() % modulus
    powers = [Poly.one(v.base)]
    for _ in range(v.degree - 1):
        powers.append((powers[-1] * theta) % modulus)
    return tuple(powers)


def teichmuller_lift(v: Place, c: int, r: int) -> Poly:
    """Polynomial representing the coefficient-field lift of c in k(v), modulo pi^r."""
    if v.degree == 1:
        return Poly.constant(v.base, c)
    powers = _teichmuller_powers(v, r)
    out = Poly.zero(v.base)
    for a_j, theta_j in zip(_coordinates(v, c), powers):
        if a_j:
            out = out + theta_j.scale(a_j)
    return out % (v.poly ** r)


def expand(x: RatFn, v: Place, prec: int) -> LaurentLocal:
    """Laurent expansion of x at v in the canonical uniformizer, exact below prec.

    At infinity u = 1/T. At a finite place of degree d the coefficients live in k(v);
    each step takes a residue, subtracts its Teichmuller lift and divides by pi.
    """
    if x.is_zero():
        return LaurentLocal.zero(v, prec)
    o = valuation(x, v)
    if prec <= o:
        return LaurentLocal.zero(v, prec)
    n = prec - o
    K = v.residue_field.field
    if v.is_infinite:
        num = list(reversed(x.num.coeffs))
        den = list(reversed(x.den.coeffs))
        return LaurentLocal.build(v, o, prec, _series_divide(K, num, den, n))
    pi = v.poly
    num, den = x.num, x.den
    if o > 0:
        num = num // pi ** o
    elif o < 0:
        den = den // pi ** (-o)
    modulus = pi ** n
    y = (num * poly_inverse_mod(den, modulus)) % modulus
    rf = v.residue_field
    coeffs = []
    for i in range(n):
        c = y.evaluate_in(K, rf.embedding, rf.theta)
        coeffs.append(c)
        remaining = n - i
        if remaining == 1:
            break
        if c:
            y = (y - teichmuller_lift(v, c, remaining)) % (pi ** remaining)
        y = (y // pi) % (pi ** (remaining - 1))
    return LaurentLocal.build(v, o, prec, coeffs)
