import itertools
import logging
from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import Iterator

import galois

from wound_flow.errors import ParameterError, WoundError
from wound_flow.field_core import FqElem, FqField, get_field, subfield_embedding
from wound_flow.function_field.poly import Poly
from wound_flow.function_field.ratfn import RatFn, parse_ratfn


class ZeroInput(WoundError):
    pass


class PoleAtPlace(WoundError):
    pass


class ExactDifferentialZero(WoundError):
    pass


class PreconditionViolated(WoundError):
    pass


@dataclass(frozen=True)
class ResidueField:
    """Residue field k(v) of a place, with the embedding of the constants F_q.

    :param field: The finite field k(v) of order q^deg(v).
    :type field: FqField
    :param embedding: Table sending the code of c in F_q to the code of its image in k(v).
    :type embedding: tuple[int, ...]
    :param theta: Image of T in k(v) (a root of pi), None at infinity.
    :type theta: int | None
    """
    field: FqField
    embedding: tuple[int, ...]
    theta: int | None


@dataclass(frozen=True)
class Place:
    """A place of F_q(T): a monic irreducible polynomial pi, or infinity when poly is None."""
    base: FqField
    poly: Poly | None = None

    def __post_init__(self) -> None:
        if self.poly is not None:
            if self.poly.leading != 1:
                raise ParameterError(f"Place polynomial {self.poly} is not monic.")
            if not self.poly.is_irreducible():
                raise ParameterError(f"Place polynomial {self.poly} is not irreducible.")

    @classmethod
    def infinity(cls, base: FqField) -> "Place":
        return cls(base, None)

    @classmethod
    def finite(cls, poly: Poly) -> "Place":
        return cls(poly.field, poly.monic())

    @classmethod
    def parse(cls, base: FqField, text: str) -> "Place":
        """Read "inf" or a polynomial in T; the polynomial is made monic."""
        text = text.strip()
        if text.lower() in ("inf", "infinity", "oo"):
            return cls.infinity(base)
        x = parse_ratfn(base, text)
        if not x.is_polynomial() or x.num.degree < 1:
            raise ParameterError(f"'{text}' is not a nonconstant polynomial.")
        return cls.finite(x.num)

    @property
    def is_infinite(self) -> bool:
        return self.poly is None

    @property
    def degree(self) -> int:
        return 1 if self.poly is None else self.poly.degree

    def sort_key(self) -> tuple:
        if self.poly is None:
            return (1, 1, ())
        return (self.degree, 0, tuple(reversed(self.poly.coeffs)))

    def __lt__(self, other: "Place") -> bool:
        return self.sort_key() < other.sort_key()

    def __str__(self) -> str:
        return "inf" if self.poly is None else str(self.poly)

    def __repr__(self) -> str:
        return f"Place({self})"

    def uniformizer(self) -> RatFn:
        """Canonical uniformizer: pi itself, or 1/T at infinity."""
        if self.poly is None:
            return RatFn.variable(self.base).inverse()
        return RatFn.from_poly(self.poly)

    @cached_property
    def residue_field(self) -> ResidueField:
        if self.poly is None:
            return ResidueField(self.base, tuple(range(self.base.q)), None)
        d = self.poly.degree
        if d == 1:
            return ResidueField(self.base, tuple(range(self.base.q)), self.base.neg(self.poly.coeffs[0]))
        big = get_field(self.base.p, self.base.m * d)
        embedding = subfield_embedding(self.base, big)
        image = galois.Poly(big.GF([embedding[c] for c in reversed(self.poly.coeffs)]))
        theta = min(int(r) for r in image.roots())
        return ResidueField(big, embedding, theta)


def enumerate_places(base: FqField, max_degree: int, include_infinity: bool = True) -> Iterator[Place]:
    """Places of degree at most max_degree: infinity first, then by degree and lex on coefficients."""
    if include_infinity:
        yield Place.infinity(base)
    for d in range(1, max_degree + 1):
        for tail in itertools.product(range(base.q), repeat=d):
            poly = Poly(base, list(reversed(tail)) + [1])
            if d == 1 or poly.is_irreducible():
                yield Place(base, poly)


#------------#
# valuations #
#------------#

def _poly_valuation(poly: Poly, pi: Poly) -> int:
    count = 0
    while True:
        quo, rem = divmod(poly, pi)
        if not rem.is_zero():
            return count
        poly = quo
        count += 1


def valuation(x: RatFn, v: Place) -> int:
    """ord_v(x).

    :raises ZeroInput: For x = 0.
    """
    if x.is_zero():
        raise ZeroInput("The valuation of 0 is infinite.")
    if v.poly is None:
        return x.den.degree - x.num.degree
    return _poly_valuation(x.num, v.poly) - _poly_valuation(x.den, v.poly)


def residue(x: RatFn, v: Place) -> FqElem:
    """Image of x in k(v).

    :raises PoleAtPlace: When ord_v(x) < 0.
    """
    rf = v.residue_field
    if x.is_zero():
        return FqElem(rf.field, 0)
    o = valuation(x, v)
    if o < 0:
        raise PoleAtPlace(f"{x} has a pole of order {-o} at {v}.")
    if o > 0:
        return FqElem(rf.field, 0)
    if v.poly is None:
        f = v.base
        return FqElem(f, f.div(x.num.leading, x.den.leading))
    big = rf.field
    num = x.num.evaluate_in(big, rf.embedding, rf.theta)
    den = x.den.evaluate_in(big, rf.embedding, rf.theta)
    return FqElem(big, big.div(num, den))


def ord_differential(b: RatFn, v: Place) -> int:
    """ord_v(db): ord_v(b') at finite places, ord_inf(b') - 2 at infinity.

    :raises ExactDifferentialZero: When db = 0, i.e. b is a pth power.
    """
    derivative = b.derivative()
    if derivative.is_zero():
        raise ExactDifferentialZero(f"d({b}) = 0.")
    o = valuation(derivative, v)
    return o - 2 if v.is_infinite else o


def diff_ratio(b: RatFn, v: Place, m: int, uniformizer: RatFn | None = None) -> FqElem:
    """Residue of pi^(1 - m(p-1)) * m^-1 * db/dpi at v.

    :param b: Function with db != 0.
    :type b: RatFn
    :param v: Place with ord_v(db) + 1 = m(p - 1).
    :type v: Place
    :param m: The integer m, coprime to p.
    :type m: int
    :param uniformizer: Uniformizer to use instead of the canonical one, defaults to None
    :type uniformizer: RatFn | None, optional
    :raises PreconditionViolated: When ord_v(db) + 1 != m(p - 1) or p divides m.
    :return: A nonzero element of k(v).
    :rtype: FqElem
    """
    f = b.field
    p = f.p
    if m % p == 0:
        raise PreconditionViolated(f"m = {m} is divisible by p = {p}.")
    o = ord_differential(b, v)
    if o + 1 != m * (p - 1):
        raise PreconditionViolated(f"ord_v(db) + 1 = {o + 1} differs from m(p-1) = {m * (p - 1)} at {v}.")
    pi = uniformizer if uniformizer is not None else v.uniformizer()
    if valuation(pi, v) != 1:
        raise PreconditionViolated(f"{pi} is not a uniformizer at {v}.")
    expr = (pi ** (1 - m * (p - 1))) * b.derivative() / (pi.derivative() * f.from_int(m))
    return residue(expr, v)


def is_pth_power(x: RatFn) -> RatFn | None:
    """y with y^p = x, or None when x is not in k^p.

    With den monic and coprime to num, x is a pth power exactly when num and den both are.
    """
    num = x.num.pth_root()
    if num is None:
        return None
    den = x.den.pth_root()
    if den is None:
        return None
    return RatFn(num, den, reduced=True)


def support(x: RatFn) -> list[Place]:
    """Places where x has a zero or a pole, sorted."""
    if x.is_zero():
        raise ZeroInput("The zero function has no divisor.")
    places = {Place(x.field, fac) for fac, _ in x.num.factor()}
    places |= {Place(x.field, fac) for fac, _ in x.den.factor()}
    if x.num.degree != x.den.degree:
        places.add(Place.infinity(x.field))
    return sorted(places, key=Place.sort_key)


def differential_support(b: RatFn) -> list[Place]:
    """supp(db) together with infinity."""
    derivative = b.derivative()
    if derivative.is_zero():
        raise ExactDifferentialZero(f"d({b}) = 0.")
    places = set(support(derivative)) if not derivative.is_constant() else set()
    places.add(Place.infinity(b.field))
    return sorted(places, key=Place.sort_key)


#----------#
# divisors #
#----------#

@dataclass(frozen=True)
class Divisor:
    """Finitely supported formal sum of places; zero coefficients are dropped."""
    base: FqField
    coefficients: dict = dc_field(default_factory=dict)

    def __post_init__(self) -> None:
        cleaned = {v: n for v, n in self.coefficients.items() if n != 0}
        object.__setattr__(self, "coefficients", cleaned)

    @classmethod
    def principal(cls, x: RatFn) -> "Divisor":
        return cls(x.field, {v: valuation(x, v) for v in support(x)})

    def __getitem__(self, v: Place) -> int:
        return self.coefficients.get(v, 0)

    def __add__(self, other: "Divisor") -> "Divisor":
        out = dict(self.coefficients)
        for v, n in other.coefficients.items():
            out[v] = out.get(v, 0) + n
        return Divisor(self.base, out)

    def __neg__(self) -> "Divisor":
        return Divisor(self.base, {v: -n for v, n in self.coefficients.items()})

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Divisor) and self.coefficients == other.coefficients

    def __hash__(self) -> int:
        return hash(tuple(sorted((v.sort_key(), n) for v, n in self.coefficients.items())))

    @property
    def degree(self) -> int:
        return sum(v.degree * n for v, n in self.coefficients.items())

    @property
    def support(self) -> list[Place]:
        return sorted(self.coefficients, key=Place.sort_key)

    def is_effective(self) -> bool:
        return all(n >= 0 for n in self.coefficients.values())

    def riemann_roch_basis(self) -> list[RatFn]:
        """F_q-basis of L(D) = {x : div(x) >= -D} on the projective line, D effective.

        Partial fractions: T^i for 0 <= i <= n_inf, then T^r / pi^j for each finite
        place pi with 1 <= j <= n_pi and 0 <= r < deg(pi). Places in sort order.
        """
        if not self.is_effective():
            raise ParameterError("Riemann-Roch bases are only built for effective divisors.")
        f = self.base
        basis = [RatFn.from_poly(Poly.monomial(f, 1, i))
                 for i in range(self[Place.infinity(f)] + 1)]
        for v in self.support:
            if v.is_infinite:
                continue
            pi = RatFn.from_poly(v.poly)
            for j in range(1, self[v] + 1):
                for r in range(v.degree):
                    basis.append(RatFn.from_poly(Poly.monomial(f, 1, r)) / pi ** j)
        logging.debug(f"L(D) basis of dimension {len(basis)} for D of degree {self.degree}.")
        return basis

    def __str__(self) -> str:
        if not self.coefficients:
            return "0"
        return " + ".join(f"{n}*[{v}]" for v, n in sorted(self.coefficients.items(), key=lambda i: i[0].sort_key()))
