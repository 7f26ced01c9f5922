import random

from sympy import Add, Integer, Mul, Pow, Rational, Symbol
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations

from wound_flow.errors import ParameterError
from wound_flow.field_core import FqElem, FqField
from wound_flow.function_field.poly import Poly, poly_gcd


class ParseError(ParameterError):
    pass


class RatFn:
    """Element of k = F_q(T), kept as num/den with den monic and gcd(num, den) = 1.

    :param num: Numerator.
    :type num: Poly
    :param den: Denominator, defaults to 1.
    :type den: Poly, optional
    :raises ZeroDivisionError: When den is zero.
    """
    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly | None = None, reduced: bool = False) -> None:
        if den is None:
            den = Poly.one(num.field)
        if den.is_zero():
            raise ZeroDivisionError("Rational function with zero denominator.")
        if not reduced:
            if num.is_zero():
                den = Poly.one(num.field)
            else:
                g = poly_gcd(num, den)
                if not g.is_one():
                    num, den = num // g, den // g
            lead = den.leading
            if lead != 1:
                inv = num.field.inv(lead)
                num, den = num.scale(inv), den.scale(inv)
        self.num = num
        self.den = den

    #--------------#
    # constructors #
    #--------------#

    @classmethod
    def zero(cls, field: FqField) -> "RatFn":
        return cls(Poly.zero(field), reduced=True)

    @classmethod
    def one(cls, field: FqField) -> "RatFn":
        return cls(Poly.one(field), reduced=True)

    @classmethod
    def constant(cls, field: FqField, c: int) -> "RatFn":
        return cls(Poly.constant(field, c), reduced=True)

    @classmethod
    def variable(cls, field: FqField) -> "RatFn":
        return cls(Poly.variable(field), reduced=True)

    @classmethod
    def from_poly(cls, poly: Poly) -> "RatFn":
        return cls(poly, reduced=True)

    @classmethod
    def parse(cls, field: FqField, text: str) -> "RatFn":
        return parse_ratfn(field, text)

    @property
    def field(self) -> FqField:
        return self.num.field

    #------------#
    # arithmetic #
    #------------#

    def _lift(self, other: "RatFn | Poly | FqElem | int") -> "RatFn":
        if isinstance(other, RatFn):
            return other
        if isinstance(other, Poly):
            return RatFn(other, reduced=True)
        if isinstance(other, FqElem):
            return RatFn.constant(self.field, other.value)
        if isinstance(other, int):
            return RatFn.constant(self.field, self.field.from_int(other))
        return NotImplemented

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_one()

    def is_polynomial(self) -> bool:
        return self.den.is_one()

    @property
    def height(self) -> int:
        return max(self.num.degree, self.den.degree)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Poly, FqElem)):
            other = self._lift(other)
        return isinstance(other, RatFn) and self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        if self.den == other.den:
            return RatFn(self.num + other.num, self.den)
        return RatFn(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "RatFn":
        return RatFn(-self.num, self.den, reduced=True)

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        if self.is_zero() or other.is_zero():
            return RatFn.zero(self.field)
        if other.is_constant():
            return RatFn(self.num.scale(other.num.coeffs[0]), self.den, reduced=True)
        if self.is_constant():
            return RatFn(other.num.scale(self.num.coeffs[0]), other.den, reduced=True)
        # cross-cancel first so the products stay reduced
        g1 = poly_gcd(self.num, other.den)
        g2 = poly_gcd(other.num, self.den)
        num = (self.num // g1) * (other.num // g2)
        den = (self.den // g2) * (other.den // g1)
        return RatFn(num, den, reduced=den.leading == 1)

    __rmul__ = __mul__

    def inverse(self) -> "RatFn":
        if self.is_zero():
            raise ZeroDivisionError("Inverse of the zero rational function.")
        lead = self.num.leading
        inv = self.field.inv(lead)
        return RatFn(self.den.scale(inv), self.num.scale(inv), reduced=True)

    def __truediv__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, n: int) -> "RatFn":
        if n < 0:
            return self.inverse() ** (-n)
        if n == 0:
            return RatFn.one(self.field)
        # gcd(num, den) = 1 survives powers, and a monic den stays monic
        return RatFn(self.num ** n, self.den ** n, reduced=True)

    def frobenius(self, e: int = 1) -> "RatFn":
        return RatFn(self.num.frobenius(e), self.den.frobenius(e), reduced=True)

    def derivative(self) -> "RatFn":
        """Formal d/dT."""
        num = self.num.derivative() * self.den - self.num * self.den.derivative()
        return RatFn(num, self.den * self.den)

    def __str__(self) -> str:
        if self.den.is_one():
            return str(self.num)
        num = str(self.num)
        if len(self.num.coeffs) > 1 and "+" in num:
            num = f"({num})"
        return f"{num}/({self.den})"

    def __repr__(self) -> str:
        return f"RatFn({self})"


class RationalFunctionField:
    """The global field k = F_q(T) viewed as a coefficient ring for group points."""

    def __init__(self, field: FqField) -> None:
        self.field = field

    def __eq__(self, other: object) -> bool:
        return isinstance(other, RationalFunctionField) and self.field == other.field

    def __hash__(self) -> int:
        return hash(("k", self.field))

    def __repr__(self) -> str:
        return f"F_{self.field.q}(T)"

    @property
    def characteristic(self) -> int:
        return self.field.p

    def zero(self) -> RatFn:
        return RatFn.zero(self.field)

    def one(self) -> RatFn:
        return RatFn.one(self.field)

    def embed(self, x: "RatFn | FqElem | int") -> RatFn:
        if isinstance(x, RatFn):
            return x
        if isinstance(x, FqElem):
            return RatFn.constant(self.field, x.value)
        return RatFn.constant(self.field, self.field.from_int(x))

    def contains(self, x: object) -> bool:
        return isinstance(x, RatFn) and x.field == self.field

    def random_element(self, rng: random.Random, height: int = 2) -> RatFn:
        return random_ratfn(self.field, rng, height)


def random_poly(field: FqField, rng: random.Random, degree: int, monic: bool = False) -> Poly:
    coeffs = [rng.randrange(field.q) for _ in range(degree + 1)]
    if monic:
        coeffs[-1] = 1
    return Poly(field, coeffs)


def random_ratfn(field: FqField, rng: random.Random, height: int = 2) -> RatFn:
    """Random element with numerator and denominator of degree at most height."""
    num = random_poly(field, rng, rng.randint(0, height))
    den = random_poly(field, rng, rng.randint(0, height), monic=True)
    return RatFn(num, den)


#--------#
# parser #
#--------#

_T = Symbol("T")
_Z = Symbol("z")


def parse_ratfn(field: FqField, text: str) -> RatFn:
    """Parse expressions such as "T*(T-1)" or "(2*T-1)*(T^2-T)^3" into k.

    Integers and rationals are read in F_p, the symbol z is the generator of F_q over F_p.

    :raises ParseError: On syntax errors, unknown symbols or zero denominators.
    """
    try:
        expr = parse_expr(text, local_dict={"T": _T, "z": _Z},
                          transformations=standard_transformations + (convert_xor,), evaluate=False)
    except Exception as e:  # sympy raises SyntaxError, TokenError, TypeError and others
        raise ParseError(f"Cannot parse '{text}': {e}") from e
    try:
        return _from_sympy(field, expr)
    except ZeroDivisionError as e:
        raise ParseError(f"Division by zero in '{text}'.") from e


def _from_sympy(field: FqField, expr) -> RatFn:
    if expr == _T:
        return RatFn.variable(field)
    if expr == _Z:
        if field.m == 1:
            raise ParseError("The generator z is only available for q > p.")
        return RatFn.constant(field, field.p)
    if isinstance(expr, Integer):
        return RatFn.constant(field, field.from_int(int(expr)))
    if isinstance(expr, Rational):
        num = field.from_int(int(expr.p))
        den = field.from_int(int(expr.q))
        return RatFn.constant(field, field.div(num, den))
    if isinstance(expr, Add):
        out = RatFn.zero(field)
        for arg in expr.args:
            out = out + _from_sympy(field, arg)
        return out
    if isinstance(expr, Mul):
        out = RatFn.one(field)
        for arg in expr.args:
            out = out * _from_sympy(field, arg)
        return out
    if isinstance(expr, Pow):
        base, exponent = expr.args
        if not isinstance(exponent, Integer):
            raise ParseError(f"Only integer exponents are supported, got {exponent}.")
        return _from_sympy(field, base) ** int(exponent)
    raise ParseError(f"Unsupported expression '{expr}'.")
