from dataclasses import dataclass
from typing import Any

from wound_flow.errors import ParameterError
from wound_flow.field_core import FqField
from wound_flow.function_field.places import Place, valuation
from wound_flow.function_field.ratfn import RatFn
from wound_flow.local_field.laurent import LaurentLocal, expand


@dataclass(frozen=True)
class Monomial:
    """c * X_var^(p^exponent)."""
    coeff: RatFn
    var: int
    exponent: int


@dataclass(frozen=True)
class FrobeniusShape:
    """A map of the form x + eps * x^Q + c * y^Q, eps in F_p (possibly 0) and c possibly absent."""
    eps: int
    q_power: int
    c: RatFn | None


@dataclass(frozen=True)
class AdditiveMap:
    """F_p-linear map k^r -> k given as a sum of Frobenius-power monomials.

    Only monomials c * X_i^(p^e) are representable, so additivity holds by construction.
    """
    field: FqField
    arity: int
    terms: tuple[Monomial, ...]
    name: str = ""

    def __post_init__(self) -> None:
        for term in self.terms:
            if not 0 <= term.var < self.arity or term.exponent < 0:
                raise ParameterError(f"Invalid monomial {term} for an additive map of arity {self.arity}.")

    def __str__(self) -> str:
        return self.name or " + ".join(f"({t.coeff})*X{t.var}^{self.field.p ** t.exponent}" for t in self.terms)

    def has_principal_part(self) -> bool:
        """True when the linear term of X_0 is exactly X_0."""
        linear = [t for t in self.terms if t.var == 0 and t.exponent == 0]
        return len(linear) == 1 and linear[0].coeff == RatFn.one(self.field)

    def evaluate(self, ring: Any, inputs: tuple) -> Any:
        """Evaluate on elements of a coefficient ring (k, an etale algebra, or a local ring)."""
        if len(inputs) != self.arity:
            raise ParameterError(f"{self} takes {self.arity} inputs, got {len(inputs)}.")
        p = self.field.p
        out = ring.zero()
        for term in self.terms:
            out = out + ring.embed(term.coeff) * (inputs[term.var] ** (p ** term.exponent))
        return out

    def evaluate_local(self, place: Place, inputs: tuple[LaurentLocal, ...], prec: int) -> LaurentLocal:
        """Evaluate on Laurent series, expanding each coefficient just far enough for precision prec."""
        p = self.field.p
        out = LaurentLocal.zero(place, prec)
        for term in self.terms:
            power = inputs[term.var].frobenius(term.exponent)
            if term.coeff.is_zero():
                continue
            o = valuation(term.coeff, place)
            coeff = expand(term.coeff, place, max(prec - power.minval, o + 1))
            out = out + coeff * power
        return out.truncate(prec)

    def frobenius_shape(self) -> FrobeniusShape | None:
        """Recognize x + eps x^Q + c y^Q with constant eps, the shape the soundness bounds are proven for."""
        if not self.has_principal_part():
            return None
        p = self.field.p
        eps, q_power, c = 0, None, None
        for term in self.terms:
            if term.var == 0 and term.exponent == 0:
                continue
            if term.var == 0:
                if not term.coeff.is_constant() or term.coeff.num.leading >= p or eps:
                    return None
                eps = term.coeff.num.leading
                e = term.exponent
            elif term.var == 1 and c is None:
                c = term.coeff
                e = term.exponent
            else:
                return None
            if q_power is not None and q_power != p ** e:
                return None
            q_power = p ** e
        if q_power is None:
            q_power = 1
        return FrobeniusShape(eps, q_power, c)


def _rat(field: FqField, x: RatFn | int) -> RatFn:
    return x if isinstance(x, RatFn) else RatFn.constant(field, field.from_int(x))


def v_map(a: RatFn) -> AdditiveMap:
    """f(x, y) = x - x^(p^2) - a y^(p^2), the equation of V_a."""
    f = a.field
    return AdditiveMap(f, 2, (Monomial(RatFn.one(f), 0, 0), Monomial(_rat(f, -1), 0, 2), Monomial(-a, 1, 2)),
                       name=f"x - x^{f.p ** 2} - ({a})*y^{f.p ** 2}")


def w_map(a: RatFn) -> AdditiveMap:
    """g(x, y) = x + x^p + a y^p, the equation of W_a."""
    f = a.field
    return AdditiveMap(f, 2, (Monomial(RatFn.one(f), 0, 0), Monomial(RatFn.one(f), 0, 1), Monomial(a, 1, 1)),
                       name=f"x + x^{f.p} + ({a})*y^{f.p}")


def wplus_map(a: RatFn) -> AdditiveMap:
    """g+(x, y) = x - x^p - a y^p, the equation of W_a^+."""
    f = a.field
    return AdditiveMap(f, 2, (Monomial(RatFn.one(f), 0, 0), Monomial(_rat(f, -1), 0, 1), Monomial(-a, 1, 1)),
                       name=f"x - x^{f.p} - ({a})*y^{f.p}")


def artin_schreier_map(field: FqField, e: int, eps: int = -1) -> AdditiveMap:
    """One-variable x + eps x^(p^e)."""
    return AdditiveMap(field, 1, (Monomial(RatFn.one(field), 0, 0), Monomial(_rat(field, eps), 0, e)),
                       name=f"x + ({eps})*x^{field.p ** e}")


def identity_map(field: FqField, arity: int = 2) -> AdditiveMap:
    return AdditiveMap(field, arity, (Monomial(RatFn.one(field), 0, 0),), name="x")
