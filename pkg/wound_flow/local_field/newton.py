import logging

from wound_flow.errors import WoundError
from wound_flow.function_field.places import valuation
from wound_flow.local_field.additive import AdditiveMap
from wound_flow.local_field.laurent import LaurentLocal


class NoConvergence(WoundError):
    pass


def newton_solve(g: AdditiveMap, t: LaurentLocal) -> LaurentLocal:
    """Solve g(x, 0, ...) = t for x when ord(t) >= 1 and g = X + (terms raising valuation on the ball).

    Iterates x <- x + (t - g(x, 0)). Every non-principal monomial c X^(p^e) of X_0 must satisfy
    ord(c) + p^e - 1 > 0 at the place, so that each step gains at least one in valuation.

    :param g: Additive map with principal part X_0.
    :type g: AdditiveMap
    :param t: Right-hand side, ord(t) >= 1.
    :type t: LaurentLocal
    :raises NoConvergence: When the valuation-gain condition fails or the iteration stalls.
    :return: x with g(x, 0) = t to precision prec(t).
    :rtype: LaurentLocal
    """
    v = t.place
    if not g.has_principal_part():
        raise NoConvergence(f"{g} has no principal part X.")
    if t.is_zero():
        return LaurentLocal.zero(v, t.prec)
    if t.valuation() < 1:
        raise NoConvergence(f"Right-hand side has valuation {t.valuation()} < 1.")
    p = g.field.p
    for term in g.terms:
        if term.var != 0 or term.exponent == 0 or term.coeff.is_zero():
            continue
        if valuation(term.coeff, v) + p ** term.exponent - 1 <= 0:
            raise NoConvergence(f"Monomial ({term.coeff})*X^{p ** term.exponent} does not contract at {v}.")

    x = LaurentLocal.zero(v, t.prec)
    zeros = tuple(LaurentLocal.zero(v, t.prec) for _ in range(g.arity - 1))
    for step in range(t.prec + 1):
        residual = t - g.evaluate_local(v, (x,) + zeros, t.prec)
        if residual.is_zero():
            logging.debug(f"Newton solve at {v} converged after {step} steps.")
            return x
        x = x + residual
    raise NoConvergence(f"Newton iteration at {v} did not converge to precision {t.prec}.")
