import logging
from typing import TYPE_CHECKING

from wound_flow.errors import ParameterError, WoundError
from wound_flow.function_field.places import Place, enumerate_places
from wound_flow.function_field.poly import Poly, poly_crt
from wound_flow.function_field.ratfn import RatFn

if TYPE_CHECKING:
    from wound_flow.local_field.laurent import LaurentLocal


class InsufficientPrecision(WoundError):
    pass


def _truncate_polynomial(z: "LaurentLocal") -> Poly:
    """sum_{n <= 0} c_n T^(-n) over the known coefficients of an expansion at infinity."""
    f = z.place.base
    coeffs = [0] * (max(-z.minval, 0) + 1)
    for i, c in enumerate(z.coeffs):
        n = z.minval + i
        if n > 0 or n >= z.prec:
            break
        coeffs[-n] = c
    return Poly(f, coeffs)


def polynomial_part(z: "LaurentLocal") -> Poly:
    """For z = sum c_n T^(-n) at infinity, alpha = sum_{n <= 0} c_n T^(-n).

    alpha is integral at every finite place and ord_inf(alpha - z) > 0.

    :raises InsufficientPrecision: When the constant coefficient of z is unknown.
    """
    if not z.place.is_infinite:
        raise ParameterError(f"Polynomial parts are taken at infinity, not at {z.place}.")
    if z.prec < 1:
        raise InsufficientPrecision(f"Expansion known only below u^{z.prec}; need u^0.")
    return _truncate_polynomial(z)


def lift_series(v: Place, s: "LaurentLocal", n: int) -> Poly:
    """Polynomial R with R = s mod pi^n, for s integral at the finite place v."""
    from wound_flow.local_field.laurent import teichmuller_lift  # local_field builds on this package

    pi = v.poly
    out = Poly.zero(v.base)
    pi_power = Poly.one(v.base)
    for i in range(n):
        c = s.coefficient(i)
        if c:
            out = out + teichmuller_lift(v, c, n - i) * pi_power
        pi_power = pi_power * pi
    return out % (pi ** n)


def _first_free_place(base, used: set[Place]) -> Place:
    for v in enumerate_places(base, max_degree=8, include_infinity=False):
        if v not in used:
            return v
    raise ParameterError("No finite place available outside the target set.")


def approximate(targets: list[tuple[Place, "LaurentLocal", int]]) -> RatFn:
    """Global beta with ord_v(beta - t_v) >= N_v at every target.

    Finite targets are met by partial fractions and CRT: beta = A/D with D the product of
    pi_v^(pole order of t_v), so beta is also integral at every finite place outside the
    targets. An infinity target is met afterwards by adding M * r, M the product of
    pi_v^N_v and r = P/Q^j with Q the first finite place outside the targets.

    Without an infinity target the result is therefore the strong approximation away from
    infinity: integral at every finite place outside the targets. With one, Q is the only
    finite place outside the targets where beta may have a pole.

    :param targets: Triples (place, expansion, precision N_v).
    :type targets: list[tuple[Place, LaurentLocal, int]]
    :raises ParameterError: On repeated places or mismatching expansions.
    :rtype: RatFn
    """
    from wound_flow.local_field.laurent import expand  # local_field builds on this package

    if not targets:
        raise ParameterError("Approximation needs at least one target place.")
    places = [v for v, _, _ in targets]
    if len(set(places)) != len(places):
        raise ParameterError("Target places must be pairwise distinct.")
    base = places[0].base
    for v, t, n in targets:
        if t.place != v:
            raise ParameterError(f"Target for {v} is an expansion at {t.place}.")
        if t.prec < n:
            raise InsufficientPrecision(f"Target at {v} known to u^{t.prec}, requested u^{n}.")

    finite = [(v, t, n) for v, t, n in targets if not v.is_infinite]
    at_infinity = [(v, t, n) for v, t, n in targets if v.is_infinite]

    denominator = Poly.one(base)
    pole_orders = {}
    for v, t, n in finite:
        e = max(0, -min(t.valuation(), n))
        pole_orders[v] = e
        denominator = denominator * v.poly ** e
    residues = []
    for v, t, n in finite:
        e = pole_orders[v]
        if n + e <= 0:
            continue
        d_series = expand(RatFn.from_poly(denominator), v, n + e - min(t.valuation(), n))
        product = (d_series * t).truncate(n + e)
        residues.append((lift_series(v, product, n + e), v.poly ** (n + e)))
    numerator = poly_crt(residues)[0] if residues else Poly.zero(base)
    beta = RatFn(numerator, denominator)

    if at_infinity:
        v_inf, t_inf, n_inf = at_infinity[0]
        modulus = Poly.one(base)
        for v, _, n in finite:
            modulus = modulus * v.poly ** max(n, 0)
        k = n_inf + modulus.degree
        error = (t_inf - expand(beta, v_inf, n_inf)).truncate(n_inf)
        if not error.is_zero():
            z = error / RatFn.from_poly(modulus)
            free = _first_free_place(base, set(places))
            j = max(0, -(-(k - 1) // free.degree))
            shifted = z * RatFn.from_poly(free.poly ** j)
            correction = RatFn(_truncate_polynomial(shifted), free.poly ** j)
            beta = beta + RatFn.from_poly(modulus) * correction
    logging.debug(f"Approximation over {len(targets)} places gave {beta}.")
    return beta
