import logging
from typing import Any

from wound_flow.errors import WoundError
from wound_flow.function_field import RatFn, RationalFunctionField
from wound_flow.groups import (EtaleAlg, GroupKind, GroupSpec, KindUnsupported, OffCurve, b_map, h_alternating,
                               h_new, h_zeta, zeta_in)
from wound_flow.cohomology.local_classes import CohClassRep


class ValueNotRational(WoundError):
    pass


def _require_extension(spec: GroupSpec) -> None:
    if not spec.kind.is_extension:
        raise KindUnsupported(f"Connecting maps are attached to extensions of V_a by W_a, not {spec.kind.value}.")


def _check_point(spec: GroupSpec, ring: Any, c: Any, d: Any) -> None:
    if not spec.f_map().evaluate(ring, (c, d)).is_zero():
        raise OffCurve(f"({c}, {d}) is not on V_a for a = {spec.a}.")


def delta_closed(spec: GroupSpec, beta: Any, point: tuple, ring: Any = None) -> CohClassRep:
    """delta_beta(c, d) in H^1(k, W) = k/g(k^2) from the closed forms.

    2 c^p beta for U_a, (zeta^p - zeta) c^p beta for U_a^zeta (c^2 beta when p = 2), and
    c^2 beta + c^3 for the descended group.

    :param spec: Extension group.
    :type spec: GroupSpec
    :param beta: Twisting parameter, in k or in the ring.
    :param point: (c, d) on V_a over the ring.
    :type point: tuple
    :param ring: Coefficient ring, k or a local ring, defaults to k
    :raises OffCurve: When (c, d) is not on V_a.
    :rtype: CohClassRep
    """
    _require_extension(spec)
    ring = ring or RationalFunctionField(spec.field)
    c, d = (ring.embed(t) for t in point)
    beta = ring.embed(beta)
    _check_point(spec, ring, c, d)
    p = spec.p
    if spec.kind == GroupKind.U:
        rep = c ** p * beta * 2
    elif spec.kind == GroupKind.UZETA:
        zeta = zeta_in(spec, ring)
        rep = (zeta ** p - zeta) * c ** p * beta
    else:
        rep = c ** 2 * beta + c ** 3
    return CohClassRep.for_spec(spec, rep, local=not isinstance(ring, RationalFunctionField))


def n_value(spec: GroupSpec, point: tuple) -> RatFn:
    """g(n(v)) for the descended group, n(v) = zeta b(v) computed over k(zeta); it equals c^3.

    :raises ValueNotRational: When the value does not descend to k.
    """
    if spec.kind != GroupKind.UDESCENDED:
        return RatFn.zero(spec.field)
    k = RationalFunctionField(spec.field)
    kz = EtaleAlg(k, [1, 1, 1], name="zeta")
    zeta = kz.generator()
    v = tuple(kz.embed(t) for t in point)
    value = spec.g_map().evaluate(kz, tuple(zeta * t for t in b_map(v, 2)))
    if not value.is_constant():
        raise ValueNotRational(f"g(n(v)) = {value} has a zeta-component.")
    return value.constant_term()


def delta_generic(spec: GroupSpec, beta: RatFn, point: tuple) -> RatFn:
    """delta_beta(c, d) = g(h(X, v)) - g(h(v, X)) + g(n(v)) evaluated over E = k[Z]/(Z^(p^2) - Z + beta).

    X = (Z, 0) is a point of G_a^2 over E with f(X) = beta.

    :raises OffCurve: When (c, d) is not on V_a.
    :raises ValueNotRational: When the value keeps a Z-component.
    :rtype: RatFn
    """
    _require_extension(spec)
    k = RationalFunctionField(spec.field)
    c, d = (k.embed(t) for t in point)
    _check_point(spec, k, c, d)
    p = spec.p
    Q = p ** 2
    beta = k.embed(beta)
    E = EtaleAlg(k, [beta, -1] + [0] * (Q - 2) + [1], name="Z")
    X = (E.generator(), E.zero())
    v = (E.embed(c), E.embed(d))
    if spec.kind == GroupKind.U:
        cocycle = lambda s, t: h_alternating(s, t, p)
    elif spec.kind == GroupKind.UZETA:
        zeta = zeta_in(spec, E)
        cocycle = lambda s, t: h_zeta(s, t, p, zeta)
    else:
        cocycle = h_new
    g = spec.g_map()
    value = g.evaluate(E, cocycle(X, v)) - g.evaluate(E, cocycle(v, X))
    if not value.is_constant():
        raise ValueNotRational(f"delta_{beta}({c}, {d}) = {value} does not lie in k.")
    result = value.constant_term() + n_value(spec, (c, d))
    logging.debug(f"delta_{beta}({c}, {d}) = {result} for {spec}.")
    return result


def additivity_preimage(spec: GroupSpec, v1: tuple, v2: tuple) -> tuple[RatFn, RatFn]:
    """(x, y) with g(x, y) = delta(v1 + v2) - delta(v1) - delta(v2), independent of beta.

    The closed forms are additive in c except for the c^3 term of the descended group, whose
    defect c1^2 c2 + c1 c2^2 equals g((c1 c2^2, c1 d2^2)).
    """
    _require_extension(spec)
    k = RationalFunctionField(spec.field)
    v1 = tuple(k.embed(t) for t in v1)
    v2 = tuple(k.embed(t) for t in v2)
    if spec.kind == GroupKind.UDESCENDED:
        return h_new(v1, v2)
    return k.zero(), k.zero()
