from dataclasses import dataclass
from typing import Any

from wound_flow.errors import ParameterError, WoundError
from wound_flow.field_core import NotPresent, find_zeta
from wound_flow.function_field import RationalFunctionField
from wound_flow.groups.etale import EtaleAlg
from wound_flow.groups.spec import GroupKind, GroupSpec, KindUnsupported


class OffCurve(WoundError):
    pass


class RingMismatch(ParameterError):
    pass


class LawViolation(WoundError):
    pass


@dataclass(frozen=True)
class GroupPoint:
    """A point of a group in the family, with coordinates in a coefficient ring.

    Two-coordinate groups store (x, y); extensions store (w1, w2, x, y) with (w1, w2) on the
    W-type subgroup and (x, y) on V_a. For the descended group the W-part is the shifted
    coordinate alpha = w + zeta b(v) and satisfies g(alpha) = x^3.
    """
    spec: GroupSpec
    ring: Any
    coords: tuple

    @property
    def w(self) -> tuple:
        return self.coords[:2] if self.spec.kind.is_extension else ()

    @property
    def v(self) -> tuple:
        return self.coords[2:] if self.spec.kind.is_extension else self.coords

    def __str__(self) -> str:
        if self.spec.kind.is_extension:
            return f"({self.coords[0]}, {self.coords[1]} ; {self.coords[2]}, {self.coords[3]})"
        return f"({self.coords[0]}, {self.coords[1]})"

    def to_dict(self) -> dict:
        return {"group": str(self.spec), "coords": [str(c) for c in self.coords]}


def _arity(spec: GroupSpec) -> int:
    return 4 if spec.kind.is_extension else 2


def on_curve(spec: GroupSpec, ring: Any, coords: tuple) -> bool:
    """Whether the coordinates satisfy the defining equations of the group."""
    if len(coords) != _arity(spec):
        return False
    if not spec.kind.is_extension:
        return spec.curve_map().evaluate(ring, coords).is_zero()
    w, v = coords[:2], coords[2:]
    if not spec.f_map().evaluate(ring, v).is_zero():
        return False
    g_value = spec.g_map().evaluate(ring, w)
    if spec.kind == GroupKind.UDESCENDED:
        return (g_value - v[0] ** 3).is_zero()
    return g_value.is_zero()


def make_point(spec: GroupSpec, ring: Any, coords: tuple, check: bool = True) -> GroupPoint:
    """Point from raw coordinates, embedded into the ring.

    :raises OffCurve: When check is set and an equation fails.
    """
    coords = tuple(ring.embed(c) for c in coords)
    if check and not on_curve(spec, ring, coords):
        raise OffCurve(f"{tuple(str(c) for c in coords)} is not on {spec} over {ring!r}.")
    return GroupPoint(spec, ring, coords)


def identity(spec: GroupSpec, ring: Any) -> GroupPoint:
    return GroupPoint(spec, ring, (ring.zero(),) * _arity(spec))


#-----------#
# cocycles #
#-----------#

def h_alternating(v1: tuple, v2: tuple, p: int) -> tuple:
    """h(v, v') = (x x'^p - x^p x', x y'^p - x' y^p)."""
    (x1, y1), (x2, y2) = v1, v2
    return x1 * x2 ** p - x1 ** p * x2, x1 * y2 ** p - x2 * y1 ** p


def h_plus(v1: tuple, v2: tuple, p: int) -> tuple:
    """h+(v, v') = (x x'^p + x^p x', x y'^p + x' y^p)."""
    (x1, y1), (x2, y2) = v1, v2
    return x1 * x2 ** p + x1 ** p * x2, x1 * y2 ** p + x2 * y1 ** p


def h_zeta(v1: tuple, v2: tuple, p: int, zeta: Any) -> tuple:
    """h_zeta(v, v') = h+(v, zeta v'), zeta a ring element."""
    return h_plus(v1, (zeta * v2[0], zeta * v2[1]), p)


def h_new(v1: tuple, v2: tuple) -> tuple:
    """Cocycle of the descended group in characteristic 2: (x x'^2, x y'^2)."""
    (x1, _), (x2, y2) = v1, v2
    return x1 * x2 ** 2, x1 * y2 ** 2


def b_map(v: tuple, p: int) -> tuple:
    """b(x, y) = (x^(p+1), x y^p), a map V_a -> W_a^+."""
    x, y = v
    return x ** (p + 1), x * y ** p


def zeta_in(spec: GroupSpec, ring: Any) -> Any:
    """zeta as an element of the ring, for kinds that carry one."""
    if spec.zeta is not None:
        return ring.embed(spec.zeta)
    try:
        return ring.embed(find_zeta(spec.field))
    except NotPresent as e:
        raise KindUnsupported(str(e)) from e


def cocycle(spec: GroupSpec, v1: GroupPoint, v2: GroupPoint, variant: str | None = None) -> tuple:
    """The cocycle h(v, v') attached to spec, or an explicit variant.

    :param spec: Extension group, or any group in the family when variant is given.
    :type spec: GroupSpec
    :param v1: A point of V_a.
    :type v1: GroupPoint
    :param v2: A point of V_a over the same ring.
    :type v2: GroupPoint
    :param variant: One of "alternating", "plus", "zeta", "new", defaults to the kind's own cocycle.
    :type variant: str | None, optional
    :raises RingMismatch: When the points live in different rings.
    :raises KindUnsupported: For a variant that does not exist in this characteristic.
    :return: Coordinates of the value on the W-type group.
    :rtype: tuple
    """
    if v1.ring != v2.ring:
        raise RingMismatch(f"Points over {v1.ring!r} and {v2.ring!r}.")
    if variant is None:
        variant = {GroupKind.U: "alternating", GroupKind.UZETA: "zeta",
                   GroupKind.UDESCENDED: "new", GroupKind.WPLUS: "plus"}.get(spec.kind)
        if variant is None:
            raise KindUnsupported(f"{spec} carries no cocycle.")
    p = spec.p
    a, b = v1.v, v2.v
    if variant == "alternating":
        return h_alternating(a, b, p)
    if variant == "plus":
        return h_plus(a, b, p)
    if variant == "zeta":
        return h_zeta(a, b, p, zeta_in(spec, v1.ring))
    if variant == "new":
        if p != 2:
            raise KindUnsupported("The cocycle (x x'^2, x y'^2) is a characteristic 2 construction.")
        return h_new(a, b)
    raise ParameterError(f"Unknown cocycle variant '{variant}'.")


#-----------#
# group law #
#-----------#

def _law_cocycle(spec: GroupSpec, ring: Any):
    if spec.kind == GroupKind.U:
        return lambda v1, v2: h_alternating(v1, v2, spec.p)
    if spec.kind == GroupKind.UZETA:
        zeta = zeta_in(spec, ring)
        return lambda v1, v2: h_zeta(v1, v2, spec.p, zeta)
    return h_new


def _check_pair(u1: GroupPoint, u2: GroupPoint) -> None:
    if u1.spec != u2.spec:
        raise ParameterError(f"Points of {u1.spec} and {u2.spec} cannot be combined.")
    if u1.ring != u2.ring:
        raise RingMismatch(f"Points over {u1.ring!r} and {u2.ring!r}.")


def mul(u1: GroupPoint, u2: GroupPoint) -> GroupPoint:
    """Group law: coordinatewise addition on V and W, (w + w' + h(v, v'), v + v') on extensions.

    :raises RingMismatch: When the points live in different rings.
    :rtype: GroupPoint
    """
    _check_pair(u1, u2)
    if not u1.spec.kind.is_extension:
        return GroupPoint(u1.spec, u1.ring, tuple(a + b for a, b in zip(u1.coords, u2.coords)))
    h = _law_cocycle(u1.spec, u1.ring)(u1.v, u2.v)
    w = tuple(a + b + c for a, b, c in zip(u1.w, u2.w, h))
    v = tuple(a + b for a, b in zip(u1.v, u2.v))
    return GroupPoint(u1.spec, u1.ring, w + v)


def inverse(u: GroupPoint) -> GroupPoint:
    """(w, v)^-1 = (-w - h(v, -v), -v)."""
    if not u.spec.kind.is_extension:
        return GroupPoint(u.spec, u.ring, tuple(-c for c in u.coords))
    minus_v = tuple(-c for c in u.v)
    h = _law_cocycle(u.spec, u.ring)(u.v, minus_v)
    w = tuple(-a - b for a, b in zip(u.w, h))
    return GroupPoint(u.spec, u.ring, w + minus_v)


def conjugate(u: GroupPoint, by: GroupPoint) -> GroupPoint:
    return mul(mul(by, u), inverse(by))


def commutator(u1: GroupPoint, u2: GroupPoint) -> GroupPoint:
    """u1 u2 u1^-1 u2^-1, which lies in the W-type subgroup.

    :raises LawViolation: When the result disagrees with (h(v1, v2) - h(v2, v1), 0).
    :rtype: GroupPoint
    """
    result = mul(mul(mul(u1, u2), inverse(u1)), inverse(u2))
    if not u1.spec.kind.is_extension:
        if not all(c.is_zero() for c in result.coords):
            raise LawViolation(f"Commutator of {u1} and {u2} is nontrivial in a commutative group.")
        return result
    h = _law_cocycle(u1.spec, u1.ring)
    expected = tuple(a - b for a, b in zip(h(u1.v, u2.v), h(u2.v, u1.v)))
    if not all(c.is_zero() for c in result.v) or not all((a - b).is_zero() for a, b in zip(result.w, expected)):
        raise LawViolation(f"Commutator of {u1} and {u2} is {result}, expected ({expected}, 0).")
    return result


def is_trivial(u: GroupPoint) -> bool:
    return all(c.is_zero() for c in u.coords)


def noncommutativity_witness(spec: GroupSpec) -> tuple[GroupPoint, GroupPoint]:
    """Two points with a nontrivial commutator.

    Odd p and U^zeta use the constant points (1, 0) and (zeta, 0) of V_a over k. The descended
    group uses (1, 0) and (Z, 0) over k(zeta)[Z]/(Z^4 + Z), with W-parts zeta b(v).

    :raises KindUnsupported: For commutative kinds, or U without F_(p^2) in F_q.
    :rtype: tuple[GroupPoint, GroupPoint]
    """
    if not spec.kind.is_extension:
        raise KindUnsupported(f"{spec} is commutative.")
    if spec.kind == GroupKind.UDESCENDED:
        k = RationalFunctionField(spec.field)
        quartic = EtaleAlg(k, [0, 1, 0, 0, 1], name="Z")
        ring = EtaleAlg(quartic, [1, 1, 1], name="zeta")
        zeta = ring.generator()
        z = ring.embed(quartic.generator())
        points = []
        for c in (ring.one(), z):
            alpha = tuple(zeta * t for t in b_map((c, ring.zero()), 2))
            points.append(make_point(spec, ring, alpha + (c, ring.zero())))
        return points[0], points[1]
    ring = RationalFunctionField(spec.field)
    zeta = zeta_in(spec, ring)
    zero = ring.zero()
    u1 = make_point(spec, ring, (zero, zero, ring.one(), zero))
    u2 = make_point(spec, ring, (zero, zero, zeta, zero))
    return u1, u2


#----------------#
# random points #
#----------------#

def constant_scalars(spec: GroupSpec, ring: Any) -> list:
    """Elements of F_q fixed by x -> x^(p^2), embedded in the ring; they scale V_a-points."""
    Q = spec.p ** 2
    F = spec.field
    return [ring.embed(F.element(c)) for c in F.elements() if F.power(c, Q) == c]


def random_v_point(rng, ring: Any, basis: list[tuple], scalars: list) -> tuple:
    """Random combination sum lambda_i b_i + (c, 0) of V_a-points, lambda_i and c drawn from scalars."""
    x, y = rng.choice(scalars), ring.zero()
    for bx, by in basis:
        s = rng.choice(scalars)
        x, y = x + s * bx, y + s * by
    return x, y
