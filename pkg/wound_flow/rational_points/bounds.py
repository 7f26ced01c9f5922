import logging
from dataclasses import dataclass

from wound_flow.errors import WoundError
from wound_flow.function_field import Divisor, Place, differential_support, ord_differential, support, valuation
from wound_flow.groups import GroupKind, GroupSpec, KindUnsupported


class InfinitePointSet(WoundError):
    pass


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def frobenius_exponent(spec: GroupSpec) -> int:
    """Q with the curve written x + eps x^Q + c y^Q: p^2 for V, p for W."""
    if spec.kind == GroupKind.V:
        return spec.p ** 2
    if spec.kind == GroupKind.W:
        return spec.p
    raise KindUnsupported(f"Point enumeration covers V and W, not {spec.kind.value}.")


@dataclass(frozen=True)
class PlaceBound:
    """Provenance of the bound at one place."""
    place: Place
    ord_a: int
    ord_da: int
    bound: int
    rule: str

    def to_dict(self) -> dict:
        return {"place": str(self.place), "ordA": self.ord_a, "ordDa": self.ord_da, "bound": self.bound,
                "rule": self.rule}


@dataclass(frozen=True)
class PoleBound:
    """Divisor D with ord_v(x) >= -D_v for the x-coordinate of every k-rational point."""
    group: GroupSpec
    divisor: Divisor
    per_place: tuple[PlaceBound, ...]

    def to_dict(self) -> dict:
        return {"group": str(self.group), "divisor": str(self.divisor),
                "perPlace": [b.to_dict() for b in self.per_place]}


def pole_bounds(spec: GroupSpec) -> PoleBound:
    """Pole orders allowed for x on V_a(k) or W_a(k).

    From x + eps x^Q = -c y^Q we get dx = -y^Q dc, so a pole of x at v forces
    Q ord_v(x) = ord_v(a) + Q ord_v(y) and, with ord_v(dx) >= ord_v(x) - 1,
    (Q - 1) ord_v(x) >= ord_v(a) - ord_v(da) - 1. Places outside supp(a) and supp(da) allow no pole.

    :param spec: Group of kind V or W.
    :type spec: GroupSpec
    :raises KindUnsupported: For other kinds.
    :rtype: PoleBound
    """
    Q = frobenius_exponent(spec)
    a = spec.a
    places = set(support(a)) | set(differential_support(a))
    records = []
    coefficients = {}
    for v in sorted(places, key=Place.sort_key):
        ord_a = valuation(a, v)
        ord_da = ord_differential(a, v)
        if ord_a % Q != 0:
            bound, rule = 0, f"{Q} does not divide ord(a)"
        else:
            bound = min(0, _ceil_div(ord_a - ord_da - 1, Q - 1))
            rule = f"(Q-1) ord(x) >= ord(a) - ord(da) - 1 with Q = {Q}"
        records.append(PlaceBound(v, ord_a, ord_da, bound, rule))
        if bound < 0:
            coefficients[v] = -bound
    divisor = Divisor(spec.field, coefficients)
    logging.info(f"Pole bound for {spec}: D = {divisor}.")
    return PoleBound(spec, divisor, tuple(records))
