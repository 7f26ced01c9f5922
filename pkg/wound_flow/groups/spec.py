import logging
from dataclasses import dataclass
from enum import Enum

from wound_flow.errors import ParameterError
from wound_flow.field_core import FqElem, FqField, NotPresent, find_zeta, get_field
from wound_flow.function_field import RatFn, is_pth_power, parse_ratfn
from wound_flow.local_field import AdditiveMap, v_map, w_map, wplus_map


class ParameterInKp(ParameterError):
    pass


class ZetaMissing(ParameterError):
    pass


class KindUnsupported(ParameterError):
    pass


class GroupKind(Enum):
    V = "V"
    W = "W"
    WPLUS = "Wplus"
    U = "U"
    UZETA = "Uzeta"
    UDESCENDED = "Udescended"

    @property
    def is_extension(self) -> bool:
        """True for the central extensions of V by W."""
        return self in (GroupKind.U, GroupKind.UZETA, GroupKind.UDESCENDED)

    @classmethod
    def parse(cls, text: str) -> "GroupKind":
        for kind in cls:
            if kind.value.lower() == text.strip().lower():
                return kind
        raise ParameterError(f"Unknown group kind '{text}', expected one of {[k.value for k in cls]}.")


@dataclass(frozen=True)
class GroupSpec:
    """A member of the family V_a, W_a, W_a^+, U_a, U_a^zeta or the descended U_a over F_q(T).

    Build instances with :func:`make_group`, which validates the parameter.
    """
    kind: GroupKind
    field: FqField
    a: RatFn
    zeta: FqElem | None = None

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def q(self) -> int:
        return self.field.q

    def __str__(self) -> str:
        return f"{self.kind.value}[p={self.p},q={self.q},a={self.a}]"

    def f_map(self) -> AdditiveMap:
        """Equation of V_a."""
        return v_map(self.a)

    def g_map(self) -> AdditiveMap:
        """Equation of the W-type group: W_a for W and U, W_a^+ for W^+ and U^zeta (and the descended form)."""
        if self.kind in (GroupKind.WPLUS, GroupKind.UZETA):
            return wplus_map(self.a)
        return w_map(self.a)

    def curve_map(self) -> AdditiveMap:
        """Defining equation of a two-coordinate group V, W or W^+."""
        if self.kind == GroupKind.V:
            return self.f_map()
        if self.kind in (GroupKind.W, GroupKind.WPLUS):
            return self.g_map()
        raise KindUnsupported(f"{self} is not a two-coordinate group.")

    def with_kind(self, kind: GroupKind) -> "GroupSpec":
        return make_group(kind, self.field, self.a)

    def to_dict(self) -> dict:
        out = {"kind": self.kind.value, "p": self.p, "q": self.q, "a": str(self.a)}
        if self.zeta is not None:
            out["zeta"] = str(self.zeta)
        return out


def default_extension_kind(field: FqField) -> GroupKind:
    """U for odd p, U^zeta when F_4 is in F_q, the descended form otherwise."""
    if field.p != 2:
        return GroupKind.U
    return GroupKind.UZETA if field.m % 2 == 0 else GroupKind.UDESCENDED


def make_group(kind: GroupKind | str, field: FqField | tuple[int, int], a: RatFn | str) -> GroupSpec:
    """Validated group spec.

    :param kind: Group kind, or its name.
    :type kind: GroupKind | str
    :param field: The constant field, or (p, m).
    :type field: FqField | tuple[int, int]
    :param a: Parameter in k - k^p, or its text form.
    :type a: RatFn | str
    :raises ParameterInKp: When a is a pth power.
    :raises ZetaMissing: For U^zeta without F_{p^2} in F_q.
    :raises KindUnsupported: For U with p = 2, or the descended form when F_4 is in F_q or p > 2.
    :rtype: GroupSpec
    """
    if isinstance(kind, str):
        kind = GroupKind.parse(kind)
    if not isinstance(field, FqField):
        field = get_field(*field)
    if isinstance(a, str):
        a = parse_ratfn(field, a)
    if is_pth_power(a) is not None:
        raise ParameterInKp(f"a = {a} lies in k^{field.p}.")
    zeta = None
    if kind == GroupKind.U and field.p == 2:
        raise KindUnsupported("U_a needs p > 2; use Uzeta or Udescended in characteristic 2.")
    if kind == GroupKind.UZETA:
        try:
            zeta = find_zeta(field)
        except NotPresent as e:
            raise ZetaMissing(str(e)) from e
    if kind == GroupKind.UDESCENDED:
        if field.p != 2:
            raise KindUnsupported("The descended group is only defined for p = 2.")
        if field.m % 2 == 0:
            raise KindUnsupported(f"F_4 lies in F_{field.q}; use Uzeta instead of the descended group.")
    spec = GroupSpec(kind, field, a, zeta)
    logging.debug(f"Group {spec} validated; {woundness_witness(spec)['statement']}")
    return spec


def woundness_witness(spec: GroupSpec) -> dict:
    """Points at infinity of the projective closure of the defining curve.

    The leading form X^Q + a Y^Q vanishes at (X : Y : 0) with X/Y = (-a)^(1/Q), which is
    not k-rational because a is not a pth power.
    """
    exponent = spec.p ** 2 if spec.kind == GroupKind.V else spec.p
    root = is_pth_power(-spec.a)
    rational = root is not None and (exponent == spec.p or is_pth_power(root) is not None)
    return {
        "equation_at_infinity": f"X^{exponent} + ({spec.a})*Y^{exponent} = 0",
        "rational": rational,
        "statement": f"point at infinity (({-spec.a})^(1/{exponent}) : 1 : 0) is {'' if rational else 'not '}k-rational",
    }
