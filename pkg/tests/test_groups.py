import random

import pytest

from wound_flow.errors import ParameterError
from wound_flow.field_core import get_field
from wound_flow.function_field import RationalFunctionField, random_ratfn
from wound_flow.groups import (GroupKind, GroupPoint, GroupSpec, KindUnsupported, OffCurve, ParameterInKp,
                               RingMismatch, ZetaMissing, b_map, cocycle, commutator, constant_scalars,
                               default_extension_kind, descent_twist, h_alternating, h_plus, identity, inverse,
                               is_trivial, make_group, make_point, mul, noncommutativity_witness, on_curve,
                               random_v_point, v_point_algebra, v_point_tower, woundness_witness)
from wound_flow.groups.etale import EtaleAlg, NotEtale


def _random_points(spec: GroupSpec, rng: random.Random, count: int) -> tuple:
    """Points of the extension over one generic V_a-point algebra, with arbitrary W-parts."""
    y0 = random_ratfn(spec.field, rng, 1)
    ring, (point,) = v_point_tower(spec, [y0])
    scalars = constant_scalars(spec, ring)
    points = []
    for _ in range(count):
        v = random_v_point(rng, ring, [point], scalars)
        w = tuple(ring.embed(random_ratfn(spec.field, rng, 1)) for _ in range(2))
        points.append(GroupPoint(spec, ring, w + v))
    return ring, points


def _same(u1: GroupPoint, u2: GroupPoint) -> bool:
    return all((a - b).is_zero() for a, b in zip(u1.coords, u2.coords))


#------------#
# validation #
#------------#

def test_make_group_validation() -> None:
    with pytest.raises(ParameterInKp):
        make_group(GroupKind.W, (3, 2), "T^3")
    with pytest.raises(ZetaMissing):
        make_group(GroupKind.UZETA, (3, 1), "T*(T-1)")
    with pytest.raises(KindUnsupported):
        make_group(GroupKind.U, (2, 2), "T*(T-1)")
    with pytest.raises(KindUnsupported):
        make_group(GroupKind.UDESCENDED, (2, 2), "T*(T-1)")
    with pytest.raises(KindUnsupported):
        make_group(GroupKind.UDESCENDED, (3, 2), "T*(T-1)")
    assert make_group("uzeta", (2, 2), "T*(T-1)").zeta is not None


def test_group_kind_parse() -> None:
    assert GroupKind.parse("Udescended") == GroupKind.UDESCENDED
    assert GroupKind.parse(" w ") == GroupKind.W
    with pytest.raises(ParameterError):
        GroupKind.parse("G_a")


def test_default_extension_kind() -> None:
    assert default_extension_kind(get_field(3, 2)) == GroupKind.U
    assert default_extension_kind(get_field(2, 2)) == GroupKind.UZETA
    assert default_extension_kind(get_field(2, 1)) == GroupKind.UDESCENDED


def test_points_at_infinity_are_not_rational(w9: GroupSpec, v9: GroupSpec) -> None:
    assert woundness_witness(w9)["rational"] is False
    assert woundness_witness(v9)["rational"] is False
    assert "not k-rational" in woundness_witness(w9)["statement"]


def test_on_curve(v9: GroupSpec, k9: RationalFunctionField) -> None:
    assert on_curve(v9, k9, (k9.one(), k9.zero()))
    with pytest.raises(OffCurve):
        make_point(v9, k9, (k9.embed(2), k9.one()))
    assert make_point(v9, k9, (k9.one(), k9.zero())).coords[0] == k9.one()


def test_etale_algebra_rejects_inseparable_moduli(k9: RationalFunctionField) -> None:
    with pytest.raises(NotEtale):
        EtaleAlg(k9, [k9.embed(1), 0, 0, 1])  # Z^3 + 1 = (Z + 1)^3
    with pytest.raises(NotEtale):
        EtaleAlg(k9, [1, 1, 2])


def test_generic_point_lies_on_v(v9: GroupSpec, rng: random.Random) -> None:
    E, point = v_point_algebra(v9, random_ratfn(v9.field, rng, 2))
    assert on_curve(v9, E, point)
    ring, points = v_point_tower(v9, [random_ratfn(v9.field, rng, 1) for _ in range(2)])
    assert all(on_curve(v9, ring, pt) for pt in points)


#--------------------#
# cocycle identities #
#--------------------#

@pytest.mark.parametrize("p, m", [(3, 2), (5, 2)])
def test_cocycles_are_biadditive(p: int, m: int, rng: random.Random) -> None:
    spec = make_group(GroupKind.U, (p, m), "T*(T-1)")
    _, points = _random_points(spec, rng, 3)
    v1, v2, v3 = (u.v for u in points)
    s12 = tuple(a + b for a, b in zip(v1, v2))
    for h in (h_alternating, h_plus):
        left = h(s12, v3, p)
        right = tuple(a + b for a, b in zip(h(v1, v3, p), h(v2, v3, p)))
        assert all((a - b).is_zero() for a, b in zip(left, right))
    assert all(c.is_zero() for c in h_alternating(v1, v1, p))
    assert all((a - b).is_zero() for a, b in zip(h_plus(v1, v2, p), h_plus(v2, v1, p)))


def test_b_maps_v_into_wplus(u9: GroupSpec, rng: random.Random) -> None:
    ring, points = _random_points(u9, rng, 3)
    wplus = u9.with_kind(GroupKind.WPLUS)
    for u in points:
        assert wplus.g_map().evaluate(ring, b_map(u.v, 3)).is_zero()


def test_cocycle_needs_a_common_ring(u9: GroupSpec, k9: RationalFunctionField, rng: random.Random) -> None:
    ring, points = _random_points(u9, rng, 1)
    here = identity(u9, k9)
    with pytest.raises(RingMismatch):
        cocycle(u9, points[0], here)
    with pytest.raises(RingMismatch):
        mul(points[0], here)


#--------------#
# group axioms #
#--------------#

EXTENSIONS = [(GroupKind.U, 3, 2), (GroupKind.U, 5, 2), (GroupKind.UZETA, 2, 2), (GroupKind.UZETA, 3, 2)]


def _check_axioms(spec: GroupSpec, rng: random.Random, samples: int) -> None:
    for _ in range(samples):
        ring, (u1, u2, u3) = _random_points(spec, rng, 3)
        assert _same(mul(mul(u1, u2), u3), mul(u1, mul(u2, u3)))
        assert _same(mul(u1, identity(spec, ring)), u1)
        assert _same(mul(identity(spec, ring), u1), u1)
        assert is_trivial(mul(u1, inverse(u1)))
        assert is_trivial(mul(inverse(u1), u1))
        central = GroupPoint(spec, ring, u3.w + (ring.zero(), ring.zero()))
        assert _same(mul(u1, central), mul(central, u1))
        c = commutator(u1, u2)
        assert all(t.is_zero() for t in c.v)


@pytest.mark.parametrize("kind, p, m", EXTENSIONS)
def test_group_axioms(kind: GroupKind, p: int, m: int, rng: random.Random) -> None:
    _check_axioms(make_group(kind, (p, m), "T*(T-1)"), rng, 5)


@pytest.mark.slow
@pytest.mark.parametrize("kind, p, m", EXTENSIONS)
def test_group_axioms_full(kind: GroupKind, p: int, m: int, rng: random.Random) -> None:
    _check_axioms(make_group(kind, (p, m), "T*(T-1)"), rng, 1000)


@pytest.mark.parametrize("kind, p, m", EXTENSIONS + [(GroupKind.UDESCENDED, 2, 1)])
def test_extensions_are_noncommutative(kind: GroupKind, p: int, m: int) -> None:
    spec = make_group(kind, (p, m), "T*(T-1)")
    u1, u2 = noncommutativity_witness(spec)
    assert not is_trivial(commutator(u1, u2))


def test_commutative_kinds_have_no_witness(w9: GroupSpec, v9: GroupSpec, k9: RationalFunctionField) -> None:
    for spec in (w9, v9):
        with pytest.raises(KindUnsupported):
            noncommutativity_witness(spec)
    u = make_point(v9, k9, (k9.one(), k9.zero()))
    assert is_trivial(commutator(u, u))


def test_descended_law_on_constant_points() -> None:
    spec = make_group(GroupKind.UDESCENDED, (2, 1), "T*(T-1)")
    u1, u2 = noncommutativity_witness(spec)
    ring = u1.ring
    assert on_curve(spec, ring, u1.coords) and on_curve(spec, ring, u2.coords)
    product = mul(u1, u2)
    assert on_curve(spec, ring, product.coords)
    assert is_trivial(mul(u1, inverse(u1)))
    assert _same(mul(mul(u1, u2), u1), mul(u1, mul(u2, u1)))


#---------#
# descent #
#---------#

def test_descent_twist() -> None:
    spec = make_group(GroupKind.UDESCENDED, (2, 1), "T*(T-1)")
    report = descent_twist(spec, samples=20, rng=random.Random(7))
    assert report.ok, report.failures
    assert set(report.checked.values()) == {20}


@pytest.mark.slow
def test_descent_twist_full() -> None:
    spec = make_group(GroupKind.UDESCENDED, (2, 1), "T*(T-1)")
    assert descent_twist(spec, samples=1000, rng=random.Random(11)).ok


def test_descent_needs_characteristic_two(u9: GroupSpec) -> None:
    with pytest.raises(KindUnsupported):
        descent_twist(u9, samples=1)
