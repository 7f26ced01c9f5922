import random

import pytest

from wound_flow.function_field import (InsufficientPrecision, Place, RatFn, RationalFunctionField, parse_ratfn,
                                       random_ratfn)
from wound_flow.groups import GroupKind, GroupSpec, KindUnsupported, OffCurve, make_group
from wound_flow.cohomology import (TrivialClass, additivity_preimage, che1_witness, class_relation, delta_closed,
                                   delta_generic, n_value, solve_global_V)
from wound_flow.local_field import LaurentLocal, Verdict, local_nontrivial_witness
from wound_flow.rational_points import enumerate_points

CASES = [(GroupKind.U, 3, 2), (GroupKind.U, 5, 2), (GroupKind.UZETA, 2, 2), (GroupKind.UDESCENDED, 2, 1)]


def _v_points(spec: GroupSpec) -> list[tuple]:
    return [point.coords for point in enumerate_points(spec.with_kind(GroupKind.V))]


def _nonzero(field, rng: random.Random, height: int = 1) -> RatFn:
    while True:
        x = random_ratfn(field, rng, height)
        if not x.is_zero():
            return x


#----------------#
# connecting map #
#----------------#

@pytest.mark.parametrize("kind, p, m", CASES)
def test_generic_delta_matches_closed_form(kind: GroupKind, p: int, m: int, rng: random.Random) -> None:
    spec = make_group(kind, (p, m), "T*(T-1)")
    points = _v_points(spec)
    assert points
    for point in points:
        for _ in range(2):
            beta = _nonzero(spec.field, rng)
            assert delta_generic(spec, beta, point) == delta_closed(spec, beta, point).rep


def test_delta_closed_forms(u9: GroupSpec, f9) -> None:
    T = RatFn.variable(f9)
    assert delta_closed(u9, T, (1, 0)).rep == T * 2
    assert delta_closed(u9, T, (0, 0)).rep.is_zero()
    spec = make_group(GroupKind.UZETA, (2, 2), "T*(T-1)")
    assert delta_closed(spec, RatFn.variable(spec.field), (1, 0)).rep == RatFn.variable(spec.field)
    descended = make_group(GroupKind.UDESCENDED, (2, 1), "T*(T-1)")
    T2 = RatFn.variable(descended.field)
    assert delta_closed(descended, T2, (1, 0)).rep == T2 + 1


def test_delta_representative_kinds(u9: GroupSpec) -> None:
    rep = delta_closed(u9, RatFn.variable(u9.field), (1, 0))
    assert rep.kind == "W" and rep.modulus == "k/g(k^2)"
    spec = make_group(GroupKind.UZETA, (2, 2), "T*(T-1)")
    assert delta_closed(spec, RatFn.variable(spec.field), (1, 0)).kind == "Wplus"


def test_delta_rejects_points_off_v(u9: GroupSpec, v9: GroupSpec) -> None:
    with pytest.raises(OffCurve):
        delta_closed(u9, RatFn.variable(u9.field), (2, 1))
    with pytest.raises(OffCurve):
        delta_generic(u9, RatFn.variable(u9.field), (2, 1))
    with pytest.raises(KindUnsupported):
        delta_closed(v9, RatFn.variable(v9.field), (1, 0))


def test_n_value_is_c_cubed() -> None:
    spec = make_group(GroupKind.UDESCENDED, (2, 1), "T*(T-1)")
    for c, d in _v_points(spec):
        assert n_value(spec, (c, d)) == c ** 3
    u = make_group(GroupKind.U, (3, 2), "T*(T-1)")
    assert n_value(u, (1, 0)).is_zero()


@pytest.mark.parametrize("kind, p, m", CASES)
def test_additivity_up_to_a_certified_image(kind: GroupKind, p: int, m: int, rng: random.Random) -> None:
    spec = make_group(kind, (p, m), "T*(T-1)")
    k = RationalFunctionField(spec.field)
    g = spec.g_map()
    points = _v_points(spec)
    beta = _nonzero(spec.field, rng)
    for v1 in points:
        for v2 in points:
            total = tuple(a + b for a, b in zip(v1, v2))
            defect = (delta_closed(spec, beta, total).rep - delta_closed(spec, beta, v1).rep
                      - delta_closed(spec, beta, v2).rep)
            assert g.evaluate(k, additivity_preimage(spec, v1, v2)) == defect


#---------------#
# global solver #
#---------------#

def test_solve_global_v_polynomial_right_hand_sides(v9: GroupSpec, f9, rng: random.Random) -> None:
    k = RationalFunctionField(f9)
    f = v9.f_map()
    for _ in range(5):
        x0 = RatFn.variable(f9) * RatFn.constant(f9, rng.randrange(9)) + RatFn.constant(f9, rng.randrange(9))
        y0 = RatFn.constant(f9, rng.randrange(9))
        lam = f.evaluate(k, (x0, y0))
        result = solve_global_V(v9, lam)
        assert result.ok, result.reason
        assert f.evaluate(k, result.solution) == lam


def test_solve_global_v_with_finite_poles(v9: GroupSpec, f9) -> None:
    k = RationalFunctionField(f9)
    f = v9.f_map()
    for text in ["1/T", "(T+1)/(T-1)", "1/T + 2/(T-1)"]:
        lam = f.evaluate(k, (parse_ratfn(f9, text), k.zero()))
        result = solve_global_V(v9, lam)
        assert result.ok, result.reason
        assert f.evaluate(k, result.solution) == lam
        assert result.to_dict()["solved"] is True


def test_solve_global_v_zero(v9: GroupSpec) -> None:
    result = solve_global_V(v9, RatFn.zero(v9.field))
    assert result.ok and all(t.is_zero() for t in result.solution)


def test_solve_global_v_stalls_on_a_pole_of_a(f9) -> None:
    spec = make_group(GroupKind.V, f9, "1/T")
    result = solve_global_V(spec, parse_ratfn(f9, "1/T^2"))
    assert not result.ok
    assert result.stalled_at == Place.parse(f9, "T")
    assert result.to_dict()["stalledAt"] == "T"


def test_solve_global_v_rejects_short_witnesses(v9: GroupSpec, place_t: Place) -> None:
    short = LaurentLocal.zero(place_t, 0)
    with pytest.raises(InsufficientPrecision):
        solve_global_V(v9, parse_ratfn(v9.field, "1/T"), witnesses=[(place_t, short, short)])


#--------------------------#
# local and adelic classes #
#--------------------------#

def test_che1_witness(w9: GroupSpec, place_t: Place) -> None:
    witness = che1_witness(w9, place_t)
    assert witness.decision.verdict == Verdict.NON_MEMBER
    assert witness.candidates == 9
    assert witness.to_dict()["adelicClass"] == "lambda at T, 0 elsewhere"


def test_che1_witness_errors(w9: GroupSpec, v9: GroupSpec, place_t: Place) -> None:
    with pytest.raises(TrivialClass):
        che1_witness(w9, place_t, candidate=LaurentLocal.zero(place_t, 4))
    with pytest.raises(KindUnsupported):
        che1_witness(v9, place_t)


def test_class_relation_equal(w9: GroupSpec, f9) -> None:
    k = RationalFunctionField(f9)
    rep = parse_ratfn(f9, "T^2 + 1/T")
    assert class_relation(w9, rep, rep).status == "equal (certified)"
    image = w9.g_map().evaluate(k, (k.one(), RatFn.variable(f9)))
    relation = class_relation(w9, rep + image, rep)
    assert relation.status == "equal (certified)"
    x, y = relation.preimage
    assert w9.g_map().evaluate(k, (x, y)) == image


def test_class_relation_distinct(w9: GroupSpec, f9, place_t: Place) -> None:
    mu = local_nontrivial_witness(w9.g_map(), place_t)
    e = mu.valuation()
    lam = RatFn.constant(f9, mu.coefficient(e)) * RatFn.variable(f9) ** e
    relation = class_relation(w9, lam, RatFn.zero(f9))
    assert relation.status != "equal (certified)"
