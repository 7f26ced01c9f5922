import random

import pytest

from wound_flow.errors import ParameterError
from wound_flow.field_core import FqField, get_field
from wound_flow.function_field import Place, RatFn, parse_ratfn, random_ratfn, support, valuation
from wound_flow.groups import GroupKind, GroupSpec, KindUnsupported, make_group, on_curve
from wound_flow.rational_points import (InfinitePointSet, brute_force_points, enumerate_points, pole_bounds,
                                        rational_functions, run_scan, solve_frobenius_linear, solve_y)


def _texts(points) -> set[str]:
    return {str(point) for point in points}


#-------------#
# enumeration #
#-------------#

@pytest.mark.parametrize("p, m, expected", [(3, 2, 9), (5, 2, 5), (7, 2, 7)])
def test_w_point_counts(p: int, m: int, expected: int) -> None:
    spec = make_group(GroupKind.W, (p, m), "T*(T-1)")
    assert len(enumerate_points(spec)) == expected


@pytest.mark.parametrize("p, m, expected", [(3, 2, 9), (2, 2, 4), (2, 1, 2)])
def test_v_point_counts(p: int, m: int, expected: int) -> None:
    spec = make_group(GroupKind.V, (p, m), "T*(T-1)")
    assert len(enumerate_points(spec)) == expected


def test_enumerated_points_are_on_the_curve(w9: GroupSpec, v9: GroupSpec) -> None:
    for spec in (w9, v9):
        points = enumerate_points(spec)
        assert len(_texts(points)) == len(points)
        for point in points:
            assert on_curve(spec, point.ring, point.coords)
            assert solve_y(spec, point.coords[0]) == point.coords[1]


def test_w_has_nonconstant_points_for_p3(w9: GroupSpec) -> None:
    points = enumerate_points(w9)
    assert sum(1 for point in points if point.coords[0].is_constant()) == 3
    assert any(not point.coords[0].is_constant() for point in points)


def test_threads_do_not_change_the_result(w9: GroupSpec) -> None:
    assert [str(p) for p in enumerate_points(w9, threads=4)] == [str(p) for p in enumerate_points(w9, threads=1)]


def test_w_in_characteristic_two_is_infinite() -> None:
    spec = make_group(GroupKind.W, (2, 2), "T*(T-1)")
    with pytest.raises(InfinitePointSet):
        enumerate_points(spec)
    with pytest.raises(InfinitePointSet):
        brute_force_points(spec, 1)


def test_extensions_are_not_enumerated(u9: GroupSpec) -> None:
    with pytest.raises(KindUnsupported):
        enumerate_points(u9)


#-------------#
# pole bounds #
#-------------#

def test_pole_bound_for_w(w9: GroupSpec, f9: FqField) -> None:
    bound = pole_bounds(w9)
    half = Place.parse(f9, "2*T-1")
    assert bound.divisor[half] == 1
    assert bound.divisor[Place.parse(f9, "inf")] == 0
    assert bound.divisor.degree == 1
    assert pole_bounds(make_group(GroupKind.W, (5, 2), "T*(T-1)")).divisor.degree == 0


def test_points_respect_the_pole_bound(w9: GroupSpec) -> None:
    D = pole_bounds(w9).divisor
    for point in enumerate_points(w9):
        x = point.coords[0]
        if x.is_zero():
            continue
        for v in support(x):
            assert valuation(x, v) >= -D[v]


#--------------------#
# brute-force oracle #
#--------------------#

@pytest.mark.parametrize("height", [1, 2])
def test_brute_force_agrees_with_enumeration(w9: GroupSpec, height: int) -> None:
    expected = {str(point) for point in enumerate_points(w9)
                if all(c.height <= height for c in point.coords)}
    assert _texts(brute_force_points(w9, height)) == expected


@pytest.mark.slow
def test_brute_force_height_four(w9: GroupSpec) -> None:
    expected = {str(point) for point in enumerate_points(w9) if all(c.height <= 4 for c in point.coords)}
    assert _texts(brute_force_points(w9, 4, threads=4)) == expected


def test_brute_force_rejects_negative_height(w9: GroupSpec) -> None:
    with pytest.raises(ParameterError):
        brute_force_points(w9, -1)


def test_rational_functions_are_listed_once() -> None:
    F = get_field(2, 1)
    listed = list(rational_functions(F, 1))
    assert len(listed) == 8
    assert len({str(x) for x in listed}) == 8
    assert parse_ratfn(F, "1/(T+1)") in listed


#-----------------------#
# Frobenius-linear maps #
#-----------------------#

@pytest.mark.parametrize("eps", [1, -1])
def test_solve_frobenius_linear_round_trip(f9: FqField, rng: random.Random, eps: int) -> None:
    for _ in range(20):
        x = random_ratfn(f9, rng, 2)
        t = x + x ** 3 * eps
        solutions = solve_frobenius_linear(t, eps, 3)
        assert x in solutions
        assert len(solutions) == 3
        for s in solutions:
            assert s + s ** 3 * eps == t


def test_solve_frobenius_linear_without_solutions(f9: FqField) -> None:
    assert solve_frobenius_linear(parse_ratfn(f9, "1/T"), 1, 3) == []
    assert solve_frobenius_linear(parse_ratfn(f9, "T"), 1, 9) == []


#---------#
# workers #
#---------#

def test_run_scan_keeps_index_order() -> None:
    assert run_scan(10, lambda i: [i], threads=3) == list(range(10))
    assert run_scan(10, lambda i: [i] if i % 2 else [], threads=4) == [1, 3, 5, 7, 9]
    assert run_scan(0, lambda i: [i], threads=2) == []


def test_run_scan_reraises_worker_errors() -> None:
    def solve(i: int) -> list:
        if i == 5:
            raise ValueError("bad candidate")
        return [i]

    with pytest.raises(ValueError):
        run_scan(8, solve, threads=2)
    with pytest.raises(ValueError):
        run_scan(8, solve, threads=1)


def test_solve_y_needs_a_pth_power(v9: GroupSpec) -> None:
    assert solve_y(v9, RatFn.zero(v9.field)) == RatFn.zero(v9.field)
    assert solve_y(v9, RatFn.variable(v9.field)) is None
