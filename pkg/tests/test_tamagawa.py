import dataclasses
import random
from fractions import Fraction

import pytest

from wound_flow.errors import WoundError
from wound_flow.field_core import FqField, get_field, is_pminus1_power
from wound_flow.function_field import Place, diff_ratio, parse_ratfn, random_ratfn
from wound_flow.groups import GroupKind, GroupSpec, KindUnsupported, make_group
from wound_flow.rational_points import InfinitePointSet
from wound_flow.tamagawa import (SHA_W_TRIVIAL, UnsupportedCharacteristic, compute_l, compute_N,
                                 counterexample_report, normalize_W, tamagawa_number)


@pytest.mark.parametrize("p, tau, l, count", [(3, 9, 4, 9), (5, 25, 3, 5), (7, 49, 3, 7)])
def test_tamagawa_number(p: int, tau: int, l: int, count: int) -> None:
    report = tamagawa_number(make_group(GroupKind.W, (p, 2), "T*(T-1)"))
    assert report.tau == Fraction(tau)
    assert report.N == -1
    assert report.l == l
    assert report.point_count == count
    assert report.to_dict()["tau"] == f"{tau}/1"


def test_l_places_for_p3(w9: GroupSpec, f9: FqField) -> None:
    report = tamagawa_number(w9)
    by_place = {str(row.place): row for row in report.l_places}
    assert set(by_place) == {"T", "T+2", "T+1", "inf"}
    assert by_place["inf"].m == -2
    assert all(row.m == 1 for name, row in by_place.items() if name != "inf")
    for row in report.l_places:
        assert row.residue.value == f9.neg(1)
        assert row.verdict


def test_n_table_for_p5() -> None:
    F = get_field(5, 2)
    normal = normalize_W(make_group(GroupKind.W, F, "T*(T-1)"))
    N, table = compute_N(normal.b, 5)
    assert N == -1
    floors = {str(row.place): row.floor for row in table}
    assert floors["inf"] == -1
    assert all(f == 0 for name, f in floors.items() if name != "inf")


def test_normal_form_identity(w9: GroupSpec, rng: random.Random) -> None:
    normal = normalize_W(w9)
    assert normal.b == w9.a ** 2
    for _ in range(20):
        assert normal.check(random_ratfn(w9.field, rng, 2), random_ratfn(w9.field, rng, 2))


def test_verdicts_do_not_depend_on_the_uniformizer(f9: FqField) -> None:
    b = parse_ratfn(f9, "T*(T-1)") ** 2
    for place, other in [("T", "T*(T+1)"), ("T-1", "2*(T-1)/T"), ("T+1", "(T+1)/(T^2+1)")]:
        v = Place.parse(f9, place)
        default = diff_ratio(b, v, 1)
        swapped = diff_ratio(b, v, 1, uniformizer=parse_ratfn(f9, other))
        assert is_pminus1_power(default) == is_pminus1_power(swapped)


def test_validate_detects_inconsistent_tables(w9: GroupSpec) -> None:
    report = tamagawa_number(w9)
    report.validate()
    with pytest.raises(WoundError):
        dataclasses.replace(report, N=0).validate()
    with pytest.raises(WoundError):
        dataclasses.replace(report, l=3).validate()
    with pytest.raises(WoundError):
        dataclasses.replace(report, tau=Fraction(3)).validate()


def test_validate_rechecks_every_l_place(w9: GroupSpec) -> None:
    report = tamagawa_number(w9)
    row = report.l_places[0]
    for broken in (dataclasses.replace(row, m=row.m + 1), dataclasses.replace(row, m=3, ord_db=5),
                   dataclasses.replace(row, verdict=not row.verdict)):
        with pytest.raises(WoundError):
            dataclasses.replace(report, l_places=[broken] + report.l_places[1:]).validate()


def test_tamagawa_needs_w(v9: GroupSpec, u9: GroupSpec) -> None:
    for spec in (v9, u9):
        with pytest.raises(KindUnsupported):
            tamagawa_number(spec)


def test_characteristic_two() -> None:
    with pytest.raises(InfinitePointSet):
        tamagawa_number(make_group(GroupKind.W, (2, 2), "T*(T-1)"))
    F = get_field(2, 2)
    with pytest.raises(UnsupportedCharacteristic, match="infinite"):
        compute_l(parse_ratfn(F, "T*(T-1)"), 2)


#----------------#
# counterexample #
#----------------#

def test_counterexample_with_trivial_sha(u9: GroupSpec) -> None:
    report = counterexample_report(u9)
    assert report.factor == 9
    assert report.counterexample
    assert not report.factor_is_lower_bound
    assert report.assumptions == [SHA_W_TRIVIAL]
    assert report.to_dict()["factor"] == "9/1"
    assert "fails" in report.statement


def test_counterexample_without_sha_assumption(u9: GroupSpec) -> None:
    report = counterexample_report(u9, sha_w_trivial=False, tau_w=9)
    assert report.factor_is_lower_bound
    assert report.assumptions == []
    assert ">=" in report.statement


def test_trivial_tau_is_not_a_counterexample(u9: GroupSpec) -> None:
    report = counterexample_report(u9, tau_w=1)
    assert not report.counterexample
    assert report.statement == "no counterexample detected"


def test_counterexample_for_uzeta_p3() -> None:
    spec = make_group(GroupKind.UZETA, (3, 2), "T*(T-1)")
    assert counterexample_report(spec).factor == 9


def test_counterexample_errors(v9: GroupSpec) -> None:
    with pytest.raises(KindUnsupported):
        counterexample_report(v9)
    with pytest.raises(UnsupportedCharacteristic):
        counterexample_report(make_group(GroupKind.UZETA, (2, 2), "T*(T-1)"))
