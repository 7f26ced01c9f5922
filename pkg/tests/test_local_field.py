import itertools
import random

import galois
import numpy as np
import pytest

from wound_flow.field_core import FqField, get_field
from wound_flow.function_field import Place, RatFn, enumerate_places, parse_ratfn, random_ratfn, valuation
from wound_flow.local_field import (LaurentLocal, LocalRing, NoConvergence, NotFound, Verdict, Window, WindowInvalid,
                                    artin_schreier_map, default_window, expand, identity_map, image_member,
                                    local_nontrivial_witness, newton_solve, w_map)


def _nonzero(field: FqField, rng: random.Random) -> RatFn:
    while True:
        x = random_ratfn(field, rng, 2)
        if not x.is_zero():
            return x


#-----------#
# expansion #
#-----------#

def test_expand_simple(f9: FqField, place_t: Place) -> None:
    z = expand(parse_ratfn(f9, "T+1"), place_t, 3)
    assert (z.minval, z.prec) == (0, 3)
    assert [z.coefficient(i) for i in range(3)] == [1, 1, 0]
    inf = Place.parse(f9, "inf")
    w = expand(parse_ratfn(f9, "T"), inf, 2)
    assert w.valuation() == -1
    assert w.coefficient(-1) == 1 and w.coefficient(0) == 0


def test_expansion_text(f9: FqField, place_t: Place) -> None:
    z = expand(parse_ratfn(f9, "1/T + 2"), place_t, 2)
    assert str(z) == "v=T; u^-1*(1 + 2*u) + O(u^2)"


def test_expansion_is_a_ring_map(f9: FqField, rng: random.Random) -> None:
    quadratic = next(v for v in enumerate_places(f9, 2) if v.degree == 2)
    places = [Place.parse(f9, "T"), Place.parse(f9, "T-1"), Place.parse(f9, "inf"), quadratic]
    prec = 4
    for _ in range(30):
        x, y = _nonzero(f9, rng), _nonzero(f9, rng)
        for v in places:
            ex, ey = expand(x, v, prec), expand(y, v, prec)
            if not (x + y).is_zero():
                assert (ex + ey).agrees_with(expand(x + y, v, prec + 8))
            assert (ex * ey).agrees_with(expand(x * y, v, prec + 8))
            assert ex.inverse().agrees_with(expand(x.inverse(), v, prec + 8))
            assert ex.frobenius().agrees_with(expand(x ** 3, v, 3 * prec + 8))


def test_higher_precision_agrees_on_overlap(f9: FqField, rng: random.Random) -> None:
    v = Place.parse(f9, "T-1")
    for _ in range(20):
        x = _nonzero(f9, rng)
        assert expand(x, v, 3).agrees_with(expand(x, v, 9))


def test_local_ring_embeds_constants(f9: FqField, place_t: Place) -> None:
    ring = LocalRing(place_t, 5)
    assert ring.one().coefficient(0) == 1
    assert ring.embed(f9.element(4)).coefficient(0) == 4
    assert ring.embed(RatFn.variable(f9)).valuation() == 1


#--------#
# Newton #
#--------#

def test_newton_solves_artin_schreier(f9: FqField, place_t: Place) -> None:
    g = artin_schreier_map(f9, 2, -1)
    t = expand(parse_ratfn(f9, "T"), place_t, 8)
    x = newton_solve(g, t)
    assert g.evaluate_local(place_t, (x,), 8).agrees_with(t)


def test_newton_random_right_hand_sides(f9: FqField, rng: random.Random) -> None:
    g = w_map(parse_ratfn(f9, "T*(T-1)"))
    v = Place.parse(f9, "T+1")
    for _ in range(20):
        x = _nonzero(f9, rng)
        o = valuation(x, v)
        t = expand(x, v, 8).shift(1 - o)
        solution = newton_solve(g, t)
        zero = LaurentLocal.zero(v, t.prec)
        assert g.evaluate_local(v, (solution, zero), t.prec).agrees_with(t)


def test_newton_zero_and_bad_input(f9: FqField, place_t: Place) -> None:
    g = artin_schreier_map(f9, 1, 1)
    assert newton_solve(g, LaurentLocal.zero(place_t, 5)).is_zero()
    with pytest.raises(NoConvergence):
        newton_solve(g, expand(parse_ratfn(f9, "1 + T"), place_t, 5))


#-----------------#
# image decisions #
#-----------------#

def _image_rows(g, v: Place, window: Window, low: int) -> list[list[int]]:
    """F_p coordinates (exponents low..0) of g on every monomial tail the window allows."""
    K = v.residue_field.field
    p = K.p
    top = 0
    for term in g.terms:
        if term.var == 1:
            top = -((valuation(term.coeff, v) - 1) // p ** term.exponent)
    ranges = [(window.low, 1), (window.low, min(window.high, top))]
    rows = []
    for var, (lo, hi) in enumerate(ranges):
        for j in range(lo, hi):
            for digit in range(K.m):
                mono = LaurentLocal.monomial(v, p ** digit, j, 1)
                zero = LaurentLocal.zero(v, 1)
                inputs = (mono, zero) if var == 0 else (zero, mono)
                rows.append(_coordinates(g.evaluate_local(v, inputs, 1), K, low))
    return rows


def _coordinates(z: LaurentLocal, K: FqField, low: int) -> list[int]:
    out = []
    for e in range(low, 1):
        out += K.digits(z.coefficient(e))
    return out


def _in_span(p: int, rows: list[list[int]], target: list[int]) -> bool:
    GF = galois.GF(p)
    M = GF(np.array(rows, dtype=int))
    augmented = GF(np.array(rows + [target], dtype=int))
    return np.linalg.matrix_rank(augmented) == np.linalg.matrix_rank(M)


def test_image_member_matches_span_oracle_p3(f9: FqField, place_t: Place) -> None:
    g = w_map(parse_ratfn(f9, "T*(T-1)"))
    window = Window(-3, 9)
    lam = expand(parse_ratfn(f9, "1/T"), place_t, 4)
    decision = image_member(g, lam, window)
    assert decision.verdict != Verdict.INCONCLUSIVE
    low = 3 * window.low - 2
    rows = _image_rows(g, place_t, window, low)
    expected = _in_span(3, rows, _coordinates(lam, f9, low))
    assert (decision.verdict == Verdict.MEMBER) == expected


@pytest.mark.parametrize("place", ["T", "T+1"])
def test_image_member_matches_span_oracle_p2(place: str) -> None:
    F = get_field(2, 1)
    v = Place.parse(F, place)
    g = w_map(parse_ratfn(F, "T*(T+1)"))
    window = default_window(g, v)
    low = 2 * window.low - 2
    rows = _image_rows(g, v, window, low)
    verdicts = set()
    for bits in itertools.product(range(2), repeat=1 - window.low):
        lam = LaurentLocal.build(v, window.low, 1, list(bits))
        decision = image_member(g, lam, window)
        verdicts.add(decision.verdict)
        if decision.verdict == Verdict.INCONCLUSIVE:
            continue
        assert (decision.verdict == Verdict.MEMBER) == _in_span(2, rows, _coordinates(lam, F, low))
    assert Verdict.MEMBER in verdicts and Verdict.NON_MEMBER in verdicts


def test_image_member_matches_exhaustive_enumeration() -> None:
    F = get_field(2, 1)
    v = Place.parse(F, "T")
    g = w_map(parse_ratfn(F, "T*(T+1)"))
    window = Window(-3, 7)
    images = set()
    for xbits in itertools.product(range(2), repeat=4):
        for ybits in itertools.product(range(2), repeat=3):
            x = LaurentLocal.build(v, -3, 1, list(xbits))
            y = LaurentLocal.build(v, -3, 1, list(ybits) + [0])
            z = g.evaluate_local(v, (x, y), 1)
            images.add(tuple(z.coefficient(e) for e in range(-8, 1)))
    for bits in itertools.product(range(2), repeat=4):
        lam = LaurentLocal.build(v, -3, 1, list(bits))
        decision = image_member(g, lam, window)
        if decision.verdict == Verdict.INCONCLUSIVE:
            continue
        key = tuple(lam.coefficient(e) for e in range(-8, 1))
        assert (decision.verdict == Verdict.MEMBER) == (key in images)


def test_member_witness_reproduces_lambda(f9: FqField, place_t: Place) -> None:
    g = w_map(parse_ratfn(f9, "T*(T-1)"))
    x = LaurentLocal.build(place_t, -2, 6, [1, 0, 2, 1, 0, 0, 1, 0])
    y = LaurentLocal.build(place_t, -1, 6, [2, 1, 0, 0, 0, 0, 0])
    lam = g.evaluate_local(place_t, (x, y), 6)
    decision = image_member(g, lam)
    assert decision.verdict == Verdict.MEMBER
    wx, wy = decision.witness
    assert g.evaluate_local(place_t, (wx, wy), lam.prec).agrees_with(lam)


def test_ball_is_in_the_image(f9: FqField, place_t: Place) -> None:
    g = w_map(parse_ratfn(f9, "T*(T-1)"))
    lam = expand(parse_ratfn(f9, "T^2 + T"), place_t, 6)
    decision = image_member(g, lam)
    assert decision.verdict == Verdict.MEMBER
    assert decision.witness[1].is_zero()


def test_certificate_kills_the_image(f9: FqField, place_t: Place, rng: random.Random) -> None:
    g = w_map(parse_ratfn(f9, "T*(T-1)"))
    window = default_window(g, place_t)
    mu = local_nontrivial_witness(g, place_t, window)
    decision = image_member(g, mu, window)
    assert decision.verdict == Verdict.NON_MEMBER
    functional = decision.certificate
    assert functional(mu) != 0
    for _ in range(100):
        x = LaurentLocal.build(place_t, window.low, 1, [rng.randrange(9) for _ in range(1 - window.low)])
        y = LaurentLocal.build(place_t, window.low, 1, [rng.randrange(9) for _ in range(-window.low)] + [0])
        assert functional(g.evaluate_local(place_t, (x, y), 1)) == 0


def test_enlarging_the_window_keeps_the_verdict(f9: FqField, place_t: Place) -> None:
    g = w_map(parse_ratfn(f9, "T*(T-1)"))
    for text in ["1/T", "1/T^2", "z/T", "1/T + z/T^3"]:
        lam = expand(parse_ratfn(f9, text), place_t, 4)
        first = image_member(g, lam)
        second = image_member(g, lam, first.window.enlarged(3, 3))
        if Verdict.INCONCLUSIVE not in (first.verdict, second.verdict):
            assert first.verdict == second.verdict


def test_window_and_precision_errors(f9: FqField, place_t: Place) -> None:
    g = w_map(parse_ratfn(f9, "T*(T-1)"))
    with pytest.raises(WindowInvalid):
        image_member(g, expand(parse_ratfn(f9, "1/T"), place_t, 4), Window(3, 1))
    with pytest.raises(WindowInvalid):
        Window(2, 2)
    lam = expand(parse_ratfn(f9, "1/T"), place_t, 0)
    assert image_member(g, lam).verdict == Verdict.INCONCLUSIVE


def test_surjective_map_has_no_witness(f9: FqField, place_t: Place) -> None:
    with pytest.raises(NotFound):
        local_nontrivial_witness(identity_map(f9), place_t)
    with pytest.raises(NotFound):
        local_nontrivial_witness(identity_map(f9), place_t, Window(-6, 20))


def test_witness_in_characteristic_two() -> None:
    F = get_field(2, 2)
    g = w_map(parse_ratfn(F, "T*(T-1)"))
    v = Place.parse(F, "T-1")
    mu = local_nontrivial_witness(g, v)
    assert image_member(g, mu, default_window(g, v)).verdict == Verdict.NON_MEMBER
