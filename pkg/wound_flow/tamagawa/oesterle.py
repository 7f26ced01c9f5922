import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction

from wound_flow.errors import WoundError
from wound_flow.field_core import FqElem, is_pminus1_power
from wound_flow.function_field import (Place, PreconditionViolated, RatFn, diff_ratio, differential_support,
                                       ord_differential)
from wound_flow.groups import GroupKind, GroupSpec, KindUnsupported
from wound_flow.rational_points import enumerate_points


class UnsupportedCharacteristic(WoundError):
    pass


GENUS = 0


@dataclass(frozen=True)
class NormalizedW:
    """W_a written as Y^p = X + b X^p through X -> -X/a, with b = a^(p-1).

    g(-a X, Y) = -a (X + b X^p - Y^p) holds identically.
    """
    a: RatFn
    b: RatFn
    p: int

    def substitution(self) -> str:
        return f"X -> -X/({self.a})"

    def check(self, x: RatFn, y: RatFn) -> bool:
        """Evaluate both sides of the identity at (x, y)."""
        p, a = self.p, self.a
        left = -a * x + (-a * x) ** p + a * y ** p
        right = -a * (x + self.b * x ** p - y ** p)
        return left == right


def normalize_W(spec: GroupSpec) -> NormalizedW:
    """Normal form Y^p = X + b X^p of W_a.

    :raises KindUnsupported: When spec is not of kind W.
    :rtype: NormalizedW
    """
    if spec.kind != GroupKind.W:
        raise KindUnsupported(f"Only W_a has the normal form Y^p = X + b X^p, got {spec}.")
    return NormalizedW(spec.a, spec.a ** (spec.p - 1), spec.p)


@dataclass(frozen=True)
class NPlace:
    place: Place
    ord_db: int
    floor: int

    def to_dict(self) -> dict:
        return {"place": str(self.place), "ordDb": self.ord_db, "floor": self.floor, "degree": self.place.degree}


@dataclass(frozen=True)
class LPlace:
    place: Place
    ord_db: int
    m: int
    residue: FqElem
    verdict: bool

    def to_dict(self) -> dict:
        return {"place": str(self.place), "m": self.m, "residue": str(self.residue), "verdict": self.verdict}


def compute_N(b: RatFn, p: int) -> tuple[int, list[NPlace]]:
    """N = sum over places of floor(ord_v(db) / (p(p-1))) deg(v).

    Only supp(db) and infinity can contribute.

    :raises ExactDifferentialZero: When db = 0.
    :return: N and the per-place table.
    :rtype: tuple[int, list[NPlace]]
    """
    table = []
    for v in differential_support(b):
        o = ord_differential(b, v)
        table.append(NPlace(v, o, o // (p * (p - 1))))
    N = sum(row.floor * row.place.degree for row in table)
    logging.debug(f"N = {N} from {[(str(r.place), r.ord_db) for r in table]}.")
    return N, table


def compute_l(b: RatFn, p: int) -> tuple[int, list[LPlace]]:
    """Number of places with ord_v(db) + 1 = m(p-1) whose leading coefficient of db is a (p-1)st power.

    The leading coefficient is read off as the residue of pi^(1-m(p-1)) m^-1 db/dpi.

    :raises UnsupportedCharacteristic: For p = 2, where every place with ord_v(db) even qualifies with m odd
        and a residue that is trivially a first power, so l is not finite.
    :raises PreconditionViolated: When a candidate place has m divisible by p.
    :raises ExactDifferentialZero: When db = 0.
    :return: l and the candidate places with their verdicts.
    :rtype: tuple[int, list[LPlace]]
    """
    if p == 2:
        raise UnsupportedCharacteristic("For p = 2 almost every place has ord_v(db) + 1 = 1 * (p - 1) and counts, "
                                        "so l is infinite.")
    places = []
    for v in differential_support(b):
        o = ord_differential(b, v)
        if (o + 1) % (p - 1) != 0:
            continue
        m = (o + 1) // (p - 1)
        if m % p == 0:
            raise PreconditionViolated(f"m = {m} at {v} is divisible by p = {p}.")
        r = diff_ratio(b, v, m)
        places.append(LPlace(v, o, m, r, is_pminus1_power(r)))
    l = sum(1 for row in places if row.verdict)
    logging.debug(f"l = {l} over candidates {[str(r.place) for r in places]}.")
    return l, places


@dataclass
class TamagawaReport:
    spec: GroupSpec
    b: RatFn
    N: int
    l: int
    n_places: list[NPlace]
    l_places: list[LPlace]
    point_count: int
    tau: Fraction
    assumptions: list[str] = field(default_factory=list)

    def validate(self) -> None:
        """Recompute N, the l-place conditions and tau from the stored tables."""
        p, q = self.spec.p, self.spec.q
        N = sum(row.floor * row.place.degree for row in self.n_places)
        if N != self.N or any(row.floor != row.ord_db // (p * (p - 1)) for row in self.n_places):
            raise WoundError(f"N table inconsistent for {self.spec}.")
        for row in self.l_places:
            if row.ord_db + 1 != row.m * (p - 1) or math.gcd(row.m, p) != 1:
                raise WoundError(f"l-place {row.place} of {self.spec} violates ord(db) + 1 = m(p - 1) "
                                 "with gcd(m, p) = 1.")
            if row.verdict != is_pminus1_power(row.residue):
                raise WoundError(f"l-place {row.place} of {self.spec} has a verdict that does not match its residue.")
        if self.l != sum(1 for row in self.l_places if row.verdict):
            raise WoundError(f"l table inconsistent for {self.spec}.")
        if self.tau != Fraction(q) ** (1 - GENUS + self.N) * p ** self.l / self.point_count or self.tau <= 0:
            raise WoundError(f"tau inconsistent for {self.spec}.")

    @property
    def tau_text(self) -> str:
        return f"{self.tau.numerator}/{self.tau.denominator}"

    def to_dict(self) -> dict:
        return {
            "p": self.spec.p,
            "q": self.spec.q,
            "a": str(self.spec.a),
            "b": str(self.b),
            "N": self.N,
            "l": self.l,
            "nPlaces": [row.to_dict() for row in self.n_places],
            "lPlaces": [row.to_dict() for row in self.l_places],
            "pointCount": self.point_count,
            "tau": self.tau_text,
            "assumptions": list(self.assumptions),
        }


def tamagawa_number(spec: GroupSpec, threads: int = 1) -> TamagawaReport:
    """tau(W) = q^(1 - g + N) p^l / #W(k) for W_a over F_q(T), g = 0.

    :param spec: Group of kind W.
    :type spec: GroupSpec
    :param threads: Workers for the point enumeration, defaults to 1
    :type threads: int, optional
    :raises KindUnsupported: When spec is not of kind W.
    :raises InfinitePointSet: For p = 2.
    :rtype: TamagawaReport
    """
    normal = normalize_W(spec)
    points = enumerate_points(spec, threads=threads)
    N, n_places = compute_N(normal.b, spec.p)
    l, l_places = compute_l(normal.b, spec.p)
    tau = Fraction(spec.q) ** (1 - GENUS + N) * spec.p ** l / len(points)
    report = TamagawaReport(spec, normal.b, N, l, n_places, l_places, len(points), tau)
    report.validate()
    logging.info(f"tau({spec}) = {tau} with N = {N}, l = {l}, #W(k) = {len(points)}.")
    return report
