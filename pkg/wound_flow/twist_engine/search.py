import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from wound_flow.cohomology import delta_closed
from wound_flow.errors import ParameterError, WoundError
from wound_flow.function_field import Place, RatFn, approximate, enumerate_places, parse_ratfn, valuation
from wound_flow.groups import GroupKind, GroupSpec, KindUnsupported, make_group, zeta_in
from wound_flow.local_field import (LaurentLocal, LinearFunctional, LocalRing, NoConvergence, Verdict, Window,
                                    artin_schreier_map, default_window, image_member, local_nontrivial_witness,
                                    newton_solve)
from wound_flow.rational_points import enumerate_points, run_scan
from wound_flow.tamagawa import SHA_W_TRIVIAL

DEFAULT_PRECISION = 12
VERIFY_ENLARGEMENT = (2, 2)


class WindowTooSmall(WoundError):
    pass


class SeedFailure(WoundError):
    pass


#-----------------#
# per-place data  #
#-----------------#

@dataclass
class PlaceObstruction:
    """A point (c_v, d_v) of V_a(k_v) with c_v != 0 whose lift to U_beta is blocked at v.

    beta_v is the local target handed to approximation: every beta congruent to it modulo
    u^1 has delta_beta(c_v, d_v) outside g(k_v^2).
    """
    place: Place
    c: LaurentLocal
    d: LaurentLocal
    mu: LaurentLocal
    beta_v: LaurentLocal
    coset: str
    window: Window
    certificate: LinearFunctional | None = None

    def to_dict(self) -> dict:
        return {
            "place": str(self.place),
            "point": {"c": self.c.to_dict(), "d": self.d.to_dict()},
            "mu": self.mu.to_dict(),
            "betaLocal": self.beta_v.to_dict(),
            "forbiddenCoset": self.coset,
            "window": self.window.to_dict(),
            "certificate": self.certificate.to_dict() if self.certificate is not None else None,
        }

    @classmethod
    def from_dict(cls, base, data: dict) -> "PlaceObstruction":
        place = Place.parse(base, data["place"])
        certificate = data.get("certificate")
        return cls(place,
                   LaurentLocal.from_dict(base, data["point"]["c"]),
                   LaurentLocal.from_dict(base, data["point"]["d"]),
                   LaurentLocal.from_dict(base, data["mu"]),
                   LaurentLocal.from_dict(base, data["betaLocal"]),
                   data["forbiddenCoset"],
                   Window(int(data["window"]["low"]), int(data["window"]["high"])),
                   LinearFunctional.from_dict(place, certificate) if certificate else None)


@dataclass
class TwistCertificate:
    """beta with an obstructed place for every v in S and the resulting bound tau(U_beta)/tau(U) <= #V_a(k) p^-|S|.

    The bound divides out tau(U) = tau(W) tau(V) and bounds the kernel on Sha by #Sha(W), which is
    taken to be trivial. The matching growth of Sha(U_beta) is not certified here.
    """
    spec: GroupSpec
    places: list[Place]
    beta: RatFn
    per_place: list[PlaceObstruction]
    point_count: int
    bound: Fraction
    precision: int = DEFAULT_PRECISION
    assumptions: list[str] = field(default_factory=lambda: [SHA_W_TRIVIAL])

    def to_dict(self) -> dict:
        return {
            "group": self.spec.to_dict(),
            "m": self.spec.field.m,
            "places": [str(v) for v in self.places],
            "beta": str(self.beta),
            "perPlace": [o.to_dict() for o in self.per_place],
            "pointCountV": self.point_count,
            "bound": f"{self.bound.numerator}/{self.bound.denominator}",
            "precision": self.precision,
            "assumptions": list(self.assumptions),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TwistCertificate":
        group = data["group"]
        spec = make_group(group["kind"], (int(group["p"]), int(data["m"])), group["a"])
        base = spec.field
        return cls(spec,
                   [Place.parse(base, v) for v in data["places"]],
                   parse_ratfn(base, data["beta"]),
                   [PlaceObstruction.from_dict(base, o) for o in data["perPlace"]],
                   int(data["pointCountV"]),
                   Fraction(data["bound"]),
                   int(data.get("precision", DEFAULT_PRECISION)),
                   list(data.get("assumptions", [SHA_W_TRIVIAL])))


#--------------#
# local pieces #
#--------------#

def seed_point(spec: GroupSpec, v: Place, prec: int = DEFAULT_PRECISION) -> tuple[LaurentLocal, LaurentLocal]:
    """(c, d) on V_a over k_v with c a unit.

    d = u^e with e >= 1 the least exponent making a d^(p^2) lie in the ball, then
    c = 1 + x with x - x^(p^2) = a d^(p^2) from Newton's iteration.

    :raises SeedFailure: When the iteration does not converge.
    """
    p = spec.p
    Q = p * p
    ring = LocalRing(v, prec)
    e = max(1, -((valuation(spec.a, v) - 1) // Q))
    d = LaurentLocal.monomial(v, 1, e, prec + e)
    t = ring.embed(spec.a) * d ** Q
    try:
        x = newton_solve(artin_schreier_map(spec.field, 2, -1), t)
    except NoConvergence as err:
        raise SeedFailure(f"No point of V_a over k_{v} from the seed d = u^{e}: {err}") from err
    c = x + 1
    if c.is_zero():
        raise SeedFailure(f"Seed at {v} produced c = 0.")
    return c, d


def _scaling(spec: GroupSpec, ring: LocalRing, c: LaurentLocal) -> tuple[LaurentLocal, str]:
    """Unit s with delta_beta(c, d) = s beta (+ c^3 for the descended group), and the forbidden coset it defines."""
    p = spec.p
    if spec.kind == GroupKind.U:
        return c ** p * 2, "(2 c_v^p)^-1 g(k_v^2)"
    if spec.kind == GroupKind.UZETA:
        zeta = zeta_in(spec, ring)
        return (zeta ** p - zeta) * c ** p, "((zeta^p - zeta) c_v^p)^-1 g(k_v^2)"
    return c * c, "c_v^-2 g(k_v^2) + c_v"


def local_target(spec: GroupSpec, v: Place, window: Window | None = None,
                 prec: int = DEFAULT_PRECISION) -> PlaceObstruction:
    """Seed point, witness mu outside g(k_v^2), and the local target beta_v at one place.

    :raises SeedFailure: When no point with c_v != 0 is found.
    :raises NotFound: When the window admits no certified witness.
    """
    ring = LocalRing(v, prec)
    c, d = seed_point(spec, v, prec)
    g = spec.g_map()
    if window is None:
        window = default_window(g, v)
    mu = local_nontrivial_witness(g, v, window)
    scale, coset = _scaling(spec, ring, c)
    beta_v = mu * scale.inverse()
    if spec.kind == GroupKind.UDESCENDED:
        beta_v = beta_v + c
    logging.info(f"Place {v}: c_v = {c}, mu = {mu}, forbidden coset {coset}.")
    return PlaceObstruction(v, c, d, mu, beta_v, coset, window)


#--------#
# search #
#--------#

def _check_places(spec: GroupSpec, places: list[Place]) -> None:
    if not spec.kind.is_extension:
        raise KindUnsupported(f"Twists are searched for extensions of V_a by W_a, not {spec.kind.value}.")
    if not places:
        raise ParameterError("The set S of obstructed places must be nonempty.")
    if len(set(places)) != len(places):
        raise ParameterError(f"Places in S must be pairwise distinct, got {[str(v) for v in places]}.")
    for v in places:
        if v.base != spec.field:
            raise ParameterError(f"Place {v} lives over F_{v.base.q}, not F_{spec.q}.")


def verify_obstruction(spec: GroupSpec, beta: Any, obstruction: PlaceObstruction, prec: int,
                       enlargement: tuple[int, int] = VERIFY_ENLARGEMENT):
    """Decide delta_beta(c_v, d_v) against g(k_v^2) at the stored window enlarged by `enlargement`."""
    ring = LocalRing(obstruction.place, prec)
    delta = delta_closed(spec, beta, (obstruction.c, obstruction.d), ring=ring)
    window = obstruction.window.enlarged(*enlargement)
    return delta.rep, image_member(spec.g_map(), delta.rep, window)


def twist_search(spec: GroupSpec,
                 places: list[Place],
                 window: Window | tuple[int, int] | None = None,
                 prec: int = DEFAULT_PRECISION,
                 point_count: int | None = None,
                 threads: int = 1) -> TwistCertificate:
    """Find beta in k such that every v in S obstructs U_beta(k_v) -> V_a(k_v).

    Each place is handled independently: a point (c_v, d_v) with c_v != 0, a class mu_v
    outside g(k_v^2), and beta_v solving delta_beta_v(c_v, d_v) = mu_v. Weak approximation
    joins the beta_v modulo u^1, which keeps delta_beta(c_v, d_v) in the class of mu_v.

    :param spec: Extension group U_a, U_a^zeta or the descended U_a.
    :type spec: GroupSpec
    :param places: The set S, nonempty and pairwise distinct.
    :type places: list[Place]
    :param window: Tail window for the local witnesses, defaults to the adaptive window per place
    :type window: Window | tuple[int, int] | None, optional
    :param prec: Working precision of the local computations, defaults to DEFAULT_PRECISION
    :type prec: int, optional
    :param point_count: #V_a(k) if already known, enumerated otherwise
    :type point_count: int | None, optional
    :param threads: Workers for the per-place searches, defaults to 1
    :type threads: int, optional
    :raises ParameterError: For an empty S or repeated places.
    :raises WindowTooSmall: When a re-verification is inconclusive.
    :raises SeedFailure: When no usable point of V_a(k_v) is found.
    :rtype: TwistCertificate
    """
    _check_places(spec, places)
    if window is not None and not isinstance(window, Window):
        window = Window(*window)
    logging.info(f"Twist search for {spec} over S = {[str(v) for v in places]}.")

    obstructions = run_scan(len(places), lambda i: [local_target(spec, places[i], window, prec)], threads)
    beta = approximate([(o.place, o.beta_v, 1) for o in obstructions])
    logging.info(f"Approximation gave beta = {beta}.")

    for obstruction in obstructions:
        rep, decision = verify_obstruction(spec, beta, obstruction, prec)
        if decision.verdict == Verdict.INCONCLUSIVE:
            raise WindowTooSmall(f"Cannot certify delta_beta({obstruction.c}, {obstruction.d}) at {obstruction.place}: "
                                 f"{decision.reason}")
        if decision.verdict == Verdict.MEMBER:
            raise WoundError(f"delta_beta at {obstruction.place} is {rep}, inside g(k_v^2); approximation lost the "
                             f"class of mu.")
        obstruction.certificate = decision.certificate

    if point_count is None:
        point_count = len(enumerate_points(spec.with_kind(GroupKind.V), threads))
    bound = Fraction(point_count, spec.p ** len(places))
    logging.info(f"Certificate for {spec}: beta = {beta}, bound tau(U_beta)/tau(U) <= {bound}.")
    return TwistCertificate(spec, list(places), beta, obstructions, point_count, bound, prec)


#---------------#
# place choices #
#---------------#

def places_needed(point_count: int, p: int, epsilon: Fraction | float) -> int:
    """Least s with point_count / p^s < epsilon."""
    epsilon = Fraction(epsilon)
    if epsilon <= 0:
        raise ParameterError(f"epsilon must be positive, got {epsilon}.")
    s = 0
    while Fraction(point_count, p ** s) >= epsilon:
        s += 1
    return s


def first_places(spec: GroupSpec, count: int, include_infinity: bool = False) -> list[Place]:
    """The first `count` places in the standard order, smallest degree first."""
    out = list(itertools.islice(enumerate_places(spec.field, 8, include_infinity=include_infinity), count))
    if len(out) < count:
        raise ParameterError(f"Not enough places of degree <= 8 for |S| = {count}.")
    return out


def nested_search(spec: GroupSpec, places: list[Place], prec: int = DEFAULT_PRECISION,
                  threads: int = 1) -> list[TwistCertificate]:
    """Certificates for S_1 subset S_2 subset ..., one place added at a time; the bounds decrease by p each step."""
    point_count = len(enumerate_points(spec.with_kind(GroupKind.V), threads))
    return [twist_search(spec, places[:s], prec=prec, point_count=point_count, threads=threads)
            for s in range(1, len(places) + 1)]
