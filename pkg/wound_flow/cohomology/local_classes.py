import logging
from dataclasses import dataclass, field
from typing import Any

from wound_flow.errors import WoundError
from wound_flow.function_field import Place, RatFn, differential_support, support, valuation
from wound_flow.groups import GroupKind, GroupSpec, KindUnsupported
from wound_flow.local_field import (AdditiveMap, Decision, LaurentLocal, Verdict, Window, default_window, expand,
                                    image_member, local_nontrivial_witness)
from wound_flow.rational_points import rational_functions, solve_frobenius_linear


class TrivialClass(WoundError):
    pass


@dataclass(frozen=True)
class CohClassRep:
    """A representative of a class in k/g(k^2) or k_v/g(k_v^2).

    Classes are compared only through solvability of g(x, y) = difference, never by
    equality of representatives.
    """
    kind: str
    rep: Any
    modulus: str

    @classmethod
    def for_spec(cls, spec: GroupSpec, rep: Any, local: bool = False) -> "CohClassRep":
        kind = "Wplus" if spec.kind in (GroupKind.UZETA, GroupKind.WPLUS) else "W"
        if spec.kind == GroupKind.V:
            kind = "V"
        letter = "f" if kind == "V" else "g"
        modulus = f"k_v/{letter}(k_v^2)" if local else f"k/{letter}(k^2)"
        return cls(kind, rep, modulus)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "rep": str(self.rep), "modulus": self.modulus}


def _map_for(spec: GroupSpec) -> AdditiveMap:
    return spec.f_map() if spec.kind == GroupKind.V else spec.g_map()


def bad_places(spec: GroupSpec, lam: RatFn) -> list[Place]:
    """Places outside of which lam is a local image element: poles of lam, supp(a), supp(da), infinity.

    Away from them a is a unit and lam is integral, so the residue map is onto and Newton lifts the rest.
    """
    places = set(support(spec.a)) | set(differential_support(spec.a))
    if not lam.is_zero():
        places |= {v for v in support(lam) if valuation(lam, v) < 0}
    return sorted(places, key=Place.sort_key)


def global_preimage_search(spec: GroupSpec, lam: RatFn, height: int = 1) -> tuple[RatFn, RatFn] | None:
    """(x, y) in k^2 with g(x, y) = lam and height(y) <= height, or None.

    For each y the remaining equation x + eps x^Q = lam - c y^Q is solved exactly.
    """
    shape = _map_for(spec).frobenius_shape()
    c = shape.c
    for y in rational_functions(spec.field, height):
        t = lam - c * y ** shape.q_power if not y.is_zero() else lam
        solutions = solve_frobenius_linear(t, shape.eps, shape.q_power)
        if solutions:
            return solutions[0], y
    return None


@dataclass
class ClassRelation:
    status: str
    place: Place | None = None
    preimage: tuple | None = None
    decisions: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {"status": self.status}
        if self.place is not None:
            out["place"] = str(self.place)
        if self.preimage is not None:
            out["preimage"] = [str(t) for t in self.preimage]
        return out


def class_relation(spec: GroupSpec, rep1: RatFn, rep2: RatFn, height: int = 1,
                   places: list[Place] | None = None) -> ClassRelation:
    """Compare two global classes: "equal (certified)", "distinct at place v (certified locally)" or
    "undetermined at height H".
    """
    g = _map_for(spec)
    difference = rep1 - rep2
    if difference.is_zero():
        return ClassRelation("equal (certified)", preimage=(RatFn.zero(spec.field), RatFn.zero(spec.field)))
    preimage = global_preimage_search(spec, difference, height)
    if preimage is not None:
        return ClassRelation("equal (certified)", preimage=preimage)
    decisions = {}
    for v in places or bad_places(spec, difference):
        decision = image_member(g, expand(difference, v, 1))
        decisions[v] = decision
        if decision.verdict == Verdict.NON_MEMBER:
            return ClassRelation("distinct at place v (certified locally)", place=v, decisions=decisions)
    return ClassRelation(f"undetermined at height {height}", decisions=decisions)


@dataclass
class LocalWitness:
    """An adelic class that is lam_v at v and trivial elsewhere, with its local non-membership certificate."""
    spec: GroupSpec
    place: Place
    lam: LaurentLocal
    decision: Decision
    height: int
    candidates: int
    global_lifts: list[RatFn] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "group": str(self.spec),
            "place": str(self.place),
            "lambda": self.lam.to_dict(),
            "decision": self.decision.to_dict(),
            "adelicClass": f"lambda at {self.place}, 0 elsewhere",
            "evidence": {"height": self.height, "candidates": self.candidates,
                         "globalLifts": [str(t) for t in self.global_lifts]},
        }


def che1_witness(spec: GroupSpec, v: Place, window: Window | tuple[int, int] | None = None,
                 candidate: LaurentLocal | None = None, height: int = 0) -> LocalWitness:
    """Local class at v that is nontrivial in k_v/g(k_v^2), packaged as an adelic class.

    Evidence for the global non-lifting: no lam in k of height <= height is congruent to
    lam_v at v and locally trivial at every other bad place.

    :param spec: Group of kind W or Wplus.
    :type spec: GroupSpec
    :param v: The place.
    :type v: Place
    :param window: Tail window for the certificate, defaults to the adaptive window
    :param candidate: Class to use instead of searching one, defaults to None
    :type candidate: LaurentLocal | None, optional
    :param height: Height bound for the global-lift search, defaults to 0
    :type height: int, optional
    :raises TrivialClass: When the candidate lies in g(k_v^2).
    :raises NotFound: When no nontrivial monomial fits the window.
    :rtype: LocalWitness
    """
    if spec.kind not in (GroupKind.W, GroupKind.WPLUS):
        raise KindUnsupported(f"Local witnesses are computed for W-type groups, not {spec.kind.value}.")
    g = spec.g_map()
    if window is None:
        window = default_window(g, v)
    lam = candidate if candidate is not None else local_nontrivial_witness(g, v, window)
    decision = image_member(g, lam, window)
    if decision.verdict != Verdict.NON_MEMBER:
        raise TrivialClass(f"{lam} is not certified outside g(k_v^2) at {v}: {decision.verdict.value}.")
    lifts = []
    count = 0
    others = [w for w in bad_places(spec, RatFn.zero(spec.field)) if w != v]
    for ell in rational_functions(spec.field, height):
        count += 1
        if image_member(g, expand(ell, v, 1) - lam).verdict != Verdict.MEMBER:
            continue
        places = set(others) | {w for w in bad_places(spec, ell) if w != v}
        if all(image_member(g, expand(ell, w, 1)).verdict == Verdict.MEMBER for w in places):
            lifts.append(ell)
    logging.info(f"Local witness at {v} for {spec}: {lam}; {len(lifts)} global lifts among {count} candidates.")
    return LocalWitness(spec, v, lam, decision, height, count, lifts)
