import logging
from dataclasses import dataclass, field
from fractions import Fraction

from wound_flow.errors import WoundError
from wound_flow.local_field import LocalRing, Verdict
from wound_flow.twist_engine.search import VERIFY_ENLARGEMENT, TwistCertificate, verify_obstruction


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    place: str | None = None
    detail: str = ""

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "place": self.place, "detail": self.detail}


@dataclass
class VerificationReport:
    checks: list[Check] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        return {"ok": self.ok, "checks": [c.to_dict() for c in self.checks],
                "failures": [c.to_dict() for c in self.failures]}


def certificate_verify(cert: TwistCertificate,
                       enlargement: tuple[int, int] = VERIFY_ENLARGEMENT) -> VerificationReport:
    """Re-run the exact and local checks of a twist certificate without any search.

    Per place: (c_v, d_v) on V_a, c_v != 0, and delta_beta(c_v, d_v) outside g(k_v^2) by a fresh
    image_member call at the stored window enlarged by `enlargement`. Globally: S nonempty and
    pairwise distinct, and bound = #V_a(k) p^-|S|.

    :param cert: The certificate, usually read back from JSON.
    :type cert: TwistCertificate
    :param enlargement: Extra indices below and above the stored windows, defaults to VERIFY_ENLARGEMENT
    :type enlargement: tuple[int, int], optional
    :return: Every check with its outcome; never raises on a failed check.
    :rtype: VerificationReport
    """
    spec = cert.spec
    report = VerificationReport()
    names = [str(v) for v in cert.places]
    report.checks.append(Check("places", bool(names) and len(set(names)) == len(names),
                               detail=f"S = {names}"))
    listed = [str(o.place) for o in cert.per_place]
    report.checks.append(Check("per_place_coverage", sorted(listed) == sorted(names),
                               detail=f"obstructions at {listed}"))
    expected = Fraction(cert.point_count, spec.p ** len(cert.places))
    report.checks.append(Check("bound", expected == cert.bound,
                               detail=f"#V(k) p^-|S| = {expected}, stated {cert.bound}"))

    for obstruction in cert.per_place:
        v = obstruction.place
        ring = LocalRing(v, cert.precision)
        on_curve = spec.f_map().evaluate(ring, (obstruction.c, obstruction.d)).is_zero()
        report.checks.append(Check("on_curve", on_curve, str(v)))
        nonzero = not obstruction.c.is_zero()
        report.checks.append(Check("c_nonzero", nonzero, str(v)))
        if not (on_curve and nonzero):
            report.checks.append(Check("coset_avoidance", False, str(v), "point check failed"))
            continue
        try:
            rep, decision = verify_obstruction(spec, cert.beta, obstruction, cert.precision, enlargement)
        except WoundError as e:
            report.checks.append(Check("coset_avoidance", False, str(v), str(e)))
            continue
        passed = decision.verdict == Verdict.NON_MEMBER
        report.checks.append(Check("coset_avoidance", passed, str(v),
                                   f"{decision.verdict.value} at window [{decision.window.low}, {decision.window.high}]"))
        if obstruction.certificate is not None:
            value = obstruction.certificate(rep)
            report.checks.append(Check("stored_functional", value != 0, str(v), f"functional value {value}"))

    for failure in report.failures:
        logging.warning(f"Certificate check {failure.name} failed at {failure.place}: {failure.detail}")
    logging.info(f"Certificate for {spec}: {len(report.checks) - len(report.failures)}/{len(report.checks)} checks passed.")
    return report
