import logging
import random
from dataclasses import dataclass, field

from wound_flow.function_field import RationalFunctionField, random_ratfn
from wound_flow.groups.etale import EtaleAlg, v_point_tower
from wound_flow.groups.law import b_map, h_new, h_plus, h_zeta, random_v_point
from wound_flow.groups.spec import GroupKind, GroupSpec, KindUnsupported


@dataclass
class DescentReport:
    """Outcome of the descent checks; failures must stay empty."""
    group: str
    samples: int
    failures: list[str] = field(default_factory=list)
    checked: dict[str, int] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {"group": self.group, "samples": self.samples, "ok": self.ok,
                "failures": list(self.failures), "checked": dict(self.checked)}


def _is_zero(coords: tuple) -> bool:
    return all(c.is_zero() for c in coords)


def _add(*vectors: tuple) -> tuple:
    return tuple(sum(parts[1:], parts[0]) for parts in zip(*vectors))


def descent_twist(spec: GroupSpec, samples: int = 1000, rng: random.Random | None = None) -> DescentReport:
    """Check the identities that descend U_a^zeta from k(zeta) to k in characteristic 2.

    Works over k(zeta) = k[zeta]/(zeta^2 + zeta + 1) tensored with a tower carrying two generic
    V_a-points, and checks on random points: h_(zeta+1) = h_zeta + h+, the map
    [sigma](w, v) = (w + b(v), v) is a homomorphism U^zeta -> U^(zeta+1), applying it twice is the
    identity, b lands on W_a, and (w, v) -> (w + zeta b(v), v) carries h_zeta to the cocycle
    (x x'^2, x y'^2) with g(zeta b(v)) = x^3.

    :param spec: Group with p = 2.
    :type spec: GroupSpec
    :param samples: Number of random points per identity, defaults to 1000
    :type samples: int, optional
    :param rng: Random source, defaults to a fresh seeded generator
    :type rng: random.Random | None, optional
    :raises KindUnsupported: For odd characteristic.
    :rtype: DescentReport
    """
    if spec.p != 2:
        raise KindUnsupported("Descent from k(zeta) is a characteristic 2 construction.")
    if spec.kind != GroupKind.UDESCENDED:
        logging.debug(f"Descent checks run for {spec}; they only depend on p and a.")
    rng = rng or random.Random(0)
    k = RationalFunctionField(spec.field)
    kz = EtaleAlg(k, [1, 1, 1], name="zeta")
    ys = [random_ratfn(spec.field, rng, 1) for _ in range(2)]
    ring, basis = v_point_tower(spec, ys, base=kz)
    zeta = ring.embed(kz.generator())
    scalars = [ring.zero(), ring.one(), zeta, zeta + 1]
    g = spec.g_map()
    report = DescentReport(str(spec), samples)
    counts = dict.fromkeys(("cocycle_shift", "sigma_homomorphism", "sigma_involution", "b_on_W",
                            "new_coordinates"), 0)

    def fail(check: str, detail: str) -> None:
        if len(report.failures) < 20:
            report.failures.append(f"{check}: {detail}")

    def random_w() -> tuple:
        v1 = random_v_point(rng, ring, basis, scalars)
        v2 = random_v_point(rng, ring, basis, scalars)
        return _add(b_map(v1, 2), h_plus(v1, v2, 2))

    def law(z, u1: tuple, u2: tuple) -> tuple:
        w1, v1, w2, v2 = u1[:2], u1[2:], u2[:2], u2[2:]
        return _add(w1, w2, h_zeta(v1, v2, 2, z)) + _add(v1, v2)

    def sigma(u: tuple) -> tuple:
        return _add(u[:2], b_map(u[2:], 2)) + u[2:]

    for _ in range(samples):
        v1 = random_v_point(rng, ring, basis, scalars)
        v2 = random_v_point(rng, ring, basis, scalars)
        u1, u2 = random_w() + v1, random_w() + v2

        diff = _add(h_zeta(v1, v2, 2, zeta + 1), h_zeta(v1, v2, 2, zeta), h_plus(v1, v2, 2))
        if not _is_zero(diff):
            fail("cocycle_shift", f"h_(zeta+1) - h_zeta - h+ = {diff}")
        counts["cocycle_shift"] += 1

        left = sigma(law(zeta, u1, u2))
        right = law(zeta + 1, sigma(u1), sigma(u2))
        if not _is_zero(_add(left, right)):
            fail("sigma_homomorphism", "[sigma](u1 u2) != [sigma](u1) [sigma](u2)")
        counts["sigma_homomorphism"] += 1

        if not _is_zero(_add(sigma(sigma(u1)), u1)):
            fail("sigma_involution", "sigma*([sigma]) o [sigma] moved a point")
        counts["sigma_involution"] += 1

        if not g.evaluate(ring, b_map(v1, 2)).is_zero():
            fail("b_on_W", f"g(b(v)) != 0 for v = {v1}")
        counts["b_on_W"] += 1

        shifted = _add(h_zeta(v1, v2, 2, zeta), tuple(zeta * c for c in h_plus(v1, v2, 2)))
        alpha = tuple(zeta * c for c in b_map(v1, 2))
        if not _is_zero(_add(shifted, h_new(v1, v2))) or not (g.evaluate(ring, alpha) - v1[0] ** 3).is_zero():
            fail("new_coordinates", "zeta b(v) does not carry h_zeta to (x x'^2, x y'^2)")
        counts["new_coordinates"] += 1

    report.checked = counts
    if report.failures:
        logging.warning(f"Descent checks for {spec} failed: {report.failures[:3]}")
    else:
        logging.info(f"Descent checks for {spec} passed on {samples} samples.")
    return report
