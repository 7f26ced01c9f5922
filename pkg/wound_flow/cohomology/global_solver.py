import logging
from dataclasses import dataclass

from wound_flow.function_field import (InsufficientPrecision, Place, RatFn, RationalFunctionField, approximate,
                                       polynomial_part, support, valuation)
from wound_flow.groups import GroupSpec
from wound_flow.local_field import LaurentLocal, Verdict, Window, expand, image_member

DEFAULT_PRECISION = 4


@dataclass
class GlobalSolveResult:
    """Exact (x, y) with f(x, y) = lambda, or the place where the reduction stalled."""
    solution: tuple[RatFn, RatFn] | None
    stalled_at: Place | None = None
    reason: str = ""

    @property
    def ok(self) -> bool:
        return self.solution is not None

    def to_dict(self) -> dict:
        if self.solution is not None:
            return {"solved": True, "x": str(self.solution[0]), "y": str(self.solution[1])}
        return {"solved": False, "stalledAt": str(self.stalled_at) if self.stalled_at else None, "reason": self.reason}


def _local_witness(spec: GroupSpec, lam: RatFn, v: Place, window: Window | None,
                   prec: int) -> tuple[LaurentLocal, LaurentLocal] | None:
    decision = image_member(spec.f_map(), expand(lam, v, prec), window)
    if decision.verdict != Verdict.MEMBER:
        logging.info(f"No local solution of f(x, y) = {lam} at {v}: {decision.verdict.value} {decision.reason}")
        return None
    return decision.witness


def solve_global_V(spec: GroupSpec,
                   lam: RatFn,
                   witnesses: list[tuple[Place, LaurentLocal, LaurentLocal]] | None = None,
                   window: Window | None = None,
                   prec: int = DEFAULT_PRECISION) -> GlobalSolveResult:
    """Solve f(x, y) = x - x^(p^2) - a y^(p^2) = lambda in k from local solutions.

    Strong approximation away from infinity matches the local solutions at the finite poles
    of lambda, which leaves lambda - f(x1, y1) integral at every finite place. The polynomial
    parts of a solution at infinity then finish the job: what remains is integral everywhere
    and vanishes at infinity, hence zero.

    :param spec: Group providing a; needs a integral at finite places and ord_inf(a) >= 1 - p^2.
    :type spec: GroupSpec
    :param lam: Right-hand side.
    :type lam: RatFn
    :param witnesses: Local solutions (v, x_v, y_v) at the finite poles of lambda; missing ones are computed.
    :type witnesses: list[tuple[Place, LaurentLocal, LaurentLocal]] | None, optional
    :param window: Tail window for computed local solutions, defaults to the adaptive window
    :type window: Window | None, optional
    :param prec: Precision of computed local solutions, defaults to DEFAULT_PRECISION
    :type prec: int, optional
    :raises InsufficientPrecision: When a supplied witness is known below u^1 only.
    :rtype: GlobalSolveResult
    """
    field = spec.field
    k_zero = RatFn.zero(field)
    f = spec.f_map()
    if lam.is_zero():
        return GlobalSolveResult((k_zero, k_zero))
    Q = spec.p ** 2
    for v in support(spec.a):
        if not v.is_infinite and valuation(spec.a, v) < 0:
            return GlobalSolveResult(None, v, f"a has a pole at {v}; polynomial corrections are not integral there")
    infinity = Place.infinity(field)
    if valuation(spec.a, infinity) + Q < 1:
        return GlobalSolveResult(None, infinity, f"ord_inf(a) < 1 - {Q}; polynomial parts do not reach the ball")

    given = {v: (x, y) for v, x, y in (witnesses or [])}
    for v, (x, y) in given.items():
        if min(x.prec, y.prec) < 1:
            raise InsufficientPrecision(f"Witness at {v} is known only below u^{min(x.prec, y.prec)}.")

    # finite poles of lambda
    poles = [v for v in support(lam) if not v.is_infinite and valuation(lam, v) < 0]
    x_targets, y_targets = [], []
    for v in poles:
        local = given.get(v) or _local_witness(spec, lam, v, window, prec)
        if local is None:
            return GlobalSolveResult(None, v, f"lambda is not in f(k_v^2) at {v}")
        x_targets.append((v, local[0], 0))
        y_targets.append((v, local[1], 0))
    x1 = approximate(x_targets) if poles else k_zero
    y1 = approximate(y_targets) if poles else k_zero
    k = RationalFunctionField(field)
    lam1 = lam - f.evaluate(k, (x1, y1))
    for v in poles:
        if not lam1.is_zero() and valuation(lam1, v) < 0:
            return GlobalSolveResult(None, v, f"approximation left a pole at {v}")
    logging.debug(f"After clearing finite poles: lambda' = {lam1}.")

    # infinity
    if lam1.is_zero():
        return GlobalSolveResult((x1, y1))
    local = given.get(infinity)
    if local is not None:
        # a solution for lambda at infinity shifts to one for lambda'
        local = (local[0] - expand(x1, infinity, local[0].prec), local[1] - expand(y1, infinity, local[1].prec))
    else:
        local = _local_witness(spec, lam1, infinity, window, prec)
    if local is None:
        return GlobalSolveResult(None, infinity, f"lambda' = {lam1} is not in f(k_inf^2)")
    alpha = RatFn.from_poly(polynomial_part(local[0]))
    beta = RatFn.from_poly(polynomial_part(local[1]))
    x, y = x1 + alpha, y1 + beta
    if f.evaluate(k, (x, y)) != lam:
        return GlobalSolveResult(None, infinity, "the remainder after the polynomial correction is nonzero")
    logging.info(f"Solved f(x, y) = {lam}: x = {x}, y = {y}.")
    return GlobalSolveResult((x, y))
