import itertools
import logging

import galois
import numpy as np

from wound_flow.errors import ParameterError
from wound_flow.function_field import Poly, RatFn, RationalFunctionField, is_pth_power, poly_gcd
from wound_flow.groups import GroupKind, GroupPoint, GroupSpec
from wound_flow.rational_points.bounds import InfinitePointSet, frobenius_exponent, pole_bounds
from wound_flow.rational_points.workers import run_scan


def _shape(spec: GroupSpec) -> tuple[int, int, RatFn]:
    """(Q, eps, c) with the curve written x + eps x^Q + c y^Q = 0."""
    Q = frobenius_exponent(spec)
    if spec.kind == GroupKind.W:
        return Q, 1, spec.a
    return Q, -1, -spec.a


def _qth_root(x: RatFn, Q: int) -> RatFn | None:
    while Q > 1:
        x = is_pth_power(x)
        if x is None:
            return None
        Q //= x.field.p
    return x


def solve_y(spec: GroupSpec, x: RatFn) -> RatFn | None:
    """The unique y in k with (x, y) on the curve, or None."""
    Q, eps, c = _shape(spec)
    rhs = -(x + x ** Q * eps) / c
    return _qth_root(rhs, Q)


def _point_key(point: GroupPoint) -> tuple:
    return tuple((c.num.sort_key(), c.den.sort_key()) for c in point.coords)


def _check_finite(spec: GroupSpec) -> None:
    frobenius_exponent(spec)
    if spec.kind == GroupKind.W and spec.p == 2:
        raise InfinitePointSet(f"{spec} is a smooth affine conic over F_2(T) with infinitely many points.")


def enumerate_points(spec: GroupSpec, threads: int = 1) -> list[GroupPoint]:
    """All k-rational points of V_a or W_a.

    Every x-coordinate lies in the Riemann-Roch space L(D) of the pole bound, so scanning the
    F_q-combinations of its basis and extracting y^Q is complete.

    :param spec: Group of kind V or W.
    :type spec: GroupSpec
    :param threads: Number of scan workers, defaults to 1
    :type threads: int, optional
    :raises KindUnsupported: For extension kinds.
    :raises InfinitePointSet: For W_a in characteristic 2.
    :return: Points sorted by coordinates.
    :rtype: list[GroupPoint]
    """
    _check_finite(spec)
    bound = pole_bounds(spec)
    basis = bound.divisor.riemann_roch_basis()
    q = spec.q
    ring = RationalFunctionField(spec.field)
    total = q ** len(basis)
    logging.info(f"Scanning {total} candidates in L(D) of dimension {len(basis)} for {spec}.")

    def solve(index: int) -> list[GroupPoint]:
        x = RatFn.zero(spec.field)
        for b in basis:
            index, c = divmod(index, q)
            if c:
                x = x + b * spec.field.element(c)
        y = solve_y(spec, x)
        return [] if y is None else [GroupPoint(spec, ring, (x, y))]

    points = sorted(run_scan(total, solve, threads), key=_point_key)
    logging.info(f"Found {len(points)} points on {spec}.")
    return points


#---------------------------#
# F_p-linear polynomial maps #
#---------------------------#

def _unit_polys(field, degree: int) -> list[Poly]:
    """F_p-basis z^j T^i of the polynomials of degree <= degree."""
    m = field.m
    return [Poly.monomial(field, field.from_digits([1 if t == j else 0 for t in range(m)]), i)
            for i in range(degree + 1) for j in range(m)]


def _combine(field, values: list[int], degree: int) -> Poly:
    m = field.m
    return Poly(field, [field.from_digits(values[i * m:(i + 1) * m]) for i in range(degree + 1)])


def _coefficient_rows(field, images: list[Poly], exponents) -> list[list[int]]:
    rows = []
    for e in exponents:
        digits = [field.digits(img.coefficient(e)) for img in images]
        for t in range(field.m):
            rows.append([d[t] for d in digits])
    return rows


def _span(GF, particular: np.ndarray, kernel: np.ndarray):
    for combo in itertools.product(range(GF.characteristic), repeat=kernel.shape[0]):
        if kernel.shape[0]:
            yield particular + GF(np.array(combo, dtype=int)) @ kernel
        else:
            yield particular


def _numerators(spec: GroupSpec, D: Poly, H: int) -> list[Poly]:
    """Numerators P of degree <= H making (P D^(Q-1) + eps P^Q) B A^(Q-1) a Qth power, with c = A/B.

    That polynomial is F_p-linear in P and is a Qth power exactly when its coefficients at
    exponents prime to Q vanish, so the admissible P form the kernel of a matrix over F_p.
    """
    field = spec.field
    Q, eps, c = _shape(spec)
    weight = c.den * c.num ** (Q - 1)
    d_power = D ** (Q - 1)
    images = [(P * d_power + P ** Q * eps) * weight for P in _unit_polys(field, H)]
    top = max((img.degree for img in images), default=-1)
    rows = _coefficient_rows(field, images, (e for e in range(top + 1) if e % Q))
    GF = galois.GF(field.p)
    n = len(images)
    kernel = GF(np.array(rows, dtype=int)).null_space() if rows else GF.Identity(n)
    return [_combine(field, [int(t) for t in vector], H) for vector in _span(GF, GF.Zeros(n), kernel)]


def solve_frobenius_linear(t: RatFn, eps: int, Q: int) -> list[RatFn]:
    """All x in k with x + eps x^Q = t, for Q > 1 a power of p and eps nonzero in F_p.

    Writing x = P/D, the denominator of x + eps x^Q is D^Q, and P solves the F_p-linear
    equation P D^(Q-1) + eps P^Q = num(t) with deg P <= max(deg D, deg num(t) / Q).
    """
    field = t.field
    D = _poly_root(t.den, Q)
    if D is None:
        return []
    num = t.num
    degree = max(D.degree, num.degree // Q, 0)
    d_power = D ** (Q - 1)
    images = [P * d_power + P ** Q * eps for P in _unit_polys(field, degree)]
    top = max([img.degree for img in images] + [num.degree, 0])
    rows = _coefficient_rows(field, images, range(top + 1))
    rhs = [d for e in range(top + 1) for d in field.digits(num.coefficient(e))]
    GF = galois.GF(field.p)
    n = len(images)
    augmented = GF(np.hstack([np.array(rows, dtype=int), np.array(rhs, dtype=int).reshape(-1, 1)]))
    particular = [0] * n
    for row in np.array(augmented.row_reduce(), dtype=int):
        nonzero = np.flatnonzero(row)
        if nonzero.size == 0:
            continue
        pivot = int(nonzero[0])
        if pivot == n:
            return []
        particular[pivot] = int(row[n])
    kernel = GF(np.array(rows, dtype=int)).null_space()
    return [RatFn(_combine(field, [int(c) for c in vector], degree), D)
            for vector in _span(GF, GF(np.array(particular, dtype=int)), kernel)]


def _poly_root(P: Poly, Q: int) -> Poly | None:
    while Q > 1:
        P = P.pth_root()
        if P is None:
            return None
        Q //= P.field.p
    return P


def rational_functions(field, height: int):
    """Every x in k with numerator and denominator degree <= height, each once."""
    for D in _monic_polys(field, height):
        for coeffs in itertools.product(range(field.q), repeat=height + 1):
            P = Poly(field, coeffs)
            if P.is_zero() and not D.is_one():
                continue
            if P.is_zero() or poly_gcd(P, D).is_one():
                yield RatFn(P, D, reduced=True)


#---------------#
# height oracle #
#---------------#

def _monic_polys(field, max_degree: int):
    yield Poly.one(field)
    for d in range(1, max_degree + 1):
        for coeffs in itertools.product(range(field.q), repeat=d):
            yield Poly(field, list(coeffs) + [1])


def brute_force_points(spec: GroupSpec, height: int, threads: int = 1) -> list[GroupPoint]:
    """All points of V_a or W_a whose coordinates have numerator and denominator degree <= height.

    Independent of the pole bounds: every monic denominator of degree <= height is tried.

    :raises ParameterError: For a negative height.
    :raises InfinitePointSet: For W_a in characteristic 2.
    :rtype: list[GroupPoint]
    """
    if height < 0:
        raise ParameterError(f"Height must be nonnegative, got {height}.")
    _check_finite(spec)
    ring = RationalFunctionField(spec.field)
    denominators = list(_monic_polys(spec.field, height))

    def solve(index: int) -> list[GroupPoint]:
        D = denominators[index]
        found = []
        for P in _numerators(spec, D, height):
            if P.is_zero() and not D.is_one():
                continue
            if not P.is_zero() and not poly_gcd(P, D).is_one():
                continue
            x = RatFn(P, D, reduced=True)
            y = solve_y(spec, x)
            if y is not None and y.height <= height:
                found.append(GroupPoint(spec, ring, (x, y)))
        return found

    points = sorted(run_scan(len(denominators), solve, threads), key=_point_key)
    logging.info(f"Height {height} scan of {spec} found {len(points)} points.")
    return points
