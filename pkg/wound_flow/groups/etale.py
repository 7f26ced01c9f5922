from typing import Any

from wound_flow.errors import ParameterError


class NotEtale(ParameterError):
    pass


class EtaleAlg:
    """B[Z]/(m(Z)) for a monic separable m over a base ring B.

    B is k = F_q(T) (a :class:`RationalFunctionField`) or another EtaleAlg, so towers such as
    k(zeta)[Z]/(Z^4 + Z + beta) are built by nesting. Elements are coefficient tuples in B of
    length deg m, and products are reduced with the sparse tail of m.

    :param base: Coefficient ring.
    :type base: RationalFunctionField | EtaleAlg
    :param modulus: Coefficients of m, low to high, leading coefficient 1.
    :type modulus: list
    :param name: Variable name used when printing, defaults to "Z"
    :type name: str, optional
    :raises NotEtale: When m is not monic or not separable.
    """

    def __init__(self, base: Any, modulus: list, name: str = "Z") -> None:
        self.base = base
        self.name = name
        self.modulus = tuple(base.embed(c) for c in modulus)
        self.degree = len(self.modulus) - 1
        if self.degree < 1 or self.modulus[-1] != base.one():
            raise NotEtale(f"Modulus of {name} must be monic of positive degree.")
        self._tail = [(i, -c) for i, c in enumerate(self.modulus[:-1]) if not c.is_zero()]
        if not self._separable():
            raise NotEtale(f"Modulus {self.modulus_text()} is not separable.")

    def __repr__(self) -> str:
        return f"{self.base!r}[{self.name}]/({self.modulus_text()})"

    def modulus_text(self) -> str:
        terms = [f"({c})*{self.name}^{i}" for i, c in enumerate(self.modulus) if not c.is_zero()]
        return " + ".join(reversed(terms))

    def _separable(self) -> bool:
        p = self.characteristic
        derivative = [self.base.embed(i % p) * c for i, c in enumerate(self.modulus)][1:]
        if all(c.is_zero() for c in derivative[1:]) and not derivative[0].is_zero():
            constant = derivative[0]
            return any(constant == self.base.embed(c) for c in range(1, p))
        if not isinstance(self.base, EtaleAlg):
            return _degree(_gcd_over_field(self.base, list(self.modulus), derivative)) == 0
        # separability over a non-field base is only decided for unit derivatives
        return False

    #---------------#
    # ring protocol #
    #---------------#

    @property
    def characteristic(self) -> int:
        return self.base.characteristic

    def zero(self) -> "EtaleElem":
        return EtaleElem(self, (self.base.zero(),) * self.degree)

    def one(self) -> "EtaleElem":
        return self.embed(1)

    def generator(self) -> "EtaleElem":
        if self.degree == 1:
            return self.embed(-self.modulus[0])
        coeffs = [self.base.zero()] * self.degree
        coeffs[1] = self.base.one()
        return EtaleElem(self, tuple(coeffs))

    def embed(self, x: Any) -> "EtaleElem":
        if isinstance(x, EtaleElem) and x.algebra is self:
            return x
        coeffs = [self.base.zero()] * self.degree
        coeffs[0] = self.base.embed(x)
        return EtaleElem(self, tuple(coeffs))

    def element(self, coeffs: list) -> "EtaleElem":
        """Element sum c_i Z^i; longer coefficient lists are reduced modulo m."""
        coeffs = [self.base.embed(c) for c in coeffs]
        return EtaleElem(self, self._reduce(coeffs))

    def contains(self, x: object) -> bool:
        return isinstance(x, EtaleElem) and x.algebra is self

    def _reduce(self, coeffs: list) -> tuple:
        n = self.degree
        coeffs = list(coeffs) + [self.base.zero()] * max(0, n - len(coeffs))
        for k in range(len(coeffs) - 1, n - 1, -1):
            c = coeffs[k]
            if c.is_zero():
                continue
            for i, r in self._tail:
                coeffs[k - n + i] = coeffs[k - n + i] + c * r
        return tuple(coeffs[:n])


class EtaleElem:
    __slots__ = ("algebra", "coeffs")

    def __init__(self, algebra: EtaleAlg, coeffs: tuple) -> None:
        self.algebra = algebra
        self.coeffs = coeffs

    def _coerce(self, other: Any) -> "EtaleElem | None":
        if isinstance(other, EtaleElem):
            if other.algebra is self.algebra:
                return other
            if not _is_below(other.algebra, self.algebra):
                return None
        try:
            return self.algebra.embed(other)
        except (TypeError, AttributeError):
            return None

    def _scalar(self) -> Any:
        """The base coefficient when self is constant, else None."""
        if all(c.is_zero() for c in self.coeffs[1:]):
            return self.coeffs[0]
        return None

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def is_constant(self) -> bool:
        return self._scalar() is not None

    def constant_term(self) -> Any:
        return self.coeffs[0]

    def __eq__(self, other: object) -> bool:
        other = self._coerce(other)
        return other is not None and all(a == b for a, b in zip(self.coeffs, other.coeffs))

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return EtaleElem(self.algebra, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self) -> "EtaleElem":
        return EtaleElem(self.algebra, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return EtaleElem(self.algebra, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        s = other._scalar()
        if s is not None:
            return EtaleElem(self.algebra, tuple(c * s for c in self.coeffs))
        s = self._scalar()
        if s is not None:
            return EtaleElem(self.algebra, tuple(s * c for c in other.coeffs))
        base = self.algebra.base
        n = self.algebra.degree
        out = [base.zero()] * (2 * n - 1)
        right = [(j, b) for j, b in enumerate(other.coeffs) if not b.is_zero()]
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in right:
                out[i + j] = out[i + j] + a * b
        return EtaleElem(self.algebra, self.algebra._reduce(out))

    __rmul__ = __mul__

    def frobenius(self) -> "EtaleElem":
        """x^p, computed coefficientwise."""
        p = self.algebra.characteristic
        base = self.algebra.base
        out = [base.zero()] * ((self.algebra.degree - 1) * p + 1)
        for i, c in enumerate(self.coeffs):
            if not c.is_zero():
                out[i * p] = c ** p
        return EtaleElem(self.algebra, self.algebra._reduce(out))

    def __pow__(self, n: int) -> "EtaleElem":
        if n < 0:
            raise ParameterError("Negative powers are not supported in an etale algebra.")
        p = self.algebra.characteristic
        result = self.algebra.one()
        base = self
        while n:
            # Frobenius for p-divisible exponents, one product per unit digit
            if n % p == 0:
                base = base.frobenius()
                n //= p
                continue
            result = result * base
            n -= 1
        return result

    def __str__(self) -> str:
        name = self.algebra.name
        terms = [f"({c})*{name}^{i}" if i else f"({c})" for i, c in enumerate(self.coeffs) if not c.is_zero()]
        return " + ".join(reversed(terms)) if terms else "0"

    def __repr__(self) -> str:
        return f"EtaleElem({self})"


def _is_below(algebra: EtaleAlg, target: EtaleAlg) -> bool:
    ring = target.base
    while isinstance(ring, EtaleAlg):
        if ring is algebra:
            return True
        ring = ring.base
    return False


def _degree(coeffs: list) -> int:
    for i in range(len(coeffs) - 1, -1, -1):
        if not coeffs[i].is_zero():
            return i
    return -1


def _gcd_over_field(base: Any, a: list, b: list) -> list:
    """Euclid on coefficient lists over a field base ring."""
    a, b = list(a), list(b)
    while _degree(b) >= 0:
        db = _degree(b)
        lead_inv = b[db].inverse()
        while _degree(a) >= db:
            da = _degree(a)
            factor = a[da] * lead_inv
            for i in range(db + 1):
                a[da - db + i] = a[da - db + i] - factor * b[i]
        a, b = b, a
    return a


def v_point_algebra(spec, y0: Any, base: Any = None, name: str = "Z") -> tuple[EtaleAlg, tuple]:
    """Etale algebra E = B[Z]/(Z^(p^2) - Z + a y0^(p^2)) carrying the V_a-point (Z, y0).

    :param spec: Group spec providing p and a.
    :param y0: Second coordinate, an element of the base ring.
    :param base: Base ring, defaults to k.
    :return: The algebra and the point coordinates (Z, y0) in it.
    :rtype: tuple[EtaleAlg, tuple]
    """
    from wound_flow.function_field import RationalFunctionField

    base = base or RationalFunctionField(spec.field)
    Q = spec.p ** 2
    y0 = base.embed(y0)
    modulus = [base.embed(spec.a) * y0 ** Q, base.embed(-1)] + [base.zero()] * (Q - 2) + [base.one()]
    algebra = EtaleAlg(base, modulus, name=name)
    return algebra, (algebra.generator(), algebra.embed(y0))


def v_point_tower(spec, ys: list, base: Any = None) -> tuple[EtaleAlg, list[tuple]]:
    """Nested algebra B[Z1, ..., Zn] carrying one generic V_a-point (Zi, yi) per entry of ys.

    :return: The top algebra and the points, all embedded in it.
    :rtype: tuple[EtaleAlg, list[tuple]]
    """
    ring = base
    points: list[tuple] = []
    for i, y in enumerate(ys):
        ring, point = v_point_algebra(spec, y, base=ring, name=f"Z{i + 1}")
        points = [tuple(ring.embed(c) for c in pt) for pt in points]
        points.append(point)
    return ring, points
