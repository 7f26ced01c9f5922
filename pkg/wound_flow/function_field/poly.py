from typing import Iterable

import galois

from wound_flow.field_core import FqField


def coeff_text(field: FqField, c: int) -> str:
    """Render a coefficient of F_q, using z for the generator of F_q over F_p."""
    if c < field.p:
        return str(c)
    terms = []
    for i, d in reversed(list(enumerate(field.digits(c)))):
        if d == 0:
            continue
        mono = "" if i == 0 else ("z" if i == 1 else f"z^{i}")
        if not mono:
            terms.append(str(d))
        elif d == 1:
            terms.append(mono)
        else:
            terms.append(f"{d}*{mono}")
    return "+".join(terms)


class Poly:
    """Dense polynomial in T over F_q, coefficients stored low-to-high as integer codes.

    Instances are treated as immutable; all operations return new polynomials.
    """
    __slots__ = ("field", "coeffs")

    def __init__(self, field: FqField, coeffs: Iterable[int] = ()) -> None:
        c = list(coeffs)
        while c and c[-1] == 0:
            c.pop()
        self.field = field
        self.coeffs = tuple(c)

    @classmethod
    def zero(cls, field: FqField) -> "Poly":
        return cls(field)

    @classmethod
    def one(cls, field: FqField) -> "Poly":
        return cls(field, (1,))

    @classmethod
    def constant(cls, field: FqField, c: int) -> "Poly":
        return cls(field, (c,))

    @classmethod
    def monomial(cls, field: FqField, c: int, n: int) -> "Poly":
        return cls(field, [0] * n + [c])

    @classmethod
    def variable(cls, field: FqField) -> "Poly":
        return cls(field, (0, 1))

    @property
    def degree(self) -> int:
        """Degree, -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_one(self) -> bool:
        return self.coeffs == (1,)

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def coefficient(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def _lift(self, other: "Poly | int") -> "Poly":
        if isinstance(other, Poly):
            return other
        return Poly(self.field, (self.field.from_int(other),))

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = self._lift(other)
        return isinstance(other, Poly) and self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.field.q, self.coeffs))

    def __add__(self, other: "Poly | int") -> "Poly":
        other = self._lift(other)
        f = self.field
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = f.add(out[i], c)
        return Poly(f, out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(self.field, [self.field.neg(c) for c in self.coeffs])

    def __sub__(self, other: "Poly | int") -> "Poly":
        return self + (-self._lift(other))

    def __rsub__(self, other: "Poly | int") -> "Poly":
        return self._lift(other) - self

    def __mul__(self, other: "Poly | int") -> "Poly":
        other = self._lift(other)
        if not self.coeffs or not other.coeffs:
            return Poly(self.field)
        if len(other.coeffs) == 1:
            return self.scale(other.coeffs[0])
        if len(self.coeffs) == 1:
            return other.scale(self.coeffs[0])
        f = self.field
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                if b:
                    out[i + j] = f.add(out[i + j], f.mul(a, b))
        return Poly(f, out)

    __rmul__ = __mul__

    def scale(self, c: int) -> "Poly":
        f = self.field
        if c == 0:
            return Poly(f)
        if c == 1:
            return self
        return Poly(f, [f.mul(c, a) for a in self.coeffs])

    def shift(self, n: int) -> "Poly":
        """Multiply by T^n, n >= 0."""
        if not self.coeffs:
            return self
        return Poly(self.field, [0] * n + list(self.coeffs))

    def __divmod__(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero():
            raise ZeroDivisionError("Polynomial division by zero.")
        f = self.field
        rem = list(self.coeffs)
        dq = other.degree
        if len(rem) - 1 < dq:
            return Poly(f), self
        inv_lead = f.inv(other.leading)
        quo = [0] * (len(rem) - dq)
        divisor = other.coeffs
        for k in range(len(rem) - 1, dq - 1, -1):
            c = rem[k]
            if c == 0:
                continue
            t = f.mul(c, inv_lead)
            quo[k - dq] = t
            for i, d in enumerate(divisor):
                if d:
                    rem[k - dq + i] = f.sub(rem[k - dq + i], f.mul(t, d))
        return Poly(f, quo), Poly(f, rem[:dq])

    def __floordiv__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[1]

    def monic(self) -> "Poly":
        if not self.coeffs or self.leading == 1:
            return self
        return self.scale(self.field.inv(self.leading))

    def frobenius(self, e: int = 1) -> "Poly":
        """Apply x -> x^(p^e) coefficientwise and to T."""
        f = self.field
        step = f.p ** e
        out = [0] * (step * (len(self.coeffs) - 1) + 1) if self.coeffs else []
        for i, c in enumerate(self.coeffs):
            out[i * step] = f.frobenius(c, e)
        return Poly(f, out)

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("Negative power of a polynomial.")
        p = self.field.p
        e = 0
        while n and n % p == 0:
            n //= p
            e += 1
        result = Poly.one(self.field)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result.frobenius(e) if e else result

    def derivative(self) -> "Poly":
        f = self.field
        return Poly(f, [f.mul(f.from_int(i), c) for i, c in enumerate(self.coeffs)][1:])

    def __call__(self, x: int) -> int:
        f = self.field
        acc = 0
        for c in reversed(self.coeffs):
            acc = f.add(f.mul(acc, x), c)
        return acc

    def evaluate_in(self, big: FqField, embedding: tuple[int, ...], x: int) -> int:
        """Evaluate at x in an extension field, coefficients mapped through the embedding table."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = big.add(big.mul(acc, x), embedding[c])
        return acc

    def pth_root(self) -> "Poly | None":
        """The polynomial r with r^p = self, or None when self is not a pth power."""
        f = self.field
        p = f.p
        out = []
        for i, c in enumerate(self.coeffs):
            if i % p:
                if c:
                    return None
                continue
            out.append(f.pth_root(c))
        return Poly(f, out)

    def to_galois(self) -> galois.Poly:
        return galois.Poly(self.field.GF(list(reversed(self.coeffs)) or [0]))

    @classmethod
    def from_galois(cls, field: FqField, poly: galois.Poly) -> "Poly":
        return cls(field, reversed([int(c) for c in poly.coeffs]))

    def is_irreducible(self) -> bool:
        return self.degree >= 1 and self.to_galois().is_irreducible()

    def factor(self) -> list[tuple["Poly", int]]:
        """Monic irreducible factors with multiplicities, ordered by sort_key; the leading coefficient is dropped."""
        if self.degree < 1:
            return []
        factors, mults = self.monic().to_galois().factors()
        out = [(Poly.from_galois(self.field, fac), int(mult)) for fac, mult in zip(factors, mults)]
        return sorted(out, key=lambda item: item[0].sort_key())

    def sort_key(self) -> tuple:
        return (self.degree, tuple(reversed(self.coeffs)))

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            text = coeff_text(self.field, c)
            if i == 0:
                terms.append(text)
                continue
            mono = "T" if i == 1 else f"T^{i}"
            if c == 1:
                terms.append(mono)
            elif c < self.field.p:
                terms.append(f"{text}*{mono}")
            else:
                terms.append(f"({text})*{mono}")
        return "+".join(terms)

    def __repr__(self) -> str:
        return f"Poly({self})"


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd; zero only when both inputs are zero."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def poly_xgcd(a: Poly, b: Poly) -> tuple[Poly, Poly, Poly]:
    """(g, s, t) with s*a + t*b = g and g the monic gcd."""
    f = a.field
    r0, r1 = a, b
    s0, s1 = Poly.one(f), Poly.zero(f)
    t0, t1 = Poly.zero(f), Poly.one(f)
    while not r1.is_zero():
        quo, rem = divmod(r0, r1)
        r0, r1 = r1, rem
        s0, s1 = s1, s0 - quo * s1
        t0, t1 = t1, t0 - quo * t1
    if r0.is_zero():
        return r0, s0, t0
    lead_inv = f.inv(r0.leading)
    return r0.scale(lead_inv), s0.scale(lead_inv), t0.scale(lead_inv)


def poly_inverse_mod(a: Poly, modulus: Poly) -> Poly:
    g, s, _ = poly_xgcd(a % modulus, modulus)
    if not g.is_one():
        raise ZeroDivisionError(f"{a} is not invertible modulo {modulus}.")
    return s % modulus


def poly_crt(residues: list[tuple[Poly, Poly]]) -> tuple[Poly, Poly]:
    """Chinese remaindering for pairwise coprime moduli.

    :param residues: Pairs (r_i, m_i).
    :type residues: list[tuple[Poly, Poly]]
    :return: (r, M) with r = r_i mod m_i for every i and M the product of the moduli.
    :rtype: tuple[Poly, Poly]
    """
    if not residues:
        raise ValueError("Chinese remaindering needs at least one residue.")
    r, modulus = residues[0][0] % residues[0][1], residues[0][1]
    for r_i, m_i in residues[1:]:
        # r + modulus * k = r_i mod m_i
        k = ((r_i - r) * poly_inverse_mod(modulus, m_i)) % m_i
        r = r + modulus * k
        modulus = modulus * m_i
    return r % modulus, modulus
