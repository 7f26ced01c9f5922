import logging
from dataclasses import dataclass
from enum import Enum

import galois
import numpy as np

from wound_flow.errors import WoundError
from wound_flow.function_field.places import Place, valuation
from wound_flow.local_field.additive import AdditiveMap, FrobeniusShape
from wound_flow.local_field.laurent import LaurentLocal, expand
from wound_flow.local_field.newton import NoConvergence, newton_solve


class WindowInvalid(WoundError):
    pass


class NotFound(WoundError):
    pass


class Verdict(Enum):
    MEMBER = "member"
    NON_MEMBER = "non_member"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class Window:
    """Index window [low, high] for the input tails of an image computation."""
    low: int
    high: int

    def __post_init__(self) -> None:
        if self.low >= self.high:
            raise WindowInvalid(f"Window [{self.low}, {self.high}] is empty.")

    def enlarged(self, below: int, above: int) -> "Window":
        return Window(self.low - below, self.high + above)

    def to_dict(self) -> dict:
        return {"low": self.low, "high": self.high}


@dataclass(frozen=True)
class SoundBox:
    """Index ranges that every preimage can be reduced into, modulo the ball ord >= 1.

    x-tails start at x_low, y-tails live in [y_low, y_top).
    """
    x_low: int
    y_low: int
    y_top: int

    def covered_by(self, window: Window) -> bool:
        x_ok = window.low <= self.x_low
        y_ok = self.y_low >= self.y_top or (window.low <= self.y_low and window.high >= self.y_top)
        return x_ok and y_ok

    def to_dict(self) -> dict:
        return {"x_low": self.x_low, "y_low": self.y_low, "y_top": self.y_top}


@dataclass(frozen=True)
class LinearFunctional:
    """F_p-linear functional on k_v supported on coefficient digits at exponents <= 0.

    :param entries: Triples (exponent, digit, weight): the functional is the sum of
        weight * (digit-th base-p digit of the u^exponent coefficient), modulo p.
    :type entries: tuple[tuple[int, int, int], ...]
    """
    place: Place
    entries: tuple[tuple[int, int, int], ...]

    def __call__(self, z: LaurentLocal) -> int:
        K = z.residue_field
        total = 0
        for exponent, digit, weight in self.entries:
            total += weight * K.digits(z.coefficient(exponent))[digit]
        return total % K.p

    def to_dict(self) -> dict:
        return {"place": str(self.place), "entries": [list(e) for e in self.entries]}

    @classmethod
    def from_dict(cls, place: Place, data: dict) -> "LinearFunctional":
        return cls(place, tuple(tuple(int(x) for x in e) for e in data["entries"]))


@dataclass(frozen=True)
class Decision:
    verdict: Verdict
    window: Window
    witness: tuple[LaurentLocal, LaurentLocal] | None = None
    certificate: LinearFunctional | None = None
    box: SoundBox | None = None
    reason: str = ""

    def to_dict(self) -> dict:
        out = {"verdict": self.verdict.value, "window": self.window.to_dict(), "reason": self.reason}
        if self.witness is not None:
            out["witness"] = {"x": self.witness[0].to_dict(), "y": self.witness[1].to_dict()}
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_dict()
        if self.box is not None:
            out["box"] = self.box.to_dict()
        return out


def default_window(g: AdditiveMap, place: Place, lam: LaurentLocal | None = None) -> Window:
    """B_low = ord(lambda) - p deg(v) - |ord(a)| - 2 and B_high = p(-B_low) + 1, a the y-coefficient."""
    ord_lam = min(lam.valuation(), 0) if lam is not None else 0
    shape = g.frobenius_shape()
    ord_a = 0
    if shape is not None and shape.c is not None and not shape.c.is_zero():
        ord_a = valuation(shape.c, place)
    low = ord_lam - g.field.p * place.degree - abs(ord_a) - 2
    return Window(low, g.field.p * (-low) + 1)


def sound_box(shape: FrobeniusShape, place: Place, reference: int) -> SoundBox:
    """Box for x + eps x^Q + c y^Q containing a preimage of every image element of valuation >= reference.

    With s the least exponent of c not divisible by Q and C0 the Q-divisible part of c,
    a y-tail of order o <= y_low - 1 leaves the exponent s + Q o in normal form, which
    nothing else in the equation can cancel.
    """
    E = min(reference, 0)
    Q = shape.q_power
    if shape.c is None or shape.eps == 0 or Q == 1:
        if shape.eps == 0 or Q == 1:
            return SoundBox(E, 0, 0)
        return SoundBox(min(0, -((-E) // Q)), 0, 0)
    c = shape.c
    o_c = valuation(c, place)
    s, c0 = None, None
    prec = o_c + 4 * Q
    for _ in range(32):
        series = expand(c, place, prec)
        for i, coeff in enumerate(series.coeffs):
            if not coeff:
                continue
            exponent = series.minval + i
            if exponent % Q and s is None:
                s = exponent
            if exponent % Q == 0 and c0 is None:
                c0 = exponent
        if s is not None:
            break
        prec = 2 * prec - o_c
    if s is None:
        raise NotFound(f"({c}) looks like a {Q}-th power at {place}; no sound box exists.")
    ord_c0 = c0 // Q if c0 is not None else -((-prec) // Q)
    y_low = min((E - s - 1) // Q + 1, (ord_c0 - s - 1) // (Q - 1) + 1)
    y_top = -((o_c - 1) // Q)  # ceil((1 - o_c) / Q)
    bound = min(E, o_c + Q * y_low, 0)
    x_low = min(0, -((-bound) // Q))
    return SoundBox(x_low, y_low, y_top)


class ImageLattice:
    """Images of the monomial tails e_b u^j under g, as rows over F_p modulo u^1.

    :param g: The additive map.
    :type g: AdditiveMap
    :param place: Place of the completion.
    :type place: Place
    :param ranges: Per input variable, the half-open index range of the tails used.
    :type ranges: list[tuple[int, int]]
    :param floor: Lowest exponent coordinate that must be representable.
    :type floor: int
    """

    def __init__(self, g: AdditiveMap, place: Place, ranges: list[tuple[int, int]], floor: int = 0) -> None:
        self.g = g
        self.place = place
        self.ranges = ranges
        self.K = place.residue_field.field
        self.md = self.K.m
        self.GF = galois.GF(self.K.p)
        p = g.field.p

        term_series = []
        low = min(floor, 0)
        for term in g.terms:
            lo, hi = ranges[term.var]
            if term.coeff.is_zero() or lo >= hi:
                continue
            Q = p ** term.exponent
            o = valuation(term.coeff, place)
            if o + Q * lo >= 1:
                continue
            term_series.append((term, Q, expand(term.coeff, place, 1 - Q * lo)))
            low = min(low, o + Q * lo)
        self.low = low
        self.width = (1 - low) * self.md

        self.generators = []
        rows = []
        for var, (lo, hi) in enumerate(ranges):
            for j in range(lo, hi):
                for b in range(self.md):
                    e = self.K.p ** b
                    row = [0] * self.width
                    for term, Q, series in term_series:
                        if term.var != var:
                            continue
                        scale = self.K.frobenius(e, term.exponent)
                        for i, coeff in enumerate(series.coeffs):
                            exponent = series.minval + i + Q * j
                            if exponent >= 1:
                                break
                            if coeff:
                                self._accumulate(row, exponent, self.K.mul(coeff, scale))
                    self.generators.append((var, j, e))
                    rows.append(row)
        self.matrix = self.GF(np.array(rows, dtype=int).reshape(len(rows), self.width))
        logging.debug(f"Image lattice at {place}: {len(rows)} generators, {self.width} coordinates.")

    def _accumulate(self, row: list[int], exponent: int, value: int) -> None:
        base = (exponent - self.low) * self.md
        for d, digit in enumerate(self.K.digits(value)):
            row[base + d] = (row[base + d] + digit) % self.K.p

    def vector(self, z: LaurentLocal) -> np.ndarray:
        """Coordinates of z modulo u^1; z must start at or above the lattice floor."""
        out = [0] * self.width
        for i, coeff in enumerate(z.coeffs):
            exponent = z.minval + i
            if exponent >= 1:
                break
            if coeff:
                self._accumulate(out, exponent, coeff)
        return self.GF(np.array(out, dtype=int))

    def solve(self, vec: np.ndarray) -> list[int] | None:
        """Weights s over F_p with sum_i s_i row_i = vec, or None."""
        r = self.matrix.shape[0]
        if r == 0:
            return [] if not np.any(vec) else None
        augmented = self.GF(np.hstack([np.array(self.matrix.T, dtype=int), np.array(vec, dtype=int).reshape(-1, 1)]))
        reduced = augmented.row_reduce()
        solution = [0] * r
        for row in np.array(reduced, dtype=int):
            nonzero = np.flatnonzero(row)
            if nonzero.size == 0:
                continue
            pivot = int(nonzero[0])
            if pivot == r:
                return None
            solution[pivot] = int(row[r])
        return solution

    def annihilators(self) -> np.ndarray:
        """Basis (as rows) of the functionals vanishing on every generator image."""
        if self.matrix.shape[0] == 0:
            return self.GF(np.eye(self.width, dtype=int))
        return self.matrix.null_space()

    def functional(self, w: np.ndarray) -> LinearFunctional:
        entries = []
        for k, weight in enumerate(np.array(w, dtype=int)):
            if weight:
                entries.append((self.low + k // self.md, k % self.md, int(weight)))
        return LinearFunctional(self.place, tuple(entries))

    def combine(self, weights: list[int], var: int, prec: int) -> LaurentLocal:
        """The input tail sum_i s_i e_i u^j_i over the generators of one variable."""
        coeffs = {}
        for s, (gvar, j, e) in zip(weights, self.generators):
            if s and gvar == var:
                coeffs[j] = self.K.add(coeffs.get(j, 0), self.K.mul(self.K.from_int(s), e))
        if not coeffs:
            return LaurentLocal.zero(self.place, prec)
        start = min(coeffs)
        out = [0] * (max(coeffs) - start + 1)
        for j, c in coeffs.items():
            out[j - start] = c
        return LaurentLocal.build(self.place, start, prec, out)


def _ranges(g: AdditiveMap, place: Place, window: Window) -> list[tuple[int, int]]:
    """x-tails in [low, 1); other inputs in [low, min(high, first index whose images all lie in the ball))."""
    p = g.field.p
    out = [(window.low, 1)]
    for var in range(1, g.arity):
        top = window.low
        for term in g.terms:
            if term.var == var and not term.coeff.is_zero():
                Q = p ** term.exponent
                top = max(top, -((valuation(term.coeff, place) - 1) // Q))
        out.append((window.low, min(window.high, top)))
    return out


def _newton_member(g: AdditiveMap, lam: LaurentLocal, window: Window) -> Decision:
    v = lam.place
    try:
        x = newton_solve(g, lam)
    except NoConvergence as e:
        return Decision(Verdict.INCONCLUSIVE, window, reason=str(e))
    return Decision(Verdict.MEMBER, window, witness=(x, LaurentLocal.zero(v, lam.prec)))


def image_member(g: AdditiveMap, lam: LaurentLocal, window: Window | tuple[int, int] | None = None) -> Decision:
    """Decide whether lam lies in g(k_v^2).

    Members come with an exact witness (x, y) to the precision of lam. Non-members come
    with an F_p-linear functional that kills g on the sound box and the ball ord >= 1 but
    not lam; this needs the window to cover the sound box, otherwise the verdict is
    inconclusive.

    :param g: Two-input additive map.
    :type g: AdditiveMap
    :param lam: Element of k_v known at least up to u^0.
    :type lam: LaurentLocal
    :param window: Tail window, defaults to :func:`default_window`.
    :type window: Window | tuple[int, int] | None, optional
    :raises WindowInvalid: When low >= high.
    :rtype: Decision
    """
    v = lam.place
    if window is None:
        window = default_window(g, v, lam)
    elif not isinstance(window, Window):
        window = Window(*window)
    if lam.prec < 1:
        return Decision(Verdict.INCONCLUSIVE, window, reason=f"lambda known only below u^{lam.prec}")
    if lam.valuation() >= 1:
        return _newton_member(g, lam, window)

    lattice = ImageLattice(g, v, _ranges(g, v, window), floor=lam.valuation())
    weights = lattice.solve(lattice.vector(lam))
    if weights is not None:
        x = lattice.combine(weights, 0, lam.prec)
        y = lattice.combine(weights, 1, lam.prec) if g.arity > 1 else LaurentLocal.zero(v, lam.prec)
        inputs = (x, y)[:g.arity]
        residual = lam - g.evaluate_local(v, inputs, lam.prec)
        if residual.valuation() < 1:
            return Decision(Verdict.INCONCLUSIVE, window, reason="residual of the lattice solution is not in the ball")
        try:
            tail = newton_solve(g, residual)
        except NoConvergence as e:
            return Decision(Verdict.INCONCLUSIVE, window, reason=str(e))
        return Decision(Verdict.MEMBER, window, witness=(x + tail, y))

    shape = g.frobenius_shape()
    if shape is None:
        return Decision(Verdict.INCONCLUSIVE, window, reason=f"no soundness bound for {g}")
    box = sound_box(shape, v, lam.valuation())
    if not box.covered_by(window):
        return Decision(Verdict.INCONCLUSIVE, window, box=box, reason="window does not cover the sound box")
    target = lattice.vector(lam)
    for w in lattice.annihilators():
        if int(np.dot(np.array(w, dtype=int), np.array(target, dtype=int)) % g.field.p):
            return Decision(Verdict.NON_MEMBER, window, certificate=lattice.functional(w), box=box)
    # unreachable: lam outside the row space is detected by some annihilator
    return Decision(Verdict.INCONCLUSIVE, window, box=box, reason="no separating functional found")


def local_nontrivial_witness(g: AdditiveMap, v: Place, window: Window | tuple[int, int] | None = None) -> LaurentLocal:
    """A monomial mu = e_b u^j outside g(k_v^2), scanning j = 0, -1, ... and then b upward.

    Only exponents whose sound box fits in the window are scanned, so every returned
    mu is certified by :func:`image_member` at the same window.

    :raises NotFound: When every scanned monomial lies in the image.
    """
    if window is None:
        window = default_window(g, v)
    elif not isinstance(window, Window):
        window = Window(*window)
    shape = g.frobenius_shape()
    if shape is None:
        raise NotFound(f"No soundness bound for {g}; cannot certify a witness.")
    deepest = None
    for exponent in range(0, window.low - 1, -1):
        if not sound_box(shape, v, exponent).covered_by(window):
            break
        deepest = exponent
    if deepest is None:
        raise NotFound(f"Window [{window.low}, {window.high}] covers no sound box at {v}.")
    lattice = ImageLattice(g, v, _ranges(g, v, window), floor=deepest)
    annihilators = np.array(lattice.annihilators(), dtype=int)
    for exponent in range(0, deepest - 1, -1):
        for digit in range(lattice.md):
            column = (exponent - lattice.low) * lattice.md + digit
            if annihilators.size and np.any(annihilators[:, column]):
                mu = LaurentLocal.monomial(v, lattice.K.p ** digit, exponent, 1)
                logging.info(f"Local witness at {v}: {mu}")
                return mu
    raise NotFound(f"Every monomial down to u^{deepest} lies in the image of g at {v}; enlarge the window.")
