import os
import shlex
from dataclasses import dataclass, fields

from wound_flow.errors import ParameterError
from wound_flow.field_core import FqField, get_field
from wound_flow.function_field import RatFn, parse_ratfn

PRECISION_ENV = "WOUND_FLOW_PRECISION"
DEFAULT_PRECISION = 12
DEFAULT_HEIGHT = 4


def default_precision() -> int:
    """Working precision from the environment, falling back to DEFAULT_PRECISION."""
    text = os.environ.get(PRECISION_ENV)
    if text is None or not text.strip():
        return DEFAULT_PRECISION
    try:
        value = int(text)
    except ValueError as e:
        raise ParameterError(f"{PRECISION_ENV} must be an integer, got '{text}'.") from e
    if value < 1:
        raise ParameterError(f"{PRECISION_ENV} must be positive, got {value}.")
    return value


def degree_of(p: int, q: int) -> int:
    """m with q = p^m.

    :raises ParameterError: When q is not a power of p.
    """
    if p < 2 or q < p:
        raise ParameterError(f"q = {q} is not a power of p = {p}.")
    m, rest = 0, q
    while rest % p == 0:
        rest //= p
        m += 1
    if rest != 1:
        raise ParameterError(f"q = {q} is not a power of p = {p}.")
    return m


@dataclass(frozen=True)
class Config:
    """Field, parameter and output settings shared by every command.

    The canonical text form is "key=value" pairs in field order, e.g.
    ``p=3 q=9 a='T*(T - 1)' precision=12 format=json height=4 threads=1``; the parameter a
    is rendered through the field's own printer, so rendering a parsed text yields the
    canonical form of that text.
    """
    p: int = 3
    q: int = 9
    a: str = "T*(T-1)"
    precision: int = DEFAULT_PRECISION
    format: str = "text"
    height: int = DEFAULT_HEIGHT
    threads: int = 1

    def __post_init__(self) -> None:
        degree_of(self.p, self.q)
        if self.format not in ("json", "text"):
            raise ParameterError(f"Output format must be json or text, got '{self.format}'.")
        if self.precision < 1:
            raise ParameterError(f"Precision must be positive, got {self.precision}.")
        if self.height < 0:
            raise ParameterError(f"Height must be nonnegative, got {self.height}.")
        if self.threads < 1:
            raise ParameterError(f"Thread count must be positive, got {self.threads}.")

    @property
    def m(self) -> int:
        return degree_of(self.p, self.q)

    @property
    def field(self) -> FqField:
        return get_field(self.p, self.m)

    @property
    def parameter(self) -> RatFn:
        return parse_ratfn(self.field, self.a)

    @classmethod
    def from_args(cls, args) -> "Config":
        return cls(p=args.p, q=args.q, a=args.a,
                   precision=args.precision if args.precision is not None else default_precision(),
                   format=args.format, height=args.height, threads=args.threads)

    @classmethod
    def parse(cls, text: str) -> "Config":
        """Read the "key=value" form; unknown keys are rejected, missing keys take defaults."""
        known = {f.name: f.type for f in fields(cls)}
        values = {}
        try:
            tokens = shlex.split(text)
        except ValueError as e:
            raise ParameterError(f"Cannot read configuration '{text}': {e}") from e
        for token in tokens:
            key, sep, value = token.partition("=")
            if not sep or key not in known:
                raise ParameterError(f"Unknown configuration entry '{token}'.")
            if key in ("p", "q", "precision", "height", "threads"):
                try:
                    values[key] = int(value)
                except ValueError as e:
                    raise ParameterError(f"Configuration entry '{key}' needs an integer, got '{value}'.") from e
            else:
                values[key] = value
        return cls(**values)

    def canonical(self) -> "Config":
        """Same settings with a printed back in the field's normal form."""
        return Config(self.p, self.q, str(self.parameter), self.precision, self.format, self.height, self.threads)

    def render(self) -> str:
        c = self.canonical()
        return " ".join(f"{f.name}={shlex.quote(str(getattr(c, f.name)))}" for f in fields(c))

    def to_dict(self) -> dict:
        c = self.canonical()
        return {f.name: getattr(c, f.name) for f in fields(c)}
