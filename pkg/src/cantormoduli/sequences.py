"""Parameter sequences omega = (q_1, q_2, ...) in (0, 1)^N.

A sequence is an exact rational prefix followed by a tail drawn from a small
closed catalogue of models. Keeping the catalogue closed is what lets the
equivalence module decide sup-over-all-n conditions exactly.

Indexing is 1-based. Analytic tails (``PowerExp``, ``GeometricExp``) are
evaluated at the absolute index ``n + offset``; ``Explicit`` tails are
indexed relative to the end of the prefix.
"""

from dataclasses import dataclass, field
from fractions import Fraction
import json
from pathlib import Path
from typing import ClassVar, Optional, Union

import mpmath

from .numeric import as_rational, fmt_rational, precise, to_mpf


class SequenceError(ValueError):
    pass


class IndexBeyondHorizon(SequenceError):
    pass


class ValueOutOfRange(SequenceError):
    pass


def _unit_open(x, what):
    x = as_rational(x)
    if not 0 < x < 1:
        raise ValueOutOfRange(f"{what} must lie in (0, 1), got {x}")
    return x


def _integer_root(n, b):
    """Exact integer b-th root of n, or None."""
    r = round(n ** (1.0 / b))
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand**b == n:
            return cand
    return None


@dataclass(frozen=True)
class Constant:
    q: Fraction
    kind: ClassVar[str] = "constant"
    monotone: ClassVar[bool] = True

    def __post_init__(self):
        object.__setattr__(self, "q", _unit_open(self.q, "constant tail value"))

    def value(self, n):
        return self.q

    def complement(self, n):
        return 1 - self.q

    def log_complement(self, n):
        return -mpmath.log(to_mpf(1 - self.q))


@dataclass(frozen=True)
class PowerExp:
    """q_n = 1 - exp(-c n^alpha)."""

    c: Fraction
    alpha: Fraction
    kind: ClassVar[str] = "power_exp"
    monotone: ClassVar[bool] = True

    def __post_init__(self):
        c, alpha = as_rational(self.c), as_rational(self.alpha)
        if c <= 0 or alpha <= 0:
            raise ValueOutOfRange(f"power_exp needs c > 0 and alpha > 0, got c={c}, alpha={alpha}")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "alpha", alpha)

    def exponent(self, n):
        """c * n**alpha, exact whenever n**alpha is rational."""
        a, b = self.alpha.numerator, self.alpha.denominator
        if b == 1:
            return self.c * n**a
        root = _integer_root(n, b)
        if root is not None:
            return self.c * root**a
        return to_mpf(self.c) * mpmath.power(n, to_mpf(self.alpha))

    def value(self, n):
        return 1 - self.complement(n)

    def complement(self, n):
        return mpmath.exp(-to_mpf(self.exponent(n)))

    def log_complement(self, n):
        return self.exponent(n)


@dataclass(frozen=True)
class GeometricExp:
    """q_n = 1 - exp(-c r^n), r > 1."""

    c: Fraction
    r: Fraction
    kind: ClassVar[str] = "geom_exp"
    monotone: ClassVar[bool] = True

    def __post_init__(self):
        c, r = as_rational(self.c), as_rational(self.r)
        if c <= 0 or r <= 1:
            raise ValueOutOfRange(f"geom_exp needs c > 0 and r > 1, got c={c}, r={r}")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "r", r)

    def exponent(self, n):
        return self.c * self.r**n

    def value(self, n):
        return 1 - self.complement(n)

    def complement(self, n):
        return mpmath.exp(-to_mpf(self.exponent(n)))

    def log_complement(self, n):
        return self.exponent(n)


@dataclass(frozen=True)
class Explicit:
    """Finitely many pasted values; undefined past ``horizon``."""

    values: tuple
    horizon: Optional[int] = None
    kind: ClassVar[str] = "explicit"
    monotone: ClassVar[bool] = False

    def __post_init__(self):
        vals = tuple(_unit_open(v, "explicit tail value") for v in self.values)
        horizon = len(vals) if self.horizon is None else int(self.horizon)
        if not 0 <= horizon <= len(vals):
            raise SequenceError(f"explicit horizon {horizon} outside 0..{len(vals)}")
        object.__setattr__(self, "values", vals[:horizon])
        object.__setattr__(self, "horizon", horizon)

    def value(self, i):
        if not 1 <= i <= self.horizon:
            raise IndexBeyondHorizon(f"explicit tail is defined for 1..{self.horizon}, asked for {i}")
        return self.values[i - 1]

    def complement(self, i):
        return 1 - self.value(i)

    def log_complement(self, i):
        return -mpmath.log(to_mpf(1 - self.value(i)))


TailModel = Union[Constant, PowerExp, GeometricExp, Explicit]
ANALYTIC = (PowerExp, GeometricExp)


@dataclass(frozen=True)
class OmegaSequence:
    prefix: tuple = ()
    tail: TailModel = field(default_factory=lambda: Constant(Fraction(1, 3)))
    offset: int = 0

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(_unit_open(v, "prefix entry") for v in self.prefix))
        if not isinstance(self.tail, ANALYTIC):
            # offset only matters for index-dependent analytic tails
            object.__setattr__(self, "offset", 0)
        elif len(self.prefix) + self.offset < 0:
            raise SequenceError("tail offset would reach indices below 1")

    @property
    def horizon(self):
        """Last defined index, or None when defined everywhere."""
        if isinstance(self.tail, Explicit):
            return len(self.prefix) + self.tail.horizon
        return None

    def _check(self, n):
        if n < 1:
            raise SequenceError(f"indices start at 1, got {n}")
        h = self.horizon
        if h is not None and n > h:
            raise IndexBeyondHorizon(f"sequence is defined for n <= {h}, asked for {n}")

    def _tail_index(self, n):
        if isinstance(self.tail, Explicit):
            return n - len(self.prefix)
        return n + self.offset

    @precise
    def q(self, n):
        """q_n: a Fraction when exactly rational, else an mpf at working precision."""
        self._check(n)
        if n <= len(self.prefix):
            return self.prefix[n - 1]
        return self.tail.value(self._tail_index(n))

    @precise
    def complement(self, n):
        """1 - q_n without cancellation (stays positive for tails near 1)."""
        self._check(n)
        if n <= len(self.prefix):
            return 1 - self.prefix[n - 1]
        return self.tail.complement(self._tail_index(n))

    @precise
    def log_complement(self, n):
        """-log(1 - q_n); exact rational for analytic tails with rational exponent."""
        self._check(n)
        if n <= len(self.prefix):
            return -mpmath.log(to_mpf(1 - self.prefix[n - 1]))
        return self.tail.log_complement(self._tail_index(n))

    def shift(self, n=1):
        if n < 0:
            raise SequenceError("shift count must be non-negative")
        p = len(self.prefix)
        if n <= p:
            return OmegaSequence(self.prefix[n:], self.tail, self.offset + n)
        if isinstance(self.tail, Explicit):
            rest = self.tail.values[n - p:]
            return OmegaSequence((), Explicit(rest), 0)
        # analytic/constant tails: drop the whole prefix and advance the tail
        return OmegaSequence((), self.tail, self.offset + n)

    def prepend(self, values):
        values = tuple(_unit_open(v, "prepended value") for v in values)
        return OmegaSequence(values + self.prefix, self.tail, self.offset - len(values))

    def with_prefix(self, values):
        """Replace the first len(values) coordinates, keeping later ones in place."""
        values = tuple(values)
        p = len(self.prefix)
        if len(values) <= p:
            return OmegaSequence(values + self.prefix[len(values):], self.tail, self.offset)
        if isinstance(self.tail, Explicit):
            drop = len(values) - p
            return OmegaSequence(values, Explicit(self.tail.values[drop:]), 0)
        return OmegaSequence(values, self.tail, self.offset)

    def values(self, n_max, start=1):
        return [self.q(n) for n in range(start, n_max + 1)]


@dataclass(frozen=True)
class IncreasingCheck:
    increasing: bool
    witness: Optional[int]
    reason: str

    def __bool__(self):
        return self.increasing


def _order_key(omega, n):
    """(space, key): Fraction q_n when rational, else -log(1 - q_n); both increase with q_n."""
    if n <= len(omega.prefix) or not isinstance(omega.tail, ANALYTIC):
        return "q", omega.q(n)
    return "L", omega.log_complement(n)


def _le(omega, m, n, km, kn):
    if km[0] == kn[0] == "q" and isinstance(km[1], Fraction) and isinstance(kn[1], Fraction):
        return km[1] <= kn[1]
    if km[0] == kn[0] == "L":
        return to_mpf(km[1]) <= to_mpf(kn[1])
    # mixed pair: compare in -log(1 - q) space, never rounding q to 1
    return to_mpf(omega.log_complement(m)) <= to_mpf(omega.log_complement(n))


@precise
def is_increasing(omega, horizon):
    """Check q_n <= q_{n+1} up to ``horizon`` and that the tail is provably monotone.

    The scan always covers the prefix/tail junction, so a True result is a
    statement about the whole sequence.
    """
    if horizon < 2:
        raise SequenceError("horizon must be at least 2")
    if omega.horizon is not None and horizon > omega.horizon:
        raise IndexBeyondHorizon(f"horizon {horizon} exceeds defined range {omega.horizon}")
    last = max(horizon, len(omega.prefix) + 1)
    if omega.horizon is not None:
        last = min(last, omega.horizon)
    prev = _order_key(omega, 1)
    for n in range(1, last):
        cur = _order_key(omega, n + 1)
        if not _le(omega, n, n + 1, prev, cur):
            return IncreasingCheck(False, n, f"q_{n} > q_{n + 1}")
        prev = cur
    if not omega.tail.monotone:
        return IncreasingCheck(False, None, "tail model is not provably monotone")
    return IncreasingCheck(True, None, f"scanned n < {last}; {omega.tail.kind} tail is monotone")


def eventually_increasing(omega):
    """True when the tail is one of the provably non-decreasing models."""
    return omega.tail.monotone


@precise
def lower_bound(omega):
    """A delta with q_n >= delta for every n: the minimum of the prefix and first tail value.

    Valid because every analytic/constant tail is non-decreasing. For Explicit
    tails this is the minimum over the defined range only.
    """
    p = len(omega.prefix)
    if isinstance(omega.tail, Explicit):
        cands = list(omega.prefix) + list(omega.tail.values)
    else:
        cands = list(omega.prefix) + [omega.q(p + 1)]
    return min(cands, key=lambda v: to_mpf(v))


def sup_is_one(omega):
    """Whether sup q_n = 1. None for Explicit tails (not decidable)."""
    if isinstance(omega.tail, Explicit):
        return None
    return isinstance(omega.tail, ANALYTIC)


# module-level names for the sequence operations
def evaluate(omega, n):
    return omega.q(n)


def shift(omega, n=1):
    return omega.shift(n)


def prepend(omega, values):
    return omega.prepend(values)


# --- serialization -------------------------------------------------------------


def tail_to_json(tail):
    if isinstance(tail, Constant):
        return {"kind": "constant", "q": fmt_rational(tail.q)}
    if isinstance(tail, PowerExp):
        return {"kind": "power_exp", "c": fmt_rational(tail.c), "alpha": fmt_rational(tail.alpha)}
    if isinstance(tail, GeometricExp):
        return {"kind": "geom_exp", "c": fmt_rational(tail.c), "r": fmt_rational(tail.r)}
    return {"kind": "explicit", "values": [fmt_rational(v) for v in tail.values], "horizon": tail.horizon}


def tail_from_json(obj):
    kind = obj.get("kind")
    try:
        if kind == "constant":
            return Constant(as_rational(obj["q"]))
        if kind == "power_exp":
            return PowerExp(as_rational(obj["c"]), as_rational(obj["alpha"]))
        if kind == "geom_exp":
            return GeometricExp(as_rational(obj["c"]), as_rational(obj["r"]))
        if kind == "explicit":
            return Explicit(tuple(as_rational(v) for v in obj["values"]), obj.get("horizon"))
    except KeyError as exc:
        raise SequenceError(f"tail of kind {kind!r} is missing field {exc}") from None
    raise SequenceError(f"unknown tail kind {kind!r}")


def to_json(omega):
    out = {"prefix": [fmt_rational(v) for v in omega.prefix], "tail": tail_to_json(omega.tail)}
    if omega.offset:
        out["tail"]["offset"] = omega.offset
    return out


def from_json(obj):
    if not isinstance(obj, dict) or "tail" not in obj:
        raise SequenceError("sequence JSON needs an object with a 'tail' field")
    tail = tail_from_json(obj["tail"])
    prefix = tuple(as_rational(v) for v in obj.get("prefix", []))
    return OmegaSequence(prefix, tail, int(obj["tail"].get("offset", 0)))


def dumps(omega):
    return json.dumps(to_json(omega), sort_keys=True)


def loads(text):
    return from_json(json.loads(text))


def parse_literal(text):
    """Compact grammar: const:q | power_exp:c:alpha | geom_exp:c:r | file:<path.json>."""
    kind, _, rest = text.partition(":")
    parts = rest.split(":") if rest else []
    try:
        if kind == "const" and len(parts) == 1:
            return OmegaSequence((), Constant(as_rational(parts[0])))
        if kind == "power_exp" and len(parts) == 2:
            return OmegaSequence((), PowerExp(as_rational(parts[0]), as_rational(parts[1])))
        if kind == "geom_exp" and len(parts) == 2:
            return OmegaSequence((), GeometricExp(as_rational(parts[0]), as_rational(parts[1])))
        if kind == "file" and rest:
            return from_json(json.loads(Path(rest).read_text()))
    except (ValueError, ZeroDivisionError) as exc:
        if isinstance(exc, SequenceError):
            raise
        raise SequenceError(f"cannot parse sequence literal {text!r}: {exc}") from None
    raise SequenceError(f"cannot parse sequence literal {text!r}")
