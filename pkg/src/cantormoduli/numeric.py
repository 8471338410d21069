"""Working-precision control and exact/multiprecision conversions."""

from contextlib import contextmanager
from fractions import Fraction
import functools

import mpmath
from mpmath import mp

DEFAULT_PREC = 128

_prec = DEFAULT_PREC


def get_precision():
    return _prec


def set_precision(bits):
    global _prec
    if bits < 53:
        raise ValueError(f"working precision must be at least 53 bits, got {bits}")
    _prec = int(bits)


@contextmanager
def precision(bits):
    """Temporarily change the working precision (mantissa bits)."""
    old = _prec
    set_precision(bits)
    try:
        yield
    finally:
        set_precision(old)


def precise(func):
    """Run ``func`` under mpmath at the current working precision."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        with mp.workprec(_prec):
            return func(*args, **kwargs)

    return wrapper


def to_mpf(x):
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpf(x)


def to_fraction(x):
    """Exact rational value of a finite mpf (or int/Fraction/float)."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, float)):
        return Fraction(x)
    man, exp = mpmath.mpf(x).man_exp
    man = int(man)
    if exp >= 0:
        return Fraction(man * 2**exp)
    return Fraction(man, 2**-exp)


def as_rational(x):
    """Parse ``"p/q"``, decimal strings, ints or Fractions into a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not accepted where an exact rational is required")
    return Fraction(x)


def fmt_rational(x):
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def fmt_number(x, digits=17):
    """Render a number with ``digits`` significant digits; rationals stay exact."""
    if isinstance(x, Fraction):
        return fmt_rational(x)
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        return format(x, f".{digits}g")
    return mpmath.nstr(x, digits, min_fixed=-4, max_fixed=17)
