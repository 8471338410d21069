"""Bounds on hyperbolic lengths of the canonical pants curves gamma_k^j.

Nothing here computes a true geodesic length; every function evaluates one of
the explicit bounds. All transcendental arithmetic runs in mpmath at the
working precision (see :mod:`cantormoduli.numeric`), so e^{-C(delta)} stays
meaningful for small delta.

Functions that take ``q`` also accept ``one_minus_q``: for tails where q is
within rounding of 1 the complement must be passed directly.
"""

from dataclasses import dataclass, field
from fractions import Fraction
import csv
import io

import mpmath

from .numeric import fmt_number, precise, to_mpf


class BoundsError(ValueError):
    pass


class DeltaViolation(BoundsError):
    pass


class InvalidDilatation(BoundsError):
    pass


class IndexOutOfRange(BoundsError):
    pass


@dataclass(frozen=True)
class GeodesicIndex:
    k: int
    j: int

    def __post_init__(self):
        if self.k < 1 or not 1 <= self.j <= 2**self.k:
            raise IndexOutOfRange(f"gamma_k^j needs k >= 1 and 1 <= j <= 2^k, got k={self.k}, j={self.j}")


@dataclass(frozen=True)
class LengthBounds:
    lower: object
    upper: object
    delta_used: object
    provenance: dict = field(default_factory=dict)
    kinjo: object = None
    uniform: object = None


def decompose_index(j):
    """Write j = 2^ell m (j even) or j = 2^ell m + 1 (j odd, j > 1) with m odd.

    Returns (ell, m, form) where form is "even" or "odd".
    """
    if j < 2:
        raise IndexOutOfRange(f"no decomposition for j={j}")
    base = j if j % 2 == 0 else j - 1
    ell = 0
    while base % 2 == 0:
        base //= 2
        ell += 1
    return ell, base, "even" if j % 2 == 0 else "odd"


def _exact(x):
    return Fraction(x) if isinstance(x, (int, Fraction)) else to_mpf(x)


def _complement(q, one_minus_q):
    """1 - q, kept as a Fraction when rational so the delta check is exact."""
    if one_minus_q is not None:
        return _exact(one_minus_q)
    return 1 - _exact(q)


def _check_delta(delta, c):
    """Validate 0 < delta < 1 and q >= delta; returns (delta, 1 - q) as mpf."""
    delta = _exact(delta)
    if not 0 < delta < 1:
        raise DeltaViolation(f"delta must lie in (0, 1), got {delta}")
    # q >= delta  <=>  1 - q <= 1 - delta; exact when both sides are rational
    bad = c > 1 - delta if isinstance(c, Fraction) and isinstance(delta, Fraction) else to_mpf(c) > 1 - to_mpf(delta)
    if bad:
        raise DeltaViolation(f"q = {fmt_number(1 - c, 12)} is below delta = {fmt_number(delta, 12)}")
    return to_mpf(delta), to_mpf(c)


@precise
def _kinjo_from(c_k, q_far):
    pi2 = 2 * mpmath.pi**2
    # (1 + q_k)/(1 - q_k) written via the complement to survive q_k -> 1
    b1 = pi2 / mpmath.log((2 - c_k) / c_k)
    if q_far is None:
        return b1
    b2 = pi2 / mpmath.log(1 + 2 * q_far / c_k)
    return max(b1, b2)


@precise
def kinjo_upper(omega, g):
    """Upper bound for the length of gamma_k^j, by the position of j."""
    if not isinstance(g, GeodesicIndex):
        g = GeodesicIndex(*g)
    k, j = g.k, g.j
    c_k = to_mpf(omega.complement(k))
    if j in (1, 2**k):
        return _kinjo_from(c_k, None)
    ell, _, _ = decompose_index(j)
    return _kinjo_from(c_k, to_mpf(omega.q(k - ell)))


@precise
def uniform_upper(delta, q=None, *, one_minus_q=None):
    """Returns (2 pi^2 / log(1 + 2 delta/(1 - q)), the delta-only cap)."""
    delta, c = _check_delta(delta, _complement(q, one_minus_q))
    pi2 = 2 * mpmath.pi**2
    value = pi2 / mpmath.log(1 + 2 * delta / c)
    cap = pi2 / mpmath.log(1 + 2 * delta / (1 - delta))
    return value, cap


@precise
def c_delta(delta):
    delta = _exact(delta)
    if not 0 < delta < 1:
        raise DeltaViolation(f"delta must lie in (0, 1), got {delta}")
    delta = to_mpf(delta)
    return mpmath.pi**2 / mpmath.log(1 + 2 * delta / (1 - delta))


@precise
def length_lower(delta, q=None, *, one_minus_q=None):
    """e^{-C(delta)} pi / (6 log 2 - log(1 - q))."""
    delta, c = _check_delta(delta, _complement(q, one_minus_q))
    return mpmath.exp(-c_delta(delta)) * mpmath.pi / (6 * mpmath.log(2) - mpmath.log(c))


@precise
def compare_ratio(q=None, q_prime=None, delta=None, *, one_minus_q=None, one_minus_q_prime=None):
    """Both ordered comparison ratios (R(q, q'), R(q', q)).

    R(q, q') = 2 pi e^{C} (6 log 2 - log(1 - q')) / log(1 + 2 delta/(1 - q)).
    """
    _, c = _check_delta(delta, _complement(q, one_minus_q))
    delta, cp = _check_delta(delta, _complement(q_prime, one_minus_q_prime))
    pref = 2 * mpmath.pi * mpmath.exp(c_delta(delta))
    six_log2 = 6 * mpmath.log(2)
    r_qqp = pref * (six_log2 - mpmath.log(cp)) / mpmath.log(1 + 2 * delta / c)
    r_qpq = pref * (six_log2 - mpmath.log(c)) / mpmath.log(1 + 2 * delta / cp)
    return r_qqp, r_qpq


@precise
def maskit_upper(ell):
    """Extremal-length upper bound (1/2) ell e^{ell/2} for a geodesic of length ell."""
    ell = to_mpf(ell)
    if ell <= 0:
        raise BoundsError(f"length must be positive, got {ell}")
    return ell * mpmath.exp(ell / 2) / 2


def wolpert_image_bound(K, ell):
    """K * ell: length bound for the image class under a K-quasiconformal map."""
    if K < 1:
        raise InvalidDilatation(f"maximal dilatation must be >= 1, got {K}")
    if ell <= 0:
        raise BoundsError(f"length must be positive, got {ell}")
    if isinstance(K, (int, Fraction)) and isinstance(ell, (int, Fraction)):
        return Fraction(K) * ell
    return to_mpf(K) * to_mpf(ell)


@precise
def length_bounds(omega, g, delta):
    """Lower and upper bounds for gamma_k^j; upper is the tighter of the two upper bounds."""
    if not isinstance(g, GeodesicIndex):
        g = GeodesicIndex(*g)
    c_k = omega.complement(g.k)
    lower = length_lower(delta, one_minus_q=c_k)
    uni, _ = uniform_upper(delta, one_minus_q=c_k)
    kin = kinjo_upper(omega, g)
    upper, src = (kin, "kinjo") if kin <= uni else (uni, "uniform")
    return LengthBounds(
        lower=lower,
        upper=upper,
        delta_used=delta,
        provenance={"lower": "extremal_length", "upper": src},
        kinjo=kin,
        uniform=uni,
    )


def bounds_csv(omega, levels, delta):
    """Rows (k, j, q_k, lower, kinjo_upper, uniform_upper) for every j at each level."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["k", "j", "q_k", "lower", "kinjo_upper", "uniform_upper"])
    for k in levels:
        q_k = omega.q(k)
        for j in range(1, 2**k + 1):
            b = length_bounds(omega, GeodesicIndex(k, j), delta)
            w.writerow([k, j, fmt_number(q_k), fmt_number(b.lower), fmt_number(b.kinjo), fmt_number(b.uniform)])
    return buf.getvalue()
