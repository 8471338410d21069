"""Ring domains around the construction intervals and their moduli.

Convention: the modulus of the Teichmueller domain
T(t) = C minus ([-1, 0] union [t, +inf)) is written log Psi(t), i.e. the
annulus A(1, R) has modulus log R. The annulus symmetry check keeps its own
extremal-length convention (lambda = 2 pi / log R) and never mixes the two.
"""

from dataclasses import dataclass
from fractions import Fraction
import csv
import io

import mpmath

from .cantor import LengthFormulas
from .numeric import fmt_number, get_precision, precise, to_mpf


class RingError(ValueError):
    pass


class NotApplicable(RingError):
    pass


class ConvergenceFailure(ArithmeticError):
    pass


class ChainViolation(AssertionError):
    pass


@dataclass(frozen=True)
class RingSpec:
    """Ring around I_k^j: complement of [x2, x3] and of the outer arc [x4, inf] u [-inf, x1].

    After the affine normalisation x2 -> 0, x3 -> 1 the small neighbouring gap
    sits on the left: the outer arc is [-inf, -alpha] u [beta, +inf].
    """

    k: int
    j: int
    x1: Fraction
    x2: Fraction
    x3: Fraction
    x4: Fraction
    alpha: Fraction
    beta: Fraction

    @property
    def t(self):
        return teich_parameter(self.alpha, self.beta)


@dataclass(frozen=True)
class TeichParams:
    alpha_prime: object
    beta_prime: object
    t: object


@dataclass(frozen=True)
class PsiBounds:
    lower: object
    upper: object
    crude_lower: object
    crude_upper: object


@dataclass(frozen=True)
class ModulusChain:
    oracle: object
    intermediate: object
    bound: object

    @property
    def holds(self):
        return self.oracle <= self.intermediate <= self.bound


def ring_params(omega, k, j):
    """Exact normalised ring parameters for the interval I_k^j.

    Even j: the left gap J_k^{j-1} is the small one. Odd j: mirror image, the
    small gap J_k^j is on the right, so the two gaps swap roles. The two end
    intervals j = 1 and j = 2^k have only one bounded neighbouring gap.
    """
    if k < 1 or not 1 <= j <= 2**k:
        raise RingError(f"interval index {j} outside 1..{2**k} at depth {k}")
    if j in (1, 2**k):
        raise NotApplicable(f"I_{k}^{j} has an unbounded neighbour; no four-point ring")
    f = LengthFormulas(omega)
    ik = f.interval_length(k)
    left, right = f.gap_length(k, j - 1), f.gap_length(k, j)
    x2 = f.left_endpoint(k, j)
    x3 = x2 + ik
    x1, x4 = x2 - left, x3 + right
    small, big = (left, right) if j % 2 == 0 else (right, left)
    return RingSpec(k, j, x1, x2, x3, x4, small / ik, 1 + big / ik)


def teich_parameter(alpha, beta):
    """t such that C minus ([-inf, -alpha] u [0, 1] u [beta, inf]) is Moebius-equivalent to T(t)."""
    return alpha * (beta - 1) / (alpha + beta)


def _exactify(q):
    if isinstance(q, (Fraction, int)):
        return Fraction(q)
    if isinstance(q, float):
        return Fraction(q)
    return to_mpf(q)


@precise
def teich_reduce(q, k):
    """alpha' = 2/(1-q), beta' = 1 + 2 alpha'^k and the Teichmueller parameter t."""
    q = _exactify(q)
    if not 0 < q < 1 or k < 1:
        raise RingError(f"need q in (0, 1) and k >= 1, got q={q}, k={k}")
    a = 2 / (1 - q)
    b = 1 + 2 * a**k
    t = teich_parameter(a, b)
    simplified = a + 1 - (a * a + a) / (2 * a**k + a + 1)
    if isinstance(t, Fraction):
        if t + 1 != simplified:
            raise ChainViolation(f"t + 1 = {t + 1} differs from simplified form {simplified}")
    elif abs((t + 1) - simplified) > (t + 1) * mpmath.mpf(2) ** (8 - get_precision()):
        raise ChainViolation("t + 1 differs from the simplified form")
    if not t + 1 <= a + 1:
        raise ChainViolation("t + 1 exceeds alpha' + 1")
    return TeichParams(a, b, t)


@precise
def psi_bounds(t):
    """((sqrt(t+1) + sqrt t)^2, 4 (sqrt(t+1) + sqrt t)^2) plus the cruder t+1 and 16(t+1)."""
    t = to_mpf(t)
    if t <= 0:
        raise RingError(f"t must be positive, got {t}")
    s = (mpmath.sqrt(t + 1) + mpmath.sqrt(t)) ** 2
    return PsiBounds(s, 4 * s, t + 1, 16 * (t + 1))


@precise
def agm(a, b, max_iter=64):
    """Arithmetic-geometric mean of two positive numbers."""
    a, b = to_mpf(a), to_mpf(b)
    tol = mpmath.mpf(2) ** (4 - get_precision())
    for _ in range(max_iter):
        if abs(a - b) <= tol * abs(a):
            return (a + b) / 2
        a, b = (a + b) / 2, mpmath.sqrt(a * b)
    raise ConvergenceFailure(f"AGM did not converge in {max_iter} iterations")


@precise
def ellipk(k):
    """Complete elliptic integral of the first kind, modulus k in [0, 1)."""
    k = to_mpf(k)
    return mpmath.pi / (2 * agm(1, mpmath.sqrt((1 - k) * (1 + k))))


@precise
def mod_teich_oracle(t):
    """log Psi(t) = 2 mu(1/sqrt(t+1)), mu(r) = (pi/2) K(r')/K(r).

    With r = 1/sqrt(t+1) and r' = sqrt(t/(t+1)) both elliptic integrals reduce
    to AGMs: log Psi(t) = pi AGM(1, r') / AGM(1, r).
    """
    t = to_mpf(t)
    if t <= 0:
        raise RingError(f"t must be positive, got {t}")
    r = 1 / mpmath.sqrt(t + 1)
    r_prime = mpmath.sqrt(t / (t + 1))
    return mpmath.pi * agm(1, r_prime) / agm(1, r)


@precise
def ring_modulus(spec):
    """Modulus (log convention) of the ring described by a :class:`RingSpec`."""
    return mod_teich_oracle(to_mpf(spec.t))


@precise
def annulus_radius(spec):
    """R with the ring conformally equivalent to the round annulus A(1, R)."""
    return mpmath.exp(ring_modulus(spec))


@precise
def modulus_chain(q, k):
    """(oracle modulus at t(q, k), 4 log 2 + log(alpha' + 1), 6 log 2 - log(1 - q))."""
    tp = teich_reduce(q, k)
    q = to_mpf(_exactify(q))
    oracle = mod_teich_oracle(to_mpf(tp.t))
    mid = 4 * mpmath.log(2) + mpmath.log(to_mpf(tp.alpha_prime) + 1)
    bound = 6 * mpmath.log(2) - mpmath.log(1 - q)
    return ModulusChain(oracle, mid, bound)


@precise
def mod_upper_chain(q, k):
    """Upper bound 6 log 2 - log(1 - q) for the modulus of the depth-k ring; checks the chain."""
    chain = modulus_chain(q, k)
    if not chain.holds:
        raise ChainViolation(f"modulus chain broken at q={q}, k={k}: {chain}")
    return chain.bound


@dataclass(frozen=True)
class AnnulusReport:
    R: object
    full: object
    half: object
    ratio: object
    closed_full: object
    closed_half: object
    rel_error: object
    ok: bool


@precise
def _metric_extremal_length(R, sweep):
    """L^2/A for the metric |dz|/|z| on the annulus sector of angle ``sweep``."""
    R = to_mpf(R)
    rho = lambda r: 1 / r  # noqa: E731
    # shortest admissible curve: an arc of the middle circle
    r_mid = mpmath.sqrt(R)
    length = mpmath.quad(lambda th: rho(r_mid) * r_mid, [0, sweep])
    area = sweep * mpmath.quad(lambda r: rho(r) ** 2 * r, [1, R])
    return length**2 / area


@precise
def annulus_symmetry_check(R, tol=mpmath.mpf("1e-12")):
    """Extremal length of the full annulus is twice that of its upper half."""
    R = to_mpf(R)
    if R <= 1:
        raise RingError(f"R must exceed 1, got {R}")
    full = _metric_extremal_length(R, 2 * mpmath.pi)
    half = _metric_extremal_length(R, mpmath.pi)
    closed_full = 2 * mpmath.pi / mpmath.log(R)
    closed_half = mpmath.pi / mpmath.log(R)
    ratio = full / half
    rel = max(
        abs(ratio - 2) / 2,
        abs(full - closed_full) / closed_full,
        abs(half - closed_half) / closed_half,
    )
    return AnnulusReport(R, full, half, ratio, closed_full, closed_half, rel, bool(rel <= tol))


@precise
def log_grid(lo, hi, n):
    lo, hi = to_mpf(lo), to_mpf(hi)
    if n == 1:
        return [lo]
    return [lo * (hi / lo) ** (mpmath.mpf(i) / (n - 1)) for i in range(n)]


def psi_csv(ts):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", "lower", "oracle", "upper"])
    for t in ts:
        b = psi_bounds(t)
        w.writerow([fmt_number(t), fmt_number(b.lower), fmt_number(mpmath.exp(mod_teich_oracle(t))), fmt_number(b.upper)])
    return buf.getvalue()


def chain_csv(qs, ks):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["q", "k", "mod_upper_chain"])
    for q in qs:
        for k in ks:
            w.writerow([fmt_number(q), k, fmt_number(mod_upper_chain(q, k))])
    return buf.getvalue()
