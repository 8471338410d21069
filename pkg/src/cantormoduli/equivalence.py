"""Three-valued quasiconformal-equivalence classifier for pairs of sequences.

Two sup statistics are tracked for a pair (omega, omega'), both in terms of
L_n = -log(1 - q_n):

* sufficient: sup_n |L_n - L'_n| < inf (with lower bounds) implies equivalence;
* necessary: sup_n |log L_n - log L'_n| < inf is required for equivalence of
  increasing sequences.

Finite maxima up to a horizon are reported as evidence only. Whether a sup is
finite is decided symbolically from the pair of tail models, which is the
only sound way to settle a condition over all n.

Prefixes never matter for the verdict: two sequences agreeing from some index
on are equivalent, so a sequence with a monotone tail can be replaced by an
increasing one with the same tail before the necessary condition is applied.
"""

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
import csv
import functools
import io
from typing import Optional

import mpmath

from .numeric import as_rational, fmt_number, get_precision, precise, to_mpf
from .sequences import (
    Constant,
    Explicit,
    GeometricExp,
    IndexBeyondHorizon,
    OmegaSequence,
    PowerExp,
    eventually_increasing,
    is_increasing,
    lower_bound,
    sup_is_one,
)


class AlphaOutOfRange(ValueError):
    pass


class HorizonError(ValueError):
    pass


class Outcome(str, Enum):
    EQUIVALENT = "Equivalent"
    NOT_EQUIVALENT = "NotEquivalent"
    INDETERMINATE = "Indeterminate"


class Basis(str, Enum):
    SUFFICIENT_HOLDS = "SufficientHolds"
    NECESSARY_FAILS = "NecessaryFails"
    NEITHER_DECIDES = "NeitherDecides"


class Asymptotic(str, Enum):
    BOUNDED = "Bounded"
    DIVERGES_LOG = "DivergesLog"
    DIVERGES_POLY = "DivergesPoly"
    DIVERGES_EXP = "DivergesExp"
    UNKNOWN = "Unknown"

    @property
    def diverges(self):
        return self in (Asymptotic.DIVERGES_LOG, Asymptotic.DIVERGES_POLY, Asymptotic.DIVERGES_EXP)


@dataclass(frozen=True)
class SupStatistic:
    kind: str
    finite_max: object
    asymptotic: Asymptotic
    N: int
    argmax: int

    def to_json(self):
        return {
            "kind": self.kind,
            "finite_max": fmt_number(self.finite_max),
            "argmax": self.argmax,
            "asymptotic": self.asymptotic.value,
            "N": self.N,
        }


@dataclass(frozen=True)
class Verdict:
    outcome: Outcome
    basis: Basis
    sufficient: SupStatistic
    necessary: SupStatistic
    preconditions: dict
    clause: Optional[str] = None
    delta: object = None
    advisory: Optional[str] = None
    witness: dict = field(default_factory=dict)

    def to_json(self):
        out = {
            "outcome": self.outcome.value,
            "basis": self.basis.value,
            "clause": self.clause,
            "witness": self.witness,
            "sufficient": self.sufficient.to_json(),
            "necessary": self.necessary.to_json(),
            "preconditions": self.preconditions,
            "delta": None if self.delta is None else fmt_number(self.delta),
        }
        if self.advisory is not None:
            out["advisory"] = self.advisory
        return out


def family_omega(alpha):
    """q_n(alpha) = 1 - exp(-n^alpha) for alpha > 1."""
    alpha = as_rational(alpha)
    if alpha <= 1:
        raise AlphaOutOfRange(f"family parameter must exceed 1, got {alpha}")
    return OmegaSequence((), PowerExp(1, alpha))


# --- finite statistics ---------------------------------------------------------


@functools.lru_cache(maxsize=64)
def _profiles(omega, N, prec):
    with mpmath.mp.workprec(prec):
        L = [to_mpf(omega.log_complement(n)) for n in range(1, N + 1)]
        logL = [mpmath.log(x) for x in L]
    return tuple(L), tuple(logL)


def _check_horizon(omega, N):
    if N < 1:
        raise HorizonError(f"horizon must be at least 1, got {N}")
    h = omega.horizon
    if h is not None and N > h:
        raise HorizonError(f"sequence is only defined up to n = {h}, horizon {N} requested")


@precise
def _finite_max(a, b, N, use_log):
    _check_horizon(a, N)
    _check_horizon(b, N)
    pa, pb = _profiles(a, N, get_precision()), _profiles(b, N, get_precision())
    xs, ys = (pa[1], pb[1]) if use_log else (pa[0], pb[0])
    best, arg = mpmath.mpf(0), 1
    for n, (x, y) in enumerate(zip(xs, ys), 1):
        d = abs(x - y)
        if d > best:
            best, arg = d, n
    return best, arg


# --- symbolic tables ---------------------------------------------------------


def _order(a, b):
    """Sort a tail pair into a canonical kind order so the tables stay small."""
    rank = {Constant: 0, PowerExp: 1, GeometricExp: 2}
    ta, tb = type(a.tail), type(b.tail)
    if rank[ta] <= rank[tb]:
        return a, b
    return b, a


def _sufficient_class(a, b):
    if isinstance(a.tail, Explicit) or isinstance(b.tail, Explicit):
        return Asymptotic.UNKNOWN
    a, b = _order(a, b)
    ta, tb = a.tail, b.tail
    if isinstance(ta, Constant):
        if isinstance(tb, Constant):
            return Asymptotic.BOUNDED
        return Asymptotic.DIVERGES_POLY if isinstance(tb, PowerExp) else Asymptotic.DIVERGES_EXP
    if isinstance(ta, PowerExp):
        if isinstance(tb, GeometricExp):
            return Asymptotic.DIVERGES_EXP
        if ta.alpha != tb.alpha or ta.c != tb.c:
            return Asymptotic.DIVERGES_POLY
        if a.offset == b.offset:
            return Asymptotic.BOUNDED
        # c((n+o)^a - (n+o')^a) ~ c a (o - o') n^(a-1)
        return Asymptotic.BOUNDED if ta.alpha <= 1 else Asymptotic.DIVERGES_POLY
    # both geometric: c r^(n+o) - c' r'^(n+o')
    if ta.r != tb.r:
        return Asymptotic.DIVERGES_EXP
    if ta.c * ta.r**a.offset == tb.c * tb.r**b.offset:
        return Asymptotic.BOUNDED
    return Asymptotic.DIVERGES_EXP


def _necessary_class(a, b):
    if isinstance(a.tail, Explicit) or isinstance(b.tail, Explicit):
        return Asymptotic.UNKNOWN
    a, b = _order(a, b)
    ta, tb = a.tail, b.tail
    if isinstance(ta, Constant):
        if isinstance(tb, Constant):
            return Asymptotic.BOUNDED
        # log(c n^alpha) ~ alpha log n; log(c r^n) ~ n log r
        return Asymptotic.DIVERGES_LOG if isinstance(tb, PowerExp) else Asymptotic.DIVERGES_POLY
    if isinstance(ta, PowerExp):
        if isinstance(tb, GeometricExp):
            return Asymptotic.DIVERGES_POLY
        return Asymptotic.BOUNDED if ta.alpha == tb.alpha else Asymptotic.DIVERGES_LOG
    return Asymptotic.BOUNDED if ta.r == tb.r else Asymptotic.DIVERGES_POLY


def sufficient_stat(omega, omega_prime, N):
    """max_{n<=N} |log((1 - q_n)/(1 - q'_n))| and the exact asymptotic class."""
    fm, arg = _finite_max(omega, omega_prime, N, use_log=False)
    return SupStatistic("sufficient", fm, _sufficient_class(omega, omega_prime), N, arg)


def necessary_stat(omega, omega_prime, N):
    """max_{n<=N} |log(log(1 - q_n)/log(1 - q'_n))| and the exact asymptotic class."""
    fm, arg = _finite_max(omega, omega_prime, N, use_log=True)
    return SupStatistic("necessary", fm, _necessary_class(omega, omega_prime), N, arg)


# --- classification ------------------------------------------------------------


@functools.lru_cache(maxsize=256)
def _increasing(omega, N):
    try:
        return bool(is_increasing(omega, max(N, 2)))
    except IndexBeyondHorizon:
        return False


def _preconditions(omega, N):
    explicit = isinstance(omega.tail, Explicit)
    inc = _increasing(omega, N)
    return {
        "increasing": inc,
        "eventually_increasing": eventually_increasing(omega),
        "lower_bounded": None if explicit else True,
        "sup_is_one": sup_is_one(omega),
    }


def default_delta(omega, omega_prime):
    """A common lower bound for both sequences, for downstream length bounds."""
    a, b = lower_bound(omega), lower_bound(omega_prime)
    return a if to_mpf(a) <= to_mpf(b) else b


def classify(omega, omega_prime, N=1000, delta=None, heuristic_threshold=None):
    """Classify the pair as Equivalent, NotEquivalent or Indeterminate.

    ``delta`` overrides the default common lower bound recorded in the
    verdict. ``heuristic_threshold`` only affects pairs involving Explicit
    tails, attaching a clearly non-rigorous advisory label.
    """
    suff = sufficient_stat(omega, omega_prime, N)
    nec = necessary_stat(omega, omega_prime, N)
    pa, pb = _preconditions(omega, N), _preconditions(omega_prime, N)
    pre = {"a": pa, "b": pb}
    if delta is None:
        delta = default_delta(omega, omega_prime)

    both_lower = pa["lower_bounded"] is True and pb["lower_bounded"] is True
    sups = (pa["sup_is_one"], pb["sup_is_one"])
    clause = None
    if suff.asymptotic is Asymptotic.BOUNDED and both_lower:
        outcome, basis, clause = Outcome.EQUIVALENT, Basis.SUFFICIENT_HOLDS, "log_complement_ratio"
    elif both_lower and None not in sups and sups[0] != sups[1]:
        # one sequence is bounded away from 1 (equivalent to middle thirds),
        # the other is not: never equivalent
        outcome, basis, clause = Outcome.NOT_EQUIVALENT, Basis.NECESSARY_FAILS, "upper_bound"
    elif pa["eventually_increasing"] and pb["eventually_increasing"] and nec.asymptotic.diverges:
        outcome, basis, clause = Outcome.NOT_EQUIVALENT, Basis.NECESSARY_FAILS, "log_log_ratio"
    else:
        outcome, basis = Outcome.INDETERMINATE, Basis.NEITHER_DECIDES

    if outcome is Outcome.NOT_EQUIVALENT and suff.asymptotic is Asymptotic.BOUNDED:
        raise AssertionError("sufficient and necessary conditions disagree; classifier tables are inconsistent")

    advisory = None
    if (
        heuristic_threshold is not None
        and outcome is Outcome.INDETERMINATE
        and Asymptotic.UNKNOWN in (suff.asymptotic, nec.asymptotic)
    ):
        T = to_mpf(heuristic_threshold)
        if nec.finite_max > T:
            advisory = "not-equivalent (non-rigorous: finite necessary statistic exceeds threshold)"
        elif suff.finite_max <= T:
            advisory = "equivalent (non-rigorous: finite sufficient statistic within threshold)"

    witness = {
        "sufficient_max": fmt_number(suff.finite_max),
        "necessary_max": fmt_number(nec.finite_max),
        "sufficient_rate": suff.asymptotic.value,
        "necessary_rate": nec.asymptotic.value,
    }
    return Verdict(outcome, basis, suff, nec, pre, clause, delta, advisory, witness)


def pairwise_matrix(alphas, N=1000):
    """Verdicts for every ordered pair of family members."""
    alphas = [as_rational(a) for a in alphas]
    if len(set(alphas)) != len(alphas):
        raise ValueError("alphas must be distinct")
    seqs = [family_omega(a) for a in alphas]
    return [[classify(a, b, N) for b in seqs] for a in seqs]


def matrix_csv(alphas, matrix):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["alpha", "alpha_prime", "outcome", "basis", "necessary_max", "necessary_rate", "sufficient_max", "sufficient_rate"])
    for a, row in zip(alphas, matrix):
        for b, v in zip(alphas, row):
            w.writerow([
                fmt_number(Fraction(a)), fmt_number(Fraction(b)), v.outcome.value, v.basis.value,
                fmt_number(v.necessary.finite_max), v.necessary.asymptotic.value,
                fmt_number(v.sufficient.finite_max), v.sufficient.asymptotic.value,
            ])
    return buf.getvalue()
