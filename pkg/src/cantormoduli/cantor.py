"""Finite levels E_k(omega) of the generalized Cantor construction.

Two independent routes are kept on purpose:

* :func:`build_level` performs the removal procedure literally, interval by
  interval, in exact rational arithmetic;
* :func:`interval_length` / :func:`gap_length` use the closed-form products.

:func:`verify_formulas` compares the two.
"""

from dataclasses import dataclass, field
from fractions import Fraction
import csv
import io

from .numeric import fmt_rational, precise, to_fraction

INTERVAL_BUDGET = 2**20


class CantorError(ValueError):
    pass


class DepthOverflow(CantorError):
    pass


class IndexOutOfRange(CantorError):
    pass


@precise
def rational_q(omega, n):
    """(q_n as a Fraction, exact flag). Irrational q_n are rounded at working precision.

    Rounding goes through 1 - q_n so values close to 1 never collapse onto 1.
    """
    q = omega.q(n)
    if isinstance(q, Fraction):
        return q, True
    return 1 - to_fraction(omega.complement(n)), False


@dataclass(frozen=True)
class CantorLevel:
    depth: int
    intervals: tuple
    gaps: tuple
    inexact: bool = False

    def interval(self, j):
        """I_k^j, 1-based from the left."""
        return self.intervals[j - 1]

    def gap(self, j):
        """J_k^j, the open gap between I_k^j and I_k^{j+1}."""
        return self.gaps[j - 1]

    def to_json(self):
        return {
            "depth": self.depth,
            "intervals": [[fmt_rational(a), fmt_rational(b)] for a, b in self.intervals],
            "gaps": [[fmt_rational(a), fmt_rational(b)] for a, b in self.gaps],
            "inexact": self.inexact,
        }

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["kind", "k", "j", "length"])
        for j, (a, b) in enumerate(self.intervals, 1):
            w.writerow(["interval", self.depth, j, fmt_rational(b - a)])
        for j, (a, b) in enumerate(self.gaps, 1):
            w.writerow(["gap", self.depth, j, fmt_rational(b - a)])
        return buf.getvalue()


def _check_budget(k, budget):
    if k < 0:
        raise CantorError(f"depth must be non-negative, got {k}")
    if 2**k > budget:
        raise DepthOverflow(f"depth {k} needs 2^{k} intervals, budget is {budget}")


def iter_levels(omega, k_max, budget=INTERVAL_BUDGET):
    """Yield E_0, E_1, ..., E_{k_max} by repeated middle removal."""
    _check_budget(k_max, budget)
    intervals = ((Fraction(0), Fraction(1)),)
    gaps = ()
    inexact = False
    yield CantorLevel(0, intervals, gaps, inexact)
    for n in range(1, k_max + 1):
        q, exact = rational_q(omega, n)
        inexact = inexact or not exact
        new_intervals = []
        new_gaps = []
        for idx, (a, b) in enumerate(intervals):
            side = (1 - q) * (b - a) / 2
            new_intervals.append((a, a + side))
            new_intervals.append((b - side, b))
            new_gaps.append((a + side, b - side))
            if idx < len(gaps):
                # the old gap to the right keeps its place as J_n^{2j}
                new_gaps.append(gaps[idx])
        intervals, gaps = tuple(new_intervals), tuple(new_gaps)
        yield CantorLevel(n, intervals, gaps, inexact)


def build_level(omega, k, budget=INTERVAL_BUDGET):
    """Construct E_k(omega) exactly."""
    level = None
    for level in iter_levels(omega, k, budget):
        pass
    return level


class LengthFormulas:
    """Closed-form lengths with cached partial products of (1 - q_i)."""

    def __init__(self, omega):
        self.omega = omega
        self._q = [None]
        self._prod = [Fraction(1)]
        self.exact = True

    def _extend(self, k):
        while len(self._prod) <= k:
            n = len(self._prod)
            q, exact = rational_q(self.omega, n)
            self.exact = self.exact and exact
            self._q.append(q)
            self._prod.append(self._prod[-1] * (1 - q))

    def q(self, n):
        self._extend(n)
        return self._q[n]

    def interval_length(self, k):
        """|I_k^j| = 2^-k prod_{i<=k} (1 - q_i), the same for every j."""
        self._extend(k)
        return self._prod[k] / 2**k

    def gap_length(self, k, j):
        if not 1 <= j <= 2**k - 1:
            raise IndexOutOfRange(f"gap index {j} outside 1..{2**k - 1} at depth {k}")
        self._extend(k)
        ik = self.interval_length(k)
        q = self._q
        if j % 2:
            return 2 * q[k] / (1 - q[k]) * ik
        ell = (j & -j).bit_length() - 1
        # prod_{i=k-ell}^{k} (1 - q_i)
        window = self._prod[k] / self._prod[k - ell - 1]
        return 2 ** (ell + 1) * q[k - ell] / window * ik

    def left_endpoint(self, k, j):
        """Left end of I_k^j from the binary digits of j - 1."""
        if not 1 <= j <= 2**k:
            raise IndexOutOfRange(f"interval index {j} outside 1..{2**k} at depth {k}")
        a = Fraction(0)
        for i in range(1, k + 1):
            if (j - 1) >> (k - i) & 1:
                a += self.interval_length(i - 1) - self.interval_length(i)
        return a


def interval_length(omega, k):
    return LengthFormulas(omega).interval_length(k)


def gap_length(omega, k, j):
    return LengthFormulas(omega).gap_length(k, j)


def interval_endpoints(omega, k, j):
    f = LengthFormulas(omega)
    a = f.left_endpoint(k, j)
    return a, a + f.interval_length(k)


@dataclass
class FormulaReport:
    k_max: int
    checked: int = 0
    mismatches: list = field(default_factory=list)
    conservation_ok: bool = True
    nesting_ok: bool = True
    persistence_ok: bool = True
    inexact: bool = False

    @property
    def ok(self):
        return not self.mismatches and self.conservation_ok and self.nesting_ok and self.persistence_ok

    def to_json(self):
        return {
            "k_max": self.k_max,
            "checked": self.checked,
            "mismatches": [
                {"kind": kind, "k": k, "j": j, "expected": fmt_rational(e), "actual": fmt_rational(a)}
                for kind, k, j, e, a in self.mismatches
            ],
            "conservation_ok": self.conservation_ok,
            "nesting_ok": self.nesting_ok,
            "persistence_ok": self.persistence_ok,
            "inexact": self.inexact,
            "ok": self.ok,
        }


def verify_formulas(omega, k_max, budget=INTERVAL_BUDGET):
    """Compare closed-form lengths against the literal construction for every k <= k_max.

    ``expected`` in a mismatch is the constructed length, ``actual`` the formula.
    """
    report = FormulaReport(k_max)
    formulas = LengthFormulas(omega)
    prev = None
    for level in iter_levels(omega, k_max, budget):
        k = level.depth
        ik = formulas.interval_length(k)
        for j, (a, b) in enumerate(level.intervals, 1):
            report.checked += 1
            if b - a != ik:
                report.mismatches.append(("interval", k, j, b - a, ik))
        for j, (a, b) in enumerate(level.gaps, 1):
            report.checked += 1
            g = formulas.gap_length(k, j)
            if b - a != g:
                report.mismatches.append(("gap", k, j, b - a, g))
        total = sum(b - a for a, b in level.intervals) + sum(b - a for a, b in level.gaps)
        if total != 1:
            report.conservation_ok = False
        if prev is not None:
            for j, (a, b) in enumerate(level.intervals, 1):
                pa, pb = prev.intervals[(j - 1) // 2]
                if not (pa <= a < b <= pb):
                    report.nesting_ok = False
            if level.gaps[1::2] != prev.gaps:
                report.persistence_ok = False
        prev = level
        report.inexact = level.inexact
    return report


@dataclass
class ConvergenceReport:
    depth: int
    deviations: list
    monotone: bool
    vanishing: bool

    @property
    def ok(self):
        return self.monotone and self.vanishing

    def to_json(self):
        return {
            "depth": self.depth,
            "deviations": [fmt_rational(d) for d in self.deviations],
            "monotone": self.monotone,
            "vanishing": self.vanishing,
        }


def level_deviation(a, b):
    """Largest endpoint displacement between two levels of equal depth."""
    return max(
        max(abs(x0 - y0), abs(x1 - y1)) for (x0, x1), (y0, y1) in zip(a.intervals, b.intervals)
    )


def endpoint_convergence_check(omega_seq, omega_limit, k, budget=INTERVAL_BUDGET):
    """Depth-k endpoint deviation of each omega_m from the limit.

    Depth-k geometry depends only on q_1..q_k, so coordinatewise convergence
    should drive the deviations to zero. ``vanishing`` means the last
    deviation is zero or strictly below the first.
    """
    target = build_level(omega_limit, k, budget)
    devs = [level_deviation(build_level(om, k, budget), target) for om in omega_seq]
    monotone = all(d1 <= d0 for d0, d1 in zip(devs, devs[1:]))
    vanishing = bool(devs) and (devs[-1] == 0 or devs[-1] < devs[0])
    return ConvergenceReport(k, devs, monotone, vanishing)
