"""Monte Carlo experiments on (0, 1)^N under the uniform product measure.

Samples are truncated to N coordinates. Everything is deterministic given the
seed: the generator is PCG64 (128-bit state) and reductions run in a fixed
order over fixed-size row blocks.
"""

from dataclasses import dataclass, field
from fractions import Fraction
import math

import mpmath
import numpy as np

from .numeric import fmt_rational, to_mpf
from .sequences import to_json as omega_to_json

BLOCK_ROWS = 10_000


class IndexBeyondTruncation(IndexError):
    pass


@dataclass(frozen=True)
class CylinderSet:
    """Finitely many coordinate constraints q_i in (lo, hi)."""

    constraints: tuple = ()

    def __post_init__(self):
        items = self.constraints.items() if isinstance(self.constraints, dict) else self.constraints
        norm = []
        for i, lo, hi in sorted((int(i), *bounds) for i, bounds in _pairs(items)):
            lo, hi = Fraction(lo), Fraction(hi)
            if i < 1 or not 0 <= lo < hi <= 1:
                raise ValueError(f"bad constraint q_{i} in ({lo}, {hi})")
            norm.append((i, lo, hi))
        if len({i for i, _, _ in norm}) != len(norm):
            raise ValueError("each coordinate may be constrained at most once")
        object.__setattr__(self, "constraints", tuple(norm))

    @property
    def measure(self):
        m = Fraction(1)
        for _, lo, hi in self.constraints:
            m *= hi - lo
        return m

    @property
    def max_index(self):
        return max((i for i, _, _ in self.constraints), default=0)

    def preimage(self, n=1):
        """sigma^{-n}(A): the same constraints moved n coordinates to the right."""
        return CylinderSet(tuple((i + n, (lo, hi)) for i, lo, hi in self.constraints))

    def to_json(self):
        return {str(i): [fmt_rational(lo), fmt_rational(hi)] for i, lo, hi in self.constraints}


def _pairs(items):
    for item in items:
        if len(item) == 3:
            i, lo, hi = item
            yield i, (lo, hi)
        else:
            i, (lo, hi) = item
            yield i, (lo, hi)


@dataclass(frozen=True, eq=False)
class SampleBatch:
    samples: np.ndarray
    seed: int
    N: int
    M: int


def sample_batch(seed, N, M):
    """M sequences truncated to N coordinates, i.i.d. uniform on the open interval (0, 1)."""
    if N < 1 or M < 1:
        raise ValueError("N and M must be positive")
    rng = np.random.Generator(np.random.PCG64(seed))
    ints = rng.integers(0, 2**52, size=(M, N), dtype=np.int64)
    # (k + 1/2) / 2^52 is exact in binary64 and never 0 or 1
    samples = (ints.astype(np.float64) + 0.5) / 2.0**52
    samples.setflags(write=False)
    return SampleBatch(samples, seed, N, M)


def _mask(batch, cyl, rows):
    if cyl.max_index > batch.N:
        raise IndexBeyondTruncation(f"constraint on q_{cyl.max_index} but samples stop at N={batch.N}")
    block = batch.samples[rows]
    mask = np.ones(block.shape[0], dtype=bool)
    for i, lo, hi in cyl.constraints:
        col = block[:, i - 1]
        mask &= (col > float(lo)) & (col < float(hi))
    return mask


def measure_estimate(batch, cyl):
    """(fraction of samples in the cylinder, binomial standard error)."""
    hits = 0
    for start in range(0, batch.M, BLOCK_ROWS):
        hits += int(_mask(batch, cyl, slice(start, start + BLOCK_ROWS)).sum())
    p = hits / batch.M
    return p, math.sqrt(p * (1 - p) / batch.M)


@dataclass
class PreservationReport:
    cylinder: CylinderSet
    estimate: float
    stderr: float
    shifted_estimate: float
    shifted_stderr: float
    exact_measure: Fraction
    shifted_exact_measure: Fraction
    difference: float
    tolerance: float
    passed: bool

    def to_json(self):
        return {
            "cylinder": self.cylinder.to_json(),
            "estimate": self.estimate,
            "stderr": self.stderr,
            "shifted_estimate": self.shifted_estimate,
            "shifted_stderr": self.shifted_stderr,
            "exact_measure": fmt_rational(self.exact_measure),
            "difference": self.difference,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }


def shift_preservation_test(batch, cyl, sigmas=3.0):
    """Compare the empirical measure of A and of its shift preimage."""
    pre = cyl.preimage(1)
    if pre.max_index > batch.N:
        raise IndexBeyondTruncation(f"shifted cylinder needs q_{pre.max_index}, samples stop at N={batch.N}")
    p, se = measure_estimate(batch, cyl)
    ps, ses = measure_estimate(batch, pre)
    diff = abs(p - ps)
    tol = sigmas * math.sqrt(se**2 + ses**2)
    return PreservationReport(cyl, p, se, ps, ses, cyl.measure, pre.measure, diff, tol, diff <= tol)


@dataclass
class VolumeReport:
    threshold: float
    checkpoints: list
    fractions: list
    counts: list
    seed: int
    M: int
    trunc: int
    reference: dict
    label: str = "sorted-sample proxy"
    note: str = field(
        default=(
            "Samples are sorted coordinatewise so the necessary condition applies; "
            "a vanishing fraction is consistent with the moduli space having measure zero, "
            "it does not prove it."
        )
    )

    @property
    def monotone(self):
        return all(b <= a for a, b in zip(self.fractions, self.fractions[1:]))

    def to_json(self):
        T = self.threshold
        return {
            "label": self.label,
            "note": self.note,
            "reference": self.reference,
            "threshold": "inf" if math.isinf(T) else T,
            "seed": self.seed,
            "samples": self.M,
            "trunc": self.trunc,
            "checkpoints": [
                {"N": n, "fraction": f, "count": c}
                for n, f, c in zip(self.checkpoints, self.fractions, self.counts)
            ],
            "monotone": self.monotone,
        }


def _reference_log_profile(omega_ref, N):
    with mpmath.mp.workprec(128):
        return np.array([float(mpmath.log(to_mpf(omega_ref.log_complement(n)))) for n in range(1, N + 1)])


def volume_experiment(omega_ref, batch, threshold, N=None, checkpoints=None):
    """Fraction of sorted samples whose finite necessary statistic stays below ``threshold``.

    Each sample's full truncation is sorted ascending once; the statistic at
    horizon N is the running max over n <= N of |log L_ref(n) - log L'(n)|
    with L = -log(1 - q). Fractions are therefore non-increasing in N.
    """
    if checkpoints is None:
        checkpoints = [N if N is not None else batch.N]
    checkpoints = sorted(int(c) for c in checkpoints)
    top = checkpoints[-1]
    if checkpoints[0] < 1 or top > batch.N:
        raise IndexBeyondTruncation(f"checkpoints must lie in 1..{batch.N}, got {checkpoints}")
    T = float(threshold)
    if not T > 0:
        raise ValueError("threshold must be positive")
    ref = _reference_log_profile(omega_ref, top)
    cols = np.array(checkpoints) - 1
    counts = np.zeros(len(checkpoints), dtype=np.int64)
    for start in range(0, batch.M, BLOCK_ROWS):
        block = np.sort(batch.samples[start:start + BLOCK_ROWS], axis=1)[:, :top]
        log_l = np.log(-np.log1p(-block))
        running = np.maximum.accumulate(np.abs(ref - log_l), axis=1)
        counts += (running[:, cols] < T).sum(axis=0)
    fractions = [int(c) / batch.M for c in counts]
    return VolumeReport(T, checkpoints, fractions, [int(c) for c in counts], batch.seed, batch.M, batch.N, omega_to_json(omega_ref))
