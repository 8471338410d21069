from fractions import Fraction as F
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from cantormoduli.equivalence import family_omega
from cantormoduli.ergodic import (
    CylinderSet,
    IndexBeyondTruncation,
    measure_estimate,
    sample_batch,
    shift_preservation_test,
    volume_experiment,
)


@pytest.fixture(scope="module")
def big():
    return sample_batch(2024, 4, 100_000)


def test_batches_reproducible():
    a, b = sample_batch(5, 3, 100), sample_batch(5, 3, 100)
    assert np.array_equal(a.samples, b.samples)
    assert not np.array_equal(a.samples, sample_batch(6, 3, 100).samples)
    assert (a.samples > 0).all() and (a.samples < 1).all()


def test_uniform_moments(big):
    M = big.M
    assert abs(big.samples[:, 0].mean() - 0.5) <= 3 * (1 / math.sqrt(12)) / math.sqrt(M)
    corr = np.corrcoef(big.samples[:, 0], big.samples[:, 1])[0, 1]
    assert abs(corr) <= 3 / math.sqrt(M)


def test_measure_estimates(big):
    p, se = measure_estimate(big, CylinderSet({1: (0, F(1, 2))}))
    assert abs(p - 0.5) <= 3 * se
    cyl = CylinderSet({1: (0, F(1, 2)), 3: (F(1, 4), F(1, 2))})
    assert cyl.measure == F(1, 8)
    p, se = measure_estimate(big, cyl)
    assert abs(p - 0.125) <= 3 * se
    assert measure_estimate(big, CylinderSet()) == (1.0, 0.0)


def test_preservation_examples(big):
    r = shift_preservation_test(big, CylinderSet({1: (0, F(1, 2))}))
    assert r.passed and r.cylinder.preimage(1).constraints == ((2, 0, F(1, 2)),)
    r = shift_preservation_test(big, CylinderSet({2: (F(1, 3), F(2, 3))}))
    assert r.passed and abs(r.estimate - 1 / 3) < 0.01
    assert r.exact_measure == r.shifted_exact_measure


def test_truncation_guard(big):
    with pytest.raises(IndexBeyondTruncation):
        shift_preservation_test(big, CylinderSet({4: (0, F(1, 2))}))


def test_cylinder_validation():
    with pytest.raises(ValueError):
        CylinderSet({1: (F(1, 2), F(1, 4))})
    with pytest.raises(ValueError):
        CylinderSet([(1, 0, F(1, 2)), (1, F(1, 2), 1)])


def test_volume_reference_run():
    batch = sample_batch(1, 200, 10_000)
    rep = volume_experiment(family_omega(2), batch, 5, checkpoints=[10, 50, 100, 200])
    assert rep.fractions[-1] <= 1e-3 and rep.monotone
    assert rep.label == "sorted-sample proxy"


def test_volume_infinite_threshold():
    batch = sample_batch(3, 20, 500)
    rep = volume_experiment(family_omega(2), batch, math.inf)
    assert rep.fractions == [1.0]
    assert rep.to_json()["threshold"] == "inf"


@pytest.mark.parametrize("T", [0.5, 1.0, 2.0])
def test_volume_n1_against_quadrature(T):
    # n = 1: L_ref = 1, and L' = -log(1 - u) is Exp(1); need |log L'| < T
    exact, _ = integrate.quad(lambda x: math.exp(-x), math.exp(-T), math.exp(T))
    batch = sample_batch(11, 1, 100_000)
    rep = volume_experiment(family_omega(2), batch, T, N=1)
    se = math.sqrt(exact * (1 - exact) / batch.M)
    assert abs(rep.fractions[0] - exact) <= 4 * se


def test_volume_reproducible():
    b = sample_batch(9, 30, 1000)
    r1 = volume_experiment(family_omega(2), b, 3, checkpoints=[5, 30]).to_json()
    r2 = volume_experiment(family_omega(2), sample_batch(9, 30, 1000), 3, checkpoints=[5, 30]).to_json()
    assert r1 == r2


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32), st.floats(min_value=0.5, max_value=20))
def test_volume_fraction_monotone(seed, T):
    batch = sample_batch(seed, 40, 300)
    rep = volume_experiment(family_omega(F(3, 2)), batch, T, checkpoints=[1, 5, 10, 20, 40])
    assert rep.monotone


def test_estimates_within_four_sigma_across_seeds():
    cyl = CylinderSet({1: (F(1, 5), F(3, 5)), 2: (0, F(3, 4))})
    exact = float(cyl.measure)
    hits = 0
    for seed in range(100):
        p, se = measure_estimate(sample_batch(seed, 2, 10_000), cyl)
        hits += abs(p - exact) <= 4 * se
    assert hits >= 99
