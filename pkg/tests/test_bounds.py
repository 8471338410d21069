from fractions import Fraction as F

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from cantormoduli.bounds import (
    DeltaViolation,
    GeodesicIndex,
    IndexOutOfRange,
    InvalidDilatation,
    bounds_csv,
    c_delta,
    compare_ratio,
    decompose_index,
    kinjo_upper,
    length_bounds,
    length_lower,
    maskit_upper,
    uniform_upper,
    wolpert_image_bound,
)
from cantormoduli.equivalence import family_omega
from cantormoduli.numeric import to_mpf
from cantormoduli.sequences import Constant, OmegaSequence, PowerExp

mp = mpmath.mp


def close(a, b, rel=mpmath.mpf("1e-30")):
    with mp.workprec(128):
        return abs(to_mpf(a) - to_mpf(b)) <= rel * abs(to_mpf(b))


def test_kinjo_end_interval():
    om = OmegaSequence((), Constant(F(1, 2)))
    with mp.workprec(128):
        assert close(kinjo_upper(om, (1, 1)), 2 * mp.pi**2 / mp.log(3))
    assert float(kinjo_upper(om, (3, 1))) == pytest.approx(17.9674, abs=1e-4)


def test_kinjo_constant_collapses():
    om = OmegaSequence((), Constant(F(2, 5)))
    vals = {mpmath.nstr(kinjo_upper(om, (4, j)), 30) for j in range(1, 17)}
    assert len(vals) == 1


def bit_scan(j):
    base = j - (j % 2)
    ell = 0
    while not base >> ell & 1:
        ell += 1
    return ell, base >> ell


@pytest.mark.parametrize("j", range(2, 65))
def test_decompose_matches_bit_scan(j):
    ell, m, form = decompose_index(j)
    assert (ell, m) == bit_scan(j)
    assert m % 2 == 1 and form == ("even" if j % 2 == 0 else "odd")


def test_kinjo_interior_uses_far_coordinate():
    assert decompose_index(6)[:2] == (1, 3)
    om = OmegaSequence((F(1, 10), F(1, 5), F(1, 2)), Constant(F(1, 2)))
    with mp.workprec(128):
        q2, q3 = mp.mpf(1) / 5, mp.mpf(1) / 2
        b1 = 2 * mp.pi**2 / mp.log((1 + q3) / (1 - q3))
        b2 = 2 * mp.pi**2 / mp.log(1 + 2 * q2 / (1 - q3))
        assert close(kinjo_upper(om, (3, 6)), max(b1, b2))
        assert b2 > b1


def test_geodesic_index_validated():
    with pytest.raises(IndexOutOfRange):
        GeodesicIndex(2, 5)
    with pytest.raises(IndexOutOfRange):
        GeodesicIndex(0, 1)


def test_uniform_upper_examples():
    v, cap = uniform_upper(F(1, 3), F(1, 3))
    with mp.workprec(128):
        assert close(v, 2 * mp.pi**2 / mp.log(2)) and close(cap, v)
    assert float(v) == pytest.approx(28.478, abs=1e-3)
    near_one = [uniform_upper(F(1, 3), one_minus_q=mpmath.mpf(10) ** -e)[0] for e in (3, 30, 300)]
    assert near_one[0] > near_one[1] > near_one[2] and near_one[2] < 0.05
    with pytest.raises(DeltaViolation):
        uniform_upper(F(1, 3), F(1, 4))


def test_c_delta():
    with mp.workprec(128):
        assert close(c_delta(F(1, 3)), mp.pi**2 / mp.log(2))
    assert float(c_delta(F(1, 3))) == pytest.approx(14.2389, abs=1e-4)
    assert c_delta(F(1, 5)) > c_delta(F(1, 2)) > c_delta(F(4, 5))
    assert c_delta(1 - F(1, 10**20)) < 0.5


def test_length_lower_example():
    with mp.workprec(128):
        expected = mp.pi * mp.exp(-mp.pi**2 / mp.log(2)) / (7 * mp.log(2))
        assert close(length_lower(F(1, 3), F(1, 2)), expected)
    assert float(length_lower(F(1, 3), F(1, 2))) == pytest.approx(4.24e-7, rel=1e-2)


def test_length_lower_asymptotics():
    c = mpmath.mpf(10) ** -200
    v = length_lower(F(1, 3), one_minus_q=c)
    with mp.workprec(128):
        approx = mp.pi * mp.exp(-c_delta(F(1, 3))) / -mp.log(c)
        assert abs(v / approx - 1) < 0.01


def test_compare_ratio_symmetric_point():
    r1, r2 = compare_ratio(F(1, 2), F(1, 2), F(1, 3))
    with mp.workprec(128):
        # denominator log(1 + 2 delta/(1 - q)) = log(7/3) at q = 1/2, delta = 1/3
        expected = 2 * mp.pi * mp.exp(c_delta(F(1, 3))) * 7 * mp.log(2) / mp.log(mp.mpf(7) / 3)
        assert close(r1, expected) and close(r2, expected)


def test_compare_ratio_vanishes_for_faster_sequence():
    slow, fast = family_omega(F(3, 2)), family_omega(2)
    delta = F(1, 2)
    rs = [
        compare_ratio(one_minus_q=slow.complement(n), one_minus_q_prime=fast.complement(n), delta=delta)[1]
        for n in (10, 100, 1000, 10_000)
    ]
    assert all(b < a for a, b in zip(rs, rs[1:]))
    # decays like n^{-1/2}
    assert rs[-1] < rs[0] / 25


def test_compare_ratio_diverges_in_q_prime():
    rs = [compare_ratio(F(1, 2), delta=F(1, 3), one_minus_q_prime=mpmath.mpf(10) ** -e)[0] for e in (2, 20, 200)]
    assert rs[0] < rs[1] < rs[2]


def test_compare_ratio_stays_positive_for_comparable_pair():
    a, b = OmegaSequence((), PowerExp(1, 2)), OmegaSequence((), PowerExp(3, 2))
    delta = F(1, 2)
    rs = [compare_ratio(one_minus_q=a.complement(n), one_minus_q_prime=b.complement(n), delta=delta)[0] for n in range(1, 10_001, 97)]
    assert min(rs) > 1


def test_maskit():
    with mp.workprec(128):
        assert close(maskit_upper(2), mp.e)
    assert maskit_upper(mpmath.mpf("1e-12")) < 1e-11
    grid = [maskit_upper(F(i, 10)) for i in range(1, 101)]
    assert all(a < b for a, b in zip(grid, grid[1:]))


def test_wolpert():
    assert wolpert_image_bound(1, F(1, 2)) == F(1, 2)
    assert wolpert_image_bound(3, F(1, 5)) == F(3, 5)
    with pytest.raises(InvalidDilatation):
        wolpert_image_bound(F(1, 2), 1)


def test_length_bounds_picks_tighter_upper():
    om = OmegaSequence((), PowerExp(1, 2))
    b = length_bounds(om, (3, 4), om.q(1))
    assert b.upper == min(b.kinjo, b.uniform)
    assert b.lower <= b.upper
    assert b.provenance["upper"] in ("kinjo", "uniform")


def test_bounds_csv_rows():
    rows = bounds_csv(OmegaSequence((), Constant(F(1, 3))), [1, 2], F(1, 3)).splitlines()
    assert rows[0] == "k,j,q_k,lower,kinjo_upper,uniform_upper"
    assert len(rows) == 1 + 2 + 4


@settings(max_examples=60)
@given(
    st.fractions(min_value=F(1, 100), max_value=F(99, 100), max_denominator=100),
    st.fractions(min_value=0, max_value=1, max_denominator=1000),
)
def test_sandwich_property(delta, u):
    q = delta + (1 - delta) * u * F(999, 1000)
    assert length_lower(delta, q) <= uniform_upper(delta, q)[0]
