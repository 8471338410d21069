from fractions import Fraction as F

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from cantormoduli.numeric import precision, to_mpf
from cantormoduli.sequences import (
    Constant,
    Explicit,
    GeometricExp,
    IndexBeyondHorizon,
    OmegaSequence,
    PowerExp,
    SequenceError,
    ValueOutOfRange,
    dumps,
    evaluate,
    is_increasing,
    loads,
    lower_bound,
    parse_literal,
    prepend,
    shift,
    sup_is_one,
)

W2 = OmegaSequence((), PowerExp(1, 2))

unit = st.fractions(min_value=F(1, 1000), max_value=F(999, 1000), max_denominator=1000)
tails = st.one_of(
    unit.map(Constant),
    st.tuples(st.integers(1, 5), st.sampled_from([F(1, 2), F(1), F(3, 2), F(2), F(3)])).map(lambda a: PowerExp(*a)),
    st.tuples(st.integers(1, 3), st.sampled_from([F(3, 2), F(2)])).map(lambda a: GeometricExp(*a)),
)
omegas = st.builds(OmegaSequence, st.lists(unit, max_size=6).map(tuple), tails)


def test_constant_prefix_eval():
    assert evaluate(OmegaSequence((F(1, 3),), Constant(F(1, 3))), 5) == F(1, 3)


def test_power_exp_eval_matches_direct_exponential():
    q = evaluate(W2, 2)
    with mpmath.workprec(256):
        expected = 1 - mpmath.exp(-4)
        assert abs(q - expected) < mpmath.mpf(2) ** -120
    assert float(q) == pytest.approx(0.981684, abs=1e-6)


def test_explicit_horizon():
    om = OmegaSequence((F(1, 2),), Explicit((F(3, 4),), 1))
    assert om.q(2) == F(3, 4)
    with pytest.raises(IndexBeyondHorizon):
        om.q(3)


def test_shift_drops_prefix_entry():
    om = OmegaSequence((F(1, 4), F(1, 2)), Constant(F(2, 3)))
    assert shift(om, 1) == OmegaSequence((F(1, 2),), Constant(F(2, 3)))


def test_shift_reindexes_analytic_tail():
    s = shift(W2, 3)
    assert s.log_complement(1) == 16
    assert s.q(1) == W2.q(4)


def test_shift_composition():
    for om in (W2, OmegaSequence((F(1, 5), F(2, 5), F(1, 2)), GeometricExp(1, 2))):
        a, b = shift(shift(om, 1), 1), shift(om, 2)
        assert all(a.q(n) == b.q(n) for n in range(1, 51))


def test_prepend_examples():
    assert prepend(OmegaSequence((), Constant(F(1, 3))), [F(1, 2)]) == OmegaSequence((F(1, 2),), Constant(F(1, 3)))
    back = shift(prepend(W2, [F(9, 10)]), 1)
    assert all(back.q(n) == W2.q(n) for n in range(1, 51))
    with pytest.raises(ValueOutOfRange):
        prepend(W2, [0])


def test_is_increasing_examples():
    assert is_increasing(W2, 10_000)
    check = is_increasing(OmegaSequence((F(1, 2), F(1, 3)), Constant(F(1, 3))), 10)
    assert not check and check.witness == 1
    assert is_increasing(OmegaSequence((), Constant(F(1, 3))), 10)


def test_is_increasing_checks_junction():
    # prefix fine on its own but exceeds the first tail value
    om = OmegaSequence((F(1, 10), F(99, 100)), PowerExp(1, 1))
    check = is_increasing(om, 2)
    assert not check and check.witness == 2


def test_is_increasing_refuses_explicit():
    om = OmegaSequence((), Explicit((F(1, 4), F(1, 2))))
    check = is_increasing(om, 2)
    assert not check and check.witness is None


def test_power_exp_log_complement_exact_on_rational_powers():
    t = PowerExp(F(3, 2), F(3, 2))
    assert t.log_complement(4) == F(3, 2) * 8
    assert t.log_complement(9) == F(3, 2) * 27


def test_power_exp_log_complement_irrational_power_within_ulp():
    t = PowerExp(1, F(3, 2))
    with precision(128), mpmath.workprec(128):
        got = to_mpf(t.log_complement(2))
        with mpmath.workprec(400):
            ref = mpmath.mpf(2) ** mpmath.mpf(1.5)
        assert abs(got - ref) <= abs(ref) * mpmath.mpf(2) ** -126


def test_complement_survives_values_near_one():
    om = OmegaSequence((), GeometricExp(1, 2))
    c = om.complement(20)  # exp(-2^20)
    assert c > 0
    assert om.log_complement(20) == 2**20


@pytest.mark.parametrize("bad", [Constant, lambda v: PowerExp(v, 1)])
def test_out_of_range_rejected(bad):
    with pytest.raises(ValueOutOfRange):
        bad(F(0))


def test_floats_rejected_where_exact_needed():
    with pytest.raises(TypeError):
        Constant(0.5)


def test_lower_bound_and_sup():
    om = OmegaSequence((F(1, 2), F(1, 7)), PowerExp(1, 2))
    assert lower_bound(om) == F(1, 7)
    assert sup_is_one(om) is True
    assert sup_is_one(OmegaSequence((), Constant(F(1, 3)))) is False
    assert sup_is_one(OmegaSequence((), Explicit((F(1, 2),)))) is None


def test_parse_literal_grammar(tmp_path):
    assert parse_literal("const:1/3").tail == Constant(F(1, 3))
    assert parse_literal("power_exp:1:1.5").tail == PowerExp(1, F(3, 2))
    assert parse_literal("geom_exp:2:3").tail == GeometricExp(2, 3)
    path = tmp_path / "om.json"
    om = OmegaSequence((F(1, 5),), PowerExp(1, 2), offset=2)
    path.write_text(dumps(om))
    assert parse_literal(f"file:{path}") == om
    for bad in ("const", "const:2", "power_exp:1", "nope:1", "const:x"):
        with pytest.raises(SequenceError):
            parse_literal(bad)


@given(omegas)
def test_json_round_trip(om):
    assert loads(dumps(om)) == om


@settings(max_examples=50)
@given(omegas, st.lists(unit, min_size=1, max_size=5))
def test_shift_inverts_prepend(om, vals):
    back = shift(prepend(om, vals), len(vals))
    assert all(back.q(n) == om.q(n) for n in range(1, 31))


@settings(max_examples=50)
@given(omegas, st.integers(1, 40))
def test_eval_pure_and_in_range(om, n):
    a, b = om.q(n), om.q(n)
    assert a == b
    assert 0 < to_mpf(a) <= 1 and om.complement(n) > 0


@settings(max_examples=30)
@given(tails.filter(lambda t: not isinstance(t, Constant)))
def test_analytic_tails_strictly_increasing(tail):
    om = OmegaSequence((), tail)
    ls = [to_mpf(om.log_complement(n)) for n in range(1, 60)]
    assert all(a < b for a, b in zip(ls, ls[1:]))


def test_with_prefix_keeps_positions():
    om = OmegaSequence((), PowerExp(1, 2))
    r = om.with_prefix([F(1, 2), F(1, 3)])
    assert r.q(1) == F(1, 2) and r.q(2) == F(1, 3)
    assert r.log_complement(3) == 9
