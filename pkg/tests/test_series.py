import pytest
from hypothesis import given
from hypothesis import strategies as st

from cascaded_qwm.model import DriveAmplitudes
from cascaded_qwm.series import (
    ONE,
    P_MINUS,
    S_MINUS,
    S_PLUS,
    DriveSeries,
    MonomialKey,
    TruncationMismatch,
    evaluate,
    harmonic_component,
    series_add,
    series_scale_mul,
    series_table,
)

keys = st.builds(MonomialKey, *(st.integers(0, 3) for _ in range(4)))
coeffs = st.complex_numbers(min_magnitude=1e-3, max_magnitude=1e3)
series = st.dictionaries(keys, coeffs, max_size=20).map(lambda t: DriveSeries(t, truncation_order=7))


def test_monomial_bookkeeping():
    k = MonomialKey(2, 0, 0, 1)
    assert k.total_order == 3
    assert k.harmonic == -3
    assert k.label() == "p-^2*s-"


class TestAdd:
    def test_cancellation(self):
        assert len(DriveSeries({P_MINUS: 1}) + DriveSeries({P_MINUS: -1})) == 0

    def test_first_order_coherence(self):
        alpha, r = 0.7, 0.49
        x = series_add(DriveSeries({P_MINUS: -2}), DriveSeries({S_PLUS: 4 * alpha / r}))
        assert dict(x.items()) == {P_MINUS: -2, S_PLUS: 4 * alpha / r}

    def test_accumulate(self):
        k = MonomialKey(2, 0, 0, 1)
        assert (DriveSeries({k: 1}) + DriveSeries({k: 2}))[k] == 3

    def test_mismatched_truncation(self):
        with pytest.raises(TruncationMismatch):
            series_add(DriveSeries({}, 3), DriveSeries({}, 5))

    def test_prune(self):
        x = DriveSeries({P_MINUS: 1.0, S_PLUS: 1e-15})
        assert S_PLUS not in x


class TestScaleMul:
    def test_from_constant(self):
        assert dict(series_scale_mul(DriveSeries({ONE: 1}), P_MINUS, -2).items()) == {P_MINUS: -2}

    def test_shift(self):
        x = series_scale_mul(DriveSeries({S_PLUS: 1.5}), S_MINUS)
        assert list(x.keys()) == [MonomialKey(0, 0, 1, 1)]

    def test_truncation_drops(self):
        x = DriveSeries({ONE: 1, P_MINUS: 2}, truncation_order=3)
        assert len(series_scale_mul(x, MonomialKey(4, 0, 0, 0))) == 0

    @given(x=series, mono=keys)
    def test_harmonic_indices_add(self, x, mono):
        y = series_scale_mul(x, mono, 1.0)
        for k in y:
            src = MonomialKey(k.a - mono.a, k.b - mono.b, k.c - mono.c, k.d - mono.d)
            assert k.harmonic == src.harmonic + mono.harmonic


class TestHarmonics:
    def test_first_order_split(self):
        x = DriveSeries({P_MINUS: -2, S_PLUS: 4.0})
        assert dict(harmonic_component(x, -1).items()) == {P_MINUS: -2}
        assert dict(harmonic_component(x, 1).items()) == {S_PLUS: 4.0}

    @given(x=series)
    def test_beyond_truncation_empty(self, x):
        assert len(harmonic_component(x, x.truncation_order + 1)) == 0

    @given(x=series)
    def test_partition(self, x):
        total = DriveSeries({}, x.truncation_order)
        for n in range(-x.truncation_order, x.truncation_order + 1):
            total = total + harmonic_component(x, n)
        assert total == x


class TestEvaluate:
    def test_empty(self):
        assert evaluate(DriveSeries(), DriveAmplitudes(1, 2, 3, 4)) == 0

    def test_single(self):
        assert evaluate(DriveSeries({P_MINUS: -2}), DriveAmplitudes(0.04, 0, 0, 0)) == pytest.approx(-0.08)

    def test_mixed(self):
        d = DriveAmplitudes(0.1, 0.2, 0.3j, 0.5)
        x = DriveSeries({MonomialKey(1, 1, 1, 1): 2.0, MonomialKey(0, 0, 2, 0): 1.0})
        assert evaluate(x, d) == pytest.approx(2 * 0.1 * 0.2 * 0.3j * 0.5 + (0.3j) ** 2)


def test_table_sorted_by_order_then_exponents():
    x = DriveSeries({MonomialKey(1, 0, 0, 0): -2, MonomialKey(0, 0, 1, 0): 4,
                     MonomialKey(0, 1, 2, 0): 1 + 1j})
    rows = series_table(x)
    assert rows == [
        (0, 0, 1, 0, 1, 4.0, 0.0),
        (1, 0, 0, 0, -1, -2.0, 0.0),
        (0, 1, 2, 0, 3, 1.0, 1.0),
    ]
