import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from plumbq.qlaurent import (
    QSeries,
    qs_add,
    qs_eval,
    qs_flip,
    qs_from_json,
    qs_mul,
    qs_neg,
    qs_pochhammer,
    qs_qbinomial,
    qs_scale,
    qs_shift,
    qs_to_json,
)


def poly(d, **kw):
    return QSeries.from_terms(d, **kw)


small_series = st.dictionaries(
    st.integers(min_value=-8, max_value=12),
    st.integers(min_value=-5, max_value=5),
    max_size=6,
).map(lambda d: poly(d))


class TestBasics:
    def test_zero_one(self):
        assert QSeries.zero().is_zero()
        assert QSeries.one().coeff(0) == 1
        assert str(QSeries.zero()) == "0"

    def test_zero_coefficients_dropped(self):
        s = poly({2: 0, 3: 1})
        assert len(s.terms) == 1

    def test_trunc_is_exclusive(self):
        s = poly({4: 1, 5: 1}, trunc=5)
        assert s.coeff(4) == 1 and s.coeff(5) == 0

    def test_monomial_fractional(self):
        s = QSeries.monomial(Fraction(-3, 2))
        assert s.denom == 2
        assert s.min_exponent() == Fraction(-3, 2)

    def test_min_exponent_of_zero_raises(self):
        with pytest.raises(ValueError):
            QSeries.zero().min_exponent()

    def test_denom_enforced(self):
        with pytest.raises(ValueError):
            poly({Fraction(1, 3): 1}, denom=2)


class TestArithmetic:
    @given(small_series, small_series)
    def test_add_commutes(self, a, b):
        assert qs_add(a, b).terms == qs_add(b, a).terms

    @given(small_series, small_series)
    @settings(max_examples=40)
    def test_mul_commutes(self, a, b):
        assert qs_mul(a, b).terms == qs_mul(b, a).terms

    @given(small_series)
    def test_additive_inverse(self, a):
        assert qs_add(a, qs_neg(a)).is_zero()

    @given(small_series, small_series, small_series)
    @settings(max_examples=25)
    def test_distributive(self, a, b, c):
        lhs = qs_mul(a, qs_add(b, c))
        rhs = qs_add(qs_mul(a, b), qs_mul(a, c))
        assert lhs.terms == rhs.terms

    @given(small_series, st.integers(min_value=-6, max_value=6))
    def test_shift_matches_monomial_mul(self, a, k):
        assert qs_shift(a, k).terms == qs_mul(a, QSeries.monomial(k)).terms

    def test_scale(self):
        s = qs_scale(poly({1: 2}), Fraction(1, 2))
        assert s.coeff(1) == 1

    def test_mul_respects_truncation(self):
        a = poly({0: 1, 1: 1}, trunc=3)
        b = poly({2: 1})
        assert qs_mul(a, b).coeff(3) == 0


class TestPochhammerBinomial:
    def test_pochhammer_empty(self):
        assert qs_pochhammer(1, 1, 0).coeff(0) == 1

    def test_pochhammer_expansion(self):
        # (1-q)(1-q^2) = 1 - q - q^2 + q^3
        s = qs_pochhammer(1, 1, 2)
        assert s.terms == poly({0: 1, 1: -1, 2: -1, 3: 1}).terms

    def test_qbinomial_row_sum_at_one(self):
        r = 5
        total = sum(
            qs_eval(qs_qbinomial(r, k), 1.0).real for k in range(r + 1)
        )
        assert total == pytest.approx(2.0 ** r)

    def test_qbinomial_symmetry(self):
        assert qs_qbinomial(6, 2).terms == qs_qbinomial(6, 4).terms

    def test_qbinomial_base_two_is_squared_exponents(self):
        a = qs_qbinomial(4, 2, base=1)
        b = qs_qbinomial(4, 2, base=2)
        assert {2 * e: c for e, c in a.terms} == dict(b.terms)

    def test_qbinomial_times_pochhammers(self):
        # [r k] (q;q)_k (q;q)_{r-k} == (q;q)_r
        r, k = 5, 2
        lhs = qs_mul(
            qs_mul(qs_qbinomial(r, k), qs_pochhammer(1, 1, k)),
            qs_pochhammer(1, 1, r - k),
        )
        assert lhs.terms == qs_pochhammer(1, 1, r).terms


class TestFlip:
    def test_flip_negates_odd_powers(self):
        s = qs_flip(poly({0: 1, 1: 1, 2: 1}))
        assert (s - poly({0: 1, 1: -1, 2: 1})).is_zero()

    def test_flip_with_offset(self):
        s = QSeries.from_terms({Fraction(1, 2): 1, Fraction(3, 2): 1}, denom=2)
        out = qs_flip(s, Fraction(1, 2))
        assert out.coeff(Fraction(1, 2)) == 1
        assert out.coeff(Fraction(3, 2)) == -1

    def test_flip_rejects_fractional_residue(self):
        with pytest.raises(ValueError):
            qs_flip(QSeries.monomial(Fraction(1, 2)))

    @given(small_series)
    def test_flip_involution(self, a):
        assert qs_flip(qs_flip(a)).terms == a.terms


class TestSerialization:
    @given(small_series)
    def test_json_roundtrip(self, a):
        assert qs_from_json(qs_to_json(a)).terms == a.terms

    def test_json_is_plain_data(self):
        s = poly({Fraction(-3, 2): Fraction(1, 3)}, denom=2, trunc=10)
        json.dumps(qs_to_json(s))

    def test_eval_partial(self):
        s = poly({0: 1, 1: 1})
        assert qs_eval(s, 0.5) == pytest.approx(1.5)
