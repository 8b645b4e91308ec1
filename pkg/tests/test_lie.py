import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from plumbq.lie import (
    WeightVector,
    allowed_colors,
    fundamental_weight,
    gamma_factor,
    highest_root,
    in_Pprime,
    pq_class_index,
    simple_roots,
    sublattice_Pprime,
    weight_inner,
    weyl_action,
    weyl_group,
    weyl_vector,
)


def test_weyl_group_order():
    for N in (2, 3, 4):
        assert len(weyl_group(N)) == math.factorial(N)


def test_sign_is_determinant_like():
    W = weyl_group(3)
    assert sorted(w.sign for w in W) == [-1, -1, -1, 1, 1, 1]


def test_weyl_vector_is_sum_of_fundamentals():
    for N in (2, 3, 4):
        rho = weyl_vector(N)
        total = fundamental_weight(N, 1)
        for i in range(2, N):
            total = total + fundamental_weight(N, i)
        assert rho == total


def test_cartan_pairing():
    # (alpha_i, w_j) = delta_ij
    for N in (2, 3):
        roots = simple_roots(N)
        for i in range(1, N):
            for j in range(1, N):
                want = Fraction(1 if i == j else 0)
                assert weight_inner(roots[i - 1], fundamental_weight(N, j)) == want


def test_root_norms():
    for N in (2, 3, 4):
        for a in simple_roots(N):
            assert weight_inner(a, a) == 2
        th = highest_root(N)
        assert weight_inner(th, th) == 2


@given(st.sampled_from([2, 3]), st.integers(0, 23))
def test_weyl_action_preserves_inner(N, seed):
    W = weyl_group(N)
    w = W[seed % len(W)]
    v = fundamental_weight(N, 1 + seed % (N - 1))
    assert weight_inner(weyl_action(w, v), weyl_action(w, v)) == weight_inner(v, v)


class TestQuotientData:
    def test_gamma_values(self):
        # (N, m) -> smallest integer making the quadratic form integral
        assert gamma_factor(4, 2) == 2
        assert gamma_factor(6, 2) == 4
        assert gamma_factor(6, 3) == 3

    def test_gamma_trivial_subgroup(self):
        for N in (2, 3, 4, 6):
            assert gamma_factor(N, 1) == 1

    def test_gamma_requires_divisor(self):
        with pytest.raises(ValueError):
            gamma_factor(4, 3)

    def test_pprime_membership(self):
        spec = sublattice_Pprime(4, 2)
        assert in_Pprime(fundamental_weight(4, 2), spec)
        assert not in_Pprime(fundamental_weight(4, 1), spec)

    def test_pq_class_of_fundamentals(self):
        for N in (3, 4):
            for i in range(1, N):
                assert pq_class_index(fundamental_weight(N, i)) % N == i % N

    def test_allowed_colors_su2_count(self):
        # full weight lattice: strictly dominant weights below level k'
        kprime = 7
        cols = allowed_colors(2, 1, kprime)
        assert len(cols) == kprime - 1
        assert weyl_vector(2) in cols

    def test_allowed_colors_live_in_sublattice(self):
        spec = sublattice_Pprime(4, 2)
        rho = weyl_vector(4)
        for lam in allowed_colors(4, 2, 9):
            assert in_Pprime(lam - rho, spec) or in_Pprime(lam + rho, spec)


def test_embedding_roundtrip():
    v = fundamental_weight(3, 2)
    assert WeightVector.from_embedding(3, v.embedding()) == v
