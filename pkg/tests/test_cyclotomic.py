import itertools

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from riscodes.cyclotomic import (
    RootSum,
    UnitRoot,
    cyclotomic_polynomial,
    prime_factors,
    reduction_matrix,
    root_mul,
    sum_is_zero,
    vanishing_rows,
    vanishing_set_contains,
)

mpmath.mp.dps = 40


def mp_abs_sum(coefficients):
    """High-precision |sum_r c_r exp(2 pi i r / R)|, independent of the polynomial test."""
    R = len(coefficients)
    total = mpmath.mpc(0)
    for r, c in enumerate(coefficients):
        if c:
            total += c * mpmath.expjpi(mpmath.mpf(2 * r) / R)
    return abs(total)


class TestUnitRoot:
    def test_inverse_pair(self):
        assert root_mul(UnitRoot(1, 4), UnitRoot(3, 4)) == UnitRoot(0, 4)

    @pytest.mark.parametrize("R", [2, 3, 7, 12])
    def test_identity(self, R):
        for e in range(R):
            assert root_mul(UnitRoot(0, R), UnitRoot(e, R)) == UnitRoot(e, R)

    def test_square_of_sixth_root(self):
        a = UnitRoot(5, 6)
        prod = root_mul(a, a)
        assert prod == UnitRoot(4, 6)
        assert abs(a.to_complex() * a.to_complex() - prod.to_complex()) < 1e-12

    def test_modulus_mismatch(self):
        with pytest.raises(ValueError):
            root_mul(UnitRoot(1, 4), UnitRoot(1, 6))

    def test_operator_and_conj(self):
        a = UnitRoot(2, 5)
        assert a * a.conj() == UnitRoot.one(5)
        assert a.conj().exponent == 3

    @given(st.integers(2, 30).flatmap(lambda R: st.tuples(*[st.integers(0, R - 1)] * 3, st.just(R))))
    def test_group_laws(self, args):
        a, b, c, R = (UnitRoot(args[0], args[3]), UnitRoot(args[1], args[3]), UnitRoot(args[2], args[3]), args[3])
        assert (a * b) * c == a * (b * c)
        assert a * b == b * a
        assert a * UnitRoot.one(R) == a
        assert a.conj() * a == UnitRoot.one(R)


class TestCyclotomicPolynomial:
    @pytest.mark.parametrize(
        "n, coeffs",
        [
            (1, (-1, 1)),
            (2, (1, 1)),
            (4, (1, 0, 1)),
            (6, (1, -1, 1)),
            (12, (1, 0, -1, 0, 1)),
        ],
    )
    def test_small(self, n, coeffs):
        assert cyclotomic_polynomial(n) == coeffs

    def test_phi_105_has_a_minus_two(self):
        phi = cyclotomic_polynomial(105)
        assert len(phi) - 1 == 48
        assert min(phi) == -2

    @pytest.mark.parametrize("n", range(1, 40))
    def test_degree_is_totient(self, n):
        totient = sum(1 for k in range(1, n + 1) if np.gcd(k, n) == 1)
        assert len(cyclotomic_polynomial(n)) - 1 == totient


class TestSumIsZero:
    def test_plus_minus_one(self):
        assert sum_is_zero(RootSum((1, 1)))

    def test_single_term(self):
        assert not sum_is_zero(RootSum((1, 0, 0, 0)))

    def test_odd_sixth_roots(self):
        s = RootSum((0, 1, 0, 1, 0, 1))
        assert mp_abs_sum(s.coefficients) < mpmath.mpf("1e-30")
        assert sum_is_zero(s)

    def test_signed_difference(self):
        a = RootSum.from_exponents([0, 1, 2], 3)
        assert sum_is_zero(a)
        assert sum_is_zero(a - a)
        assert not sum_is_zero(a + RootSum.from_exponents([0], 3))

    def test_agrees_with_high_precision_evaluation(self):
        rng = np.random.default_rng(20261015)
        for _ in range(10_000):
            R = int(rng.integers(2, 25))
            mass = int(rng.integers(1, 51))
            coeffs = np.zeros(R, dtype=int)
            # random signed multiset of total mass <= 50, biased toward vanishing sums
            if rng.random() < 0.3:
                p = prime_factors(R)[int(rng.integers(len(prime_factors(R))))]
                for _ in range(max(1, mass // p)):
                    shift = int(rng.integers(R))
                    coeffs[(shift + np.arange(p) * (R // p)) % R] += 1
            else:
                idx = rng.integers(0, R, mass)
                signs = rng.choice([-1, 1], mass)
                np.add.at(coeffs, idx, signs)
            exact = sum_is_zero(RootSum(tuple(coeffs)))
            numeric = mp_abs_sum(coeffs.tolist()) < 1e-9
            assert exact == numeric, (R, coeffs)

    def test_batched_form_matches(self):
        rng = np.random.default_rng(7)
        for R in [2, 3, 4, 6, 8, 12, 30, 64]:
            counts = rng.integers(-3, 4, size=(200, R))
            batched = vanishing_rows(counts, R)
            single = [sum_is_zero(RootSum(tuple(c))) for c in counts]
            assert batched.tolist() == single

    def test_reduction_matrix_rows(self):
        red = reduction_matrix(6)
        # x^3 = -1 mod x^2 - x + 1
        assert red[3].tolist() == [-1, 0]


def _exhaustive_contains(M, R):
    # order does not matter for a sum, so multisets cover all of T_R^M
    for combo in itertools.combinations_with_replacement(range(R), M):
        if sum_is_zero(RootSum.from_exponents(combo, R)):
            return True
    return False


class TestVanishingSet:
    def test_one_is_never_in(self):
        assert not vanishing_set_contains(1, 6)

    def test_five_for_six(self):
        assert vanishing_set_contains(5, 6)
        assert _exhaustive_contains(5, 6)

    def test_three_for_four(self):
        assert not vanishing_set_contains(3, 4)
        assert not _exhaustive_contains(3, 4)

    @pytest.mark.parametrize("R", [2, 3, 4, 5, 6, 8, 10, 12])
    def test_matches_exhaustive(self, R):
        for M in range(1, 8):
            assert vanishing_set_contains(M, R) == _exhaustive_contains(M, R), (M, R)

    @pytest.mark.parametrize("p", [2, 3, 5, 7, 11, 13])
    def test_prime_modulus(self, p):
        for M in range(1, 40):
            assert vanishing_set_contains(M, p) == (M % p == 0)

    def test_bad_input(self):
        with pytest.raises(ValueError):
            vanishing_set_contains(0, 4)
