import pytest

from fermatsym.ntkernel import (
    FactorizationError,
    factor_small,
    is_prime,
    jacobi,
    prime_sieve,
    primes_in,
    squarefree_part,
    valuation,
)


def squares_mod(m):
    """Brute-force oracle: nonzero quadratic residues mod m."""
    return {x * x % m for x in range(1, m)} - {0}


class TestJacobi:
    def test_identity_case(self):
        assert jacobi(1, 3) == 1

    def test_examples_against_square_sets(self):
        # frozen from the brute-force oracle: squares mod 7 = {1,2,4},
        # squares mod 5 = {1,4}; 3^9 = -1 mod 19
        assert jacobi(2, 7) == 1
        assert jacobi(2, 5) == -1
        assert jacobi(3, 19) == -1

    def test_rejects_even_or_nonpositive_modulus(self):
        for m in (0, -3, 4, 10):
            with pytest.raises(ValueError):
                jacobi(2, m)

    def test_matches_square_sets_for_all_odd_primes_below_200(self):
        for m in primes_in(3, 200):
            sq = squares_mod(m)
            for n in range(1, m):
                assert jacobi(n, m) == (1 if n in sq else -1), (n, m)

    def test_zero_when_not_coprime(self):
        assert jacobi(15, 9) == 0
        assert jacobi(0, 7) == 0

    def test_completely_multiplicative_in_numerator(self):
        for m in range(1, 100, 2):
            for n1 in range(-50, 51):
                for n2 in (-7, -2, 3, 10):
                    assert jacobi(n1 * n2, m) == jacobi(n1, m) * jacobi(n2, m)

    def test_multiplicative_in_denominator(self):
        for m1 in range(1, 60, 2):
            for m2 in range(1, 60, 2):
                for n in (-6, -1, 2, 5, 12):
                    assert jacobi(n, m1 * m2) == jacobi(n, m1) * jacobi(n, m2)


class TestIsPrime:
    def test_small_cases(self):
        assert is_prime(2)
        assert not is_prime(91)  # 7 * 13
        assert not is_prime(0) and not is_prime(1)

    def test_large_prime_from_trial_division(self):
        n = 104729
        assert all(n % d for d in range(2, int(n**0.5) + 1))  # oracle
        assert is_prime(n)

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            is_prime(-5)

    def test_agrees_with_sieve_below_10e6(self):
        limit = 10**6
        flags = bytearray([1]) * limit
        flags[0] = flags[1] = 0
        for i in range(2, int(limit**0.5) + 1):
            if flags[i]:
                flags[i * i :: i] = bytearray(len(range(i * i, limit, i)))
        for n in range(limit):
            assert is_prime(n) == bool(flags[n]), n

    def test_prime_sieve_consistency(self):
        assert prime_sieve(30) == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
        assert primes_in(10, 30) == [11, 13, 17, 19, 23, 29]


class TestFactorSmall:
    def test_examples(self):
        f = factor_small(-96)
        assert (f.sign, f.factors) == (-1, {2: 5, 3: 1})
        f = factor_small(1)
        assert (f.sign, f.factors) == (1, {})
        f = factor_small(24)
        assert (f.sign, f.factors) == (1, {2: 3, 3: 1})

    def test_value_round_trip(self):
        for n in list(range(-300, 0)) + list(range(1, 300)):
            assert factor_small(n).value() == n

    def test_rejects_zero(self):
        with pytest.raises(ValueError):
            factor_small(0)

    def test_fails_hard_beyond_bound(self):
        # 10007 * 10009 has no factor below 100 and exceeds 100^2
        with pytest.raises(FactorizationError):
            factor_small(10007 * 10009, bound=100)

    def test_prime_cofactor_within_bound_squared_is_accepted(self):
        f = factor_small(2 * 9973, bound=100)
        assert f.factors == {2: 1, 9973: 1}

    def test_str(self):
        assert str(factor_small(-2160)) == "-2^4 * 3^3 * 5"
        assert str(factor_small(1)) == "1"


class TestSquarefreePart:
    def test_examples(self):
        assert squarefree_part(8) == 2
        assert squarefree_part(-96) == -6
        assert squarefree_part(1) == 1

    def test_rejects_zero(self):
        with pytest.raises(ValueError):
            squarefree_part(0)

    def test_cofactor_is_perfect_square_up_to_10e4(self):
        from math import isqrt

        for n in range(1, 10**4 + 1):
            for signed in (n, -n):
                s = squarefree_part(signed)
                t2, rem = divmod(signed, s)
                assert rem == 0
                assert isqrt(t2) ** 2 == t2, signed


def test_valuation():
    assert valuation(48, 2) == 4
    assert valuation(-45, 3) == 2
    assert valuation(7, 5) == 0
    with pytest.raises(ValueError):
        valuation(0, 2)
