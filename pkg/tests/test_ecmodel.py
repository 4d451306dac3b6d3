import random

import pytest

from fermatsym.ecmodel import (
    DegenerateModelError,
    NonIntegralTransformError,
    ReductionKind,
    WeierstrassModel,
    invariants,
    inverse_transform,
    minimal_model,
    reduction_type,
    transform,
)
from fermatsym.ntkernel import valuation


def random_models(count, seed=20240817, span=20):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        m = WeierstrassModel(*(rng.randint(-span, span) for _ in range(5)))
        try:
            invariants(m)
        except DegenerateModelError:
            continue
        out.append(m)
    return out


class TestInvariants:
    def test_direct_substitution_examples(self):
        # computed by direct substitution in the b/c/delta formulas
        assert invariants(WeierstrassModel(0, 0, 0, 0, 1)).delta == -432
        iv = invariants(WeierstrassModel(0, 0, 0, -1, 0))
        assert iv.delta == 64
        assert iv.c4 == 48

    def test_degenerate_model_rejected(self):
        with pytest.raises(DegenerateModelError):
            invariants(WeierstrassModel(0, 0, 0, 0, 0))

    def test_c4_c6_delta_identity_on_random_models(self):
        for m in random_models(1000):
            iv = invariants(m)
            assert iv.c4**3 - iv.c6**2 == 1728 * iv.delta

    def test_b8_identity_on_random_models(self):
        for m in random_models(200, seed=7):
            iv = invariants(m)
            assert 4 * iv.b8 == iv.b2 * iv.b6 - iv.b4**2

    def test_j_invariant_lowest_terms(self):
        from math import gcd

        for m in random_models(200, seed=11):
            iv = invariants(m)
            assert iv.j_num * iv.delta == iv.c4**3 * iv.j_den
            assert gcd(iv.j_num, iv.j_den) == 1
            assert iv.j_den > 0


class TestTransform:
    def test_identity(self):
        m = WeierstrassModel(1, -2, 3, -4, 5)
        assert transform(m, 1, 0, 0, 0) == m

    def test_inverse_transform_scales_delta_up(self):
        m = WeierstrassModel(0, 0, 0, -1, 0)
        big = inverse_transform(m, 2, 0, 0, 0)
        assert invariants(big).delta == 64 * 2**12
        assert transform(big, 2, 0, 0, 0) == m

    def test_round_trip_random(self):
        rng = random.Random(3)
        for m in random_models(100, seed=5):
            u = rng.choice([1, -1, 2, 3])
            r, s, t = (rng.randint(-4, 4) for _ in range(3))
            big = inverse_transform(m, u, r, s, t)
            assert transform(big, u, r, s, t) == m

    def test_composition_law_for_scaling(self):
        m = WeierstrassModel(0, 0, 0, -1, 0)
        twice = inverse_transform(inverse_transform(m, 2, 0, 0, 0), 2, 0, 0, 0)
        assert invariants(twice).delta == 64 * 2**24

    def test_non_integral_result_rejected(self):
        with pytest.raises(NonIntegralTransformError):
            transform(WeierstrassModel(0, 0, 0, -1, 0), 2, 0, 0, 0)

    def test_u_zero_rejected(self):
        m = WeierstrassModel(0, 0, 0, -1, 0)
        with pytest.raises(ValueError):
            transform(m, 0, 0, 0, 0)
        with pytest.raises(ValueError):
            inverse_transform(m, 0, 0, 0, 0)


class TestMinimalModel:
    def test_already_minimal(self):
        mm, vals = minimal_model(WeierstrassModel(0, 0, 0, -1, 0))
        assert invariants(mm).delta == 64
        assert vals == {2: 6}

    def test_recovers_scaled_model(self):
        big = inverse_transform(WeierstrassModel(0, 0, 0, -1, 0), 2, 0, 0, 0)
        mm, vals = minimal_model(big)
        assert invariants(mm).delta == 64
        assert vals == {2: 6}

    def test_idempotent(self):
        for m in random_models(50, seed=13, span=8):
            mm, vals = minimal_model(m)
            mm2, vals2 = minimal_model(mm)
            assert mm2 == mm
            assert vals2 == vals

    def test_valuations_invariant_under_unimodular_transforms(self):
        rng = random.Random(17)
        for m in random_models(50, seed=19, span=8):
            _, vals = minimal_model(m)
            u = rng.choice([1, -1])
            r, s, t = (rng.randint(-5, 5) for _ in range(3))
            moved = inverse_transform(m, u, r, s, t)
            _, vals2 = minimal_model(moved)
            assert vals2 == vals

    @pytest.mark.parametrize("ell", [2, 3, 5, 7])
    def test_minimization_undoes_prime_scaling(self, ell):
        for m in random_models(12, seed=100 + ell, span=6):
            base, base_vals = minimal_model(m)
            scaled = inverse_transform(base, ell, 0, 0, 0)
            mm, vals = minimal_model(scaled)
            assert vals == base_vals
            assert mm == base


class TestReductionType:
    def test_good_reduction(self):
        red = reduction_type(WeierstrassModel(0, 0, 0, -1, 0), 7)
        assert red.kind is ReductionKind.GOOD
        assert red.potentially_good

    def test_additive_potentially_good(self):
        # v2(delta) = 6, v2(c4) = 4; j = 48^3 / 64 is 2-integral
        red = reduction_type(WeierstrassModel(0, 0, 0, -1, 0), 2)
        assert red.kind is ReductionKind.ADDITIVE
        assert red.potentially_good

    def test_multiplicative_by_definition(self):
        mm, _ = minimal_model(WeierstrassModel(1, 1, 1, -4, 5))
        iv = invariants(mm)
        for ell in (2, 3, 7):
            assert valuation(iv.delta, ell) > 0
            assert valuation(iv.c4, ell) == 0
            red = reduction_type(mm, ell)
            assert red.kind is ReductionKind.MULTIPLICATIVE
            assert not red.potentially_good
