import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from orliczops import measure as ms
from orliczops import orlicz, young
from orliczops.errors import PreconditionError

from conftest import CATALOG_ENTRIES


def one_atom(mass=1.0, value=1.0):
    space = ms.MeasureSpace(["A"], [mass])
    return space, ms.MeasurableFunction(space, [value])


def example_space(n=10**5, a=2.0):
    # Lebesgue measure on (0, a] plus atoms at ln k with mass 1/k^3
    return ms.MeasureSpace.generated(
        lambda k: k**-3.0, n, start=2, point=np.log, continuum=ms.Continuum(0.0, a)
    )


def lp_norm_oracle(values, masses, p):
    return p ** (-1 / p) * float(np.sum(np.abs(values) ** p * masses)) ** (1 / p)


class TestModular:
    def test_single_atom(self):
        space, f = one_atom()
        assert orlicz.modular(space, f, young.power(2)) == 0.5

    def test_zero(self):
        space, _ = one_atom()
        assert orlicz.modular(space, ms.MeasurableFunction(space, [0.0]), young.exp_power(1)) == 0.0

    def test_identity_under_exp_is_finite(self):
        space = example_space()
        f = ms.MeasurableFunction.from_formula(space, lambda x: x, continuum=lambda x: x)
        value = orlicz.modular(space, f, young.exp_power(1))
        # continuum part is e^2 - 2 - 2 - 1 over (0, 2]; atoms add sum (k - ln k - 1)/k^3
        ks = np.arange(2, 10**5 + 2, dtype=float)
        atoms = float(np.sum((ks - np.log(ks) - 1) / ks**3))
        atoms += 1 / (ks[-1] + 0.5)  # tail of sum k^-2 beyond the truncation
        cont = math.exp(2) - 2 - 2 - 1
        assert value == pytest.approx(atoms + cont, rel=1e-7)


class TestNorm:
    def test_single_atom(self):
        space, f = one_atom()
        assert orlicz.luxemburg_norm(space, f, young.power(2)).value == pytest.approx(2**-0.5, rel=1e-9)

    def test_zero(self):
        space, _ = one_atom()
        res = orlicz.luxemburg_norm(space, ms.MeasurableFunction(space, [0.0]), young.power(2))
        assert res.value == 0 and not res.diverged

    @pytest.mark.parametrize("phi", CATALOG_ENTRIES, ids=str)
    @pytest.mark.parametrize("mass", [1e-4, 0.3, 1.0, 7.5, 1e3])
    def test_indicator(self, phi, mass):
        space, f = one_atom(mass)
        norm = orlicz.luxemburg_norm(space, f, phi).value
        assert norm * young.inverse(phi, 1 / mass) == pytest.approx(1.0, rel=1e-8)

    def test_bracket_width(self, rng):
        space = ms.MeasureSpace(range(5), rng.uniform(0.1, 1, 5))
        f = ms.MeasurableFunction(space, rng.normal(size=5))
        res = orlicz.luxemburg_norm(space, f, young.l_log_l(2), tol=1e-7)
        lo, hi = res.bracket
        assert hi - lo <= 1e-7 * max(1.0, res.value)

    @pytest.mark.parametrize("p", [1.5, 2, 3, 4])
    def test_lp_consistency(self, rng, p):
        for _ in range(10):
            n = rng.integers(1, 9)
            masses = rng.uniform(0.05, 3, n)
            vals = rng.normal(scale=3, size=n)
            space = ms.MeasureSpace(range(n), masses)
            got = orlicz.luxemburg_norm(space, ms.MeasurableFunction(space, vals), young.power(p)).value
            assert got == pytest.approx(lp_norm_oracle(vals, masses, p), rel=1e-8)

    @pytest.mark.parametrize("phi", CATALOG_ENTRIES, ids=str)
    def test_homogeneity(self, rng, phi):
        space = ms.MeasureSpace(range(4), rng.uniform(0.1, 1, 4))
        f = ms.MeasurableFunction(space, rng.uniform(-2, 2, 4))
        base = orlicz.luxemburg_norm(space, f, phi).value
        for c in (-3.0, 0.25, 11.0):
            assert orlicz.luxemburg_norm(space, f.scale(c), phi).value == pytest.approx(abs(c) * base, rel=1e-8)

    @settings(max_examples=30, deadline=None)
    @given(st.lists(st.floats(0, 5), min_size=3, max_size=3), st.lists(st.floats(0, 5), min_size=3, max_size=3))
    def test_monotone(self, a, b):
        space = ms.MeasureSpace(range(3), [0.5, 1.0, 2.0])
        small = ms.MeasurableFunction(space, np.minimum(a, b))
        large = ms.MeasurableFunction(space, np.maximum(a, b))
        phi = young.exp_power(1)
        assert orlicz.luxemburg_norm(space, small, phi).value <= orlicz.luxemburg_norm(space, large, phi).value + 1e-9

    @pytest.mark.parametrize("phi", CATALOG_ENTRIES, ids=str)
    def test_unit_ball(self, rng, phi):
        space = ms.MeasureSpace(range(5), rng.uniform(0.1, 1, 5))
        f = ms.MeasurableFunction(space, rng.uniform(0, 3, 5))
        norm = orlicz.luxemburg_norm(space, f, phi).value
        assert orlicz.modular(space, f.scale(1 / norm), phi) <= 1 + 1e-9

    def test_continuum_power(self):
        space = ms.MeasureSpace([], [], continuum=ms.Continuum(0.0, 1.0))
        f = ms.MeasurableFunction(space, [], continuum=lambda x: x**-0.4)
        # ∫ x^-0.8 / (2 k^2) = 1  =>  k = sqrt(5/2)
        assert orlicz.luxemburg_norm(space, f, young.power(2)).value == pytest.approx(math.sqrt(2.5), rel=1e-8)

    def test_divergent(self):
        space = ms.MeasureSpace([], [], continuum=ms.Continuum(0.0, 1.0))
        f = ms.MeasurableFunction(space, [], continuum=lambda x: 1 / x)
        res = orlicz.luxemburg_norm(space, f, young.power(2))
        assert res.diverged and res.value == math.inf


class TestMember:
    def test_finite_space(self, rng):
        space = ms.MeasureSpace(range(4), rng.uniform(0.1, 1, 4))
        f = ms.MeasurableFunction(space, rng.uniform(0, 30, 4))
        assert orlicz.member(space, f, young.exp_power(2))

    def test_identity_in_exp_space(self):
        space = example_space()
        f = ms.MeasurableFunction.from_formula(space, lambda x: x, continuum=lambda x: x)
        assert orlicz.member(space, f, young.exp_power(1))

    def test_reciprocal_not_in_llogl(self):
        space = example_space()
        g = ms.MeasurableFunction.from_formula(space, lambda x: 1 / x, continuum=lambda x: 1 / x)
        assert not orlicz.member(space, g, young.l_log_l(1))


class TestHolder:
    def test_zero_factor(self):
        space, f = one_atom()
        lhs, rhs, ok = orlicz.holder_product_bound(
            space, f, ms.MeasurableFunction(space, [0.0]), young.power(4), young.power(4), young.power(2)
        )
        assert lhs == 0 and rhs == 0 and ok

    def test_single_atom(self):
        # phi3 = x^2/2 and phi1 = phi2 = x^4/4: Young's split with exponents (2, 2)
        space, f = one_atom()
        phi = young.power(4)
        lhs, rhs, ok = orlicz.holder_product_bound(space, f, f, phi, phi, young.power(2))
        assert lhs == pytest.approx(1 / young.inverse(young.power(2), 1.0), rel=1e-8)
        assert rhs == pytest.approx(2 / young.inverse(phi, 1.0) ** 2, rel=1e-8)
        assert ok

    def test_refuses_without_certificate(self):
        space, f = one_atom()
        with pytest.raises(PreconditionError) as info:
            orlicz.holder_product_bound(space, f, f, young.power(2), young.power(2), young.exp_power(1))
        assert info.value.detail is not None

    def test_random_instances(self, rng):
        phi1, phi2, phi3 = young.power(3), young.power(6), young.power(2)
        for _ in range(50):
            masses = rng.uniform(0.01, 2, 8)
            space = ms.MeasureSpace(range(8), masses)
            f1 = ms.MeasurableFunction(space, rng.normal(size=8))
            f2 = ms.MeasurableFunction(space, rng.normal(size=8))
            assert orlicz.holder_product_bound(space, f1, f2, phi1, phi2, phi3)[2]
