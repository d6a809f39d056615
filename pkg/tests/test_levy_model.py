import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fptlevy.errors import AdmissibilityError, DomainError
from fptlevy.levy_model import (
    ExponentialJumps,
    LevyTriplet,
    NoJumps,
    StableTail,
    TabulatedTail,
    TemperedStableTail,
    diagnose,
    tail_mass,
    truncated_second_moment,
)

# int_1^inf u^-2.5 e^-u du, mpmath at 30 digits
TEMPERED_TAIL_AT_1 = 0.126487819593254420935

alphas = st.floats(1.05, 1.95)
positive = st.floats(0.1, 5.0)


def families():
    return st.one_of(
        st.builds(StableTail, positive, alphas),
        st.builds(TemperedStableTail, positive, alphas, positive),
        st.builds(ExponentialJumps, positive, positive),
    )


class TestTailMass:
    def test_stable_unit(self):
        assert tail_mass(StableTail(1.5, 1.5), 1.0) == pytest.approx(1.0, rel=1e-15)

    def test_exponential_boundary_rejected(self):
        with pytest.raises(DomainError):
            tail_mass(ExponentialJumps(2, 3), 0.0)

    def test_tempered_incomplete_gamma(self):
        assert float(tail_mass(TemperedStableTail(1, 1.5, 1), 1.0)) == pytest.approx(TEMPERED_TAIL_AT_1, rel=1e-12)

    def test_exponential(self):
        assert float(tail_mass(ExponentialJumps(2, 3), 0.5)) == pytest.approx(2 * math.exp(-1.5), rel=1e-15)

    def test_no_jumps(self):
        assert tail_mass(NoJumps(), 0.3) == 0.0

    @given(families(), st.floats(1e-4, 1e2), st.floats(1e-4, 1e2))
    @settings(max_examples=60, deadline=None)
    def test_nonincreasing(self, j, x, y):
        lo, hi = min(x, y), max(x, y)
        assert float(j.tail_mass(lo)) >= float(j.tail_mass(hi))


class TestTruncatedSecondMoment:
    def test_stable(self):
        assert float(truncated_second_moment(StableTail(1, 1.5), 1.0)) == pytest.approx(2.0, rel=1e-14)

    def test_no_jumps(self):
        assert truncated_second_moment(NoJumps(), 1.0) == 0.0

    def test_exponential_total(self):
        j = ExponentialJumps(2, 3)
        assert j.second_moment() == pytest.approx(4 / 9, rel=1e-15)
        assert float(truncated_second_moment(j, 1e3)) == pytest.approx(4 / 9, rel=1e-12)

    @pytest.mark.parametrize(
        "j",
        [
            StableTail(1, 1.5),
            TemperedStableTail(1, 1.5, 2),
            TemperedStableTail(0.7, 1.2, 0.5),
            ExponentialJumps(2, 3),
            TabulatedTail((0.1, 1.0, 10.0), (30.0, 1.0, 0.04)),
        ],
        ids=lambda j: j.family,
    )
    @pytest.mark.parametrize("x", [0.1, 1.0, 10.0])
    def test_matches_quadrature(self, j, x):
        pts = [0.0] + [k for k in getattr(j, "knots", ()) if k < x] + [x]
        num = mpmath.quad(lambda u: u**2 * float(j.density(float(u))), pts)
        assert float(j.truncated_second_moment(x)) == pytest.approx(float(num), rel=1e-8)

    def test_domain(self):
        with pytest.raises(DomainError):
            truncated_second_moment(StableTail(1, 1.5), -1.0)


class TestKaramata:
    @given(positive, alphas, st.floats(1e-6, 1e3))
    @settings(max_examples=50, deadline=None)
    def test_stable_identity(self, C, alpha, x):
        j = StableTail(C, alpha)
        ratio = float(j.truncated_second_moment(x)) / (x * x * float(j.tail_mass(x)))
        assert ratio == pytest.approx(alpha / (2 - alpha), rel=1e-12)

    def test_tempered_limit(self):
        j = TemperedStableTail(1, 1.5, 2)
        x = 1e-4
        ratio = float(j.truncated_second_moment(x)) / (x * x * float(j.tail_mass(x)))
        assert ratio == pytest.approx(1.5 / 0.5, rel=1e-2)


class TestTabulated:
    def test_reproduces_power_law(self):
        stable = StableTail(1.0, 1.5)
        knots = (0.1, 1.0, 10.0)
        tab = TabulatedTail(knots, tuple(float(stable.tail_mass(k)) for k in knots))
        xs = np.geomspace(1e-3, 1e3, 9)
        np.testing.assert_allclose(tab.tail_mass(xs), stable.tail_mass(xs), rtol=1e-12)
        assert tab.tail_index == pytest.approx(1.5, rel=1e-12)

    def test_rejects_atoms(self):
        with pytest.raises(DomainError):
            TabulatedTail((1.0, 1.0), (2.0, 1.0))

    def test_rejects_infinite_mean(self):
        with pytest.raises(AdmissibilityError):
            TabulatedTail((1.0, 2.0), (1.0, 0.5), outer_index=0.9)

    def test_tail_inverse(self):
        tab = TabulatedTail((0.1, 1.0, 10.0), (30.0, 1.0, 0.04))
        for y in (100.0, 5.0, 0.5, 0.01):
            assert float(tab.tail_mass(float(tab.tail_inverse(y)))) == pytest.approx(y, rel=1e-12)


class TestTriplet:
    def test_degenerate_drift_rejected(self):
        with pytest.raises(DomainError):
            LevyTriplet(0.0, 1.0, NoJumps())

    def test_negative_sigma(self):
        with pytest.raises(DomainError):
            LevyTriplet(-1.0, 0.0)

    def test_alpha_range(self):
        with pytest.raises(AdmissibilityError):
            StableTail(1.0, 1.0)
        with pytest.raises(AdmissibilityError):
            StableTail(1.0, 2.0)


class TestDiagnose:
    def test_stable(self):
        d = diagnose(LevyTriplet(0, 0, StableTail(1, 1.5)))
        assert d.regime == "stable" and d.alpha == 1.5
        assert d.density_conditions_ok and d.c_squared is None
        assert d.lambda_minus == 0.0
        vals = [v for _, v in d.condition2_probe]
        np.testing.assert_allclose(vals, 2.0, rtol=1e-12)

    def test_compound_poisson(self):
        d = diagnose(LevyTriplet(0, 0, ExponentialJumps(2, 3)))
        assert d.regime == "gaussian" and not d.density_conditions_ok
        vals = np.array([v for _, v in d.condition2_probe])
        # probe x^-2 int z^2 nu ~ x for small x: a factor 10 per decade
        np.testing.assert_allclose(vals[1:-1] / vals[2:], 10.0, rtol=0.05)

    def test_exponential_with_sigma(self):
        d = diagnose(LevyTriplet(0.5, 0, ExponentialJumps(2, 3)))
        assert d.density_conditions_ok
        assert d.c_squared == pytest.approx(0.25 + 4 / 9, rel=1e-14)
        assert d.lambda_minus == -3.0

    def test_tempered(self):
        d = diagnose(LevyTriplet(0, 0.2, TemperedStableTail(1, 1.5, 2)))
        assert d.regime == "gaussian" and d.density_conditions_ok and d.drift_positive
        assert d.lambda_minus == -2.0

    def test_brownian(self):
        d = diagnose(LevyTriplet(1, 0))
        assert d.c_squared == 1.0 and math.isinf(d.lambda_minus)

    def test_serialisable(self):
        import json

        json.dumps(diagnose(LevyTriplet(1, 0)).to_dict())
