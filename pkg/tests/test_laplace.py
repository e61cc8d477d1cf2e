import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import polydense as pd
from polydense.errors import DivergentIntegral, InconclusiveIntegral, InconsistencyError
from polydense.quadrature import CONVERGED, DIVERGENT, IntegralOutcome

from oracle_values import (DEXP_LAPLACE, DEXP_MOMENTS, DEXP_MONOMIAL_LAPLACE, GAUSS_LAPLACE,
                           GAUSS_MOMENTS, GAUSS_MONOMIAL_LAPLACE, LOGNORMAL_LAPLACE_NEG,
                           LOGNORMAL_MOMENTS, UNIFORM_LAPLACE)


@pytest.mark.parametrize("s", GAUSS_LAPLACE)
def test_gaussian_laplace_oracle(s):
    out = pd.laplace_transform(pd.gaussian(), float(s))
    assert out.converged
    assert out.value == pytest.approx(GAUSS_LAPLACE[s], rel=1e-10)


@pytest.mark.parametrize("s", DEXP_LAPLACE)
def test_double_exponential_laplace_oracle(s):
    out = pd.laplace_transform(pd.double_exponential(), float(s))
    assert out.converged
    assert out.value == pytest.approx(DEXP_LAPLACE[s], rel=1e-10)


@pytest.mark.parametrize("s", UNIFORM_LAPLACE)
def test_uniform_laplace_oracle(s):
    assert pd.laplace_transform(pd.uniform(), float(s)).value == pytest.approx(UNIFORM_LAPLACE[s], rel=1e-12)


@pytest.mark.parametrize("s", LOGNORMAL_LAPLACE_NEG)
def test_lognormal_negative_side_oracle(s):
    assert pd.laplace_transform(pd.lognormal(), float(s)).value == pytest.approx(LOGNORMAL_LAPLACE_NEG[s], rel=1e-10)


@pytest.mark.parametrize("s", [0.05, 0.5, 1.0])
def test_lognormal_positive_side_diverges(s):
    out = pd.laplace_transform(pd.lognormal(), s)
    assert out.verdict == DIVERGENT


@pytest.mark.parametrize("s", [1.1, -1.1, 1.5, -1.5, 2.0, -2.0])
def test_double_exponential_divergent_outside(s):
    out = pd.laplace_transform(pd.double_exponential(), s)
    assert out.verdict == DIVERGENT
    assert out.value == math.inf


def test_laplace_at_zero_is_mass():
    d = pd.tabulated([(0, 0), (1, 1), (2, 1), (3, 0)])
    assert pd.laplace_transform(d, 0.0).value == pytest.approx(2.0, rel=1e-12)


def test_counting_measure_laplace():
    d = pd.equal_weights([-1.0, 0.0, 1.0])
    assert pd.laplace_transform(d, 1.0).value == pytest.approx(0.5 * (math.e + 1 + 1 / math.e))


@pytest.mark.parametrize("key", GAUSS_MONOMIAL_LAPLACE)
def test_gaussian_monomial_laplace_oracle(key):
    n, s = key
    assert pd.monomial_laplace(pd.gaussian(), float(s), n).value == pytest.approx(
        GAUSS_MONOMIAL_LAPLACE[key], rel=1e-10)


@pytest.mark.parametrize("key", DEXP_MONOMIAL_LAPLACE)
def test_double_exponential_monomial_laplace_oracle(key):
    n, s = key
    assert pd.monomial_laplace(pd.double_exponential(), float(s), n).value == pytest.approx(
        DEXP_MONOMIAL_LAPLACE[key], rel=1e-10)


@pytest.mark.parametrize("k", GAUSS_MOMENTS)
def test_gaussian_moments_oracle(k):
    # odd moments cancel contributions of the size of the next even moment
    scale = GAUSS_MOMENTS[k + (k % 2)]
    assert pd.moment(pd.gaussian(), k) == pytest.approx(GAUSS_MOMENTS[k], rel=1e-9, abs=1e-12 * scale)


@pytest.mark.parametrize("k", DEXP_MOMENTS)
def test_double_exponential_moments_oracle(k):
    assert pd.moment(pd.double_exponential(), k) == pytest.approx(DEXP_MOMENTS[k], rel=1e-9)


@pytest.mark.parametrize("k", LOGNORMAL_MOMENTS)
def test_lognormal_moments_oracle(k):
    assert pd.moment(pd.lognormal(), k) == pytest.approx(LOGNORMAL_MOMENTS[k], rel=1e-10)


def test_moment_rejects_negative_order():
    with pytest.raises(ValueError):
        pd.moment(pd.gaussian(), -1)


def test_divergent_moment_paths(monkeypatch):
    from polydense import laplace

    fake = IntegralOutcome(math.inf, math.inf, DIVERGENT)
    monkeypatch.setattr(laplace, "monomial_laplace", lambda *a, **k: fake)
    with pytest.raises(DivergentIntegral):
        laplace.moment(pd.gaussian(), 3)
    with pytest.raises(InconsistencyError):
        laplace.moment(pd.gaussian(), 3, delta_hat=1.0)
    monkeypatch.setattr(laplace, "monomial_laplace",
                        lambda *a, **k: IntegralOutcome(1.0, 1.0, "inconclusive"))
    with pytest.raises(InconclusiveIntegral):
        laplace.moment(pd.gaussian(), 3)


def test_signed_laplace_cases():
    g = pd.gaussian()
    assert pd.signed_laplace(np.sin, g, 0.0) == pytest.approx(0.0, abs=1e-12)
    # ∫ x e^{sx} φ dx = s e^{s²/2}
    assert pd.signed_laplace(lambda x: x, g, 0.5) == pytest.approx(0.5 * math.exp(0.125), rel=1e-10)
    d = pd.double_exponential()
    assert pd.signed_laplace(lambda x: np.ones_like(x), d, 1.5) == math.inf
    assert pd.signed_laplace(lambda x: -np.ones_like(x), d, 1.5) == -math.inf
    assert pd.signed_laplace(lambda x: x, d, 1.5) == math.inf  # negative part converges
    both = lambda x: np.sign(x) * np.exp(2 * np.abs(x))
    assert pd.signed_laplace(both, d, 0.0) is pd.UNDEFINED


def test_estimate_delta_double_exponential():
    rep = pd.estimate_delta(pd.double_exponential(), s_max=4, eps_s=0.05)
    assert 0.95 <= rep.delta_hat <= 1.05
    assert rep.delta_resolution <= 0.05
    assert rep.boundary_pos == rep.boundary_neg
    assert rep.delta_hat < 1.0  # the largest converged probe lies inside


def test_estimate_delta_scaled_double_exponential():
    rep = pd.estimate_delta(pd.double_exponential(2.0), s_max=4, eps_s=0.02)
    assert abs(rep.delta_hat - 0.5) <= 0.02


def test_estimate_delta_unbounded_gaussian():
    rep = pd.estimate_delta(pd.gaussian(), s_max=4)
    assert rep.unbounded and rep.probe_limit == 4
    assert rep.to_dict()["delta_hat"] == "unbounded"


def test_estimate_delta_lognormal_one_sided():
    rep = pd.estimate_delta(pd.lognormal(), s_max=4, eps_s=0.05)
    assert rep.boundary_pos <= 0.05
    assert math.isinf(rep.boundary_neg)
    assert rep.delta_hat == rep.boundary_pos


def test_estimate_delta_validation():
    with pytest.raises(ValueError):
        pd.estimate_delta(pd.gaussian(), s_max=0.01, eps_s=0.05)


def test_laplace_report_json():
    import json
    rep = pd.estimate_delta(pd.double_exponential(), s_max=2, eps_s=0.1)
    data = json.loads(rep.to_json())
    assert data["values"][0]["verdict"] in (CONVERGED, DIVERGENT)
    assert rep.outcome_at(0.0).value == pytest.approx(1.0)


@pytest.mark.parametrize("n", range(0, 11))
def test_weighted_monomial_gaussian(n):
    res = pd.check_weighted_monomial(pd.gaussian(), n, delta=2.0)
    assert res.passed and not res.inconclusive


def test_weighted_monomial_fails_beyond_half_delta():
    # δ=4 puts probes at |s| = 1.95 > 1 for the double-exponential weight
    res = pd.check_weighted_monomial(pd.double_exponential(), 2, delta=4.0)
    assert not res.passed
    assert abs(res.failure["s"]) > 1


# -- properties ------------------------------------------------------------

@given(s=st.floats(-2.5, 2.5))
def test_evenness_for_symmetric_weights(s):
    for d in (pd.gaussian(), pd.uniform()):
        a = pd.laplace_transform(d, s).value
        b = pd.laplace_transform(d, -s).value
        assert a == pytest.approx(b, rel=1e-10)


@given(s=st.floats(-0.85, 0.85), h=st.floats(0.01, 0.05))
def test_log_convexity(s, h):
    d = pd.double_exponential()
    m = [math.log(pd.laplace_transform(d, t).value) for t in (s - h, s, s + h)]
    assert m[0] + m[2] - 2 * m[1] >= -1e-9


@given(s1=st.floats(1.05, 3.0), ds=st.floats(0.0, 1.0))
def test_divergence_is_monotone_in_s(s1, ds):
    # beyond the boundary, a larger exponent cannot make the transform finite
    d = pd.double_exponential()
    first = pd.laplace_transform(d, s1)
    second = pd.laplace_transform(d, s1 + ds)
    if first.divergent and not second.overflow:
        assert second.divergent


@given(a=st.floats(-2, 2), b=st.floats(-2, 2), s=st.floats(-1, 1))
def test_signed_laplace_linearity(a, b, s):
    g = pd.gaussian()
    lhs = pd.signed_laplace(lambda x: a * x + b * x * x, g, s)
    rhs = a * pd.signed_laplace(lambda x: x, g, s) + b * pd.signed_laplace(lambda x: x * x, g, s)
    assert lhs == pytest.approx(rhs, rel=1e-8, abs=1e-10)
