import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import polydense as pd
from polydense.errors import DegeneracyError

import exact
from oracle_values import LOGNORMAL_ALPHA, LOGNORMAL_BETA


@pytest.fixture(scope="module")
def gaussian20():
    return pd.build_basis(pd.gaussian(), 20)


@pytest.fixture(scope="module")
def uniform20():
    return pd.build_basis(pd.uniform(), 20)


def test_hermite_recurrence(gaussian20):
    k = np.arange(1, 21)
    assert np.max(np.abs(gaussian20.alpha)) <= 1e-8
    np.testing.assert_allclose(gaussian20.beta, np.sqrt(k), atol=1e-7)
    assert gaussian20.norm0 == pytest.approx(1.0, rel=1e-12)
    assert gaussian20.orthogonality_drift <= 1e-8 and gaussian20.valid


def test_legendre_recurrence(uniform20):
    k = np.arange(1, 21)
    assert np.max(np.abs(uniform20.alpha)) <= 1e-8
    np.testing.assert_allclose(uniform20.beta, k / np.sqrt(4.0 * k * k - 1), atol=1e-8)
    assert uniform20.orthogonality_drift <= 1e-8


@pytest.mark.parametrize("d,moments,n", [
    (pd.gaussian(), exact.gaussian_moments, 12),
    (pd.uniform(), exact.uniform_moments, 12),
    (pd.double_exponential(), exact.double_exponential_moments, 10),
], ids=["gaussian", "uniform", "double_exponential"])
def test_recurrence_matches_exact_rational_oracle(d, moments, n):
    alpha, beta_sq = exact.recurrence(moments(2 * n + 2), n)
    b = pd.build_basis(d, n)
    np.testing.assert_allclose(b.alpha, [float(a) for a in alpha], atol=1e-9)
    np.testing.assert_allclose(b.beta, [math.sqrt(float(x)) for x in beta_sq], rtol=1e-9)


def test_lognormal_recurrence_matches_high_precision_oracle():
    b = pd.build_basis(pd.lognormal(), 6)
    np.testing.assert_allclose(b.alpha, LOGNORMAL_ALPHA, rtol=1e-9)
    np.testing.assert_allclose(b.beta, LOGNORMAL_BETA, rtol=1e-9)


def test_shifted_scaled_gaussian():
    b = pd.build_basis(pd.gaussian(2.0, 0.5), 10)
    np.testing.assert_allclose(b.alpha, 2.0, atol=1e-9)
    np.testing.assert_allclose(b.beta, 0.5 * np.sqrt(np.arange(1, 11)), rtol=1e-9)


def test_counting_grid_matches_gram_schmidt():
    grid = [-2, -1, 0, 1, 2]
    b = pd.build_basis(pd.equal_weights(grid), 4)
    w = pd.eval_density(pd.uniform(-2, 2), 0.0)
    polys, norms = exact.monic_orthogonal(exact.grid_moments(grid, [w] * 5, 10), 4)
    c = pd.monomial_coefficients(b)
    for k, (p, nsq) in enumerate(zip(polys, norms)):
        ref = np.zeros(5)
        ref[: len(p)] = [float(a) / math.sqrt(float(nsq)) for a in p]
        np.testing.assert_allclose(c[k], ref, atol=1e-10)


def test_counting_grid_degeneracy():
    with pytest.raises(DegeneracyError) as info:
        pd.build_basis(pd.equal_weights([-1, 0, 1]), 3)
    assert info.value.degree == 3


def test_three_point_grid_degree_two_is_fine():
    b = pd.build_basis(pd.equal_weights([-1, 0, 1]), 2)
    assert b.valid


def test_eval_basis_hermite_values(gaussian20):
    x = np.linspace(-3, 3, 13)
    he3 = (x ** 3 - 3 * x) / math.sqrt(6)
    np.testing.assert_allclose(pd.eval_basis(gaussian20, 3, x), he3, atol=1e-12)
    assert pd.eval_basis(gaussian20, 0, 0.7) == pytest.approx(1.0)
    with pytest.raises(IndexError):
        pd.eval_basis(gaussian20, 21, 0.0)
    with pytest.raises(IndexError):
        pd.eval_basis(gaussian20, -1, 0.0)


def test_leading_coefficients_positive(gaussian20):
    lead = gaussian20.leading_coefficients()
    assert np.all(lead > 0)
    c = pd.monomial_coefficients(gaussian20)
    np.testing.assert_allclose(np.diag(c), lead, rtol=1e-12)
    assert np.allclose(np.triu(c, 1), 0.0)


def test_audit_and_degree_limits():
    d = pd.gaussian()
    with pytest.raises(ValueError):
        pd.build_basis(d, 41)
    with pytest.raises(ValueError):
        pd.build_basis(d, 25, audit=False)
    b = pd.build_basis(d, 5, audit=False)
    assert math.isnan(b.orthogonality_drift) and not b.valid
    assert pd.orthogonality_audit(b) <= 1e-12 and b.valid


def test_degree_forty_gaussian():
    b = pd.build_basis(pd.gaussian(), 40)
    assert b.valid
    np.testing.assert_allclose(b.beta, np.sqrt(np.arange(1, 41)), rtol=1e-9)


def test_basis_json(gaussian20):
    data = json.loads(gaussian20.to_json())
    assert data["family"] == "gaussian" and data["max_degree"] == 20
    assert len(data["alpha"]) == len(data["beta"]) == 20
    assert data["valid"] is True


@given(x=st.floats(-4, 4))
def test_three_term_recurrence_identity(gaussian20, x):
    e = gaussian20.values(x)
    a, b = gaussian20.alpha, gaussian20.beta
    for k in range(1, 19):
        lhs = x * e[k]
        rhs = b[k] * e[k + 1] + a[k] * e[k] + b[k - 1] * e[k - 1]
        assert lhs == pytest.approx(rhs, rel=1e-9, abs=1e-9)


@given(lo=st.floats(-3, 0), width=st.floats(0.5, 4))
def test_affine_invariance_uniform(lo, width):
    b = pd.build_basis(pd.uniform(lo, lo + width), 6)
    k = np.arange(1, 7)
    np.testing.assert_allclose(b.alpha, lo + width / 2, atol=1e-9 * (1 + abs(lo) + width))
    np.testing.assert_allclose(b.beta, width / 2 * k / np.sqrt(4.0 * k * k - 1), rtol=1e-9)
