import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import polydense as pd
from polydense.errors import DomainError, TabulatedParseError


NAMED = [pd.gaussian(), pd.gaussian(1.5, 0.7), pd.double_exponential(), pd.double_exponential(2.5),
         pd.uniform(), pd.uniform(0.0, 3.0), pd.lognormal(), pd.lognormal(0.3, 0.5)]


@pytest.mark.parametrize("d", NAMED, ids=lambda d: d.label())
def test_named_families_have_unit_mass(d):
    assert pd.total_mass(d) == pytest.approx(1.0, rel=1e-10)


@pytest.mark.parametrize("d", NAMED, ids=lambda d: d.label())
def test_logpdf_consistent_with_pdf(d):
    x = np.linspace(-4, 4, 41) + 0.013
    with np.errstate(divide="ignore"):
        np.testing.assert_allclose(np.exp(d.logpdf(x)), d.pdf(x), rtol=1e-13, atol=0)


def test_gaussian_density_value():
    assert pd.eval_density(pd.gaussian(), 0.0) == pytest.approx(1 / math.sqrt(2 * math.pi), rel=1e-15)


def test_lognormal_vanishes_off_support():
    d = pd.lognormal()
    assert pd.eval_density(d, -1.0) == 0.0
    assert pd.eval_density(d, 0.0) == 0.0
    assert pd.eval_density(d, 1.0) == pytest.approx(1 / math.sqrt(2 * math.pi), rel=1e-15)


@pytest.mark.parametrize("bad", [math.nan, math.inf, -math.inf])
def test_eval_density_rejects_nonfinite(bad):
    with pytest.raises(DomainError):
        pd.eval_density(pd.gaussian(), bad)


@pytest.mark.parametrize("factory,args", [(pd.gaussian, (0, 0)), (pd.gaussian, (0, -1)),
                                          (pd.uniform, (1, 1)), (pd.double_exponential, (0,)),
                                          (pd.lognormal, (math.nan, 1))])
def test_invalid_parameters(factory, args):
    with pytest.raises(ValueError):
        factory(*args)


def test_tabulated_trapezoid_mass_and_interp():
    d = pd.tabulated([(0, 0), (1, 1), (2, 1), (3, 0)])
    assert pd.total_mass(d) == pytest.approx(2.0, rel=1e-12)
    assert pd.eval_density(d, 0.5) == pytest.approx(0.5)
    assert pd.eval_density(d, 3.5) == 0.0


def test_tabulated_csv_roundtrip(tmp_path):
    p = tmp_path / "w.csv"
    p.write_text("x,a\n-1,0\n0,2\n1,2\n2,0\n")
    d = pd.load_tabulated_csv(p)
    assert d.support == (-1.0, 2.0)
    assert pd.total_mass(d) == pytest.approx(4.0, rel=1e-12)


@pytest.mark.parametrize("body", [
    "x,y\n0,1\n1,1\n2,1\n3,1\n",          # header
    "x,a\n0,1\n1,nan\n2,1\n3,1\n",        # NaN
    "x,a\n0,1\n1,-1\n2,1\n3,1\n",         # negative
    "x,a\n0,1\n2,1\n1,1\n3,1\n",          # unsorted
    "x,a\n0,1\n1,1\n2,1\n",               # too few rows
    "x,a\n0,0\n1,0\n2,0\n3,0\n",          # zero mass
    "x,a\n0,1,2\n1,1\n2,1\n3,1\n",        # ragged
])
def test_tabulated_csv_errors(tmp_path, body):
    p = tmp_path / "w.csv"
    p.write_text(body)
    with pytest.raises(TabulatedParseError):
        pd.load_tabulated_csv(p)


def test_counting_measure_mass():
    d = pd.equal_weights([-2, -1, 0, 1, 2])
    assert pd.total_mass(d) == pytest.approx(5 * 0.25)
    assert d.base.kind == "counting"
    assert "5-point grid" in d.label()


def test_restricted_base_measure():
    d = pd.gaussian().restricted(0.0, math.inf)
    assert pd.total_mass(d) == pytest.approx(0.5, rel=1e-12)


def test_symmetry_flags():
    assert pd.gaussian().is_symmetric and pd.double_exponential().is_symmetric and pd.uniform().is_symmetric
    assert not pd.gaussian(1.0).is_symmetric and not pd.lognormal().is_symmetric


def test_to_dict_is_json_ready():
    import json
    for d in NAMED + [pd.equal_weights([0, 1, 2]), pd.gaussian().restricted(0, math.inf)]:
        json.dumps(d.to_dict())


@given(mu=st.floats(-3, 3), sigma=st.floats(0.3, 3))
def test_gaussian_mass_property(mu, sigma):
    assert pd.total_mass(pd.gaussian(mu, sigma)) == pytest.approx(1.0, rel=1e-9)


@given(x=st.floats(-30, 30))
def test_symmetric_density_is_even(x):
    for d in (pd.gaussian(), pd.double_exponential(1.7), pd.uniform(-2, 2)):
        assert pd.eval_density(d, x) == pd.eval_density(d, -x)
