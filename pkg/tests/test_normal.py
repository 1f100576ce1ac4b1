import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.stats import norm

from maxent_copula.normal import norm_cdf, norm_pdf, norm_ppf


def test_cdf_matches_scipy():
    x = np.linspace(-8.0, 8.0, 2001)
    assert np.max(np.abs(norm_cdf(x) - norm.cdf(x))) < 1e-15


def test_ppf_matches_scipy_central():
    p = np.linspace(1e-3, 1 - 1e-3, 2001)
    assert np.max(np.abs(norm_ppf(p) - norm.ppf(p))) < 1e-13


def test_ppf_matches_scipy_tails():
    # deep-tail agreement is limited by the spacing of float probabilities
    # near 1 (delta-p of one ulp moves x by ~1e-5 at x = 7), not by the
    # algorithm; 1e-8 in x is far inside that envelope
    p = np.concatenate([np.linspace(1e-12, 1e-3, 200),
                        1.0 - np.linspace(1e-12, 1e-3, 200)])
    assert np.max(np.abs(norm_ppf(p) - norm.ppf(p))) < 1e-8


def test_ppf_edge_sentinels():
    assert norm_ppf(0.0) == -np.inf
    assert norm_ppf(1.0) == np.inf
    assert norm_ppf(0.5) == pytest.approx(0.0, abs=1e-15)


def test_pdf_value():
    assert norm_pdf(0.0) == pytest.approx(1.0 / np.sqrt(2 * np.pi), rel=1e-15)


@given(st.floats(min_value=1e-10, max_value=1.0 - 1e-10))
def test_roundtrip_property(p):
    assert norm_cdf(norm_ppf(p)) == pytest.approx(p, abs=1e-13)


def test_scalar_passthrough():
    assert isinstance(norm_ppf(0.3), float)
    assert isinstance(norm_cdf(0.3), float)
