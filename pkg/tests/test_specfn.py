import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate, special

from strichartz.specfn import (DomainError, LaguerreIndex, bessel_first_zero, bessel_j, bessel_ratio,
                               bessel_zero, cnk, gamma_ratio, laguerre_first_zero, laguerre_fn,
                               laguerre_poly, laguerre_scaled, log_cnk, log_gamma, macdonald_bound,
                               macdonald_k, macdonald_k_basset)


@pytest.mark.parametrize("k,a", [(0, 0), (1, 0), (5, 0), (10, 1), (30, 2.5), (80, 4)])
def test_laguerre_poly_matches_scipy(k, a):
    x = np.linspace(0, 40, 81)
    ref = special.eval_genlaguerre(k, a, x)
    got = laguerre_poly((k, a), x)
    assert np.allclose(got, ref, rtol=1e-10, atol=1e-10 * np.max(np.abs(ref)))


def test_laguerre_poly_low_degrees_closed_form():
    x = np.linspace(-1, 5, 13)
    assert np.allclose(laguerre_poly((1, 2.0), x), 3 - x)
    assert np.allclose(laguerre_poly((2, 0.0), x), 1 - 2 * x + x * x / 2)


def test_laguerre_index_validation():
    with pytest.raises(DomainError):
        LaguerreIndex(-1, 0)
    with pytest.raises(DomainError):
        LaguerreIndex(2, -1.0)
    with pytest.raises(DomainError):
        laguerre_poly((2, 0), np.nan)


def test_laguerre_scaled_large_argument_against_mpmath():
    for k, a, x in [(200, 0, 900.0), (500, 2, 1500.0), (1000, 1, 3000.0)]:
        ref = float(mpmath.laguerre(k, a, x) * mpmath.exp(-x / 2))
        got = float(laguerre_scaled(k, a, x))
        assert got == pytest.approx(ref, rel=1e-8, abs=1e-300)


def test_laguerre_fn_at_origin_and_lambda_zero():
    assert laguerre_fn(3, 2, 0.7, 0.0) == pytest.approx(special.binom(3 + 1, 3))
    with pytest.raises(DomainError):
        laguerre_fn(1, 1, 0.0, 1.0)


@given(k=st.integers(0, 40), n=st.integers(1, 6))
def test_cnk_is_reciprocal_binomial(k, n):
    assert cnk(n, k) * math.comb(k + n - 1, k) == pytest.approx(1.0, rel=1e-12)
    assert log_cnk(n, k) <= 1e-15


def test_log_gamma_against_mpmath():
    for x in [1e-8, 0.1, 0.5, 1, 2.5, 10, 171.5, 1e5]:
        assert log_gamma(x) == pytest.approx(float(mpmath.loggamma(x)), rel=1e-13, abs=1e-13)
    xs = np.array([0.3, 7.0, 40.2])
    assert np.allclose(log_gamma(xs), [float(mpmath.loggamma(v)) for v in xs], rtol=1e-13)
    with pytest.raises(DomainError):
        log_gamma(0.0)
    with pytest.raises(DomainError):
        log_gamma(np.array([1.0, -2.0]))


def test_gamma_ratio():
    assert gamma_ratio(5.0, 3.0) == pytest.approx(12.0, rel=1e-14)


@pytest.mark.parametrize("nu", [0, 0.5, 1, 2.3, 7, 20])
def test_bessel_j_against_scipy(nu):
    x = np.concatenate([[0.0, 1e-6], np.linspace(0.01, 50, 300)])
    ref = special.jv(nu, x)
    got = bessel_j(nu, x)
    assert np.max(np.abs(got - ref)) < 1e-12


def test_bessel_j_integral_representation():
    # J_n(x) = (1/pi) int_0^pi cos(n u - x sin u) du, an independent route
    for n, x in [(0, 3.3), (2, 17.0), (5, 41.0)]:
        ref, _ = integrate.quad(lambda u: math.cos(n * u - x * math.sin(u)), 0, math.pi, epsabs=1e-14)
        assert bessel_j(n, x) == pytest.approx(ref / math.pi, abs=1e-12)


def test_bessel_ratio_limit():
    nu = 1.5
    lim = 1 / (2 ** nu * math.gamma(nu + 1))
    assert bessel_ratio(nu, 0.0) == pytest.approx(lim, rel=1e-14)
    assert bessel_ratio(nu, 2e-3) == pytest.approx(special.jv(nu, 2e-3) / 2e-3 ** nu, rel=1e-10)


@pytest.mark.parametrize("nu", range(0, 11))
def test_bessel_zeros_against_mpmath(nu):
    for s in (1, 2, 3):
        assert bessel_zero(nu, s).value == pytest.approx(float(mpmath.besseljzero(nu, s)), rel=1e-12)


def test_bessel_zero_examples():
    assert bessel_first_zero(0).value == pytest.approx(2.404825557695773, abs=1e-12)
    assert bessel_first_zero(1).value == pytest.approx(3.831705970207512, abs=1e-12)


@pytest.mark.parametrize("k,n", [(1, 1), (2, 1), (5, 2), (17, 3), (50, 5)])
def test_laguerre_first_zero_against_gauss_nodes(k, n):
    # zeros of L^a_k are the generalized Gauss-Laguerre nodes
    nodes, _ = special.roots_genlaguerre(k, n - 1)
    assert laguerre_first_zero(k, n) == pytest.approx(float(nodes.min()), rel=1e-11)


def test_laguerre_first_zero_needs_k():
    with pytest.raises(DomainError):
        laguerre_first_zero(0, 1)


@pytest.mark.parametrize("nu", [0.25, 0.5, 1, 2.5, 6])
def test_macdonald_against_scipy(nu):
    for y in np.geomspace(0.1, 20, 15):
        assert macdonald_k(nu, y) == pytest.approx(special.kv(nu, y), rel=1e-8)


def test_macdonald_half_integer_closed_form():
    y = 2.7
    assert macdonald_k(0.5, y) == pytest.approx(math.sqrt(math.pi / (2 * y)) * math.exp(-y), rel=1e-12)


def test_basset_route_agrees_for_moderate_y():
    for nu, y in [(0.5, 0.3), (1.0, 1.0), (2.0, 3.0)]:
        assert macdonald_k_basset(nu, y) == pytest.approx(macdonald_k(nu, y), rel=1e-6)


@settings(max_examples=40, deadline=None)
@given(nu=st.floats(0.1, 5), y=st.floats(0.05, 30))
def test_macdonald_bound(nu, y):
    assert macdonald_k(nu, y) <= macdonald_bound(nu, y) * (1 + 1e-10)


def test_macdonald_domain():
    with pytest.raises(DomainError):
        macdonald_k(1.0, 0.0)
