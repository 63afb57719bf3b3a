import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from strichartz import _kernels_py, kernels
from strichartz.geometry import (FanPoint, FanQuadrature, HPoint, Q, QuadratureGrid, dilate_point,
                                 group_mul, homogeneous_norm, integrate_hn_radial, sphere_area)
from strichartz.specfn import laguerre_scaled

coord = st.floats(-5, 5, allow_nan=False)


def points(n):
    return st.builds(lambda zs, t: HPoint(tuple(complex(a, b) for a, b in zs), t),
                     st.lists(st.tuples(coord, coord), min_size=n, max_size=n), coord)


def close(p, q, tol=1e-9):
    return np.allclose(p.z, q.z, atol=tol) and abs(p.t - q.t) <= tol


@given(points(2), points(2), points(2))
def test_group_law_associative(p, q, r):
    assert close(group_mul(group_mul(p, q), r), group_mul(p, group_mul(q, r)))


@given(points(3))
def test_inverse_and_identity(p):
    e = HPoint.identity(3)
    assert close(group_mul(p, p.inverse()), e)
    assert close(group_mul(e, p), p)


@given(points(2), st.floats(0.1, 10))
def test_norm_is_homogeneous_under_dilation(p, r):
    assert homogeneous_norm(dilate_point(r, p)) == pytest.approx(r * homogeneous_norm(p), rel=1e-12, abs=1e-12)


def test_norm_example():
    assert homogeneous_norm(HPoint((1 + 0j,), 0.0)) == pytest.approx(1.0)
    assert homogeneous_norm(HPoint((0j,), 1.0)) == pytest.approx(2.0)


def test_point_validation():
    with pytest.raises(ValueError):
        HPoint((complex(np.inf, 0),), 0.0)
    with pytest.raises(ValueError):
        group_mul(HPoint((0j,), 0), HPoint((0j, 0j), 0))
    with pytest.raises(ValueError):
        FanPoint(1, 0, 0.0)


def test_fan_point_radii():
    a = FanPoint(2, 3, -0.5)
    assert a.ev == pytest.approx(4.0)
    assert a.abs_a == pytest.approx(4.5)


def test_dimension_helpers():
    assert Q(3) == 8
    assert sphere_area(1) == pytest.approx(2 * math.pi)
    assert sphere_area(2) == pytest.approx(2 * math.pi ** 2)


@pytest.mark.parametrize("n,a,b", [(1, 1.0, 1.0), (2, 0.5, 2.0), (3, 2.0, 0.5)])
def test_radial_integral_of_gaussian(n, a, b):
    g = QuadratureGrid.build(12 / math.sqrt(a), 12 / math.sqrt(b), 1.0)
    val = integrate_hn_radial(lambda r, t: np.exp(-a * r * r - b * t * t), n, g)
    assert val == pytest.approx((math.pi / a) ** n * math.sqrt(math.pi / b), rel=1e-12)


def test_radial_integral_of_singular_weight():
    # |z|^{-1} e^{-|z|^2} e^{-t^2} on H^1: 2 pi * Gamma(1/2)/2 * sqrt(pi)
    g = QuadratureGrid.build(12, 12, 1.0)
    val = integrate_hn_radial(lambda r, t: r ** -1.0 * np.exp(-r * r - t * t), 1, g)
    assert val == pytest.approx(2 * math.pi * 0.5 * math.sqrt(math.pi) * math.sqrt(math.pi), rel=1e-9)


def test_grid_validation():
    g = QuadratureGrid.build(5, 5, 2.0, n_lambda=7)
    assert g.lambda_nodes.size == 8 and not np.any(g.lambda_nodes == 0)
    with pytest.raises(ValueError):
        QuadratureGrid(g.r_nodes, -g.r_weights, g.t_nodes, g.t_weights, g.lambda_nodes, g.lambda_weights, 4)
    assert g.refined().lambda_nodes.size == 2 * g.lambda_nodes.size


def test_fan_quadrature_laguerre_orthogonality():
    # int_0^inf psi_j psi_k x^{n-1} dx = Gamma(k+n)/k! delta_jk
    n, K = 2, 30
    fq = FanQuadrature(n, [1.0], [1.0], K)
    T = fq.table
    G = (T * fq.x_weight) @ T.T
    ref = np.diag([math.gamma(k + n) / math.factorial(k) for k in range(K + 1)])
    assert np.allclose(G, ref, rtol=1e-10, atol=1e-10)


@pytest.mark.parametrize("backend", [_kernels_py, kernels])
def test_laguerre_table_backends(backend):
    x = np.linspace(0, 300, 301)
    T = backend.laguerre_table(x, 1.0, 120)
    for k in (0, 1, 7, 120):
        assert np.allclose(T[k], laguerre_scaled(k, 1.0, x), rtol=1e-11, atol=1e-300)


@settings(max_examples=25, deadline=None)
@given(alpha=st.floats(0, 5), kmax=st.integers(0, 60), xmax=st.floats(1, 500))
def test_backends_agree(alpha, kmax, xmax):
    x = np.linspace(0, xmax, 37)
    a = _kernels_py.laguerre_table(x, alpha, kmax)
    b = kernels.laguerre_table(x, alpha, kmax)
    assert np.allclose(a, b, rtol=1e-11, atol=1e-290)


def test_projection_backends_agree():
    mu = np.linspace(0.05, 4, 9)
    r2 = np.linspace(0, 20, 31) ** 2
    g = np.cos(np.arange(9 * 31).reshape(9, 31))
    a = _kernels_py.laguerre_projections(mu, r2, g, 0.0, 40)
    b = kernels.laguerre_projections(mu, r2, g, 0.0, 40)
    assert np.allclose(a, b, rtol=1e-11, atol=1e-13)
