import math

import numpy as np
import pytest
import hypothesis.extra.numpy as nph
import hypothesis.strategies as st
from hypothesis import given

from longwave import grid as gs
from longwave.errors import GridError, NonZeroMean

from conftest import smooth_field


def test_small_grid_nodes_and_wavenumbers():
    g = gs.make_grid(2 * math.pi, 8)
    np.testing.assert_allclose(g.x, np.arange(8) * math.pi / 4)
    np.testing.assert_allclose(np.sort(g.k), np.arange(-3, 5))
    assert np.count_nonzero(g.k == 0) == 1


def test_experiment_grid_kmax():
    g = gs.make_grid(64 * math.pi, 1024)
    assert g.k_max == pytest.approx(16.0)
    assert g.k.max() == pytest.approx(16.0)


@pytest.mark.parametrize("L,N,msg", [(2 * math.pi, 7, "even"), (2 * math.pi, 6, "at least 8"),
                                     (0.0, 8, "positive"), (-1.0, 8, "positive")])
def test_grid_rejects_bad_input(L, N, msg):
    with pytest.raises(GridError, match=msg):
        gs.make_grid(L, N)


def test_field_shape_and_finiteness_checked(periodic):
    with pytest.raises(GridError):
        gs.forward(periodic, np.zeros(10))
    bad = np.zeros(periodic.n)
    bad[3] = np.nan
    with pytest.raises(GridError):
        gs.sobolev_norm(periodic, bad)


def test_single_cosine_mode():
    g = gs.make_grid(2 * math.pi, 64)
    c = gs.forward(g, np.cos(g.x))
    assert c[1] == pytest.approx(0.5, abs=1e-15)
    assert c[-1] == pytest.approx(0.5, abs=1e-15)
    others = np.delete(c, [1, g.n - 1])
    assert np.abs(others).max() < 1e-13


@given(nph.arrays(np.float64, 64, elements=st.floats(-1e3, 1e3)))
def test_round_trip_and_parseval(u):
    g = gs.make_grid(3.0, 64)
    c = gs.forward(g, u)
    scale = max(1.0, np.abs(u).max())
    assert np.abs(gs.inverse(g, c) - u).max() <= 1e-12 * scale
    lhs = np.sum(u**2) * g.dx
    rhs = g.length * np.sum(np.abs(c) ** 2)
    assert abs(lhs - rhs) <= 1e-12 * max(lhs, 1e-300) + 1e-300
    # the rfft-half norm agrees with the full sum
    assert gs.sobolev_norm(g, u, 0.0) ** 2 == pytest.approx(rhs, rel=1e-12, abs=1e-280)


@given(nph.arrays(np.float64, 32, elements=st.floats(-10, 10)))
def test_real_field_spectrum_is_hermitian(u):
    g = gs.make_grid(2 * math.pi, 32)
    c = gs.forward(g, u)
    j = np.arange(1, g.n // 2)
    np.testing.assert_allclose(c[-j], np.conj(c[j]), atol=1e-12 * max(1.0, np.abs(c).max()))


def test_spectral_derivatives_of_exp_sin(periodic):
    x = periodic.x
    u = np.exp(np.sin(x))
    exact = {
        1: np.cos(x) * u,
        2: (np.cos(x) ** 2 - np.sin(x)) * u,
        3: (np.cos(x) ** 3 - 3 * np.sin(x) * np.cos(x) - np.cos(x)) * u,
    }
    for order, ref in exact.items():
        assert np.abs(gs.derivative(periodic, u, order) - ref).max() < 1e-11


def _fd6_first(u, h):
    # sixth-order central difference, periodic
    c = (-1 / 60, 3 / 20, -3 / 4, 0, 3 / 4, -3 / 20, 1 / 60)
    return sum(cj * np.roll(u, -j) for cj, j in zip(c, range(-3, 4))) / h


def test_derivative_against_finite_difference_oracle():
    g = gs.make_grid(2 * math.pi, 512)
    u = smooth_field(g)
    err = np.abs(gs.derivative(g, u, 1) - _fd6_first(u, g.dx)).max()
    assert err < 1e-10


def test_derivative_order_limits(periodic):
    u = np.cos(periodic.x)
    np.testing.assert_array_equal(gs.derivative(periodic, u, 0), u)
    with pytest.raises(GridError):
        gs.derivative(periodic, u, 9)
    with pytest.raises(GridError):
        gs.derivative(periodic, u, -1)


@pytest.mark.parametrize("s", [0.0, 1.0, 2.5])
def test_sobolev_norm_of_cosine(periodic, s):
    # L * 2 * (1/2)^2 * 2^s
    assert gs.sobolev_norm(periodic, np.cos(periodic.x), s) ** 2 == pytest.approx(math.pi * 2**s)


def test_sobolev_inner_is_symmetric_and_matches_norm(periodic):
    u = smooth_field(periodic)
    v = np.sin(3 * periodic.x)
    assert gs.sobolev_inner(periodic, u, v, 1.5) == pytest.approx(gs.sobolev_inner(periodic, v, u, 1.5))
    assert gs.sobolev_inner(periodic, u, u, 1.5) == pytest.approx(gs.sobolev_norm(periodic, u, 1.5) ** 2)


def test_xnorm_adds_weighted_derivative(periodic):
    u = np.sin(2 * periodic.x)
    d = 0.3
    expected = gs.sobolev_norm(periodic, u, 1) ** 2 + d**2 * gs.sobolev_norm(periodic, gs.derivative(periodic, u), 1) ** 2
    assert gs.xnorm(periodic, u, 1, d) ** 2 == pytest.approx(expected)


def test_dealiased_product_keeps_resolved_products(periodic):
    x = periodic.x
    p = gs.dealiased_product(periodic, np.cos(3 * x), np.sin(5 * x))
    np.testing.assert_allclose(p, np.cos(3 * x) * np.sin(5 * x), atol=1e-13)
    # 20 + 20 = 40 lies beyond (2/3) * 32
    q = gs.dealiased_product(periodic, np.cos(20 * x), np.cos(20 * x))
    np.testing.assert_allclose(q, 0.5 * np.ones_like(x), atol=1e-13)


def test_dealias_on_full_spectrum(periodic):
    c = np.ones(periodic.n, dtype=complex)
    d = gs.dealias(periodic, c)
    assert np.all(d[np.abs(periodic.k) > periodic.k_max * 2 / 3] == 0)
    assert np.all(d[np.abs(periodic.k) <= 21] == 1)


def test_antiderivative_inverts_derivative(periodic):
    u = smooth_field(periodic)
    u0 = u - u.mean()
    rho = gs.antiderivative(periodic, u0)
    assert abs(rho.mean()) < 1e-14
    np.testing.assert_allclose(gs.derivative(periodic, rho), u0, atol=1e-12)
    with pytest.raises(NonZeroMean):
        gs.antiderivative(periodic, u)


def test_apply_symbol_identity_and_shift(periodic):
    u = smooth_field(periodic)
    np.testing.assert_allclose(gs.apply_symbol(periodic, u, lambda k: np.ones_like(k)), u, atol=1e-14)
    with pytest.raises(GridError):
        gs.apply_symbol(periodic, u, lambda k: np.where(k == 0, np.inf, 1.0))
