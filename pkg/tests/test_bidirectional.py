import math

import numpy as np
import pytest
import hypothesis.strategies as st
from hypothesis import given

from longwave import bidirectional as bd
from longwave import grid as gs
from longwave import kernels as kn
from longwave import unidirectional as ud
from longwave.errors import BlowUp, EllipticityViolation, LongwaveError


def test_linear_ib_mode():
    g = gs.make_grid(2 * math.pi, 32)
    k, d, t = 3, 0.4, 3.0
    om = k / math.sqrt(1 + d**2 * k**2)
    tr = bd.solve_bidirectional(g, np.cos(k * g.x), om * np.sin(k * g.x), "ib", 0.0, d, t, dt=1e-3)
    assert np.abs(tr.states[-1] - np.cos(k * g.x - om * t)).max() < 1e-10
    assert np.abs(tr.velocities[-1] - om * np.sin(k * g.x - om * t)).max() < 1e-10


def test_linear_nonlocal_mode():
    g = gs.make_grid(2 * math.pi, 32)
    kern = kn.bessel_kernel(6)
    k, d, t = 2, 0.5, 2.0
    om = k * math.sqrt(float(kern(d * k)))
    tr = bd.solve_bidirectional(g, np.cos(k * g.x), om * np.sin(k * g.x), kern, 0.0, d, t, dt=1e-3)
    assert np.abs(tr.states[-1] - np.cos(k * g.x - om * t)).max() < 1e-10


def test_ib_acceleration_satisfies_the_equation(fine_grid):
    g, eps, d = fine_grid, 0.3, 0.4
    u = ud.sech2(g)
    a = bd.ib_accel(g, u, eps, d)
    res = a - gs.derivative(g, u, 2) - d**2 * gs.derivative(g, a, 2) - eps * gs.derivative(g, u * u, 2)
    assert np.abs(res).max() < 1e-11


def test_exponential_kernel_acceleration_equals_ib(long_grid):
    u = ud.sech2(long_grid)
    a = bd.ib_accel(long_grid, u, 0.1, 0.1)
    b = bd.nonlocal_accel(long_grid, u, kn.exponential_kernel(), 0.1, 0.1)
    assert np.abs(a - b).max() < 1e-15


def test_exponential_kernel_trajectory_equals_ib_short(long_grid):
    g = long_grid
    u0 = ud.sech2(g)
    u1 = ud.time_derivative(g, u0, ud.CH, 0.1, 0.1)
    a = bd.solve_bidirectional(g, u0, u1, "ib", 0.1, 0.1, 1.0, stride=500)
    b = bd.solve_bidirectional(g, u0, u1, kn.exponential_kernel(), 0.1, 0.1, 1.0, stride=500)
    assert np.abs(a.states - b.states).max() < 1e-12


def _hamiltonian(g, u, ut, eps, d):
    phi = gs.antiderivative(g, ut)
    return 0.5 * (gs.sobolev_norm(g, phi) ** 2 + d**2 * gs.sobolev_norm(g, ut) ** 2
                  + gs.sobolev_norm(g, u) ** 2) + eps / 3 * np.sum(u**3) * g.dx


def test_ib_hamiltonian_and_mean_conserved(long_grid):
    g, eps, d = long_grid, 0.2, 0.2
    u0 = ud.sech2(g, b=0.5)
    u1 = ud.time_derivative(g, u0, ud.CH, eps, d)
    tr = bd.solve_bidirectional(g, u0, u1, "ib", eps, d, 5.0, stride=1000)
    h0 = _hamiltonian(g, u0, u1, eps, d)
    for u, v in zip(tr.states, tr.velocities):
        assert abs(u.mean() - u0.mean()) < 1e-10
        assert abs(v.mean()) < 1e-12
        assert _hamiltonian(g, u, v, eps, d) == pytest.approx(h0, rel=1e-9)


def test_time_reversal(long_grid):
    g, eps, d = long_grid, 0.2, 0.2
    u0 = ud.sech2(g, b=0.5)
    u1 = ud.time_derivative(g, u0, ud.CH, eps, d)
    fwd = bd.solve_bidirectional(g, u0, u1, "ib", eps, d, 2.0)
    back = bd.solve_bidirectional(g, fwd.states[-1], -fwd.velocities[-1], "ib", eps, d, 2.0)
    assert np.abs(back.states[-1] - u0).max() < 1e-10
    assert np.abs(back.velocities[-1] + u1).max() < 1e-10


@pytest.mark.parametrize("target", ["ib", "bessel6"])
def test_rk4_order(target):
    g = gs.make_grid(64 * math.pi, 256)
    tgt = "ib" if target == "ib" else kn.bessel_kernel(6)
    u0 = ud.sech2(g)
    u1 = ud.time_derivative(g, u0, ud.CH, 0.2, 0.2)
    run = lambda h: bd.solve_bidirectional(g, u0, u1, tgt, 0.2, 0.2, 2.0, dt=h).states[-1]
    ref = run(0.0125)
    errs = [gs.sobolev_norm(g, run(h) - ref) for h in (0.2, 0.1, 0.05)]
    orders = [math.log2(errs[i] / errs[i + 1]) for i in range(2)]
    assert all(3.8 <= p <= 4.2 for p in orders), orders


def test_unknown_target_and_bad_kernel(periodic):
    u = np.cos(periodic.x)
    with pytest.raises(LongwaveError):
        bd.solve_bidirectional(periodic, u, 0 * u, "boussinesq", 0.1, 0.1, 0.1)
    bad = kn.Kernel("osc", lambda eta: np.cos(eta), order=2)
    with pytest.raises(EllipticityViolation):
        bd.solve_bidirectional(periodic, u, 0 * u, bad, 0.1, 1.0, 0.1)


def test_blowup_monitor(long_grid):
    u0 = ud.sech2(long_grid, a=2.0)
    with pytest.raises(BlowUp) as info:
        bd.solve_bidirectional(long_grid, u0, 0 * u0, "ib", 0.1, 0.1, 1.0, threshold=1.0)
    assert info.value.trajectory.velocities.shape == (1, long_grid.n)


@given(st.floats(0.01, 1.0), st.integers(1, 5))
def test_symbols_are_bounded_and_nonpositive(delta, order):
    g = gs.make_grid(64 * math.pi, 256)
    ib = bd.ib_symbol(g, delta)
    assert np.all(ib <= 0) and np.all(ib >= -1 / delta**2)
    kern = kn.bessel_kernel(2 * order)
    nl = bd.nonlocal_symbol(g, kern, delta)
    assert np.all(nl <= 0)
    if order == 1:
        np.testing.assert_allclose(nl, ib, rtol=1e-14)
