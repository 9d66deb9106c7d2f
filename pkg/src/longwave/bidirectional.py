"""Bidirectional models: improved Boussinesq and the nonlocal wave equation.

    u_tt - u_xx - delta^2 u_xxtt - eps (u^2)_xx = 0
    u_tt = beta_delta * (u + eps u^2)_xx

Both are written as ``u_tt = S(D_x) (u + eps u^2)`` with a bounded symbol
``S(k) = -k^2 / (1 + delta^2 k^2)`` or ``S(k) = -k^2 beta_hat(delta k)`` and
integrated as the first-order system ``(u, u_t)' = (u_t, S (u + eps u^2))``
with classical RK4.
"""

import numpy as np

from . import grid as gs
from .errors import BlowUp, LongwaveError
from .kernels import Kernel, check_positive_on_grid
from .unidirectional import Trajectory, _default_stride, _lmax, _plan_steps


def ib_symbol(grid, delta, full=False):
    k = grid.k if full else grid.kr
    return -(k**2) / (1.0 + delta**2 * k**2)


def nonlocal_symbol(grid, kernel, delta, full=False):
    beta = check_positive_on_grid(grid, kernel, delta)
    if not full:
        beta = kernel(delta * grid.kr)
    k = grid.k if full else grid.kr
    return -(k**2) * beta


def _accel(grid, u, symbol_half, eps):
    u = gs.check_field(grid, u)
    c = grid.rfft(u) + eps * _dealiased_square_hat(grid, u)
    return grid.irfft(symbol_half * c)


def _dealiased_square_hat(grid, u):
    c = grid.rfft(u * u)
    c[~grid.dealias_mask] = 0.0
    return c


def ib_accel(grid, u, eps, delta):
    """``u_tt = (1 - delta^2 D_x^2)^(-1) D_x^2 (u + eps u^2)``."""
    return _accel(grid, u, ib_symbol(grid, delta), eps)


def nonlocal_accel(grid, u, kernel, eps, delta):
    """``u_tt = beta_delta * (u + eps u^2)_xx``."""
    return _accel(grid, u, nonlocal_symbol(grid, kernel, delta), eps)


def target_symbol(grid, target, delta):
    """rfft-half symbol for ``target`` = "ib" or a Kernel."""
    if isinstance(target, Kernel):
        return nonlocal_symbol(grid, target, delta)
    if str(target).lower() == "ib":
        return ib_symbol(grid, delta)
    raise LongwaveError(f"unknown bidirectional target {target!r}")


def solve_bidirectional(
    grid, u0, u1, target, eps, delta, t_end, dt=1e-3, stride=None, threshold=1e6, max_states=2000
):
    """RK4 for ``(u, u_t)``; ``target`` is "ib" or a Kernel for the nonlocal equation.

    Returns a Trajectory with ``states`` = u and ``velocities`` = u_t.
    """
    u0 = gs.check_field(grid, u0)
    u1 = gs.check_field(grid, u1)
    sym = target_symbol(grid, target, delta)
    nsteps, h = _plan_steps(t_end, dt)
    if stride is None:
        stride = _default_stride(nsteps, max_states)
    name = target.name if isinstance(target, Kernel) else "IB"
    params = dict(target=name, eps=eps, delta=delta, dt=h, kind="bidirectional")
    mask = grid.dealias_mask

    def accel(c):
        u = grid.irfft(c)
        sq = grid.rfft(u * u)
        sq[~mask] = 0.0
        return sym * (c + eps * sq), u

    c, v = grid.rfft(u0), grid.rfft(u1)
    times, states, vels = [0.0], [u0.copy()], [u1.copy()]

    def partial():
        return Trajectory(grid, np.array(times), np.array(states), params,
                          velocities=np.array(vels), blown_up=True, last_valid=len(times) - 1)

    for n in range(1, nsteps + 1):
        a1, u = accel(c)
        if not np.isfinite(u).all() or _lmax(u) > threshold:
            raise BlowUp((n - 1) * h, partial(), threshold)
        a2 = accel(c + h / 2 * v)[0]
        a3 = accel(c + h / 2 * v + h * h / 4 * a1)[0]
        a4 = accel(c + h * v + h * h / 2 * a2)[0]
        c = c + h * v + h * h / 6 * (a1 + a2 + a3)
        v = v + h / 6 * (a1 + 2 * a2 + 2 * a3 + a4)
        if n % stride == 0 or n == nsteps:
            u = grid.irfft(c)
            if not np.isfinite(u).all() or _lmax(u) > threshold:
                raise BlowUp(n * h, partial(), threshold)
            times.append(n * h)
            states.append(u)
            vels.append(grid.irfft(v))
    return Trajectory(grid, np.array(times), np.array(states), params,
                      velocities=np.array(vels))
