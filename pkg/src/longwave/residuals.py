"""Residuals of unidirectional solutions inside the bidirectional equations.

Plugging a solution ``w`` of a unidirectional model into improved
Boussinesq leaves

    f = w_tt - w_xx - delta^2 w_xxtt - eps (w^2)_xx,

a perfect x-derivative ``f = F_x``. For the nonlocal equation the residual
gains ``delta^4 D_x^4 M_delta w_tt``, i.e. ``F^M = F + delta^4 D_x^3 M_delta w_tt``.
Two routes are kept side by side: ``residual_direct`` evaluates f
literally, the ``*_potential`` functions evaluate closed forms of F. Time
derivatives always come from the model's right-hand side.
"""

from dataclasses import dataclass
from math import gcd

import numpy as np

from . import grid as gs
from .errors import DegenerateFit, LongwaveError
from .fits import law_value, loglog_fit
from .kernels import m_symbol
from .unidirectional import BBM, CH, KDV, _operator, solve_unidirectional


class _Jet:
    """Spatial derivatives of w, w_t and w_tt at one instant."""

    def __init__(self, grid, w, model, eps, delta):
        self.grid = grid
        op = _operator(grid, model, float(eps), float(delta))
        c = grid.rfft(gs.check_field(grid, w))
        ct = op.rhs_hat(c)
        ctt = op.jacobian_hat(c, ct)
        self._hats = {0: c, 1: ct, 2: ctt}
        self._cache = {}

    def __call__(self, nx, nt=0):
        key = (nx, nt)
        if key not in self._cache:
            g = self.grid
            self._cache[key] = g.irfft(g.ik_power(nx) * self._hats[nt])
        return self._cache[key]


def _D(grid, f, j=1):
    return gs.derivative(grid, f, j)


def _zero_mean(f):
    return f - f.mean()


def residual_direct(grid, w, model, eps, delta, kernel=None):
    """``f = w_tt - w_xx - delta^2 w_xxtt - eps (w^2)_xx`` (+ nonlocal term)."""
    J = _Jet(grid, w, model, eps, delta)
    P = lambda *fs: gs.dealiased_product(grid, *fs)
    f = J(0, 2) - J(2) - delta**2 * J(2, 2) - eps * _D(grid, P(J(0), J(0)), 2)
    if kernel is not None:
        f = f + delta**4 * _D(grid, _apply_m(grid, J(0, 2), kernel, delta), 4)
    return f


def _apply_m(grid, f, kernel, delta):
    return gs.apply_symbol(grid, f, lambda k: m_symbol(kernel, delta * k))


def ch_potential(grid, w, eps, delta):
    J = _Jet(grid, w, CH, eps, delta)
    P = lambda *fs: gs.dealiased_product(grid, *fs)
    D = lambda f, j=1: _D(grid, f, j)
    e, d2 = eps, delta**2
    w0, wx, wxx, wxxx = J(0), J(1), J(2), J(3)

    sq = P(w0, w0)
    A = P(wx, wx) + 2 * P(w0, wxx)
    At = 2 * P(wx, J(1, 1)) + 2 * P(J(0, 1), wxx) + 2 * P(w0, J(2, 1))
    B = 3 * wxxx + 5 * J(2, 1)

    F = e**2 * D(P(w0, w0, w0) / 3)
    # cubic in w like every eps^2 term: 3 w (w_x^2 + 2 w w_xx)_x
    F -= e**2 * d2 / 8 * (
        3 * P(w0, D(A)) - 3 * P(w0, D(sq, 3)) + 2 * P(wxx, D(sq)) + P(wx, D(sq, 2))
    )
    # (D_x D_t - 3 D_x^2)(3 w_xxx + 5 w_xxt)
    F += d2**2 / 16 * (3 * J(4, 1) + 5 * J(3, 2) - 9 * J(5) - 15 * J(4, 1))
    F += e * d2**2 / 32 * (
        3 * (D(At, 2) - 3 * D(A, 3))
        + 2 * (-3 * P(w0, D(B, 2)) + 2 * P(wxx, B) + P(wx, D(B)))
    )
    F += e**2 * d2**2 / 32 * (-9 * P(w0, D(A, 3)) + 6 * P(wxx, D(A)) + 3 * P(wx, D(A, 2)))
    return _zero_mean(F)


def bbm_potential(grid, w, eps, delta):
    J = _Jet(grid, w, BBM, eps, delta)
    P = lambda *fs: gs.dealiased_product(grid, *fs)
    e, d2 = eps, delta**2
    w0, wx, wxx = J(0), J(1), J(2)
    F = e**2 * _D(grid, P(w0, w0, w0) / 3)
    F -= e * d2 / 4 * (
        6 * P(w0, J(2, 1)) + 2 * P(wx, J(1, 1)) + P(J(0, 1), wxx) - 9 * P(wx, wxx)
    )
    F += d2**2 / 16 * _D(grid, 5 * J(0, 2) - 12 * J(1, 1) - 9 * wxx, 3)
    return _zero_mean(F)


def kdv_potential(grid, w, eps, delta):
    J = _Jet(grid, w, KDV, eps, delta)
    P = lambda *fs: gs.dealiased_product(grid, *fs)
    e, d2 = eps, delta**2
    w0, wx = J(0), J(1)
    inner = e**2 / 3 * P(w0, w0, w0)
    inner += e * d2 / 4 * (-3 * P(wx, wx) + 4 * (P(J(0, 1), wx) + P(w0, J(1, 1))))
    inner += d2**2 / 4 * (-J(4) + 2 * J(3, 1))
    return _zero_mean(_D(grid, inner))


POTENTIALS = {CH.name: ch_potential, BBM.name: bbm_potential, KDV.name: kdv_potential}


def potential(grid, w, model, eps, delta):
    try:
        fn = POTENTIALS[model.name]
    except KeyError:
        raise LongwaveError(f"no closed-form potential for model {model.name!r}") from None
    return fn(grid, w, eps, delta)


def nonlocal_correction(grid, w, kernel, eps, delta, model=CH):
    """``delta^4 D_x^3 M_delta w_tt``, to be added to the improved-Boussinesq potential."""
    J = _Jet(grid, w, model, eps, delta)
    return delta**4 * _D(grid, _apply_m(grid, J(0, 2), kernel, delta), 3)


@dataclass(frozen=True)
class ResidualSample:
    eps: float
    delta: float
    t: float
    s: float
    norm_F: float
    model: str
    kernel: str = None


def check_pair(eps, delta):
    if not (0 < eps <= delta <= 1):
        raise LongwaveError(
            f"(eps, delta) = ({eps}, {delta}) violates 0 < eps <= delta <= 1"
        )


def sample_stride(times, dt):
    """Steps of size dt hitting every sample time; returns (stride, step indices)."""
    steps = [int(round(t / dt)) for t in times]
    for t, n in zip(times, steps):
        if n <= 0 or abs(n * dt - t) > 1e-9 * max(1.0, t):
            raise LongwaveError(f"sample time {t} is not a positive multiple of dt={dt}")
    stride = 0
    for n in steps:
        stride = gcd(stride, n)
    return stride, steps


def residual_scan(grid, w0, model, pairs, t_samples, s=1.0, kernel=None, dt=1e-3):
    """``||F(t)||_{H^s}`` along a parameter path, with log-log fits against eps.

    Returns ``(samples, fits)``; ``fits`` maps each sample time to the
    least-squares fit (or ``"degenerate"``).
    """
    pairs = [(float(e), float(d)) for e, d in pairs]
    for e, d in pairs:
        check_pair(e, d)
    t_samples = sorted(float(t) for t in t_samples)
    stride, steps = sample_stride(t_samples, dt)
    samples = []
    for e, d in pairs:
        traj = solve_unidirectional(grid, w0, model, e, d, t_samples[-1], dt, stride=stride)
        for t in t_samples:
            w = traj.states[traj.at(t)]
            F = potential(grid, w, model, e, d)
            if kernel is not None:
                F = F + nonlocal_correction(grid, w, kernel, e, d, model)
            samples.append(
                ResidualSample(e, d, t, s, gs.sobolev_norm(grid, F, s), model.name,
                               None if kernel is None else kernel.name)
            )
    fits = {}
    for t in t_samples:
        row = [x for x in samples if x.t == t]
        try:
            fits[t] = loglog_fit([x.eps for x in row], [x.norm_F for x in row])
        except DegenerateFit:
            fits[t] = "degenerate"
    return samples, fits


def residual_bound(samples, law="eps2+delta4"):
    """Smallest C with ``norm_F <= C law(eps, delta)`` at every sample, and max/min ratio."""
    ratios = np.array([x.norm_F / law_value(x.eps, x.delta, law) for x in samples])
    if ratios.size == 0:
        raise DegenerateFit("no residual samples")
    return float(ratios.max()), float(ratios.max() / ratios.min())
