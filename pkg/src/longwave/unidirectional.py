"""Unidirectional long-wave models of the form

    w_t + w_x + k1 eps w w_x + k2 eps^2 w^2 w_x + k3 eps^3 w^3 w_x
        + delta^2 (k4 w_xxx + k5 w_xxt) - eps delta^2 (k6 w w_xxx + k7 w_x w_xx) = 0

with Camassa-Holm, BBM and KdV as coefficient presets. Time stepping is
integrating-factor RK4 in Fourier space: the linear dispersive part is
integrated exactly per mode.
"""

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import grid as gs
from .errors import BlowUp, InvertibilityViolation, LongwaveError


@dataclass(frozen=True)
class KappaModel:
    name: str
    k1: float = 0.0
    k2: float = 0.0
    k3: float = 0.0
    k4: float = 0.0
    k5: float = 0.0
    k6: float = 0.0
    k7: float = 0.0

    @property
    def kappas(self):
        return (self.k1, self.k2, self.k3, self.k4, self.k5, self.k6, self.k7)


# Signs of k6, k7 follow the Camassa-Holm equation as written, whose
# eps*delta^2 term is -(3/4) eps delta^2 (2 w_x w_xx + w w_xxx).
CH = KappaModel("CH", k1=1.0, k4=-0.75, k5=-1.25, k6=0.75, k7=1.5)
BBM = KappaModel("BBM", k1=1.0, k4=-0.75, k5=-1.25)
KDV = KappaModel("KdV", k1=1.0, k4=0.5)
# q_t + q_x + (3/2) e q q_x + (1/6) e q_xxx = 0, run with eps = delta^2 = e
KDV_NORMALIZED = KappaModel("KdV-normalized", k1=1.5, k4=1.0 / 6.0)

PRESETS = {m.name: m for m in (CH, BBM, KDV)}


def get_model(name):
    for key, model in PRESETS.items():
        if key.lower() == str(name).lower():
            return model
    raise LongwaveError(f"unknown model {name!r}; known: {', '.join(PRESETS)}")


@dataclass(frozen=True)
class Trajectory:
    """Snapshots of a run. ``velocities`` is set for second-order-in-time models."""

    grid: gs.Grid
    times: np.ndarray
    states: np.ndarray
    params: dict = field(default_factory=dict)
    velocities: np.ndarray = None
    blown_up: bool = False
    last_valid: int = -1

    def __len__(self):
        return len(self.times)

    def at(self, t):
        i = int(np.argmin(np.abs(self.times - t)))
        if abs(self.times[i] - t) > 1e-9 * max(1.0, abs(t)):
            raise KeyError(f"no snapshot at t={t}")
        return i


class KappaOperator:
    """Fourier-space pieces of a model at fixed (grid, eps, delta)."""

    def __init__(self, grid, model, eps, delta):
        if eps < 0 or delta <= 0:
            raise LongwaveError("need eps >= 0 and delta > 0")
        self.grid, self.model, self.eps, self.delta = grid, model, float(eps), float(delta)
        k = grid.kr
        left = 1.0 - model.k5 * delta**2 * k**2
        if np.any(left <= 0):
            raise InvertibilityViolation(
                f"1 - k5 delta^2 k^2 <= 0 on the grid for model {model.name}"
            )
        self.p_inv = 1.0 / left
        ko = grid.kr_odd
        # -D_x - k4 delta^2 D_x^3  ->  -i k + i k4 delta^2 k^3
        self.linear = (-1j * ko + 1j * model.k4 * delta**2 * ko**3) * self.p_inv
        self.d = [grid.ik_power(j) for j in range(4)]
        self.mask = grid.dealias_mask

    def derivatives(self, c, upto=3):
        g = self.grid
        return [g.irfft(c)] + [g.irfft(self.d[j] * c) for j in range(1, upto + 1)]

    def _project(self, products):
        c = self.grid.rfft(products)
        c[~self.mask] = 0.0
        return self.p_inv * c

    def nonlinear_products(self, w, wx, wxx, wxxx):
        m, e, d2 = self.model, self.eps, self.delta**2
        out = np.zeros_like(w)
        if m.k1:
            out -= m.k1 * e * w * wx
        if m.k2:
            out -= m.k2 * e**2 * w * w * wx
        if m.k3:
            out -= m.k3 * e**3 * w * w * w * wx
        if m.k6 or m.k7:
            out += e * d2 * (m.k6 * w * wxxx + m.k7 * wx * wxx)
        return out

    def nonlinear_hat(self, c):
        w, wx, wxx, wxxx = self.derivatives(c)
        return self._project(self.nonlinear_products(w, wx, wxx, wxxx)), w

    def rhs_hat(self, c):
        return self.linear * c + self.nonlinear_hat(c)[0]

    def jacobian_hat(self, c, v):
        """Directional derivative of ``rhs_hat`` at ``c`` along ``v``."""
        m, e, d2 = self.model, self.eps, self.delta**2
        w, wx, wxx, wxxx = self.derivatives(c)
        v0, vx, vxx, vxxx = self.derivatives(v)
        out = np.zeros_like(w)
        if m.k1:
            out -= m.k1 * e * (v0 * wx + w * vx)
        if m.k2:
            out -= m.k2 * e**2 * (2 * w * v0 * wx + w * w * vx)
        if m.k3:
            out -= m.k3 * e**3 * (3 * w * w * v0 * wx + w**3 * vx)
        if m.k6 or m.k7:
            out += e * d2 * (
                m.k6 * (v0 * wxxx + w * vxxx) + m.k7 * (vx * wxx + wx * vxx)
            )
        return self.linear * v + self._project(out)


@lru_cache(maxsize=64)
def _operator(grid, model, eps, delta):
    return KappaOperator(grid, model, eps, delta)


def kappa_rhs(grid, w, model, eps, delta):
    """``w_t`` of the model at state ``w`` (products dealiased)."""
    op = _operator(grid, model, float(eps), float(delta))
    return grid.irfft(op.rhs_hat(grid.rfft(gs.check_field(grid, w))))


time_derivative = kappa_rhs


def second_time_derivative(grid, w, model, eps, delta):
    """``w_tt``: the rhs differentiated along the flow, assembled analytically."""
    op = _operator(grid, model, float(eps), float(delta))
    c = grid.rfft(gs.check_field(grid, w))
    wt = op.rhs_hat(c)
    return grid.irfft(op.jacobian_hat(c, wt))


def apply_Q(grid, g, delta):
    """``(1 - (5/4) delta^2 D_x^2)^(-1) g``."""
    return gs.apply_symbol(grid, g, lambda k: 1.0 / (1.0 + 1.25 * delta**2 * k**2))


def q_bounds(grid, delta):
    """Largest per-mode multipliers of ``Q`` and ``delta^2 Q D_x^2`` on the grid.

    Analytically these are at most 1 and 4/5.
    """
    k2 = grid.kr**2
    q = 1.0 / (1.0 + 1.25 * delta**2 * k2)
    return float(np.max(np.abs(q))), float(np.max(np.abs(delta**2 * k2 * q)))


def sech2(grid, a=1.0, b=1.0, center=None):
    """Default initial datum ``a sech^2(b (x - center))``, centered at L/2."""
    if center is None:
        center = grid.length / 2
    return a / np.cosh(b * (grid.x - center)) ** 2


def _plan_steps(t_end, dt):
    if not (t_end > 0 and dt > 0):
        raise LongwaveError("need t_end > 0 and dt > 0")
    n = max(1, int(np.ceil(t_end / dt - 1e-9)))
    return n, t_end / n


def _default_stride(nsteps, max_states):
    return max(1, int(np.ceil(nsteps / (max_states - 1))))


def _lmax(w):
    return float(np.max(np.abs(w)))


def solve_unidirectional(
    grid, w0, model, eps, delta, t_end, dt=1e-3, stride=None, threshold=1e6, max_states=2000
):
    """Integrate from ``w0`` to ``t_end``; snapshots every ``stride`` steps.

    The step is adjusted down so that ``t_end`` is hit exactly. Raises
    BlowUp (carrying the partial trajectory) if ``max|w|`` exceeds
    ``threshold`` or turns non-finite.
    """
    w0 = gs.check_field(grid, w0)
    op = _operator(grid, model, float(eps), float(delta))
    nsteps, h = _plan_steps(t_end, dt)
    if stride is None:
        stride = _default_stride(nsteps, max_states)
    e_half = np.exp(op.linear * h / 2)
    e_full = e_half**2
    params = dict(model=model.name, eps=eps, delta=delta, dt=h, kind="unidirectional")

    c = grid.rfft(w0)
    times, states = [0.0], [w0.copy()]

    def partial(t):
        return Trajectory(grid, np.array(times), np.array(states), params, blown_up=True,
                          last_valid=len(times) - 1)

    for n in range(1, nsteps + 1):
        n1, w = op.nonlinear_hat(c)
        if not np.isfinite(w).all() or _lmax(w) > threshold:
            raise BlowUp((n - 1) * h, partial((n - 1) * h), threshold)
        k1 = h * n1
        k2 = h * op.nonlinear_hat(e_half * (c + k1 / 2))[0]
        k3 = h * op.nonlinear_hat(e_half * c + k2 / 2)[0]
        k4 = h * op.nonlinear_hat(e_full * c + e_half * k3)[0]
        c = e_full * c + (e_full * k1 + 2 * e_half * (k2 + k3) + k4) / 6
        if n % stride == 0 or n == nsteps:
            w = grid.irfft(c)
            if not np.isfinite(w).all() or _lmax(w) > threshold:
                raise BlowUp(n * h, partial(n * h), threshold)
            times.append(n * h)
            states.append(w)
    return Trajectory(grid, np.array(times), np.array(states), params)
