"""Energy functionals of the error ``r = u - w`` between a bidirectional
solution u and a unidirectional solution w.

With ``rho`` the zero-mean antiderivative of r (so only ``rho_t`` is ever
needed) and all norms in H^s:

    E_s^2     = 1/2 (|rho_t|^2 + delta^2 |r_t|^2 + |r|^2)
                + eps <L^s (w r), L^s r> + eps/2 <L^s r^2, L^s r>
    E_{s,M}^2 = E_s^2 + delta^4/2 <L^s M_delta D_x r_t, L^s D_x r_t>
    E~_s^2    = 1/2 (|rho_t|^2 + delta^2 |r_t|^2 + |r|^2)

The energies are diagnostics; the error itself is measured directly.
"""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import grid as gs
from .errors import NegativeEnergy
from .kernels import check_ellipticity, m_symbol
from .unidirectional import time_derivative


@dataclass(frozen=True)
class ErrorState:
    grid: gs.Grid
    r: np.ndarray
    r_t: np.ndarray
    rho_t: np.ndarray
    w: np.ndarray
    eps: float
    delta: float
    s: float
    time: float = 0.0


def build_error_state(grid, u, u_t, w, model, eps, delta, s, time=0.0, tol=None):
    """Error fields at one instant; ``w_t`` comes from the model's right-hand side.

    Raises NonZeroMean if ``r_t`` has a mean above the antiderivative tolerance.
    """
    u, u_t, w = (gs.check_field(grid, f) for f in (u, u_t, w))
    r_t = u_t - time_derivative(grid, w, model, eps, delta)
    return ErrorState(
        grid=grid,
        r=u - w,
        r_t=r_t,
        rho_t=gs.antiderivative(grid, r_t, tol=tol),
        w=w,
        eps=float(eps),
        delta=float(delta),
        s=float(s),
        time=float(time),
    )


def quadratic_part(state):
    """``|rho_t|^2 + delta^2 |r_t|^2 + |r|^2`` in H^s (no factor 1/2)."""
    g, s = state.grid, state.s
    return (
        gs.sobolev_norm(g, state.rho_t, s) ** 2
        + state.delta**2 * gs.sobolev_norm(g, state.r_t, s) ** 2
        + gs.sobolev_norm(g, state.r, s) ** 2
    )


def energy_squared(state):
    g, s, e = state.grid, state.s, state.eps
    r = state.r
    wr = gs.dealiased_product(g, state.w, r)
    rr = gs.dealiased_product(g, r, r)
    cross = e * gs.sobolev_inner(g, wr, r, s) + 0.5 * e * gs.sobolev_inner(g, rr, r, s)
    return 0.5 * quadratic_part(state) + cross


def _checked_sqrt(value, scale):
    # round-off around an exactly vanishing error is not a regime exit
    if value < 0:
        if -value <= 1e-13 * scale + 1e-28:
            return 0.0
        raise NegativeEnergy(value)
    return float(np.sqrt(value))


def energy_Es(state):
    """``E_s``; raises NegativeEnergy when ``E_s^2 < 0``."""
    return _checked_sqrt(energy_squared(state), quadratic_part(state))


def energy_tilde(state):
    return float(np.sqrt(0.5 * quadratic_part(state)))


def nonlocal_energy_term(state, kernel):
    """``delta^4/2 <L^s M_delta D_x r_t, L^s D_x r_t>``."""
    g, d = state.grid, state.delta
    rtx = gs.derivative(g, state.r_t, 1)
    mrtx = gs.apply_symbol(g, rtx, lambda k: m_symbol(kernel, d * k))
    return 0.5 * d**4 * gs.sobolev_inner(g, mrtx, rtx, state.s)


def energy_EsM(state, kernel):
    value = energy_squared(state) + nonlocal_energy_term(state, kernel)
    return _checked_sqrt(value, quadratic_part(state))


def positivity_gap(state):
    """``4 E_s^2 - (|rho_t|^2 + delta^2 |r_t|^2 + |r|^2)``; nonnegative in the small-eps regime."""
    return 4.0 * energy_squared(state) - quadratic_part(state)


class CoercivityReport(NamedTuple):
    c2: float
    identity_error: float  # max relative |1 + y^2 + y^4 m(y) - 1/beta_hat(y)|, y = delta k
    lower_margin: float  # min of 1/beta_hat(y) - (1 + y^2)^(r/2) / c2, relative
    chain_margin: float  # min of (1 + y^2)^(r/2) - (1 + y^2), relative
    passed: bool


def coercivity_chain(grid, kernel, delta, s=0.0, tol=1e-12):
    """Per-mode check of the lower bound behind ``E_{s,M}``.

    At each grid wavenumber k, with ``y = delta k`` and weight ``(1 + k^2)^s``,

        (1+k^2)^s / beta_hat(y) >= (1+k^2)^s (1+y^2)^(r/2) / c2 >= (1+k^2)^s (1+y^2) / c2

    where the middle form uses the upper ellipticity constant c2. The first
    quantity is also compared with ``1 + y^2 + y^4 m(y)``.
    """
    k = grid.kr
    y = delta * k
    weight = (1.0 + k**2) ** s
    c2 = kernel.meta.get("c2")
    if c2 is None:
        c2 = check_ellipticity(kernel).c2
    inv = weight / kernel(y)
    expanded = weight * (1.0 + y**2 + y**4 * m_symbol(kernel, y))
    mid = weight * (1.0 + y**2) ** (kernel.order / 2.0) / c2
    low = weight * (1.0 + y**2) / c2
    identity_error = float(np.max(np.abs(expanded - inv) / inv))
    lower_margin = float(np.min((inv - mid) / inv))
    chain_margin = float(np.min((mid - low) / mid))
    passed = identity_error <= tol and lower_margin >= -tol and chain_margin >= -tol
    return CoercivityReport(float(c2), identity_error, lower_margin, chain_margin, bool(passed))


def energy_row(state, kernel=None):
    """One line of the energy time series; E_s is NaN on a regime exit."""
    try:
        es = energy_Es(state)
    except NegativeEnergy:
        es = float("nan")
    row = dict(
        t=state.time,
        E_s=es,
        E_tilde=energy_tilde(state),
        norm_r_Hs=gs.sobolev_norm(state.grid, state.r, state.s),
        positivity_gap=positivity_gap(state),
        quadratic=quadratic_part(state),
    )
    if kernel is not None:
        try:
            row["E_sM"] = energy_EsM(state, kernel)
        except NegativeEnergy:
            row["E_sM"] = float("nan")
    return row
