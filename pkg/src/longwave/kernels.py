"""Nonlocal kernels described by their Fourier symbols.

A kernel beta is even, so its symbol ``beta_hat(eta)`` is real and even.
With the moment normalisation ``int beta = 1`` and ``int X^2 beta = 2`` the
reciprocal symbol admits the expansion

    1 / beta_hat(eta) = 1 + eta^2 + eta^4 m(eta)

with ``m`` continuous; ``m`` defines the operator ``M_delta`` with symbol
``m(delta k)``. The scaled kernel ``beta_delta(x) = beta(x / delta) / delta``
has symbol ``beta_hat(delta k)``.
"""

from dataclasses import dataclass, field
from functools import cached_property
from math import comb
from typing import Callable, NamedTuple, Optional

import numpy as np
from scipy import integrate

from . import grid as gs
from .errors import EllipticityViolation, GridError, LongwaveError

ETA_CUT = 1e-2


@dataclass(frozen=True, eq=False)
class Kernel:
    name: str
    symbol: Callable
    order: float
    spatial: Optional[Callable] = None
    # closed-form correction symbol m, when known; otherwise computed from the symbol
    m_exact: Optional[Callable] = None
    admissible: bool = True
    note: str = ""
    meta: dict = field(default_factory=dict)

    def __call__(self, eta):
        return self.symbol(np.abs(np.asarray(eta, dtype=float)))

    @cached_property
    def m_zero(self):
        return _m_at_zero(self)


def exponential_kernel():
    return Kernel(
        name="exponential",
        symbol=lambda eta: 1.0 / (1.0 + eta**2),
        order=2.0,
        spatial=lambda X: 0.5 * np.exp(-np.abs(X)),
        m_exact=lambda eta: np.zeros_like(np.asarray(eta, dtype=float)),
        note="beta(X) = exp(-|X|)/2; the nonlocal equation reduces to improved Boussinesq; m == 0",
        meta={"c1": 1.0, "c2": 1.0},
    )


def gaussian_kernel():
    return Kernel(
        name="gaussian",
        symbol=lambda eta: np.exp(-(eta**2)),
        order=2.0,
        spatial=lambda X: np.exp(-(X**2) / 4.0) / np.sqrt(4.0 * np.pi),
        admissible=False,
        note="ellipticity: fails lower bound (symbol decays faster than any power); "
        "moment and symbol tests only",
    )


def bessel_kernel(r):
    """Symbol ``(1 + 2 eta^2 / r)^(-r/2)``: elliptic of order r, moments (1, 2).

    ``r = 2`` coincides with the exponential kernel.
    """
    r = float(r)
    if r < 2:
        raise LongwaveError("kernel order must be >= 2")
    a = 2.0 / r
    half = r / 2.0

    def symbol(eta):
        return (1.0 + a * eta**2) ** (-half)

    def m_exact(eta):
        # (1 + a y)^h = 1 + y + y^2 m with y = eta^2, so for integer h
        # m = sum_{j>=2} C(h, j) a^j y^(j-2), evaluated by Horner
        y = np.asarray(eta, dtype=float) ** 2
        out = np.zeros_like(y)
        for j in range(int(half), 1, -1):
            out = out * y + comb(int(half), j) * a**j
        return out

    name = f"bessel{r:g}"
    return Kernel(
        name=name,
        symbol=symbol,
        order=r,
        m_exact=m_exact if half == int(half) else None,
        note=f"synthetic symbol (1 + {a:g} eta^2)^(-{half:g}), order r = {r:g}",
        meta={"c1": 1.0, "c2": (r / 2.0) ** half},
    )


def table_kernel(name, eta, values, order):
    """Custom kernel from an (eta, beta_hat) table, linear interpolation, even extension."""
    eta = np.asarray(eta, dtype=float)
    values = np.asarray(values, dtype=float)
    if eta.ndim != 1 or eta.shape != values.shape or eta.size < 2:
        raise LongwaveError("kernel table needs matching 1-d eta and value columns")
    if np.any(np.diff(eta) <= 0):
        raise LongwaveError("kernel table eta column must be strictly increasing")
    if eta[0] > 0:
        raise LongwaveError("kernel table must start at eta = 0")

    def symbol(x):
        return np.interp(x, eta, values, left=np.nan, right=np.nan)

    return Kernel(
        name=name,
        symbol=symbol,
        order=float(order),
        note=f"tabulated on [0, {eta[-1]:g}]",
        meta={"eta_max": float(eta[-1])},
    )


def default_registry():
    return {k.name: k for k in (exponential_kernel(), gaussian_kernel(), bessel_kernel(6))}


class EllipticityReport(NamedTuple):
    c1: float
    c2: float
    passed: bool


class MomentReport(NamedTuple):
    m0: float
    m2: float
    m4_abs: float
    m0_ok: bool
    m2_ok: bool
    m4_verified: bool


def _ellipticity_constants(kernel, eta):
    values = kernel(eta)
    if not np.all(np.isfinite(values)):
        raise GridError(f"kernel {kernel.name!r} symbol is not finite on the samples")
    ratio = values * (1.0 + eta**2) ** (kernel.order / 2.0)
    return float(ratio.min()), float(ratio.max())


def check_ellipticity(kernel, eta=None, eta_max=50.0, samples=4001):
    """Estimate c1, c2 of ``c1 (1+eta^2)^(-r/2) <= beta_hat <= c2 (1+eta^2)^(-r/2)``.

    The bounds must also survive doubling the sampled range: a lower bound
    that collapses by more than half (or an upper bound that doubles) is
    read as a bound that fails asymptotically.
    """
    if eta is None:
        eta = np.linspace(0.0, eta_max, samples)
    eta = np.abs(np.asarray(eta, dtype=float))
    c1, c2 = _ellipticity_constants(kernel, eta)
    passed = 0 < c1 <= c2 < np.inf
    if passed:
        top = eta.max()
        if "eta_max" in kernel.meta:
            top = min(top, kernel.meta["eta_max"] / 2.0)
        wide = np.linspace(0.0, 2.0 * top, 2 * eta.size)
        d1, d2 = _ellipticity_constants(kernel, wide)
        passed = d1 >= 0.5 * c1 and d2 <= 2.0 * c2
    return EllipticityReport(c1, c2, bool(passed))


def _second_derivative_at_zero(f, h):
    f0 = f(0.0)
    return (-f(2 * h) + 16 * f(h) - 30 * f0 + 16 * f(-h) - f(-2 * h)) / (12 * h**2)


def _fourth_derivative_at_zero(f, h):
    # 7-point stencil, O(h^4)
    c = (-1.0, 12.0, -39.0, 56.0, -39.0, 12.0, -1.0)
    return sum(cj * f(j * h) for cj, j in zip(c, range(-3, 4))) / (6 * h**4)


def _richardson(estimate, h0, tol, min_h=1e-4, max_halvings=12):
    prev = estimate(h0)
    h = h0
    for _ in range(max_halvings):
        h /= 2
        cur = estimate(h)
        if abs(cur - prev) <= tol * max(1.0, abs(cur)):
            return cur
        if h < min_h:
            break
        prev = cur
    raise LongwaveError("finite-difference derivative of the symbol does not converge")


def check_moments(kernel, tol=1e-6):
    f = lambda x: float(kernel(x))
    m0 = f(0.0)
    h = 1e-4
    d2 = _second_derivative_at_zero(f, h)
    d2_half = _second_derivative_at_zero(f, h / 2)
    if abs(d2 - d2_half) > 1e-4 * max(1.0, abs(d2)):
        raise LongwaveError(f"symbol of {kernel.name!r} is not smooth enough at 0")
    m2 = -d2_half
    if kernel.spatial is not None:
        integrand = lambda X: X**4 * abs(kernel.spatial(X))
        val, _ = integrate.quad(integrand, 0, np.inf, epsabs=1e-12, epsrel=1e-12, limit=200)
        m4_abs, verified = 2.0 * val, True
    else:
        m4_abs = abs(_richardson(lambda hh: _fourth_derivative_at_zero(f, hh), 0.2, 1e-6))
        verified = False
    return MomentReport(
        m0=m0,
        m2=m2,
        m4_abs=float(m4_abs),
        m0_ok=bool(abs(m0 - 1.0) <= tol),
        m2_ok=bool(abs(m2 - 2.0) <= 10 * tol),  # stencil round-off is ~1e-7
        m4_verified=verified,
    )


def _m_at_zero(kernel):
    def excess(x):
        return 1.0 / float(kernel(x)) - 1.0 - x * x

    return _richardson(lambda h: _fourth_derivative_at_zero(excess, h), 0.2, 1e-6) / 24.0


def m_symbol(kernel, eta, eta_cut=ETA_CUT):
    """Correction symbol ``m(eta) = (1/beta_hat - 1 - eta^2) / eta^4``, extended to 0."""
    eta = np.abs(np.asarray(eta, dtype=float))
    values = kernel(eta)
    if np.any(~(values > 0)):
        raise EllipticityViolation(f"kernel {kernel.name!r} symbol is not positive")
    if kernel.m_exact is not None:
        return np.asarray(kernel.m_exact(eta), dtype=float) + 0.0 * eta
    out = np.empty_like(eta)
    far = eta > eta_cut
    e = eta[far]
    out[far] = (1.0 / values[far] - 1.0 - e**2) / e**4
    out[~far] = kernel.m_zero
    return out


def check_positive_on_grid(grid, kernel, delta):
    vals = kernel(delta * grid.k)
    if not np.all(vals > 0) or not np.all(np.isfinite(vals)):
        raise EllipticityViolation(
            f"kernel {kernel.name!r} symbol is not positive at every scaled grid mode"
        )
    return vals


def beta_delta_symbol(kernel, delta):
    return lambda k: kernel(delta * k)


def apply_beta_delta(grid, u, kernel, delta):
    return gs.apply_symbol(grid, u, beta_delta_symbol(kernel, delta))


def apply_Mdelta(grid, u, kernel, delta):
    return gs.apply_symbol(grid, u, lambda k: m_symbol(kernel, delta * k))
