"""Periodic grids and Fourier-space calculus.

Fields are plain float arrays of length ``grid.n`` sampled at ``grid.x``.
Spectra use the convention ``u(x) = sum_k c_k exp(i k x)``, i.e.
``c = fft(u) / N`` stored in numpy FFT order, with the Nyquist wavenumber
taken as ``+pi N / L``.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import GridError, NonZeroMean

MAX_DERIVATIVE = 8


@dataclass(frozen=True)
class Grid:
    length: float
    n: int

    def __post_init__(self):
        if not (np.isfinite(self.length) and self.length > 0):
            raise GridError(f"L must be positive, got {self.length}")
        if int(self.n) != self.n:
            raise GridError(f"N must be an integer, got {self.n}")
        if self.n % 2:
            raise GridError(f"N must be even, got {self.n}")
        if self.n < 8:
            raise GridError(f"N must be at least 8, got {self.n}")

    @cached_property
    def dx(self):
        return self.length / self.n

    @cached_property
    def x(self):
        return np.arange(self.n) * self.dx

    @cached_property
    def k(self):
        """Wavenumbers in FFT order; the Nyquist entry is positive."""
        j = np.fft.fftfreq(self.n, d=1.0 / self.n)
        j[self.n // 2] = self.n // 2
        return 2 * np.pi * j / self.length

    @cached_property
    def kr(self):
        """Nonnegative wavenumbers matching ``np.fft.rfft`` output."""
        return 2 * np.pi * np.arange(self.n // 2 + 1) / self.length

    @cached_property
    def kr_odd(self):
        # Odd-order multipliers drop the Nyquist mode so real fields stay real.
        k = self.kr.copy()
        k[-1] = 0.0
        return k

    @property
    def k_max(self):
        return np.pi * self.n / self.length

    @cached_property
    def dealias_mask(self):
        """Boolean mask on the rfft half keeping ``|k| <= (2/3) k_max``."""
        return self.kr <= (2.0 / 3.0) * self.k_max * (1 + 1e-12)

    @cached_property
    def rfft_weights(self):
        """Multiplicity of each rfft coefficient in the full spectrum."""
        w = np.full(self.n // 2 + 1, 2.0)
        w[0] = 1.0
        w[-1] = 1.0
        return w

    def ik_power(self, order):
        """rfft-half multiplier of ``D_x**order``."""
        k = self.kr_odd if order % 2 else self.kr
        return (1j * k) ** order

    # Transform helpers on the rfft half; all internal solvers use these.
    def rfft(self, u):
        return np.fft.rfft(u) / self.n

    def irfft(self, c):
        return np.fft.irfft(c * self.n, n=self.n)


def make_grid(length, n):
    return Grid(float(length), int(n))


def check_field(grid, u):
    u = np.asarray(u, dtype=float)
    if u.shape != (grid.n,):
        raise GridError(f"field has shape {u.shape}, grid expects ({grid.n},)")
    if not np.all(np.isfinite(u)):
        raise GridError("field contains non-finite samples")
    return u


def forward(grid, u):
    u = check_field(grid, u)
    return np.fft.fft(u) / grid.n


def inverse(grid, c):
    c = np.asarray(c)
    if c.shape != (grid.n,):
        raise GridError(f"spectrum has shape {c.shape}, grid expects ({grid.n},)")
    return np.fft.ifft(c * grid.n).real


def mean(grid, u):
    return float(np.mean(check_field(grid, u)))


def derivative(grid, u, order=1):
    if order < 0 or order > MAX_DERIVATIVE or int(order) != order:
        raise GridError(f"derivative order must be an integer in [0, {MAX_DERIVATIVE}]")
    u = check_field(grid, u)
    if order == 0:
        return u.copy()
    return grid.irfft(grid.ik_power(order) * grid.rfft(u))


def eval_symbol(grid, sigma):
    """Evaluate a symbol on all grid wavenumbers (FFT order), checking finiteness."""
    values = np.asarray(sigma(grid.k), dtype=float)
    values = np.broadcast_to(values, grid.k.shape)
    if not np.all(np.isfinite(values)):
        bad = grid.k[~np.isfinite(values)][0]
        raise GridError(f"symbol is not finite at k={bad:g}")
    return values


def apply_symbol(grid, u, sigma):
    """Fourier multiplier: ``c_k -> sigma(k) c_k``. ``sigma`` is a callable of k."""
    u = check_field(grid, u)
    values = eval_symbol(grid, sigma)
    return np.fft.ifft(values * np.fft.fft(u)).real


def _sobolev_weights(grid, s):
    return grid.rfft_weights * (1.0 + grid.kr**2) ** s


def sobolev_inner(grid, u, v, s):
    """``L * sum_k (1 + k^2)^s Re(c_k conj(d_k))``."""
    cu = grid.rfft(check_field(grid, u))
    cv = grid.rfft(check_field(grid, v))
    return float(grid.length * np.sum(_sobolev_weights(grid, s) * (cu * np.conj(cv)).real))


def sobolev_norm(grid, u, s=0.0):
    c = grid.rfft(check_field(grid, u))
    return float(np.sqrt(grid.length * np.sum(_sobolev_weights(grid, s) * np.abs(c) ** 2)))


def xnorm(grid, u, s, delta):
    """Norm ``sqrt(|f|_{H^s}^2 + delta^2 |f_x|_{H^s}^2)``."""
    c = grid.rfft(check_field(grid, u))
    w = _sobolev_weights(grid, s) * (1.0 + delta**2 * grid.kr_odd**2)
    return float(np.sqrt(grid.length * np.sum(w * np.abs(c) ** 2)))


def dealias(grid, c):
    """Two-thirds rule on a full spectrum (FFT order)."""
    c = np.array(c, dtype=complex)
    if c.shape != (grid.n,):
        raise GridError(f"spectrum has shape {c.shape}, grid expects ({grid.n},)")
    c[np.abs(grid.k) > (2.0 / 3.0) * grid.k_max * (1 + 1e-12)] = 0.0
    return c


def dealiased_product(grid, *factors):
    """Pointwise product of fields with the 2/3-rule applied to the result."""
    p = factors[0]
    for f in factors[1:]:
        p = p * f
    c = grid.rfft(p)
    c[~grid.dealias_mask] = 0.0
    return grid.irfft(c)


def antiderivative(grid, u, tol=None):
    """Zero-mean ``rho`` with ``rho_x = u - mean(u)``.

    Raises NonZeroMean when ``|mean(u)|`` exceeds ``tol`` (default
    ``1e-8 * ||u||_{L2} + 1e-14``).
    """
    u = check_field(grid, u)
    c = grid.rfft(u)
    if tol is None:
        tol = 1e-8 * sobolev_norm(grid, u, 0.0) + 1e-14
    if abs(c[0].real) > tol:
        raise NonZeroMean(f"mean {c[0].real:.3e} exceeds tolerance {tol:.3e}")
    k = grid.kr_odd
    out = np.zeros_like(c)
    nz = k != 0
    out[nz] = c[nz] / (1j * k[nz])
    return grid.irfft(out)
