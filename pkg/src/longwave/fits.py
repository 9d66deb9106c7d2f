import numpy as np

from .errors import DegenerateFit, LongwaveError

LAWS = ("eps2+delta4", "eps2")


def loglog_fit(x, y, floor=1e-12):
    """Least-squares line through ``(log x, log y)``.

    Returns ``dict(slope, intercept, r_squared)``; raises DegenerateFit when
    fewer than two points are usable or any ``y`` sits at the noise floor.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size < 2 or x.shape != y.shape:
        raise DegenerateFit("need at least two points for a log-log fit")
    if np.any(~np.isfinite(y)) or np.any(y < floor) or np.any(x <= 0):
        raise DegenerateFit("values at or below the noise floor")
    lx, ly = np.log(x), np.log(y)
    if np.ptp(lx) == 0:
        raise DegenerateFit("abscissae coincide")
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = ly - (slope * lx + intercept)
    ss_tot = np.sum((ly - ly.mean()) ** 2)
    r2 = 1.0 - np.sum(resid**2) / ss_tot if ss_tot > 0 else 1.0
    return dict(slope=float(slope), intercept=float(intercept), r_squared=float(r2))


def law_value(eps, delta, law):
    """Bound shape: ``eps^2 + delta^4`` or ``eps^2``."""
    if law == "eps2+delta4":
        return eps**2 + delta**4
    if law == "eps2":
        return eps**2
    raise LongwaveError(f"unknown error law {law!r}; expected one of {LAWS}")
