"""Standard normal CDF, density and quantile.

Self-contained double-precision implementations: the CDF is erfc-based
(accurate in both tails), the quantile uses Acklam's rational
approximation polished by Newton steps.
"""

import numpy as np
from scipy.special import erfc

_SQRT2 = np.sqrt(2.0)
_SQRT2PI = np.sqrt(2.0 * np.pi)

# Acklam's coefficients for the inverse normal CDF.
_A = (-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
      1.383577518672690e+02, -3.066479806614716e+01, 2.506628277459239e+00)
_B = (-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
      6.680131188771972e+01, -1.328068155288572e+01)
_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
      -2.549732539343734e+00, 4.374664141464968e+00, 2.938163982698783e+00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
      3.754408661907416e+00)
_P_LOW = 0.02425


def norm_cdf(x):
    """Phi(x), standard normal cumulative distribution function."""
    x = np.asarray(x, dtype=float)
    out = 0.5 * erfc(-x / _SQRT2)
    return out if out.ndim else float(out)


def norm_pdf(x):
    """phi(x), standard normal density."""
    x = np.asarray(x, dtype=float)
    out = np.exp(-0.5 * x * x) / _SQRT2PI
    return out if out.ndim else float(out)


def _acklam(p):
    out = np.empty_like(p)
    lo = p < _P_LOW
    hi = p > 1.0 - _P_LOW
    mid = ~(lo | hi)

    if np.any(mid):
        q = p[mid] - 0.5
        r = q * q
        num = ((((_A[0] * r + _A[1]) * r + _A[2]) * r + _A[3]) * r + _A[4]) * r + _A[5]
        den = ((((_B[0] * r + _B[1]) * r + _B[2]) * r + _B[3]) * r + _B[4]) * r + 1.0
        out[mid] = q * num / den
    for sel, pp, sign in ((lo, p, -1.0), (hi, 1.0 - p, 1.0)):
        if np.any(sel):
            q = np.sqrt(-2.0 * np.log(pp[sel] if sign < 0 else 1.0 - p[sel]))
            num = ((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5]
            den = (((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0
            out[sel] = -sign * num / den
    return out


def norm_ppf(p):
    """Phi^{-1}(p), standard normal quantile.

    Returns -inf/+inf for p <= 0 / p >= 1.  Accuracy is close to full
    double precision after the Newton correction.
    """
    p = np.asarray(p, dtype=float)
    scalar = p.ndim == 0
    p = np.atleast_1d(p)
    out = np.full(p.shape, np.nan)
    out[p <= 0.0] = -np.inf
    out[p >= 1.0] = np.inf
    ok = (p > 0.0) & (p < 1.0)
    if np.any(ok):
        x = _acklam(p[ok])
        # Two Newton steps; pdf(x) > 0 for every attainable x here.
        for _ in range(2):
            pdf = np.exp(-0.5 * x * x) / _SQRT2PI
            x = x + (p[ok] - 0.5 * erfc(-x / _SQRT2)) / pdf
        out[ok] = x
    return float(out[0]) if scalar else out
