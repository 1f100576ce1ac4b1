"""Kernel tables for a single irreducible diagonal block.

Everything the density, entropy and sampling layers need derives from
three scalar functions of one variable:

    h(r) = r - delta(r)
    F(r) = ((d-1)/d) * integral_{1/2}^{r} dt / h(t)
    a(r) = ((d - delta'(r))/d) * h(r)^(1/d - 1) * exp(F(r))
    b(r) = (delta'(r)/d)       * h(r)^(1/d - 1) * exp(-(d-1) F(r))

with the primitive A(r) = integral_0^r a = h(r)^(1/d) * exp(F(r)).

F diverges to -inf at 0 and +inf at 1 (h is squeezed below both t and
(d-1)(1-t)), so the table lives on the logit scale x = log(t/(1-t)):
there F grows asymptotically linearly and a modest uniform grid covers
both tails.  F is cached as a cubic Hermite spline whose knot slopes are
the exact derivative dF/dx = ((d-1)/d) * t(1-t)/h(t), giving O(w^4)
interpolation error; the grid is doubled until two consecutive tables
agree to ``quad_tol``.
"""

import numpy as np
from scipy.interpolate import CubicHermiteSpline

from .errors import AccuracyError
from .quadrature import gauss_legendre

_TINY = 1e-300


def _logit(t):
    return np.log(t) - np.log1p(-t)


def _sigmoid(x):
    # numerically symmetric expit
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    e = np.exp(x[~pos])
    out[~pos] = e / (1.0 + e)
    return out


class KernelTable:
    """Cached evaluation of h, F, a, b and A for one diagonal block.

    The wrapped ``delta`` must satisfy delta(t) < t on (0, 1); interior
    contact points belong in separate blocks (see the decomposition in
    the diagonal module).
    """

    def __init__(self, delta, quad_tol: float = 1e-9, base_segments: int = 2048,
                 max_segments: int = 65536, eps: float = 1e-9):
        self.delta = delta
        self.d = delta.d
        self.quad_tol = float(quad_tol)
        self._L = _logit(1.0 - eps)
        self._build(base_segments, max_segments)

    # -- table construction -------------------------------------------------

    def _slope_x(self, x):
        """dF/dx at logit coordinate x: ((d-1)/d) * t(1-t)/h(t)."""
        t = _sigmoid(np.asarray(x, dtype=float))
        h = np.maximum(t - self.delta(t), _TINY)
        return ((self.d - 1.0) / self.d) * t * (1.0 - t) / h

    def _knots(self, segments):
        x = np.linspace(-self._L, self._L, segments + 1)
        extra = [np.array([0.0])]
        bps = np.asarray(self.delta.breakpoints, dtype=float)
        bps = bps[(bps > _sigmoid(np.array([-self._L]))[0])
                  & (bps < _sigmoid(np.array([self._L]))[0])]
        if bps.size:
            extra.append(_logit(bps))
        return np.unique(np.concatenate([x] + extra))

    def _table(self, segments):
        xg = self._knots(segments)
        glx, glw = gauss_legendre(16)
        mid = 0.5 * (xg[1:] + xg[:-1])
        half = 0.5 * (xg[1:] - xg[:-1])
        nodes = mid[:, None] + half[:, None] * glx[None, :]
        seg = half * (self._slope_x(nodes.ravel()).reshape(nodes.shape) @ glw)
        cum = np.concatenate(([0.0], np.cumsum(seg)))
        anchor = np.searchsorted(xg, 0.0)
        Fg = cum - cum[anchor]
        return xg, CubicHermiteSpline(xg, Fg, self._slope_x(xg))

    def _build(self, base_segments, max_segments):
        segments = base_segments
        xg, spline = self._table(segments)
        while True:
            if 2 * segments > max_segments:
                raise AccuracyError(
                    f"F table did not converge to {self.quad_tol:g} "
                    f"within {max_segments} segments")
            segments *= 2
            xg2, spline2 = self._table(segments)
            probe = xg2[:: max(1, len(xg2) // 1024)]
            # evaluating h = t - delta(t) in the far tails is limited by
            # cancellation (relative error ~ eps/h with h ~ e^{-|x|}), so
            # allow that unavoidable noise floor on top of the tolerance
            floor = 2.2e-16 * np.exp(np.abs(probe))
            err = float(np.max(np.abs(spline(probe) - spline2(probe)) - floor))
            xg, spline = xg2, spline2
            if err < self.quad_tol:
                break
        self._xg = xg
        self._spline = spline
        self._slope_lo = float(self._slope_x(np.array([xg[0]]))[0])
        self._slope_hi = float(self._slope_x(np.array([xg[-1]]))[0])
        self._F_lo = float(spline(xg[0]))
        self._F_hi = float(spline(xg[-1]))

    # -- point evaluation ---------------------------------------------------

    def h_at(self, r):
        scalar = np.ndim(r) == 0
        r = np.atleast_1d(np.asarray(r, dtype=float))
        out = np.maximum(r - self.delta(r), 0.0)
        return float(out[0]) if scalar else out

    def F_at(self, r):
        """F(r); -inf at r <= 0 and +inf at r >= 1."""
        scalar = np.ndim(r) == 0
        r = np.atleast_1d(np.asarray(r, dtype=float))
        out = np.empty_like(r)
        out[r <= 0.0] = -np.inf
        out[r >= 1.0] = np.inf
        inside = (r > 0.0) & (r < 1.0)
        if np.any(inside):
            x = _logit(r[inside])
            v = np.empty_like(x)
            lo = x < self._xg[0]
            hi = x > self._xg[-1]
            mid = ~(lo | hi)
            v[mid] = self._spline(x[mid])
            v[lo] = self._F_lo + self._slope_lo * (x[lo] - self._xg[0])
            v[hi] = self._F_hi + self._slope_hi * (x[hi] - self._xg[-1])
            out[inside] = v
        return float(out[0]) if scalar else out

    def log_ab_at(self, r):
        """(log a(r), log b(r)); both -inf outside (0, 1)."""
        scalar = np.ndim(r) == 0
        r = np.atleast_1d(np.asarray(r, dtype=float))
        la = np.full_like(r, -np.inf)
        lb = np.full_like(r, -np.inf)
        inside = (r > 0.0) & (r < 1.0)
        if np.any(inside):
            ri = r[inside]
            d = float(self.d)
            dp = np.clip(self.delta.deriv(ri), 0.0, d)
            h = np.maximum(ri - self.delta(ri), _TINY)
            F = self.F_at(ri)
            lh = (1.0 / d - 1.0) * np.log(h)
            with np.errstate(divide="ignore"):
                la[inside] = np.log((d - dp) / d) + lh + F
                lb[inside] = np.log(dp / d) + lh - (d - 1.0) * F
        return (float(la[0]), float(lb[0])) if scalar else (la, lb)

    def ab_at(self, r):
        la, lb = self.log_ab_at(r)
        return np.exp(la), np.exp(lb)

    def A_at(self, r):
        """A(r) = integral_0^r a = h(r)^(1/d) exp(F(r)), for r in [0, 1)."""
        scalar = np.ndim(r) == 0
        r = np.atleast_1d(np.asarray(r, dtype=float))
        out = np.zeros_like(r)
        inside = (r > 0.0) & (r < 1.0)
        if np.any(inside):
            ri = r[inside]
            h = np.maximum(ri - self.delta(ri), 0.0)
            with np.errstate(divide="ignore"):
                out[inside] = np.exp(np.log(np.maximum(h, _TINY)) / self.d
                                     + self.F_at(ri))
            out[inside] = np.where(h > 0.0, out[inside], 0.0)
        return float(out[0]) if scalar else out
