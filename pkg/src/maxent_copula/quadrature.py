"""Quadrature helpers: vectorized Gauss-Legendre panels and geometric
shell integration for integrands with (possibly non-integrable)
endpoint singularities."""

from functools import lru_cache

import numpy as np


@lru_cache(maxsize=None)
def gauss_legendre(n: int):
    """Nodes and weights on [-1, 1]."""
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


def panel_integrals(f, edges, n=16):
    """Integral of ``f`` over each panel ``[edges[i], edges[i+1]]``.

    ``f`` must accept an ndarray.  Returns an array of length
    ``len(edges) - 1``.
    """
    edges = np.asarray(edges, dtype=float)
    x, w = gauss_legendre(n)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    nodes = mid[:, None] + half[:, None] * x[None, :]
    vals = f(nodes.ravel()).reshape(nodes.shape)
    return half * (vals @ w)


def integrate_panels(f, edges, n=16):
    return float(np.sum(panel_integrals(f, edges, n)))


def shell_integrate(f, lo, hi, *, nodes=32, rel_min_width=1e-15,
                    growth_window=6, growth_ratio=0.95):
    """Integrate ``f`` on ``(lo, hi)`` with dyadic shells toward both ends.

    Shell widths halve geometrically toward each endpoint, which resolves
    integrable endpoint singularities (log or power type).  When the shell
    sums near an endpoint stop decaying, the integral is declared
    numerically divergent.

    Returns ``(value, diverged)``; ``value`` is meaningless when
    ``diverged`` is True.
    """
    m = 0.5 * (lo + hi)
    w = m - lo
    if w <= 0.0:
        return 0.0, False
    total = 0.0
    diverged = False
    for left in (True, False):
        sums = []
        k = 0
        while True:
            outer = w * 2.0 ** (-k)
            inner = w * 2.0 ** (-k - 1)
            if left:
                a, b = lo + inner, lo + outer
            else:
                a, b = hi - outer, hi - inner
            if b - a <= 0.0:  # below float resolution
                break
            s = integrate_panels(f, (a, b), nodes)
            sums.append(s)
            total += s
            k += 1
            if inner < rel_min_width * w:
                break
            if abs(s) < 1e-17 * (abs(total) + 1.0):
                break
        if len(sums) > growth_window and abs(sums[-1]) > 1e-12:
            recent = np.abs(sums[-growth_window - 1:])
            ratios = recent[1:] / np.maximum(recent[:-1], 1e-300)
            if np.all(ratios >= growth_ratio):
                diverged = True
        if not diverged and len(sums) >= 2 and abs(sums[-2]) > 0.0:
            r = abs(sums[-1]) / abs(sums[-2])
            if r < 0.9:  # geometric tail beyond the last shell
                total += sums[-1] * r / (1.0 - r)
    return total, diverged
