"""Diagonal sections: representation, built-in families, validation,
contact-set decomposition and rescaling.

A diagonal section ``delta`` is a non-decreasing, d-Lipschitz function on
[0, 1] with ``delta(0) = 0``, ``delta(1) = 1`` and ``delta(t) <= t``.  It
is the CDF of the componentwise maximum of a copula-distributed vector.
All section objects are immutable after construction and safe to share
between threads; evaluation is pure.
"""

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.interpolate import PchipInterpolator

from .errors import InfeasibleDiagonalError, ParameterError, TabulatedDataError
from .normal import norm_cdf, norm_pdf, norm_ppf
from .quadrature import gauss_legendre


def _as_array(t):
    t = np.asarray(t, dtype=float)
    return t.ndim == 0, np.atleast_1d(t)


class DiagonalSection:
    """Base class: an evaluable diagonal with derivative access.

    Subclasses implement ``_eval`` and ``_deriv`` on ndarrays.
    ``breakpoints`` lists interior points where the section (or its
    derivative) is only piecewise smooth; quadrature grids split there.
    """

    family = "custom"

    def __init__(self, d: int):
        if d < 2:
            raise ParameterError(f"dimension must be >= 2, got {d}")
        self.d = int(d)
        self.breakpoints: tuple = ()

    def _eval(self, t: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _deriv(self, t: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def __call__(self, t):
        scalar, arr = _as_array(t)
        out = self._eval(arr)
        return float(out[0]) if scalar else out

    def deriv(self, t):
        scalar, arr = _as_array(t)
        out = np.clip(self._deriv(arr), 0.0, float(self.d))
        return float(out[0]) if scalar else out

    def describe(self) -> dict:
        return {"family": self.family, "d": self.d}


class PiecewiseLinearDiagonal(DiagonalSection):
    """delta(r) = (r - alpha) on (alpha, 1-alpha), 2r - 1 on [1-alpha, 1],
    zero below; alpha in (0, 1/2]."""

    family = "piecewise_linear"

    def __init__(self, alpha: float, d: int = 2):
        super().__init__(d)
        if not 0.0 < alpha <= 0.5:
            raise ParameterError(f"piecewise_linear needs alpha in (0, 1/2], got {alpha}")
        self.alpha = float(alpha)
        self.breakpoints = (self.alpha, 1.0 - self.alpha) if alpha < 0.5 else (0.5,)

    def _eval(self, t):
        a = self.alpha
        return np.where(t <= a, 0.0, np.where(t < 1.0 - a, t - a, 2.0 * t - 1.0))

    def _deriv(self, t):
        a = self.alpha
        return np.where(t < a, 0.0, np.where(t < 1.0 - a, 1.0, 2.0))

    def describe(self):
        return {"family": self.family, "alpha": self.alpha, "d": self.d}


class PowerDiagonal(DiagonalSection):
    """delta(t) = t**alpha with alpha in (1, d]."""

    family = "power"

    def __init__(self, alpha: float, d: int = 2):
        super().__init__(d)
        if not 1.0 < alpha <= d:
            raise ParameterError(f"power needs alpha in (1, d], got {alpha} with d={d}")
        self.alpha = float(alpha)

    def _eval(self, t):
        return np.power(np.clip(t, 0.0, 1.0), self.alpha)

    def _deriv(self, t):
        with np.errstate(divide="ignore"):
            return self.alpha * np.power(np.clip(t, 0.0, 1.0), self.alpha - 1.0)

    def describe(self):
        return {"family": self.family, "alpha": self.alpha, "d": self.d}


class FgmDiagonal(DiagonalSection):
    """Farlie-Gumbel-Morgenstern diagonal, theta in [-1, 1], bivariate only:
    delta(t) = t^2 + theta t^2 (1-t)^2."""

    family = "fgm"

    def __init__(self, theta: float, d: int = 2):
        if d != 2:
            raise ParameterError("fgm diagonal is defined for d = 2 only")
        super().__init__(d)
        if not -1.0 <= theta <= 1.0:
            raise ParameterError(f"fgm needs theta in [-1, 1], got {theta}")
        self.theta = float(theta)

    def _eval(self, t):
        return t * t * (1.0 + self.theta * (1.0 - t) ** 2)

    def _deriv(self, t):
        th = self.theta
        return 4.0 * th * t ** 3 - 6.0 * th * t * t + 2.0 * (1.0 + th) * t

    def describe(self):
        return {"family": self.family, "theta": self.theta, "d": self.d}


class GaussianDiagonal(DiagonalSection):
    """Diagonal of the bivariate Gaussian copula with correlation rho.

    delta'(t) = 2 Phi(k Phi^{-1}(t)) with k = sqrt((1-rho)/(1+rho)); the
    section itself is recovered by integrating the derivative in the
    normal-score variable, so only the univariate normal CDF/quantile are
    needed.  Accurate to ~1e-12; at rho = 0 it reproduces t^2.
    """

    family = "gaussian"
    _XMAX = 8.5
    _NSEG = 2048
    _GL = 16

    def __init__(self, rho: float, d: int = 2):
        if d != 2:
            raise ParameterError("gaussian diagonal is defined for d = 2 only")
        super().__init__(d)
        if not -1.0 < rho < 1.0:
            raise ParameterError(f"gaussian needs rho in (-1, 1), got {rho}")
        self.rho = float(rho)
        self.k = np.sqrt((1.0 - rho) / (1.0 + rho))
        xg = np.linspace(-self._XMAX, self._XMAX, self._NSEG + 1)
        glx, glw = gauss_legendre(self._GL)
        mid = 0.5 * (xg[1:] + xg[:-1])
        half = 0.5 * (xg[1:] - xg[:-1])
        nodes = mid[:, None] + half[:, None] * glx[None, :]
        seg = half * (self._integrand(nodes) @ glw)
        self._xg = xg
        self._cum = np.concatenate(([0.0], np.cumsum(seg)))
        # normalize so delta(1) = 1 exactly (total mass of the integrand is 1)
        self._norm = self._cum[-1] + 2.0 * (1.0 - norm_cdf(self._XMAX))

    def _integrand(self, x):
        return 2.0 * norm_cdf(self.k * x) * norm_pdf(x)

    def _eval(self, t):
        t = np.clip(t, 0.0, 1.0)
        x = np.atleast_1d(norm_ppf(t))
        out = np.zeros_like(x)
        hi = x >= self._XMAX
        out[hi] = self._norm - 2.0 * (1.0 - t[hi])
        mid = (x > -self._XMAX) & ~hi
        if np.any(mid):
            xm = x[mid]
            idx = np.clip(np.searchsorted(self._xg, xm) - 1, 0, self._NSEG - 1)
            x0 = self._xg[idx]
            glx, glw = gauss_legendre(self._GL)
            m = 0.5 * (x0 + xm)
            h = 0.5 * (xm - x0)
            nodes = m[:, None] + h[:, None] * glx[None, :]
            out[mid] = self._cum[idx] + h * (self._integrand(nodes) @ glw)
        return np.clip(out / self._norm, 0.0, 1.0)

    def _deriv(self, t):
        x = norm_ppf(np.clip(t, 0.0, 1.0))
        return 2.0 * norm_cdf(self.k * np.asarray(x))

    def describe(self):
        return {"family": self.family, "rho": self.rho, "d": self.d}


class TabulatedDiagonal(DiagonalSection):
    """Diagonal given by knots, interpolated with a shape-preserving
    monotone cubic (so monotonicity and the Lipschitz bound survive
    interpolation up to curvature of the interpolant)."""

    family = "tabulated"

    def __init__(self, knots_t: Sequence[float], knots_v: Sequence[float], d: int = 2):
        super().__init__(d)
        t = np.asarray(knots_t, dtype=float)
        v = np.asarray(knots_v, dtype=float)
        if t.ndim != 1 or t.shape != v.shape or len(t) < 2:
            raise TabulatedDataError("need at least two (t, delta) knots")
        if not (np.all(np.diff(t) > 0.0)):
            raise TabulatedDataError("knot abscissae must be strictly increasing")
        if abs(t[0]) > 1e-12 or abs(v[0]) > 1e-12 or abs(t[-1] - 1.0) > 1e-12 or abs(v[-1] - 1.0) > 1e-12:
            raise TabulatedDataError("knots must start at (0, 0) and end at (1, 1)")
        dv = np.diff(v)
        if np.any(dv < -1e-12):
            raise TabulatedDataError("knot values must be non-decreasing")
        if np.any(dv > d * np.diff(t) + 1e-12):
            raise TabulatedDataError(f"knot values violate the {d}-Lipschitz bound")
        self._t = t
        self._v = v
        self._interp = PchipInterpolator(t, v)
        self._dinterp = self._interp.derivative()
        self.breakpoints = tuple(t[1:-1])

    def _eval(self, t):
        return np.clip(self._interp(np.clip(t, 0.0, 1.0)), 0.0, 1.0)

    def _deriv(self, t):
        return self._dinterp(np.clip(t, 0.0, 1.0))

    def describe(self):
        return {"family": self.family, "d": self.d,
                "knots": [(float(a), float(b)) for a, b in zip(self._t, self._v)]}


class FunctionDiagonal(DiagonalSection):
    """Wrap arbitrary callables as a diagonal section (mostly for tests
    and ad-hoc constructions).  Derivative falls back to a central finite
    difference when not supplied."""

    def __init__(self, fn: Callable, deriv_fn: Optional[Callable] = None,
                 d: int = 2, family: str = "custom", breakpoints: tuple = ()):
        super().__init__(d)
        self._fn = fn
        self._dfn = deriv_fn
        self.family = family
        self.breakpoints = tuple(breakpoints)

    def _eval(self, t):
        return np.asarray(self._fn(t), dtype=float)

    def _deriv(self, t):
        if self._dfn is not None:
            return np.asarray(self._dfn(t), dtype=float)
        h = 1e-6
        lo = np.clip(t - h, 0.0, 1.0)
        hi = np.clip(t + h, 0.0, 1.0)
        return (self._eval(hi) - self._eval(lo)) / np.maximum(hi - lo, 1e-300)

    def describe(self):
        return {"family": self.family, "d": self.d, "callable": repr(self._fn)}


class RescaledDiagonal(DiagonalSection):
    """delta^j(t) = (delta(alpha + t * len) - alpha) / len for a contact
    interval (alpha, beta); its contact set is {0, 1}."""

    family = "rescaled"

    def __init__(self, base: DiagonalSection, alpha: float, beta: float):
        super().__init__(base.d)
        self.base = base
        self.alpha = float(alpha)
        self.beta = float(beta)
        self.length = self.beta - self.alpha
        if self.length <= 0.0:
            raise ParameterError("rescale interval must have positive length")
        self.breakpoints = tuple(
            (b - self.alpha) / self.length for b in base.breakpoints
            if self.alpha < b < self.beta
        )

    def _eval(self, t):
        raw = (self.base._eval(self.alpha + t * self.length) - self.alpha) / self.length
        return np.clip(raw, 0.0, 1.0)

    def _deriv(self, t):
        return self.base._deriv(self.alpha + t * self.length)

    def describe(self):
        return {"family": self.family, "interval": (self.alpha, self.beta),
                "base": self.base.describe(), "d": self.d}


class SplicedDiagonal(DiagonalSection):
    """Assemble a diagonal from blocks: on [a_j, b_j] it follows
    a_j + len_j * delta_j((t - a_j) / len_j).  Block lengths must sum to 1."""

    family = "spliced"

    def __init__(self, sections: Sequence[DiagonalSection], lengths: Sequence[float]):
        if len(sections) != len(lengths) or not sections:
            raise ParameterError("need matching non-empty sections and lengths")
        d = sections[0].d
        if any(s.d != d for s in sections):
            raise ParameterError("all blocks must share the same dimension")
        super().__init__(d)
        lengths = np.asarray(lengths, dtype=float)
        if np.any(lengths <= 0) or abs(lengths.sum() - 1.0) > 1e-12:
            raise ParameterError("block lengths must be positive and sum to 1")
        self.sections = tuple(sections)
        self.edges = np.concatenate(([0.0], np.cumsum(lengths)))
        self.edges[-1] = 1.0
        self.lengths = lengths
        bps = list(self.edges[1:-1])
        for j, s in enumerate(self.sections):
            bps.extend(self.edges[j] + lengths[j] * b for b in s.breakpoints)
        self.breakpoints = tuple(sorted(bps))

    def _block_index(self, t):
        return np.clip(np.searchsorted(self.edges, t, side="right") - 1,
                       0, len(self.sections) - 1)

    def _eval(self, t):
        idx = self._block_index(t)
        out = np.empty_like(np.asarray(t, dtype=float))
        for j, s in enumerate(self.sections):
            m = idx == j
            if np.any(m):
                loc = (t[m] - self.edges[j]) / self.lengths[j]
                out[m] = self.edges[j] + self.lengths[j] * s._eval(np.clip(loc, 0.0, 1.0))
        return out

    def _deriv(self, t):
        idx = self._block_index(t)
        out = np.empty_like(np.asarray(t, dtype=float))
        for j, s in enumerate(self.sections):
            m = idx == j
            if np.any(m):
                loc = (t[m] - self.edges[j]) / self.lengths[j]
                out[m] = s._deriv(np.clip(loc, 0.0, 1.0))
        return out

    def describe(self):
        return {"family": self.family, "d": self.d,
                "lengths": [float(x) for x in self.lengths],
                "blocks": [s.describe() for s in self.sections]}


# ---------------------------------------------------------------------------
# family container and constructors

_FAMILY_ALIASES = {"plinear": "piecewise_linear"}


@dataclass(frozen=True)
class FamilySpec:
    """Parametric description of a built-in diagonal family."""

    family: str
    alpha: Optional[float] = None
    theta: Optional[float] = None
    rho: Optional[float] = None
    knots: Optional[tuple] = None


def make_family(spec: FamilySpec, d: int = 2) -> DiagonalSection:
    """Build a DiagonalSection from a FamilySpec, validating parameters."""
    fam = _FAMILY_ALIASES.get(spec.family, spec.family)
    if fam == "piecewise_linear":
        if spec.alpha is None:
            raise ParameterError("piecewise_linear requires alpha")
        return PiecewiseLinearDiagonal(spec.alpha, d)
    if fam == "power":
        if spec.alpha is None:
            raise ParameterError("power requires alpha")
        return PowerDiagonal(spec.alpha, d)
    if fam == "fgm":
        if spec.theta is None:
            raise ParameterError("fgm requires theta")
        return FgmDiagonal(spec.theta, d)
    if fam == "gaussian":
        if spec.rho is None:
            raise ParameterError("gaussian requires rho")
        return GaussianDiagonal(spec.rho, d)
    if fam == "tabulated":
        if not spec.knots:
            raise ParameterError("tabulated requires knots")
        t = [k[0] for k in spec.knots]
        v = [k[1] for k in spec.knots]
        return TabulatedDiagonal(t, v, d)
    raise ParameterError(f"unknown family {spec.family!r}")


def load_tabulated_csv(path) -> tuple:
    """Read a `t,delta` CSV file into a knot tuple."""
    import csv

    knots = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if [h.strip().lower() for h in header[:2]] != ["t", "delta"]:
            raise TabulatedDataError("expected CSV header 't,delta'")
        for row in reader:
            if not row:
                continue
            knots.append((float(row[0]), float(row[1])))
    return tuple(knots)


# ---------------------------------------------------------------------------
# validation

@dataclass
class ValidationReport:
    passed: bool
    violations: list = field(default_factory=list)


def validate(delta: DiagonalSection, grid_size: int = 10_000, tol: float = 1e-9) -> ValidationReport:
    """Check the defining conditions on a dense grid.

    Verifies the boundary values, monotonicity, delta(t) <= t, the
    d-Lipschitz bound, and that the derivative stays in [0, d].
    """
    if grid_size < 3:
        raise ParameterError("grid_size must be >= 3")
    t = np.linspace(0.0, 1.0, grid_size)
    v = delta(t)
    d = delta.d
    violations = []
    if abs(v[0]) > tol:
        violations.append(("delta(0) != 0", 0.0))
    if abs(v[-1] - 1.0) > tol:
        violations.append(("delta(1) != 1", 1.0))
    dv = np.diff(v)
    bad = np.where(dv < -tol)[0]
    if bad.size:
        violations.append(("not non-decreasing", float(t[bad[0]])))
    bad = np.where(v > t + tol)[0]
    if bad.size:
        violations.append(("delta(t) > t", float(t[bad[0]])))
    bad = np.where(dv > d * np.diff(t) + tol)[0]
    if bad.size:
        violations.append((f"violates {d}-Lipschitz bound", float(t[bad[0]])))
    dd = delta._deriv(t[1:-1])
    bad = np.where((dd < -1e-6) | (dd > d + 1e-6))[0]
    if bad.size:
        violations.append(("derivative outside [0, d]", float(t[1 + bad[0]])))
    return ValidationReport(passed=not violations, violations=violations)


def derivative(delta: DiagonalSection, t):
    """delta'(t), clipped to [0, d]."""
    return delta.deriv(t)


# ---------------------------------------------------------------------------
# contact set decomposition

@dataclass(frozen=True)
class IntervalDecomposition:
    """Ordered open intervals composing [0,1] minus the contact set."""

    intervals: tuple

    @property
    def lengths(self):
        return tuple(b - a for a, b in self.intervals)

    def __len__(self):
        return len(self.intervals)


def _bisect_predicate(pred, lo, hi, tol=1e-12, it=200):
    """Smallest point in [lo, hi] where pred flips from False to True."""
    for _ in range(it):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        if pred(mid):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def _refine_minimum(g, lo, hi, it=200):
    """Golden-section minimum of g on [lo, hi]."""
    phi = 0.5 * (3.0 - np.sqrt(5.0))
    a, b = lo, hi
    x1 = a + phi * (b - a)
    x2 = b - phi * (b - a)
    f1, f2 = g(x1), g(x2)
    for _ in range(it):
        if b - a < 1e-13:
            break
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = a + phi * (b - a)
            f1 = g(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = b - phi * (b - a)
            f2 = g(x2)
    x = x1 if f1 <= f2 else x2
    return x, g(x)


def zero_set(delta: DiagonalSection, tol: float = 1e-10,
             grid_size: int = 8193) -> IntervalDecomposition:
    """Decompose [0,1] minus the contact set {t: delta(t) = t}.

    A grid scan of g(t) = t - delta(t) against the contact threshold is
    refined by bisection; interior dips of g below the threshold (isolated
    contact points between grid nodes) are located by golden-section
    search.  Raises InfeasibleDiagonalError when the contact set has
    measure beyond 10 * tol: then no absolutely continuous copula with
    this diagonal exists.
    """
    grid = np.unique(np.concatenate(
        [np.linspace(0.0, 1.0, grid_size), np.asarray(delta.breakpoints, dtype=float)]))
    g = grid - delta(grid)
    contact = g <= tol

    def gfun(x):
        return float(x - delta(float(x)))

    if np.all(contact):
        raise InfeasibleDiagonalError(
            "delta(t) = t on the whole grid; contact set has full measure")

    intervals = []
    n = len(grid)
    i = 0
    spacing = np.max(np.diff(grid))
    dip_threshold = delta.d * spacing
    while i < n:
        if contact[i]:
            i += 1
            continue
        j = i
        while j + 1 < n and not contact[j + 1]:
            j += 1
        # run of non-contact nodes is grid[i..j]
        if i == 0:
            left = 0.0
        else:
            left = _bisect_predicate(lambda x: gfun(x) > tol, grid[i - 1], grid[i])
        if j == n - 1:
            right = 1.0
        else:
            right = _bisect_predicate(lambda x: gfun(x) <= tol, grid[j], grid[j + 1])
        # interior contact points between grid nodes: dips of g below tol
        cuts = []
        for k in range(i + 1, j):
            if g[k] <= dip_threshold and g[k] <= g[k - 1] and g[k] <= g[k + 1]:
                tmin, gmin = _refine_minimum(gfun, grid[k - 1], grid[k + 1])
                if gmin <= tol:
                    cuts.append(tmin)
        edges = [left] + sorted(cuts) + [right]
        for a, b in zip(edges[:-1], edges[1:]):
            if b - a > 2.0 * tol:
                intervals.append([a, b])
        i = j + 1

    if not intervals:
        raise InfeasibleDiagonalError("no interval with delta(t) < t detected")

    # snap endpoints: outer to 0/1, adjacent boundaries to their midpoint
    if intervals[0][0] < 10.0 * tol:
        intervals[0][0] = 0.0
    if intervals[-1][1] > 1.0 - 10.0 * tol:
        intervals[-1][1] = 1.0
    for a, b in zip(intervals[:-1], intervals[1:]):
        if b[0] - a[1] <= max(20.0 * tol, 1e-9):
            mid = 0.5 * (a[1] + b[0])
            a[1] = mid
            b[0] = mid

    covered = sum(b - a for a, b in intervals)
    if 1.0 - covered > 10.0 * tol:
        raise InfeasibleDiagonalError(
            f"contact set has measure {1.0 - covered:.3e} > {10.0 * tol:.1e}; "
            "no absolutely continuous copula exists for this diagonal")
    return IntervalDecomposition(intervals=tuple((a, b) for a, b in intervals))


def rescale(delta: DiagonalSection, interval) -> DiagonalSection:
    """Restrict-and-rescale delta to a contact interval (alpha, beta)."""
    a, b = float(interval[0]), float(interval[1])
    if a == 0.0 and b == 1.0:
        return delta
    for x in (a, b):
        if abs(delta(x) - x) > 1e-8:
            raise ParameterError(f"interval endpoint {x} is not a fixed point of delta")
    return RescaledDiagonal(delta, a, b)
