"""Entropy functionals of the maximum-entropy copula.

J(delta) = integral of |log(t - delta(t))| over (0, 1); the model exists
with finite Kullback-Leibler divergence from the uniform density exactly
when J is finite.  G(delta) aggregates the derivative entropies
I1(delta') + I1(d - delta') - d log d - (d - 1), and the divergence
itself is I = (d-1) J + G.  A Monte Carlo estimator of I over model
samples provides an independent cross-check.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.special import xlogy

from .density import CopulaModel, log_density_many
from .diagonal import DiagonalSection, zero_set
from .errors import InfeasibleDiagonalError
from .quadrature import shell_integrate

_TINY = 1e-300


def _json_value(x):
    if x is None:
        return None
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


@dataclass
class EntropyReport:
    J: float
    G: float
    I_closed: float
    feasible: bool
    I_mc: Optional[float] = None
    se: Optional[float] = None
    n: Optional[int] = None

    def to_dict(self) -> dict:
        return {"J": _json_value(self.J), "G": _json_value(self.G),
                "I_closed": _json_value(self.I_closed),
                "I_mc": _json_value(self.I_mc), "se": _json_value(self.se),
                "n": self.n, "feasible": self.feasible}


@dataclass
class FeasibilityReport:
    feasible: bool
    J: float
    reason: str

    def to_dict(self) -> dict:
        return {"feasible": self.feasible, "J": _json_value(self.J),
                "reason": self.reason}


def _pieces(delta: DiagonalSection, intervals):
    """Split each contact-free interval at the section's breakpoints."""
    bps = np.asarray(delta.breakpoints, dtype=float)
    for a, b in intervals:
        inner = bps[(bps > a + 1e-14) & (bps < b - 1e-14)]
        edges = np.concatenate(([a], np.sort(inner), [b]))
        for lo, hi in zip(edges[:-1], edges[1:]):
            yield lo, hi


def compute_J(delta: DiagonalSection) -> float:
    """J(delta); +inf when the quadrature is numerically divergent or the
    contact set has positive measure."""
    try:
        decomposition = zero_set(delta)
    except InfeasibleDiagonalError:
        return np.inf

    def f(t):
        return -np.log(np.maximum(t - delta(t), _TINY))

    total = 0.0
    for lo, hi in _pieces(delta, decomposition.intervals):
        val, diverged = shell_integrate(f, lo, hi)
        if diverged:
            return np.inf
        total += val
    return total


def compute_G(delta: DiagonalSection) -> float:
    """G(delta) = I1(delta') + I1(d - delta') - d log d - (d - 1), with
    0 log 0 = 0."""
    d = float(delta.d)

    def f(t):
        dp = np.clip(delta.deriv(t), 0.0, d)
        return xlogy(dp, dp) + xlogy(d - dp, d - dp)

    total = 0.0
    bps = np.concatenate(([0.0], np.sort(np.asarray(delta.breakpoints, dtype=float)), [1.0]))
    for lo, hi in zip(bps[:-1], bps[1:]):
        if hi > lo:
            val, _ = shell_integrate(f, lo, hi)
            total += val
    return total - d * np.log(d) - (d - 1.0)


def entropy_closed(model: CopulaModel) -> EntropyReport:
    """Closed-form divergence I = (d-1) J + G of the model's copula."""
    J = compute_J(model.delta)
    G = compute_G(model.delta)
    feasible = np.isfinite(J)
    I = (model.d - 1.0) * J + G if feasible else np.inf
    return EntropyReport(J=float(J), G=float(G), I_closed=float(I), feasible=bool(feasible))


def entropy_mc(model: CopulaModel, n: int = 100_000, seed: int = 0):
    """Monte Carlo estimate of I via the sample mean of the log density.

    Returns (estimate, standard_error).
    """
    from .sampler import sample

    batch = sample(model, n, seed)
    logc = log_density_many(model, batch.points)
    logc = logc[np.isfinite(logc)]  # boundary-measure points carry no mass
    est = float(np.mean(logc))
    se = float(np.std(logc, ddof=1) / np.sqrt(len(logc)))
    return est, se


def entropy_report(model: CopulaModel, n: Optional[int] = None,
                   seed: int = 0) -> EntropyReport:
    """Closed-form report, optionally augmented with the MC cross-check."""
    rep = entropy_closed(model)
    if n is not None and rep.feasible:
        est, se = entropy_mc(model, n, seed)
        rep.I_mc, rep.se, rep.n = est, se, int(n)
    return rep


def feasibility(delta: DiagonalSection) -> FeasibilityReport:
    """Whether a maximum-entropy copula with this diagonal exists."""
    try:
        zero_set(delta)
    except InfeasibleDiagonalError as exc:
        return FeasibilityReport(feasible=False, J=np.inf, reason=str(exc))
    J = compute_J(delta)
    if np.isfinite(J):
        return FeasibilityReport(feasible=True, J=float(J), reason="J finite")
    return FeasibilityReport(feasible=False, J=np.inf,
                             reason="|log h| quadrature numerically divergent")
