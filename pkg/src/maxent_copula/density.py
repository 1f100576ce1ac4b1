"""Copula model assembly and density evaluation.

A model couples a diagonal section with one kernel table per irreducible
block of its contact-set decomposition.  The density at a point u with
maximum in block j is

    c(u) = (1 / len_j) * b_j(m') * prod_{i != argmax} a_j(u_i')

where primes denote the affine map into block-local coordinates and ties
at the maximum are broken toward the highest index.  Points whose
maximum lies on a block boundary (or outside every block) get density 0,
consistent with an absolutely continuous law.
"""

from dataclasses import dataclass

import numpy as np

from .diagonal import DiagonalSection, IntervalDecomposition, rescale, zero_set
from .errors import AccuracyError, ParameterError
from .kernel import KernelTable


@dataclass(frozen=True)
class CopulaModel:
    d: int
    delta: DiagonalSection
    decomposition: IntervalDecomposition
    kernels: tuple  # one KernelTable per interval, in block-local coordinates

    def describe(self) -> dict:
        return {"d": self.d, "delta": self.delta.describe(),
                "blocks": [list(iv) for iv in self.decomposition.intervals]}


def build_model(delta: DiagonalSection, tol: float = 1e-10, **kernel_kwargs) -> CopulaModel:
    """Decompose the contact set and build per-block kernel tables.

    Raises InfeasibleDiagonalError when the contact set has positive
    measure (no absolutely continuous copula exists then).
    """
    decomposition = zero_set(delta, tol=tol)
    kernels = tuple(KernelTable(rescale(delta, iv), **kernel_kwargs)
                    for iv in decomposition.intervals)
    return CopulaModel(d=delta.d, delta=delta,
                       decomposition=decomposition, kernels=kernels)


def density_many(model: CopulaModel, X) -> np.ndarray:
    """Density at each row of the (n, d) array X."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[1] != model.d:
        raise ParameterError(f"expected points of shape (n, {model.d})")
    n, d = X.shape
    out = np.zeros(n)
    edges = np.array([iv[0] for iv in model.decomposition.intervals]
                     + [model.decomposition.intervals[-1][1]])
    # ties at the maximum are carried by the highest tied index
    rev_arg = np.argmax(X[:, ::-1], axis=1)
    kmax = d - 1 - rev_arg
    m = X[np.arange(n), kmax]
    blk = np.clip(np.searchsorted(edges, m, side="right") - 1,
                  0, len(model.kernels) - 1)
    for j, kern in enumerate(model.kernels):
        a0, b0 = model.decomposition.intervals[j]
        width = b0 - a0
        rows = np.where(blk == j)[0]
        if rows.size == 0:
            continue
        Xl = (X[rows] - a0) / width
        strictly_inside = np.all((Xl > 0.0) & (Xl < 1.0), axis=1)
        rows = rows[strictly_inside]
        if rows.size == 0:
            continue
        Xl = Xl[strictly_inside]
        la, lb = kern.log_ab_at(Xl.ravel())
        la = la.reshape(Xl.shape)
        lb = lb.reshape(Xl.shape)
        onehot = np.zeros(Xl.shape, dtype=bool)
        onehot[np.arange(len(rows)), kmax[rows]] = True
        with np.errstate(invalid="ignore"):
            logc = (np.where(onehot, 0.0, la).sum(axis=1)
                    + lb[np.arange(len(rows)), kmax[rows]]
                    - np.log(width))
        out[rows] = np.where(np.isnan(logc), 0.0, np.exp(logc))
    return out


def density_at(model: CopulaModel, u) -> float:
    """Density at a single point u in [0, 1]^d."""
    return float(density_many(model, np.asarray(u, dtype=float)[None, :])[0])


def log_density_many(model: CopulaModel, X) -> np.ndarray:
    """log density at each row of X; -inf where the density vanishes."""
    with np.errstate(divide="ignore"):
        return np.log(density_many(model, X))


def diagonal_cross(model: CopulaModel, t) -> np.ndarray:
    """phi(t) = density along the main diagonal: b(t) * a(t)^(d-1),
    block-rescaled."""
    scalar = np.ndim(t) == 0
    t = np.atleast_1d(np.asarray(t, dtype=float))
    out = np.zeros_like(t)
    for j, kern in enumerate(model.kernels):
        a0, b0 = model.decomposition.intervals[j]
        width = b0 - a0
        inside = (t > a0) & (t < b0)
        if np.any(inside):
            tl = (t[inside] - a0) / width
            la, lb = kern.log_ab_at(tl)
            out[inside] = np.exp(lb + (model.d - 1.0) * la - np.log(width))
    return float(out[0]) if scalar else out


def cdf_at(model: CopulaModel, u, tol: float = 1e-7, seed: int = 0,
           return_error: bool = False):
    """C(u) by numerical integration of the density over [0, u].

    Bivariate models use adaptive quadrature; higher dimensions use
    scrambled Sobol replicates and report a standard-error estimate.
    """
    u = np.asarray(u, dtype=float)
    if u.shape != (model.d,):
        raise ParameterError(f"expected a point of shape ({model.d},)")
    u = np.clip(u, 0.0, 1.0)
    if np.any(u == 0.0):
        return (0.0, 0.0) if return_error else 0.0
    if model.d == 2:
        from scipy.integrate import dblquad

        val, err = dblquad(lambda y, x: density_at(model, (x, y)),
                           0.0, u[0], 0.0, u[1],
                           epsabs=0.5 * tol, epsrel=1e-10)
        if err > tol:
            raise AccuracyError(f"cdf quadrature error {err:.2e} exceeds {tol:g}")
        val = float(min(max(val, 0.0), 1.0))
        return (val, float(err)) if return_error else val

    from scipy.stats import qmc

    reps = 16
    m = 16  # 2^16 points per replicate
    vol = float(np.prod(u))
    means = np.empty(reps)
    for r in range(reps):
        pts = qmc.Sobol(model.d, scramble=True,
                        seed=np.random.default_rng([seed, r])).random_base2(m)
        means[r] = np.mean(density_many(model, pts * u[None, :]))
    val = vol * float(np.mean(means))
    se = vol * float(np.std(means, ddof=1) / np.sqrt(reps))
    val = min(max(val, 0.0), 1.0)
    return (val, se) if return_error else val
