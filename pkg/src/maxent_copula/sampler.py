"""Exact sampling from the maximum-entropy copula.

The componentwise maximum M of the copula vector has CDF delta, so a
draw proceeds by inverting delta on a uniform, placing the maximum at a
uniformly chosen coordinate, and drawing the remaining coordinates iid
from the conditional CDF A(t)/A(s) on [0, s] (the conditional law of a
non-maximal coordinate given M = s).  Both inversions use bisection, so
the draw is exact up to the inversion tolerance.

Streams are split into fixed-size shards seeded as (seed, shard_index),
which makes the output bit-reproducible for a given (model, n, seed)
regardless of batching.
"""

import hashlib
import json
from dataclasses import dataclass

import numpy as np

from .density import CopulaModel
from .errors import SamplingError

_SHARD = 16384
_BISECT_TOL = 1e-12
_BISECT_MAX_ITER = 200


@dataclass(frozen=True)
class SampleBatch:
    points: np.ndarray
    seed: int
    fingerprint: str


def model_fingerprint(model: CopulaModel) -> str:
    payload = json.dumps(model.describe(), sort_keys=True).encode()
    return hashlib.sha256(payload).hexdigest()[:16]


def delta_inverse(model: CopulaModel, v) -> np.ndarray:
    """Generalized inverse of delta: the smallest t with delta(t) >= v."""
    scalar = np.ndim(v) == 0
    v = np.atleast_1d(np.asarray(v, dtype=float))
    lo = np.zeros_like(v)
    hi = np.ones_like(v)
    for _ in range(_BISECT_MAX_ITER):
        if np.max(hi - lo) <= _BISECT_TOL:
            break
        mid = 0.5 * (lo + hi)
        ge = model.delta(mid) >= v
        hi = np.where(ge, mid, hi)
        lo = np.where(ge, lo, mid)
    out = 0.5 * (lo + hi)
    return float(out[0]) if scalar else out


def _invert_A(kern, target, s_loc):
    """Solve A(t) = target on [0, s_loc], vectorized bisection."""
    lo = np.zeros_like(target)
    hi = s_loc.copy()
    for _ in range(_BISECT_MAX_ITER):
        if np.max(hi - lo) <= _BISECT_TOL:
            return 0.5 * (lo + hi)
        mid = 0.5 * (lo + hi)
        ge = kern.A_at(mid) >= target
        hi = np.where(ge, mid, hi)
        lo = np.where(ge, lo, mid)
    raise SamplingError("conditional quantile bisection failed to converge")


def sample(model: CopulaModel, n: int, seed: int = 0) -> SampleBatch:
    """Draw n points; identical (model, n, seed) gives identical output."""
    if n < 1:
        raise SamplingError("need n >= 1")
    d = model.d
    edges = np.array([iv[0] for iv in model.decomposition.intervals]
                     + [model.decomposition.intervals[-1][1]])
    out = np.empty((n, d))
    for shard_start in range(0, n, _SHARD):
        m = min(_SHARD, n - shard_start)
        rng = np.random.default_rng([seed, shard_start // _SHARD])
        V = rng.random(m)
        K = rng.integers(0, d, size=m)
        W = rng.random((m, d - 1))
        s = delta_inverse(model, V)
        blk = np.clip(np.searchsorted(edges, s, side="right") - 1,
                      0, len(model.kernels) - 1)
        coords = np.empty((m, d - 1))
        for j, kern in enumerate(model.kernels):
            a0, b0 = model.decomposition.intervals[j]
            width = b0 - a0
            rows = np.where(blk == j)[0]
            if rows.size == 0:
                continue
            s_loc = np.clip((s[rows] - a0) / width, 1e-15, 1.0 - 1e-15)
            As = kern.A_at(s_loc)
            target = W[rows] * As[:, None]
            t_loc = _invert_A(kern, target.ravel(),
                              np.repeat(s_loc, d - 1))
            coords[rows] = a0 + width * t_loc.reshape(rows.size, d - 1)
        block = out[shard_start:shard_start + m]
        block[np.arange(m), K] = s
        mask = np.arange(d)[None, :] != K[:, None]
        block[mask] = coords.ravel()
    return SampleBatch(points=out, seed=int(seed),
                       fingerprint=model_fingerprint(model))
