"""HTTP service exposing the copula library.

Model construction dominates the cost of most requests (kernel tables
are refined quadrature caches), so the service keeps built models in a
small in-process cache keyed by the family description; the CLI talks to
these endpoints as a thin client, either in-process or over the network.

Endpoints (all POST, JSON request bodies):
    /inspect         -> entropy and feasibility report (JSON)
    /grid            -> density grid CSV `u1,u2,c` (d = 2 only)
    /diagonal-cross  -> diagonal cross-section CSV `t,phi`
    /sample          -> sample CSV `u1,...,ud` with seed and model
                        fingerprint in response headers
    /verify          -> constraint-suite report (JSON)

Client errors (bad parameters, bad tabulated data) map to 400; numeric
failures (non-convergence, infeasible diagonal where a model is
required) map to 500 with a one-line reason.
"""

import io
import json
from typing import List, Literal, Optional, Tuple

import numpy as np
from fastapi import FastAPI, HTTPException, Response
from pydantic import BaseModel, Field

from .density import CopulaModel, build_model, density_many, diagonal_cross
from .diagonal import FamilySpec, make_family
from .entropy import entropy_report, feasibility
from .errors import (AccuracyError, InfeasibleDiagonalError, ParameterError,
                     SamplingError, TabulatedDataError)
from .sampler import sample
from .verify import verify_model

app = FastAPI(title="maxent-copula")

_MODEL_CACHE: dict = {}
_CACHE_LIMIT = 32


class FamilyRequest(BaseModel):
    family: Literal["plinear", "power", "fgm", "gaussian", "tabulated"]
    alpha: Optional[float] = None
    theta: Optional[float] = None
    rho: Optional[float] = None
    knots: Optional[List[Tuple[float, float]]] = None
    d: int = Field(default=2, ge=2)


class InspectRequest(FamilyRequest):
    n: Optional[int] = None  # MC cross-check sample size, omitted by default
    seed: int = 0


class GridRequest(FamilyRequest):
    n: int = Field(default=201, ge=2)


class CrossRequest(FamilyRequest):
    n: int = Field(default=201, ge=2)


class SampleRequest(FamilyRequest):
    n: int = Field(default=10_000, ge=1)
    seed: int = 0


class VerifyRequest(FamilyRequest):
    n: int = Field(default=101, ge=3)  # constraint grid size
    tol: float = Field(default=1e-6, gt=0)
    seed: int = 0


def _make_delta(req: FamilyRequest):
    spec = FamilySpec(family=req.family, alpha=req.alpha, theta=req.theta,
                      rho=req.rho,
                      knots=tuple(map(tuple, req.knots)) if req.knots else None)
    try:
        return make_family(spec, req.d)
    except (ParameterError, TabulatedDataError) as exc:
        raise HTTPException(status_code=400, detail=str(exc))


def _get_model(req: FamilyRequest) -> CopulaModel:
    delta = _make_delta(req)
    key = json.dumps(delta.describe(), sort_keys=True)
    if key in _MODEL_CACHE:
        return _MODEL_CACHE[key]
    try:
        model = build_model(delta)
    except (InfeasibleDiagonalError, AccuracyError) as exc:
        raise HTTPException(status_code=500, detail=f"numeric: {exc}")
    if len(_MODEL_CACHE) >= _CACHE_LIMIT:
        _MODEL_CACHE.pop(next(iter(_MODEL_CACHE)))
    _MODEL_CACHE[key] = model
    return model


def _csv_response(text: str, headers: Optional[dict] = None) -> Response:
    return Response(content=text, media_type="text/csv", headers=headers or {})


@app.post("/inspect")
def inspect(req: InspectRequest):
    delta = _make_delta(req)
    feas = feasibility(delta)
    if not feas.feasible:
        return {"J": "inf", "G": None, "I_closed": "inf", "I_mc": None,
                "se": None, "n": None, "feasible": False,
                "reason": feas.reason}
    model = _get_model(req)
    rep = entropy_report(model, n=req.n, seed=req.seed)
    out = rep.to_dict()
    out["reason"] = feas.reason
    return out


@app.post("/grid")
def grid(req: GridRequest):
    if req.d != 2:
        raise HTTPException(status_code=400,
                            detail="grid export is bivariate only; use /sample for d >= 3")
    model = _get_model(req)
    u = np.linspace(0.0, 1.0, req.n)
    U1, U2 = np.meshgrid(u, u, indexing="ij")
    pts = np.column_stack([U1.ravel(), U2.ravel()])
    c = density_many(model, pts)
    buf = io.StringIO()
    buf.write("u1,u2,c\n")
    for (x, y), v in zip(pts, c):
        buf.write(f"{x:.10g},{y:.10g},{v:.12g}\n")
    return _csv_response(buf.getvalue())


@app.post("/diagonal-cross")
def cross(req: CrossRequest):
    model = _get_model(req)
    t = np.linspace(0.0, 1.0, req.n)
    phi = diagonal_cross(model, t)
    buf = io.StringIO()
    buf.write("t,phi\n")
    for x, v in zip(t, phi):
        buf.write(f"{x:.10g},{v:.12g}\n")
    return _csv_response(buf.getvalue())


@app.post("/sample")
def sample_endpoint(req: SampleRequest):
    model = _get_model(req)
    try:
        batch = sample(model, req.n, req.seed)
    except SamplingError as exc:
        raise HTTPException(status_code=500, detail=f"numeric: {exc}")
    buf = io.StringIO()
    buf.write(",".join(f"u{i + 1}" for i in range(model.d)) + "\n")
    np.savetxt(buf, batch.points, delimiter=",", fmt="%.17g")
    return _csv_response(buf.getvalue(), headers={
        "X-Sample-Seed": str(batch.seed),
        "X-Model-Fingerprint": batch.fingerprint,
    })


@app.post("/verify")
def verify(req: VerifyRequest):
    model = _get_model(req)
    report = verify_model(model, grid_size=req.n, tol=req.tol, seed=req.seed)
    return report.to_dict()
