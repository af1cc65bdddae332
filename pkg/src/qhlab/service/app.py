"""FastAPI wiring over the handlers.

Run with:  uvicorn qhlab.service:app
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from ..errors import IoFailure, QhlabError
from . import handlers
from . import schemas as sc


def create_app() -> FastAPI:
    app = FastAPI(title="qhlab", version=handlers.health().version)

    @app.exception_handler(QhlabError)
    async def _qhlab_error(request: Request, exc: QhlabError):
        status = 500 if isinstance(exc, IoFailure) else 422
        return JSONResponse(status_code=status,
                            content={"error": type(exc).__name__,
                                     "detail": str(exc)})

    @app.get("/v1/health", response_model=sc.HealthResponse)
    async def health():
        return handlers.health()

    @app.post("/v1/distance", response_model=sc.DistanceResponse)
    async def distance(req: sc.DistanceRequest):
        return handlers.distance(req)

    @app.post("/v1/geodesic", response_model=sc.GeodesicResponse)
    async def geodesic(req: sc.GeodesicRequest):
        return handlers.geodesic(req)

    @app.post("/v1/bounds/pair", response_model=sc.PairBoundsResponse)
    async def pair_bounds(req: sc.PairBoundsRequest):
        return handlers.pair_bounds(req)

    @app.post("/v1/modulus/verdicts", response_model=sc.ModulusVerdictResponse)
    async def modulus_verdicts(req: sc.ModulusVerdictRequest):
        return handlers.modulus_verdicts(req)

    @app.post("/v1/flatten/jacobian", response_model=sc.JacobianSweepResponse)
    async def jacobian_sweep(req: sc.JacobianSweepRequest):
        return handlers.jacobian_sweep(req)

    @app.post("/v1/flatten/pushforward",
              response_model=sc.PushforwardSweepResponse)
    async def pushforward_sweep(req: sc.PushforwardSweepRequest):
        return handlers.pushforward_sweep(req)

    @app.post("/v1/experiments/asymptotics", response_model=sc.ExperimentResponse)
    async def asymptotics(req: sc.AsymptoticsRequest):
        return handlers.asymptotics(req)

    @app.post("/v1/experiments/bounds", response_model=sc.ExperimentResponse)
    async def bound_suite(req: sc.BoundSuiteRequest):
        return handlers.bound_suite(req)

    @app.post("/v1/experiments/best-constant",
              response_model=sc.BestConstantResponse)
    async def best_constant(req: sc.BestConstantRequest):
        return handlers.best_constant(req)

    return app


app = create_app()
