from typing import List, Optional

from fastapi import FastAPI, HTTPException, Query, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from logging import getLogger
from opentelemetry import trace
from opentelemetry.instrumentation.fastapi import FastAPIInstrumentor
from opentelemetry.trace import get_tracer_provider
from pydantic import BaseModel, Field
from starlette.requests import Request

from swcoding.config.config import SERVICE_CONFIG
from swcoding.logging import LogLatencyMiddleware
from swcoding.service.operations import compute_bounds, decode_blocks, encode_blocks, make_code, simulate_csv
from swcoding.simulation.sim_harness import SimMode

tracer = trace.get_tracer(__name__, tracer_provider=get_tracer_provider())

logger = getLogger(__name__)

app = FastAPI()
app.add_middleware(LogLatencyMiddleware)
FastAPIInstrumentor.instrument_app(app)

app.add_middleware(
    CORSMiddleware,
    allow_origins=SERVICE_CONFIG["origins"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)


@app.exception_handler(HTTPException)
async def http_exception_handler(request: Request, exc: HTTPException):
    logger.error(f"Error: {exc.detail}")
    return JSONResponse(status_code=exc.status_code, content={"detail": exc.detail})


@app.get("/")
def read_root():
    return {"message": "Welcome to the Slepian-Wolf syndrome coding API"}


@app.get("/bounds")
async def api_bounds(p: float = Query(...), r1: float = Query(...), r2: float = Query(...)):
    """
    Check a rate pair against the Slepian-Wolf region for correlation parameter p.

    - Query Parameters:
      - p: Pr(U1 = U2), strictly between 0 and 1.
      - r1, r2: compression rates in bits per source bit.

    - Returns:
      Entropies, admissibility and the slack of each bound. 400 on invalid input.
    """
    result, error = compute_bounds(p, r1, r2)
    if error:
        raise HTTPException(status_code=400, detail=error)
    return result


class MakeCodeRequest(BaseModel):
    n: int
    dv: int
    dc: int
    seed: int


@app.post("/makecode")
async def api_make_code(request: MakeCodeRequest):
    result, error = make_code(request.n, request.dv, request.dc, request.seed)
    if error:
        raise HTTPException(status_code=400, detail=error)
    return result


class EncodeRequest(BaseModel):
    alist: str
    blocks: List[str]


@app.post("/encode")
async def api_encode(request: EncodeRequest):
    result, error = encode_blocks(request.alist, request.blocks)
    if error:
        raise HTTPException(status_code=400, detail=error)
    return result


class DecodeRequest(BaseModel):
    code1: str
    code2: str
    syndromes1: List[str]
    syndromes2: List[str]
    p: float
    max_iterations: Optional[int] = None
    damping: Optional[float] = None


@app.post("/decode")
async def api_decode(request: DecodeRequest):
    """
    Jointly decode syndrome pairs. Non-convergence is not an error: every block
    reports its own converged flag and the response carries their conjunction.
    """
    with tracer.start_as_current_span("decode_blocks"):
        result, error = decode_blocks(
            request.code1, request.code2, request.syndromes1, request.syndromes2,
            request.p, request.max_iterations, request.damping,
        )
    if error:
        raise HTTPException(status_code=400, detail=error)
    return result


class SimulateRequest(BaseModel):
    p: List[float] = Field(..., min_length=1)
    n: int
    dv: int = 3
    dc: int = 6
    seed: int
    trials: int = 100
    mode: SimMode = SimMode.ASYMMETRIC
    max_iterations: Optional[int] = None
    damping: Optional[float] = None
    use_correlation: bool = True


@app.post("/simulate")
async def api_simulate(request: SimulateRequest):
    csv_text, error = simulate_csv(
        request.p, request.n, request.dv, request.dc, request.seed, request.trials, request.mode,
        request.max_iterations, request.damping, request.use_correlation,
    )
    if error:
        raise HTTPException(status_code=400, detail=error)
    return Response(content=csv_text, media_type="text/csv")


@app.get("/admin/host/ping")
async def ping():
    return {"ping": "pong"}


if __name__ == "__main__":
    import uvicorn
    uvicorn.run(app, host=SERVICE_CONFIG["host"], port=SERVICE_CONFIG["port"])
