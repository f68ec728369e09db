"""FastAPI application exposing the core package as a stateless compute API.

Every computation is pure and deterministic, so requests are independent and
the service needs no state or storage.  Domain errors map to structured
bodies: bad input (including malformed literals) is 400, refusing a limit
scattered height is 409 with error code 'not_successor', and resource caps
are 409 with 'cap_exceeded'.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..errors import CapExceededError, NotSuccessorError, UltrafractalError
from . import handlers, models

app = FastAPI(
    title="ultrafractal service",
    description="Exact classification and verification of self-similar "
    "structure on zero-dimensional compact spaces.",
    version=__version__,
)

_ENDPOINTS = ["/classify", "/tree", "/ifs", "/verify", "/iterate", "/schemas"]


@app.exception_handler(UltrafractalError)
async def _domain_error_handler(request: Request, exc: UltrafractalError) -> JSONResponse:
    if isinstance(exc, NotSuccessorError):
        code, status = "not_successor", 409
    elif isinstance(exc, CapExceededError):
        code, status = "cap_exceeded", 409
    else:
        code, status = "bad_request", 400
    body = models.ErrorBody(error=code, detail=str(exc))
    return JSONResponse(status_code=status, content=body.model_dump())


@app.get("/", response_model=models.ServiceInfo)
def service_info() -> models.ServiceInfo:
    return models.ServiceInfo(
        name="ultrafractal", version=__version__, endpoints=_ENDPOINTS
    )


@app.post("/classify", response_model=models.ClassifyResponse)
def classify(request: models.ClassifyRequest) -> models.ClassifyResponse:
    return handlers.handle_classify(request)


@app.post("/tree", response_model=models.TreeResponse)
def tree(request: models.TreeRequest) -> models.TreeResponse:
    return handlers.handle_tree(request)


@app.post("/ifs", response_model=models.IfsResponse)
def ifs(request: models.IfsRequest) -> models.IfsResponse:
    return handlers.handle_ifs(request)


@app.post("/verify", response_model=models.VerifyResponse)
def verify(request: models.VerifyRequest) -> models.VerifyResponse:
    return handlers.handle_verify(request)


@app.post("/iterate", response_model=models.IterateResponse)
def iterate(request: models.IterateRequest) -> models.IterateResponse:
    return handlers.handle_iterate(request)


@app.get("/schemas")
def schemas() -> dict:
    return models.schema_bundle()
