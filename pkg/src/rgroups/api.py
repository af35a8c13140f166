"""HTTP service exposing the analysis engine."""

from __future__ import annotations

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel

from . import service
from .errors import (
    CapExceeded,
    InstanceSyntaxError,
    SchemaError,
    UnknownExample,
    ValidationError,
)

app = FastAPI(
    title="rgroups",
    description=(
        "Knapp-Stein R-groups, induced-representation decompositions and "
        "elliptic constituents for p-adic similitude groups"
    ),
    version="0.1.0",
)


class AnalyzeRequest(BaseModel):
    instance: service.InstanceModel
    oracle: bool = False


class VerifyRequest(BaseModel):
    instance: service.InstanceModel


def _datum(instance: service.InstanceModel):
    try:
        return instance.to_datum()
    except ValidationError as exc:
        raise HTTPException(status_code=422, detail=exc.violations)
    except (SchemaError, InstanceSyntaxError) as exc:
        raise HTTPException(status_code=400, detail=str(exc))


@app.get("/")
def root() -> dict:
    return {"name": "rgroups", "version": "0.1.0"}


@app.post("/analyze", response_model=service.AnalysisReportModel)
def analyze(request: AnalyzeRequest) -> service.AnalysisReportModel:
    datum = _datum(request.instance)
    try:
        return service.analyze(datum, with_oracle=request.oracle)
    except CapExceeded as exc:
        raise HTTPException(status_code=422, detail=str(exc))


@app.post("/verify", response_model=service.VerifyResponse)
def verify(request: VerifyRequest) -> service.VerifyResponse:
    datum = _datum(request.instance)
    try:
        return service.verify(datum)
    except CapExceeded as exc:
        raise HTTPException(status_code=422, detail=str(exc))


@app.post("/fuzz", response_model=service.FuzzResponse)
def fuzz(request: service.FuzzRequest) -> service.FuzzResponse:
    try:
        return service.fuzz_run(request)
    except (CapExceeded, ValueError) as exc:
        raise HTTPException(status_code=422, detail=str(exc))


@app.post("/catalog", response_model=service.CatalogResponse)
def catalog(request: service.CatalogRequest) -> service.CatalogResponse:
    try:
        return service.catalog_run(request)
    except CapExceeded as exc:
        raise HTTPException(status_code=422, detail=str(exc))


@app.get("/examples")
def examples() -> dict:
    return {"names": list(service.example_names())}


@app.get("/examples/{name}", response_model=service.AnalysisReportModel)
def example(name: str, oracle: bool = False) -> service.AnalysisReportModel:
    try:
        return service.example_report(name, with_oracle=oracle)
    except UnknownExample as exc:
        raise HTTPException(status_code=404, detail=str(exc))


@app.get("/examples/{name}/instance", response_model=service.InstanceModel)
def example_instance(name: str) -> service.InstanceModel:
    try:
        return service.example_instance(name)
    except UnknownExample as exc:
        raise HTTPException(status_code=404, detail=str(exc))
