"""HTTP JSON service exposing prediction, explanation, and counterfactual search.

One model artifact and one labeled background CSV load at startup; every
request then runs against immutable shared state. Stochastic explainers
take an optional seed (defaulted when absent) and the effective seed is
echoed back, so identical requests produce identical responses.
"""

from __future__ import annotations

import os
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np
from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .data import N_FEATURES, compute_stats, load_dataset
from .errors import CropRecError, InputError, UnsupportedModelError
from .explain import (CounterfactualConfig, counterfactual_search,
                      gain_importance, lime_explain, path_contributions,
                      permutation_importance, sample_background,
                      shapley_exact, shapley_kernel)
from .explain.lime import LimeConfig
from .models import ModelKind, artifact_hash, load_model

EXPLAIN_METHODS = ("permutation", "gain", "path", "shap-exact", "shap-kernel", "lime")
TREE_KINDS = (ModelKind.DT, ModelKind.RF, ModelKind.LGBM)


@dataclass
class ServiceConfig:
    model_path: str
    background_path: str
    host: str = "127.0.0.1"
    port: int = 8000
    cors_origins: tuple[str, ...] = ()
    max_body_bytes: int = 1 << 20
    log_level: str = "info"
    default_seed: int = 0
    background_size: int = 100
    max_concurrent_explanations: int = 4
    counterfactual_population: int = 200
    counterfactual_generations: int = 300
    counterfactual_immutable: tuple[str, ...] = ("temperature", "ph")
    static_dir: Optional[str] = None

    @classmethod
    def from_env(cls, **overrides) -> "ServiceConfig":
        """Environment variables override ctor arguments where set."""
        env = {
            "model_path": os.environ.get("CROPREC_MODEL"),
            "background_path": os.environ.get("CROPREC_BACKGROUND"),
            "host": os.environ.get("CROPREC_HOST"),
            "static_dir": os.environ.get("CROPREC_STATIC"),
        }
        port = os.environ.get("CROPREC_PORT")
        if port:
            env["port"] = int(port)
        merged = {**overrides, **{k: v for k, v in env.items() if v}}
        return cls(**merged)


class PredictRequest(BaseModel):
    features: list[float]


class ExplainRequest(BaseModel):
    features: list[float]
    method: str
    target_class: Optional[str] = None
    seed: Optional[int] = None


class CounterfactualRequest(BaseModel):
    features: list[float]
    target_class: str
    immutable: Optional[list[str]] = None
    count: Optional[int] = None
    seed: Optional[int] = None


def _check_features(features: list[float]) -> np.ndarray:
    arr = np.asarray(features, dtype=np.float64)
    if arr.shape != (N_FEATURES,):
        raise InputError(f"expected exactly {N_FEATURES} features, got {arr.shape[0]}")
    if not np.all(np.isfinite(arr)):
        raise InputError("features must be finite numbers")
    return arr


def create_app(config: ServiceConfig) -> FastAPI:
    """Build the service; raises before binding if artifacts cannot load."""
    artifact_bytes = Path(config.model_path).read_bytes()
    model = load_model(artifact_bytes)
    model_hash = artifact_hash(artifact_bytes)
    background_full = load_dataset(config.background_path)
    if tuple(background_full.classes) != tuple(model.classes):
        # tolerate a background carrying a subset of crops, remap indices
        remap = {c: model.classes.index(c) for c in background_full.classes}
        y = np.array([remap[background_full.classes[i]] for i in background_full.y])
        from .data import Dataset
        background_full = Dataset(background_full.schema, background_full.X, y, model.classes)
    stats = compute_stats(background_full)
    background = sample_background(background_full, config.background_size,
                                   seed=config.default_seed)
    if model.kind in TREE_KINDS:
        importance_snapshot = gain_importance(model).to_dict()
    else:
        importance_snapshot = permutation_importance(
            model, background_full, repeats=3, seed=config.default_seed).to_dict()

    app = FastAPI(title="crop recommendation service", docs_url=None, redoc_url=None)
    if config.cors_origins:
        app.add_middleware(
            CORSMiddleware,
            allow_origins=list(config.cors_origins),
            allow_methods=["*"],
            allow_headers=["*"],
        )
    explain_slots = threading.BoundedSemaphore(config.max_concurrent_explanations)

    @app.exception_handler(RequestValidationError)
    async def malformed_body(request: Request, exc: RequestValidationError):
        details = [
            {"field": ".".join(str(p) for p in err.get("loc", [])), "message": err.get("msg", "")}
            for err in exc.errors()
        ]
        return JSONResponse(status_code=400, content={"error": "malformed request", "details": details})

    @app.exception_handler(InputError)
    async def bad_input(request: Request, exc: InputError):
        return JSONResponse(status_code=400, content={"error": str(exc)})

    @app.exception_handler(CropRecError)
    async def semantic_error(request: Request, exc: CropRecError):
        return JSONResponse(status_code=422, content={"error": str(exc)})

    @app.middleware("http")
    async def limit_body(request: Request, call_next):
        length = request.headers.get("content-length")
        if length and int(length) > config.max_body_bytes:
            return JSONResponse(status_code=413, content={"error": "request body too large"})
        return await call_next(request)

    @app.get("/v1/health")
    def health():
        return {"status": "ok"}

    @app.get("/v1/model")
    def model_info():
        return {
            "kind": model.kind.value,
            "classes": list(model.classes),
            "schema": model.schema.to_dict(),
            "seed": model.seed,
            "artifact_hash": model_hash,
            "importance": importance_snapshot,
            "feature_ranges": {
                name: [float(stats.minimum[i]), float(stats.maximum[i])]
                for i, name in enumerate(stats.names)
            },
        }

    @app.post("/v1/predict")
    def predict(req: PredictRequest):
        x = _check_features(req.features)
        probs = model.predict_proba(x)
        top = int(np.argmax(probs))
        return {
            "predicted_crop": model.classes[top],
            "probabilities": [float(p) for p in probs],
            "classes": list(model.classes),
            "model_kind": model.kind.value,
            "artifact_hash": model_hash,
        }

    @app.post("/v1/explain")
    def explain(req: ExplainRequest):
        x = _check_features(req.features)
        method = req.method.strip().lower()
        if method == "counterfactual":
            raise UnsupportedModelError("use POST /v1/counterfactual for counterfactuals")
        if method not in EXPLAIN_METHODS:
            raise UnsupportedModelError(
                f"unknown method '{req.method}'; expected one of {', '.join(EXPLAIN_METHODS)}")
        seed = config.default_seed if req.seed is None else int(req.seed)
        target = req.target_class if req.target_class is not None else model.predict_label(x)
        if target not in model.classes:
            raise UnsupportedModelError(f"unknown target class '{target}'")
        with explain_slots:
            if method == "permutation":
                attr = permutation_importance(model, background_full, repeats=5, seed=seed)
            elif method == "gain":
                attr = gain_importance(model)
            elif method == "path":
                attr = path_contributions(model, x, target)
            elif method == "shap-exact":
                attr = shapley_exact(model, x, background, target)
            elif method == "shap-kernel":
                attr = shapley_kernel(model, x, background, target, seed=seed)
            else:
                lime = lime_explain(model, x, stats, LimeConfig(seed=seed), target)
                doc = lime.to_dict()
                doc["seed"] = seed
                return doc
        doc = attr.to_dict()
        doc["seed"] = seed
        return doc

    @app.post("/v1/counterfactual")
    def counterfactual(req: CounterfactualRequest):
        x = _check_features(req.features)
        if req.target_class not in model.classes:
            raise UnsupportedModelError(f"unknown target class '{req.target_class}'")
        seed = config.default_seed if req.seed is None else int(req.seed)
        immutable = tuple(req.immutable) if req.immutable is not None else config.counterfactual_immutable
        unknown = [f for f in immutable if f not in model.schema.names]
        if unknown:
            raise UnsupportedModelError(f"unknown immutable feature(s): {', '.join(unknown)}")
        cf_config = CounterfactualConfig(
            target_class=req.target_class,
            count=req.count if req.count is not None else 3,
            immutable=immutable,
            population=config.counterfactual_population,
            generations=config.counterfactual_generations,
            seed=seed,
        )
        with explain_slots:
            result = counterfactual_search(model, x, cf_config, stats)
        verified = [
            cf for cf in result.counterfactuals
            if model.predict_label(cf.features) == req.target_class
        ]
        doc = {
            "query": [float(v) for v in result.query],
            "target_class": result.target_class,
            "status": "ok" if verified else "not_found",
            "counterfactuals": [cf.to_dict() for cf in verified],
            "seed": seed,
        }
        return doc

    if config.static_dir and Path(config.static_dir).is_dir():
        from fastapi.staticfiles import StaticFiles
        app.mount("/", StaticFiles(directory=config.static_dir, html=True), name="ui")

    return app


def serve(config: ServiceConfig) -> None:
    """Run the service until interrupted; binding fails fast on bad artifacts."""
    import uvicorn

    app = create_app(config)
    uvicorn.run(app, host=config.host, port=config.port, log_level=config.log_level)
