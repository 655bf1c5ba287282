"""Versioned JSON artifacts for trained models.

An artifact is a single self-describing JSON document embedding the model
kind, hyperparameters, class order, feature schema, scaler, fitted
parameters, and training seed. Floats serialize via their shortest
round-trip representation, so a load reproduces predictions bit for bit.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import IO, Optional, Union

from ..data import FeatureSchema, Scaler
from ..errors import ArtifactError
from .base import TrainedModel
from .params import ModelKind, params_from_dict, params_to_dict

FORMAT_VERSION = 1


def model_to_artifact(model: TrainedModel, created_at: Optional[str] = None) -> bytes:
    """Serialize a trained model to canonical artifact bytes.

    `created_at` defaults to a fixed placeholder epoch string when not
    supplied by the caller, keeping artifact bytes a pure function of the
    model; pass a real timestamp to record one.
    """
    doc = {
        "format_version": FORMAT_VERSION,
        "kind": model.kind.value,
        "hyperparameters": params_to_dict(model.params),
        "class_names": list(model.classes),
        "schema": model.schema.to_dict(),
        "scaler": None if model.scaler is None else model.scaler.to_dict(),
        "parameters": model.parameters_to_dict(),
        "seed": model.seed,
        "created_at": created_at if created_at is not None else "1970-01-01T00:00:00Z",
    }
    return json.dumps(doc, sort_keys=True, separators=(",", ":")).encode("utf-8")


def save_model(model: TrainedModel, sink: Union[str, Path, IO[bytes]],
               created_at: Optional[str] = None) -> bytes:
    """Write the artifact to a path or binary stream; returns the bytes."""
    payload = model_to_artifact(model, created_at=created_at)
    if isinstance(sink, (str, Path)):
        with open(sink, "wb") as fh:
            fh.write(payload)
    else:
        sink.write(payload)
    return payload


def artifact_hash(payload: bytes) -> str:
    return hashlib.sha256(payload).hexdigest()


def load_model(source: Union[str, Path, bytes, IO[bytes]]) -> TrainedModel:
    """Reconstruct a trained model from artifact bytes, a path, or a stream."""
    if isinstance(source, (str, Path)):
        try:
            payload = Path(source).read_bytes()
        except OSError as exc:
            raise ArtifactError(f"cannot read artifact: {exc}") from None
    elif isinstance(source, bytes):
        payload = source
    else:
        payload = source.read()

    try:
        doc = json.loads(payload.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ArtifactError(f"artifact is not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ArtifactError("artifact root must be an object")
    version = doc.get("format_version")
    if version != FORMAT_VERSION:
        raise ArtifactError(f"unsupported artifact format_version {version!r}")

    from . import MODEL_CLASSES  # late import to avoid a cycle

    try:
        kind = ModelKind.parse(doc["kind"])
        params = params_from_dict(kind, doc["hyperparameters"])
        classes = tuple(doc["class_names"])
        schema = FeatureSchema.from_dict(doc["schema"])
        scaler = None if doc["scaler"] is None else Scaler.from_dict(doc["scaler"])
        seed = int(doc["seed"])
        model_cls = MODEL_CLASSES[kind]
        return model_cls.parameters_from_dict(doc["parameters"], classes, schema,
                                              params, seed, scaler)
    except ArtifactError:
        raise
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise ArtifactError(f"artifact is malformed: {exc!r}") from None
