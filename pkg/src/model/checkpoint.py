"""
Checkpoint directories: ``manifest.json`` plus one VOTB blob per parameter.
"""

import json
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from pydantic import BaseModel, Field, ValidationError

from src.tensor import Tensor, read_blob, write_blob
from src.utils.errors import BlobFormatError
from src.utils.logger import setup_logger

from .params import ModelParams, NetworkSpec

logger = setup_logger(__name__)

MANIFEST_NAME = "manifest.json"
CHECKPOINT_FORMAT = 1


class ParameterEntry(BaseModel):
    name: str = Field(..., description="Parameter name")
    file: str = Field(..., description="Blob file relative to the checkpoint directory")
    shape: List[int] = Field(..., description="Tensor extents")


class CheckpointManifest(BaseModel):
    format_version: int = Field(CHECKPOINT_FORMAT)
    network: NetworkSpec
    parameters: List[ParameterEntry]
    metadata: Dict[str, Any] = Field(default_factory=dict, description="Free-form run information")


def _blob_name(name: str) -> str:
    return f"{name}.votb"


def save_checkpoint(params: ModelParams, directory: Union[str, Path],
                    metadata: Optional[Dict[str, Any]] = None) -> Path:
    """
    Write a checkpoint directory.

    Args:
        params: Model parameters
        directory: Output directory (created)
        metadata: Extra JSON-serializable run information

    Returns:
        Path to the manifest
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    entries = []
    for name, tensor in params.named_tensors():
        write_blob(directory / _blob_name(name), tensor)
        entries.append(ParameterEntry(name=name, file=_blob_name(name), shape=list(tensor.shape)))

    manifest = CheckpointManifest(network=params.spec, parameters=entries, metadata=metadata or {})
    manifest_path = directory / MANIFEST_NAME
    manifest_path.write_text(
        json.dumps(manifest.model_dump(mode="json"), indent=2, sort_keys=True) + "\n",
        encoding="utf8",
    )
    logger.info(f"Saved checkpoint with {len(entries)} tensors to: {directory}")
    return manifest_path


def load_checkpoint(directory: Union[str, Path]) -> ModelParams:
    """
    Read a checkpoint directory written by :func:`save_checkpoint`.

    Raises:
        FileNotFoundError: If the manifest or a blob is missing
        BlobFormatError: If the manifest is invalid or a blob disagrees with it
    """
    directory = Path(directory)
    manifest_path = directory / MANIFEST_NAME
    if not manifest_path.exists():
        raise FileNotFoundError(f"Checkpoint manifest not found: {manifest_path}")
    try:
        manifest = CheckpointManifest.model_validate_json(manifest_path.read_text(encoding="utf8"))
    except ValidationError as e:
        raise BlobFormatError(f"{manifest_path}: invalid manifest ({e.error_count()} errors)") from e
    if manifest.format_version != CHECKPOINT_FORMAT:
        raise BlobFormatError(f"{manifest_path}: unsupported format version {manifest.format_version}")

    expected = manifest.network.parameter_shapes()
    tensors: Dict[str, Tensor] = {}
    for entry in manifest.parameters:
        values = read_blob(directory / entry.file)
        if list(values.shape) != entry.shape:
            raise BlobFormatError(f"{entry.file}: shape {values.shape} differs from manifest {entry.shape}")
        if expected.get(entry.name) != tuple(entry.shape):
            raise BlobFormatError(f"{entry.name}: not a parameter of a '{manifest.network.preset}' network")
        tensors[entry.name] = Tensor(values, name=entry.name)

    missing = set(expected) - set(tensors)
    if missing:
        raise BlobFormatError(f"{manifest_path}: missing parameters {sorted(missing)}")

    logger.info(f"Loaded checkpoint '{manifest.network.preset}' from: {directory}")
    return ModelParams(manifest.network, {name: tensors[name] for name in expected})
