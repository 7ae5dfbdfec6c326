"""
VOTB raw tensor blobs.

Layout: magic ``b"VOTB"``, u32 version (1), u32 ndim, ndim x u32 extents,
then the row-major little-endian float64 payload.
"""

import struct
from pathlib import Path
from typing import Union

import numpy as np

from src.utils.errors import BlobFormatError

from .tensor import Tensor

MAGIC = b"VOTB"
VERSION = 1
_HEADER = struct.Struct("<4sII")


def to_bytes(values: Union[Tensor, np.ndarray]) -> bytes:
    """Serialize a tensor or array to VOTB bytes."""
    array = values.data if isinstance(values, Tensor) else np.asarray(values, dtype=np.float64)
    array = np.ascontiguousarray(array, dtype="<f8").reshape(np.shape(array))
    header = _HEADER.pack(MAGIC, VERSION, array.ndim)
    extents = struct.pack(f"<{array.ndim}I", *array.shape)
    return header + extents + array.tobytes(order="C")


def from_bytes(raw: bytes) -> np.ndarray:
    """Parse VOTB bytes into a float64 array."""
    if len(raw) < _HEADER.size:
        raise BlobFormatError(f"blob too short for header ({len(raw)} bytes)")
    magic, version, ndim = _HEADER.unpack_from(raw, 0)
    if magic != MAGIC:
        raise BlobFormatError(f"bad magic {magic!r}, expected {MAGIC!r}")
    if version != VERSION:
        raise BlobFormatError(f"unsupported blob version {version}")
    offset = _HEADER.size
    if len(raw) < offset + 4 * ndim:
        raise BlobFormatError("blob truncated inside the extent table")
    shape = struct.unpack_from(f"<{ndim}I", raw, offset)
    offset += 4 * ndim
    count = int(np.prod(shape, dtype=np.int64))
    expected = offset + 8 * count
    if len(raw) != expected:
        raise BlobFormatError(
            f"payload size mismatch: {len(raw) - offset} bytes for shape {tuple(shape)}"
        )
    payload = np.frombuffer(raw, dtype="<f8", count=count, offset=offset)
    return payload.astype(np.float64).reshape(shape)


def write_blob(path: Union[str, Path], values: Union[Tensor, np.ndarray]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(to_bytes(values))
    return path


def read_blob(path: Union[str, Path]) -> np.ndarray:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Blob not found: {path}")
    try:
        return from_bytes(path.read_bytes())
    except BlobFormatError as e:
        raise BlobFormatError(f"{path}: {e}") from e
