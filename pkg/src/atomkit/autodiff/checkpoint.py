"""
Binary parameter checkpoints.

Layout: the magic bytes ``ATOMCKPT1``, then for each parameter in order:
name length (uint32), UTF-8 name, rank (uint32), each dimension (uint32),
and the values as little-endian float64 in row-major order. All integers
are little-endian. The file ends after the last parameter.
"""

from __future__ import annotations

import struct
from collections.abc import Mapping
from pathlib import Path

import numpy as np

from ..core.errors import CheckpointError
from .tensor import Array

MAGIC = b"ATOMCKPT1"
_U32 = struct.Struct("<I")


def encode_parameters(params: Mapping[str, Array]) -> bytes:
    """Serialize named arrays into checkpoint bytes."""
    chunks = [MAGIC]
    for name, value in params.items():
        encoded = name.encode("utf-8")
        array = np.ascontiguousarray(value, dtype="<f8")
        chunks.append(_U32.pack(len(encoded)))
        chunks.append(encoded)
        chunks.append(_U32.pack(array.ndim))
        chunks.extend(_U32.pack(dim) for dim in array.shape)
        chunks.append(array.tobytes(order="C"))
    return b"".join(chunks)


def decode_parameters(blob: bytes) -> dict[str, Array]:
    """
    Parse checkpoint bytes.

    Raises:
        CheckpointError: On a wrong magic string or truncated content
    """
    if not blob.startswith(MAGIC):
        raise CheckpointError("not an atomkit checkpoint (bad magic)")
    offset = len(MAGIC)
    params: dict[str, Array] = {}

    def take(size: int, what: str) -> bytes:
        nonlocal offset
        if offset + size > len(blob):
            raise CheckpointError(f"truncated checkpoint while reading {what} at byte {offset}")
        chunk = blob[offset : offset + size]
        offset += size
        return chunk

    while offset < len(blob):
        (name_len,) = _U32.unpack(take(_U32.size, "name length"))
        name = take(name_len, "name").decode("utf-8")
        (rank,) = _U32.unpack(take(_U32.size, f"rank of {name!r}"))
        shape = tuple(_U32.unpack(take(_U32.size, f"shape of {name!r}"))[0] for _ in range(rank))
        count = int(np.prod(shape, dtype=np.int64))
        raw = take(8 * count, f"values of {name!r}")
        params[name] = np.frombuffer(raw, dtype="<f8").astype(np.float64).reshape(shape)
    return params


def save_checkpoint(path: str | Path, params: Mapping[str, Array]) -> Path:
    """Write ``params`` to ``path`` and return the path."""
    target = Path(path)
    target.write_bytes(encode_parameters(params))
    return target


def load_checkpoint(path: str | Path) -> dict[str, Array]:
    """
    Read a checkpoint file.

    Raises:
        CheckpointError: If the file cannot be read or parsed
    """
    try:
        blob = Path(path).read_bytes()
    except OSError as exc:
        raise CheckpointError(f"cannot read checkpoint {path}: {exc}") from exc
    return decode_parameters(blob)
