"""
ATRJ v1 trajectory files.

Layout::

    ATRJ 1
    <N> <T> <dt> <name>
    <Z_1> ... <Z_N>
    <T * N * 6 little-endian float64: x y z vx vy vz per atom per frame>

The three header lines are ASCII terminated by ``\\n``; ``dt`` is written
with ``repr`` so it survives the round trip exactly. Frame times are
``i * dt``.
"""

from __future__ import annotations

import logging
from pathlib import Path

import numpy as np

from ..core.errors import TrajectoryParseError
from .trajectory import Trajectory

logger = logging.getLogger(__name__)

MAGIC_LINE = b"ATRJ 1"
_FLOAT = np.dtype("<f8")


def encode_trajectory(traj: Trajectory) -> bytes:
    """Serialize to ATRJ bytes."""
    header = (
        MAGIC_LINE
        + b"\n"
        + f"{traj.n_atoms} {len(traj)} {traj.dt!r} {traj.name}\n".encode("ascii")
        + (" ".join(str(int(z)) for z in traj.atomic_numbers) + "\n").encode("ascii")
    )
    payload = np.concatenate([traj.positions, traj.velocities], axis=-1).astype(_FLOAT)
    return header + payload.tobytes(order="C")


def _header_line(blob: bytes, start: int, line: int) -> tuple[str, int]:
    end = blob.find(b"\n", start)
    if end < 0:
        raise TrajectoryParseError("unterminated header line", line=line, offset=start)
    try:
        return blob[start:end].decode("ascii"), end + 1
    except UnicodeDecodeError:
        raise TrajectoryParseError("header is not ASCII", line=line, offset=start) from None


def decode_trajectory(blob: bytes) -> Trajectory:
    """
    Parse ATRJ bytes.

    Raises:
        TrajectoryParseError: On a bad magic line, malformed counts, a wrong
            number of atomic numbers or a payload that does not hold exactly
            T frames
    """
    magic, offset = _header_line(blob, 0, 1)
    if magic.encode("ascii") != MAGIC_LINE:
        raise TrajectoryParseError(f"expected {MAGIC_LINE.decode()!r}, got {magic!r}", line=1)

    counts, offset = _header_line(blob, offset, 2)
    fields = counts.split(" ", 3)
    if len(fields) != 4:
        raise TrajectoryParseError(f"expected 'N T dt name', got {counts!r}", line=2)
    try:
        n_atoms, n_frames, dt = int(fields[0]), int(fields[1]), float(fields[2])
    except ValueError as exc:
        raise TrajectoryParseError(f"bad counts: {exc}", line=2) from None
    if n_atoms < 1 or n_frames < 1 or not dt > 0.0:
        raise TrajectoryParseError(f"need N >= 1, T >= 1, dt > 0; got {counts!r}", line=2)

    numbers_line, offset = _header_line(blob, offset, 3)
    try:
        numbers = [int(token) for token in numbers_line.split()]
    except ValueError as exc:
        raise TrajectoryParseError(f"bad atomic number: {exc}", line=3) from None
    if len(numbers) != n_atoms:
        raise TrajectoryParseError(f"header says {n_atoms} atoms, found {len(numbers)} atomic numbers", line=3)

    expected = n_frames * n_atoms * 6 * _FLOAT.itemsize
    actual = len(blob) - offset
    if actual != expected:
        frames_found = actual / (n_atoms * 6 * _FLOAT.itemsize)
        raise TrajectoryParseError(
            f"payload holds {frames_found:g} frames, header says {n_frames}",
            offset=offset + min(actual, expected),
        )
    payload = np.frombuffer(blob, dtype=_FLOAT, offset=offset).reshape(n_frames, n_atoms, 6)
    try:
        return Trajectory(payload[..., :3], payload[..., 3:], np.array(numbers), dt, fields[3])
    except ValueError as exc:
        raise TrajectoryParseError(str(exc), line=2) from exc


def save_trajectory(traj: Trajectory, path: str | Path) -> Path:
    """Write ``traj`` to ``path`` in ATRJ format."""
    target = Path(path)
    target.write_bytes(encode_trajectory(traj))
    logger.debug("wrote %d frames of %s to %s", len(traj), traj.name, target)
    return target


def load_trajectory(path: str | Path) -> Trajectory:
    """
    Read an ATRJ file.

    Raises:
        TrajectoryParseError: If the file is unreadable or malformed
    """
    try:
        blob = Path(path).read_bytes()
    except OSError as exc:
        raise TrajectoryParseError(f"cannot read {path}: {exc}") from exc
    return decode_trajectory(blob)
