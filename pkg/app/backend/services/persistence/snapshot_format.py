"""Binary snapshot container.

A snapshot file holds named float64 arrays plus a JSON metadata block. The
layout is fixed little-endian so files can be read from any language:

    [MAGIC(8)][VERSION(1)][N_POINTS(4)][LENGTH(8)][TIME(8)][STEP(8)]
    [META_LEN(4)][META(JSON, utf-8)]
    [N_ARRAYS(4)] then per array:
        [NAME_LEN(2)][NAME(utf-8)][KIND(1)][COUNT(4)][DATA(8 * COUNT * (1 + KIND))]
    [SHA256(32)] over everything before it

KIND is 0 for real arrays and 1 for complex arrays stored as interleaved
(re, im) pairs. Metadata is serialised with sorted keys so identical inputs
give identical bytes.
"""

from __future__ import annotations

import hashlib
import json
import struct
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict

import numpy as np


MAGIC = b"MBSNAP01"
VERSION = 1
HEADER = struct.Struct("<8sBIddQ")
DIGEST_LEN = 32
KIND_REAL = 0
KIND_COMPLEX = 1


class SnapshotFormatError(RuntimeError):
    """Raised when a snapshot file cannot be written or parsed."""

    exit_code = 2


@dataclass
class SnapshotPayload:
    """Decoded contents of a snapshot file."""

    n_points: int
    length: float
    time: float
    step: int
    metadata: Dict[str, Any] = field(default_factory=dict)
    arrays: Dict[str, np.ndarray] = field(default_factory=dict)


def encode_snapshot(payload: SnapshotPayload) -> bytes:
    """Serialise a payload to bytes.

    Raises:
        SnapshotFormatError: When an array has the wrong length or a name is too long.
    """

    parts = [HEADER.pack(MAGIC, VERSION, payload.n_points, payload.length, payload.time, payload.step)]
    meta = json.dumps(payload.metadata, sort_keys=True, separators=(",", ":"), allow_nan=True).encode("utf-8")
    parts.append(struct.pack("<I", len(meta)))
    parts.append(meta)
    parts.append(struct.pack("<I", len(payload.arrays)))

    for name, values in payload.arrays.items():
        values = np.asarray(values)
        encoded_name = name.encode("utf-8")
        if len(encoded_name) > 0xFFFF:
            raise SnapshotFormatError(f"array name too long: {name[:40]}...")
        if values.ndim != 1:
            raise SnapshotFormatError(f"array {name!r} must be one-dimensional")
        if np.iscomplexobj(values):
            kind = KIND_COMPLEX
            data = np.ascontiguousarray(values, dtype="<c16").view("<f8")
        else:
            kind = KIND_REAL
            data = np.ascontiguousarray(values, dtype="<f8")
        parts.append(struct.pack("<H", len(encoded_name)))
        parts.append(encoded_name)
        parts.append(struct.pack("<BI", kind, values.size))
        parts.append(data.tobytes())

    body = b"".join(parts)
    return body + hashlib.sha256(body).digest()


def decode_snapshot(blob: bytes) -> SnapshotPayload:
    """Parse bytes produced by `encode_snapshot`.

    Raises:
        SnapshotFormatError: When the magic, version, checksum or layout is invalid.
    """

    if len(blob) < HEADER.size + DIGEST_LEN:
        raise SnapshotFormatError("snapshot is truncated (header)")
    body, digest = blob[:-DIGEST_LEN], blob[-DIGEST_LEN:]
    if hashlib.sha256(body).digest() != digest:
        raise SnapshotFormatError("snapshot checksum mismatch")

    magic, version, n_points, length, time, step = HEADER.unpack_from(body, 0)
    if magic != MAGIC:
        raise SnapshotFormatError("not a snapshot file (bad magic)")
    if version != VERSION:
        raise SnapshotFormatError(f"unsupported snapshot version: {version}")

    offset = HEADER.size
    try:
        (meta_len,) = struct.unpack_from("<I", body, offset)
        offset += 4
        metadata = json.loads(body[offset : offset + meta_len].decode("utf-8"))
        offset += meta_len
        (n_arrays,) = struct.unpack_from("<I", body, offset)
        offset += 4

        arrays: Dict[str, np.ndarray] = {}
        for _ in range(n_arrays):
            (name_len,) = struct.unpack_from("<H", body, offset)
            offset += 2
            name = body[offset : offset + name_len].decode("utf-8")
            offset += name_len
            kind, count = struct.unpack_from("<BI", body, offset)
            offset += 5
            n_floats = count * (2 if kind == KIND_COMPLEX else 1)
            data = np.frombuffer(body, dtype="<f8", count=n_floats, offset=offset).astype(np.float64)
            offset += 8 * n_floats
            arrays[name] = data.view(np.complex128) if kind == KIND_COMPLEX else data
    except (struct.error, ValueError, UnicodeDecodeError) as exc:
        raise SnapshotFormatError(f"snapshot is malformed: {exc}") from exc

    if offset != len(body):
        raise SnapshotFormatError("snapshot has trailing bytes")
    return SnapshotPayload(
        n_points=int(n_points),
        length=float(length),
        time=float(time),
        step=int(step),
        metadata=metadata,
        arrays=arrays,
    )


def write_snapshot_file(path: Path, payload: SnapshotPayload) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(encode_snapshot(payload))
    return path


def read_snapshot_file(path: Path) -> SnapshotPayload:
    """Read and decode a snapshot file.

    Raises:
        SnapshotFormatError: When the file is unreadable or malformed.
    """

    try:
        blob = Path(path).read_bytes()
    except OSError as exc:
        raise SnapshotFormatError(f"failed to read snapshot {path}: {exc}") from exc
    return decode_snapshot(blob)
