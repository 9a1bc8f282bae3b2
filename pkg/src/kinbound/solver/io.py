"""Binary field dumps and CSV boundary traces.

Field dump layout (little-endian, see docs/FIELD_DUMP_FORMAT.md):

    magic    4 bytes  b"KFPF"
    version  uint32   1
    n_t      uint64
    n_x      uint64
    n_v      uint64
    times    n_t float64
    x        n_x float64
    v        n_v float64
    values   n_t·n_x·n_v float64, row-major, t-major

Run metadata is kept next to the dump as ``<name>.json``.
"""

import csv
import logging
import struct
from collections.abc import Iterable
from pathlib import Path

import numpy as np

from kinbound.errors import ConfigError
from kinbound.utils.persistence import read_json, write_json_atomic

from .models import BoundaryTrace, SolutionField

logger = logging.getLogger(__name__)

MAGIC = b"KFPF"
FORMAT_VERSION = 1
HEADER = struct.Struct("<4sI3Q")
FLOAT = np.dtype("<f8")
TRACE_HEADER = ("x", "f")


def write_field_dump(path: str | Path, sol: SolutionField) -> Path:
    """Write a field dump and its metadata sidecar atomically.

    Raises:
        OSError: If the file cannot be written.

    """
    path = Path(path)
    n_t, n_x, n_v = sol.values.shape
    payload = b"".join(
        [
            HEADER.pack(MAGIC, FORMAT_VERSION, n_t, n_x, n_v),
            sol.times.astype(FLOAT).tobytes(),
            sol.x.astype(FLOAT).tobytes(),
            sol.v.astype(FLOAT).tobytes(),
            np.ascontiguousarray(sol.values, dtype=FLOAT).tobytes(),
        ]
    )
    temp_path = path.with_suffix(path.suffix + ".tmp")
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        temp_path.write_bytes(payload)
        temp_path.replace(path)
    except OSError:
        logger.exception("Failed to write field dump to %s", path)
        raise
    write_json_atomic(path.with_suffix(".json"), sol.metadata)
    logger.info("✓ Wrote %dx%dx%d field to %s", n_t, n_x, n_v, path)
    return path


def read_field_dump(path: str | Path) -> SolutionField:
    """Read a field dump written by :func:`write_field_dump`.

    Raises:
        ConfigError: If the file is truncated or not a field dump.

    """
    path = Path(path)
    data = path.read_bytes()
    if len(data) < HEADER.size:
        msg = f"{path} is too short for a field dump header"
        raise ConfigError(msg)
    magic, version, n_t, n_x, n_v = HEADER.unpack_from(data)
    if magic != MAGIC:
        msg = f"{path} is not a field dump (magic {magic!r})"
        raise ConfigError(msg)
    if version != FORMAT_VERSION:
        msg = f"{path} has unsupported field dump version {version}"
        raise ConfigError(msg)
    expected = HEADER.size + FLOAT.itemsize * (n_t + n_x + n_v + n_t * n_x * n_v)
    if len(data) != expected:
        msg = f"{path} holds {len(data)} bytes, expected {expected}"
        raise ConfigError(msg)

    floats = np.frombuffer(data, dtype=FLOAT, offset=HEADER.size).astype(np.float64)
    times, x, v, values = np.split(floats, np.cumsum([n_t, n_x, n_v]))
    sidecar = path.with_suffix(".json")
    metadata = read_json(sidecar) if sidecar.exists() else {}
    return SolutionField(
        times=times,
        x=x,
        v=v,
        values=values.reshape(n_t, n_x, n_v),
        metadata=metadata,
    )


def write_traces(out_dir: str | Path, traces: Iterable[BoundaryTrace], prefix: str = "trace") -> list[Path]:
    """Write one ``x,f`` CSV per trace, named after its velocity."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for trace in traces:
        path = out_dir / f"{prefix}_v{trace.v:+.6f}.csv"
        try:
            with path.open("w", newline="", encoding="utf-8") as handle:
                writer = csv.writer(handle)
                writer.writerow(TRACE_HEADER)
                writer.writerows((repr(float(a)), repr(float(b))) for a, b in zip(trace.x, trace.f, strict=True))
        except OSError:
            logger.exception("Failed to write trace %s", path)
            raise
        written.append(path)
    logger.info("✓ Wrote %d boundary traces to %s", len(written), out_dir)
    return written
