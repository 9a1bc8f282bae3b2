"""JSON persistence with atomic writes and content fingerprints."""

import hashlib
import json
import logging
import math
from collections.abc import Iterable, Mapping
from pathlib import Path
from typing import Any

import numpy as np

from kinbound.errors import ConfigError

logger = logging.getLogger(__name__)

VOLATILE_KEYS = frozenset({"wall_ms"})


def to_jsonable(value: Any) -> Any:  # noqa: ANN401
    """Convert nested data to JSON-safe values; non-finite floats become strings."""
    if isinstance(value, Mapping):
        return {str(key): to_jsonable(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(item) for item in value]
    if isinstance(value, float) and not math.isfinite(value):
        return repr(value)
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    if isinstance(value, np.generic):
        return to_jsonable(value.item())
    return value


def _strip(value: Any, skipped: frozenset[str]) -> Any:  # noqa: ANN401
    if isinstance(value, Mapping):
        return {key: _strip(item, skipped) for key, item in value.items() if key not in skipped}
    if isinstance(value, list):
        return [_strip(item, skipped) for item in value]
    return value


def canonical_json(data: Mapping[str, Any], exclude: Iterable[str] = VOLATILE_KEYS) -> str:
    """Serialize with sorted keys, dropping the excluded keys at every nesting level."""
    payload = _strip(to_jsonable(data), frozenset(exclude))
    return json.dumps(payload, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def fingerprint(data: Mapping[str, Any], exclude: Iterable[str] = VOLATILE_KEYS) -> str:
    """Return the SHA-256 hex digest of the canonical JSON form."""
    return hashlib.sha256(canonical_json(data, exclude).encode("utf-8")).hexdigest()


def write_json_atomic(path: str | Path, data: Mapping[str, Any]) -> Path:
    """Write JSON through a temporary sibling and an atomic rename.

    Args:
        path: Destination file.
        data: JSON-ready mapping (non-finite floats are converted).

    Returns:
        The destination path.

    Raises:
        OSError: If the file cannot be written; the failure is logged first.

    """
    target = Path(path)
    temp_path = target.with_suffix(target.suffix + ".tmp")
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        with temp_path.open("w", encoding="utf-8") as f:
            json.dump(to_jsonable(data), f, indent=2, sort_keys=True, ensure_ascii=False)
            f.write("\n")
        temp_path.replace(target)
    except OSError:
        logger.exception("Failed to write %s", target)
        raise
    logger.debug("Wrote %s", target)
    return target


def read_json(path: str | Path) -> dict[str, Any]:
    """Load a JSON object from disk.

    Raises:
        ConfigError: If the file is not a JSON object.

    """
    source = Path(path)
    try:
        with source.open("r", encoding="utf-8") as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        msg = f"Malformed JSON in {source}: {e}"
        raise ConfigError(msg) from e
    if not isinstance(data, dict):
        msg = f"Expected a JSON object in {source}"
        raise ConfigError(msg)
    return data
