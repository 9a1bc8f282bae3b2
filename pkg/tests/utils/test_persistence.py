"""JSON persistence helpers."""

import json
import math
from pathlib import Path

import numpy as np
import pytest

from kinbound.errors import ConfigError
from kinbound.utils.persistence import canonical_json, fingerprint, read_json, to_jsonable, write_json_atomic


class TestToJsonable:
    """Conversion of numpy values and non-finite floats."""

    def test_to_jsonable_when_numpy_values_then_plain_python(self) -> None:
        data = {"array": np.arange(3), "scalar": np.float64(0.5), "pair": (1, np.int64(2))}
        assert to_jsonable(data) == {"array": [0, 1, 2], "scalar": 0.5, "pair": [1, 2]}

    def test_to_jsonable_when_non_finite_then_strings(self) -> None:
        assert to_jsonable([math.inf, -math.inf, math.nan]) == ["inf", "-inf", "nan"]


class TestFingerprint:
    """Canonical hashing."""

    def test_fingerprint_when_key_order_differs_then_equal(self) -> None:
        assert fingerprint({"a": 1, "b": 2}) == fingerprint({"b": 2, "a": 1})

    def test_fingerprint_when_nested_wall_time_differs_then_equal(self) -> None:
        first = {"verdict": "pass", "wall_ms": 1.0, "certificate": {"wall_ms": 5.0, "samples": 10}}
        second = {"verdict": "pass", "wall_ms": 8.0, "certificate": {"wall_ms": 2.0, "samples": 10}}
        assert fingerprint(first) == fingerprint(second)
        second["certificate"]["samples"] = 11
        assert fingerprint(first) != fingerprint(second)

    def test_canonical_json_when_excluded_inside_list_then_dropped(self) -> None:
        assert canonical_json({"runs": [{"wall_ms": 3, "x": 1}]}) == '{"runs":[{"x":1}]}'


class TestJsonFiles:
    """Atomic writes and validated reads."""

    def test_write_json_atomic_when_written_then_sorted_and_no_temp(self, out_dir: Path) -> None:
        path = write_json_atomic(out_dir / "nested" / "body.json", {"b": 1, "a": math.inf})
        text = path.read_text(encoding="utf-8")
        assert text.index('"a"') < text.index('"b"')
        assert json.loads(text) == {"a": "inf", "b": 1}
        assert not (out_dir / "nested" / "body.json.tmp").exists()

    def test_read_json_when_round_tripped_then_equal(self, out_dir: Path) -> None:
        path = write_json_atomic(out_dir / "body.json", {"values": [1.5, 2.5]})
        assert read_json(path) == {"values": [1.5, 2.5]}

    def test_read_json_when_malformed_then_config_error(self, tmp_path: Path) -> None:
        path = tmp_path / "broken.json"
        path.write_text("{not json", encoding="utf-8")
        with pytest.raises(ConfigError, match="Malformed JSON"):
            read_json(path)

    def test_read_json_when_not_object_then_config_error(self, tmp_path: Path) -> None:
        path = tmp_path / "list.json"
        path.write_text("[1, 2]", encoding="utf-8")
        with pytest.raises(ConfigError, match="JSON object"):
            read_json(path)
