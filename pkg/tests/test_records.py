"""Tests for run-record serialization and atomic persistence."""

import json
import math
from pathlib import Path

import pytest

from xxzbethe import OutputFormat, RunRecord, deserialize, persist_record, serialize
from xxzbethe._internal.staging import write_run_directory
from xxzbethe.records import RECORD_CSV, RECORD_JSON, config_hash, format_float


@pytest.fixture
def record():
    """A small completeness-style record."""
    return RunRecord(
        command="completeness",
        config_echo={"model": {"n": 2, "q": 3, "alpha_minus": 0.1 + 0.4j}},
        energies=[-1.25 + 0j, 0.5 + 1e-9j],
        reference_energies=[-1.25, 0.5],
        bethe_roots=[[0.1 + 0.2j, 0.3], [0.4j, -0.1]],
        residuals=[1e-12, float("nan")],
        pairing=[0, 1],
        deviations=[0.0, 1e-9],
        max_deviation=1e-9,
        checks={"max_eigen_residual": 1e-14, "unstable": float("inf")},
    )


class TestSerialize:
    """Canonical JSON and CSV forms."""

    def test_json_is_stable_through_round_trip(self, record):
        first = serialize(record)
        assert serialize(deserialize(first)) == first

    def test_complex_values_are_pairs(self, record):
        payload = json.loads(serialize(record))["payload"]
        assert payload["energies"][1] == {"re": 0.5, "im": 1e-9}
        assert payload["config_echo"]["model"]["alpha_minus"] == {"re": 0.1, "im": 0.4}

    def test_non_finite_become_null_and_back(self, record):
        document = json.loads(serialize(record))
        assert document["payload"]["residuals"][1] is None
        assert document["payload"]["checks"]["unstable"] is None
        restored = deserialize(serialize(record))
        assert math.isnan(restored.residuals[1])
        assert math.isnan(restored.checks["unstable"])

    def test_meta_is_kept_out_of_payload(self, record):
        stamped = record.stamped(wall_time=1.5, tool_version="0.1.0")
        restamped = record.stamped(wall_time=9.0, tool_version="0.1.0")
        first = json.loads(serialize(stamped))
        second = json.loads(serialize(restamped))
        assert first["payload"] == second["payload"]
        assert first["meta"]["wall_time"] == 1.5
        assert "wall_time" not in first["payload"]

    def test_csv_has_one_row_per_level(self, record):
        lines = serialize(record, OutputFormat.CSV).decode().splitlines()
        assert lines[0] == "index,E_re,E_im,deviation"
        assert lines[1] == "0,-1.25,0.0,0.0"
        assert lines[2] == "1,0.5,1e-09,1e-09"

    def test_csv_without_deviations(self):
        text = serialize(RunRecord(command="bethe solve", energies=[2.0]), "csv").decode()
        assert text.splitlines()[1] == "0,2.0,0.0,nan"

    def test_json_floats_carry_17_significant_digits(self):
        text = serialize(RunRecord(command="bethe solve", energies=[0.1 + 0j], max_deviation=2.0)).decode()
        assert '0.10000000000000001' in text
        assert '"max_deviation": 2.0' in text
        restored = deserialize(text.encode())
        assert restored.energies[0] == 0.1 + 0j
        assert isinstance(restored.max_deviation, float)

    @pytest.mark.parametrize(
        ("value", "text"),
        [(0.1, "0.10000000000000001"), (2.0, "2.0"), (-0.0, "-0.0"), (1e-9, "1.0000000000000001e-09"), (1e17, "1e+17")],
    )
    def test_format_float(self, value, text):
        assert format_float(value) == text
        assert float(text) == value

    def test_unknown_format(self, record):
        with pytest.raises(ValueError):
            serialize(record, "yaml")


class TestPersist:
    """Run directories keyed by configuration hash."""

    def test_writes_both_files(self, record, tmp_path):
        target = persist_record(record, tmp_path)
        assert target.parent == tmp_path
        assert target.name == config_hash({"command": "completeness", **record.config_echo})
        assert (target / RECORD_JSON).read_bytes() == serialize(record)
        assert (target / RECORD_CSV).read_text().startswith("index,")

    def test_second_run_replaces_first(self, record, tmp_path):
        persist_record(record, tmp_path)
        updated = record.model_copy(update={"energies": [-2.0 + 0j, 0.5 + 0j]})
        target = persist_record(updated, tmp_path)
        assert deserialize((target / RECORD_JSON).read_bytes()).energies[0] == -2.0
        assert sorted(p.name for p in tmp_path.iterdir()) == [target.name]

    def test_hash_depends_on_command(self, record):
        assert config_hash({"command": "a", **record.config_echo}) != config_hash(
            {"command": "b", **record.config_echo}
        )

    def test_hash_ignores_key_order(self):
        assert config_hash({"a": 1, "b": [1j]}) == config_hash({"b": [1j], "a": 1})


class TestStaging:
    def test_replaces_existing_directory(self, tmp_path):
        target = tmp_path / "run"
        write_run_directory(target, {"old.txt": b"old"})
        write_run_directory(target, {"new.txt": b"new"})
        assert sorted(p.name for p in target.iterdir()) == ["new.txt"]
        assert [p.name for p in tmp_path.iterdir()] == ["run"]

    def test_refuses_filesystem_root(self):
        with pytest.raises(ValueError):
            write_run_directory(Path("/"), {})
