"""State file format and numerical backend checks."""
import json

import numpy as np
import pytest

from core.errors import ValidationError
from core.infomeasures import info_report
from core.states import random_state
from utils import system_check
from utils.state_io import load_state, save_state, state_from_document, state_to_document


class TestStateFiles:

    def test_round_trip_is_exact(self, tmp_path, hadamard):
        rho = random_state(2, 2, seed=31)
        path = tmp_path / "rho.json"
        save_state(rho, path)
        loaded = load_state(path)
        assert loaded.dims == rho.dims
        assert np.array_equal(loaded.matrix, rho.matrix)
        assert info_report(loaded, hadamard).discord == pytest.approx(
            info_report(rho, hadamard).discord, abs=1e-12
        )

    def test_document_layout(self, bell):
        document = state_to_document(bell)
        assert document["d_s"] == 2 and document["d_a"] == 2
        assert document["matrix"][0][3] == pytest.approx([0.5, 0.0])

    @pytest.mark.parametrize(
        "document",
        [[], {"d_s": 2, "d_a": 2}, {"d_s": 1, "d_a": 1, "matrix": [1.0]}, {"d_s": "x", "d_a": 1, "matrix": []}],
    )
    def test_malformed_documents(self, document):
        with pytest.raises(ValidationError) as info:
            state_from_document(document)
        assert info.value.invariant == "format"

    def test_not_json(self, tmp_path):
        path = tmp_path / "rho.json"
        path.write_text("{not json")
        with pytest.raises(ValidationError, match="not valid JSON"):
            load_state(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ValidationError) as info:
            load_state(tmp_path / "absent.json")
        assert info.value.invariant == "readable"

    def test_invariants_apply_on_load(self, tmp_path):
        path = tmp_path / "rho.json"
        path.write_text(json.dumps({"d_s": 1, "d_a": 1, "matrix": [[[2.0, 0.0]]]}))
        with pytest.raises(ValidationError) as info:
            load_state(path)
        assert info.value.invariant == "unit trace"


class TestSystemCheck:

    def test_version_tuple(self):
        assert system_check._version_tuple("2.2.6") == (2, 2)
        assert system_check._version_tuple("1.15.0rc1") == (1, 15)

    def test_installed_backend_passes(self):
        assert system_check.verify_system_requirements()

    def test_old_numpy_is_reported(self, monkeypatch, caplog):
        monkeypatch.setattr(system_check, "MIN_NUMPY_VERSION", (99, 0))
        assert not system_check.check_versions()
        assert "older than the required 99.0" in caplog.text
