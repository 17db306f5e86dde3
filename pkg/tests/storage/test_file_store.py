"""
Run store tests
"""

import pytest

from retrofit_prae.storage.file_store import ArtifactKind, RunStore


@pytest.fixture
def store(tmp_path):
    return RunStore(tmp_path / "run")


class TestRunStore:
    """Artifact files of a run directory"""

    def test_default_location_from_settings(self, tmp_path):
        assert RunStore().base_path == tmp_path / "runs"

    def test_json_is_sorted_and_stable(self, store):
        path = store.save_json("a.json", {"b": 1, "a": [0.1, 2]})
        assert path.read_text() == '{\n  "a": [\n    0.1,\n    2\n  ],\n  "b": 1\n}\n'
        assert store.load_json("a.json") == {"a": [0.1, 2], "b": 1}

    def test_compact_json(self, store):
        path = store.save_json("c.json", {"z": 1, "y": 2}, indent=False)
        assert path.read_bytes() == b'{"y":2,"z":1}\n'

    def test_nested_paths_and_listing(self, store):
        store.save_text("figs/x.svg", "<svg/>")
        store.save_json("m.json", {})
        assert store.exists("figs/x.svg")
        assert not store.exists("missing.txt")
        assert [p.name for p in store.list_artifacts()] == ["x.svg", "m.json"]
        assert [p.name for p in store.list_artifacts(ArtifactKind.SVG)] == ["x.svg"]
