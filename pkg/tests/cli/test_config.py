"""
Run configuration merge tests
"""

import pytest
from pydantic import ValidationError

from retrofit_prae.cli.config import (
    ConfigFileError,
    RunConfig,
    build_run_config,
    deep_merge,
    load_config_file,
    preset,
)
from retrofit_prae.utils.config import reset_settings


class TestPreset:
    """Scale presets"""

    def test_desk(self):
        cfg = RunConfig.model_validate(preset("desk"))
        assert cfg.data.repetitions == 1
        assert cfg.eval.speed_threshold == 16
        assert cfg.train.model.embed_dim == cfg.embeddings.dim

    def test_full(self):
        cfg = RunConfig.model_validate(preset("full"))
        assert cfg.train.iterations == 17300
        assert cfg.train.batch_size == 120
        assert cfg.data.repetitions == 6
        assert cfg.eval.speed_threshold == 30
        assert cfg.embeddings.dim == 300

    def test_unknown(self):
        with pytest.raises(ConfigFileError):
            preset("huge")


class TestDeepMerge:
    """Nested overrides"""

    def test_nested_values_win(self):
        merged = deep_merge({"a": {"b": 1, "c": 2}, "d": 3}, {"a": {"c": 9}})
        assert merged == {"a": {"b": 1, "c": 9}, "d": 3}

    def test_scalar_replaces_mapping(self):
        assert deep_merge({"a": {"b": 1}}, {"a": 5}) == {"a": 5}


class TestLoadConfigFile:
    """JSON and YAML files"""

    def test_yaml(self, tmp_path):
        path = tmp_path / "run.yaml"
        path.write_text("seed: 4\ntrain:\n  iterations: 12\n")
        assert load_config_file(path) == {"seed": 4, "train": {"iterations": 12}}

    def test_json(self, tmp_path):
        path = tmp_path / "run.json"
        path.write_text('{"fold": 2}')
        assert load_config_file(path) == {"fold": 2}

    def test_missing(self, tmp_path):
        with pytest.raises(ConfigFileError):
            load_config_file(tmp_path / "none.yaml")

    def test_malformed(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        with pytest.raises(ConfigFileError):
            load_config_file(path)

    def test_top_level_must_be_mapping(self, tmp_path):
        path = tmp_path / "list.yaml"
        path.write_text("- 1\n- 2\n")
        with pytest.raises(ConfigFileError):
            load_config_file(path)


class TestBuildRunConfig:
    """Preset < file < flags"""

    def test_defaults(self):
        cfg = build_run_config()
        assert (cfg.scale, cfg.seed, cfg.fold) == ("desk", 0, 1)

    def test_file_then_flags(self, tmp_path):
        path = tmp_path / "run.yaml"
        path.write_text("seed: 4\nfold: 3\ntrain:\n  iterations: 12\n  lr: 0.01\n")
        cfg = build_run_config(config_path=path, overrides={"seed": 9, "fold": None, "train": {"iterations": 30}})
        assert cfg.seed == 9
        assert cfg.fold == 3
        assert cfg.train.iterations == 30
        assert cfg.train.lr == 0.01
        assert cfg.train.batch_size == 16

    def test_scale_from_file(self, tmp_path):
        path = tmp_path / "run.yaml"
        path.write_text("scale: full\n")
        assert build_run_config(config_path=path).train.iterations == 17300

    def test_seed_and_threads_propagate(self):
        cfg = build_run_config(overrides={"seed": 7, "threads": 3})
        assert cfg.train.seed == 7
        assert cfg.eval.threads == 3

    def test_threads_default_from_environment(self, monkeypatch):
        monkeypatch.setenv("RPRAE_THREADS", "4")
        reset_settings()
        assert build_run_config().eval.threads == 4

    def test_invalid_fold(self):
        with pytest.raises(ValidationError):
            build_run_config(overrides={"fold": 6})

    def test_default_run_directory(self, tmp_path):
        cfg = build_run_config(overrides={"seed": 2, "fold": 4})
        assert cfg.out_dir() == tmp_path / "runs" / "desk-fold4-seed2"
        assert build_run_config(overrides={"out": str(tmp_path / "x")}).out_dir() == tmp_path / "x"

    def test_snapshot_replays(self):
        cfg = build_run_config(overrides={"seed": 5, "train": {"iterations": 3}})
        assert RunConfig.model_validate(cfg.snapshot()) == cfg
