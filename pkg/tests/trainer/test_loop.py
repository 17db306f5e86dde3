"""
Training loop, log and checkpoint tests
"""

import orjson
import pytest

from retrofit_prae.embeddings.synth import synth_pretrained
from retrofit_prae.rprae.params import ParamGroup, init_model_params
from retrofit_prae.trainer.checkpoint import (
    CHECKPOINT_VERSION,
    CheckpointError,
    CheckpointVersionError,
    load_checkpoint,
    read_checkpoint,
    save_checkpoint,
)
from retrofit_prae.trainer.config import TrainConfig
from retrofit_prae.trainer.loop import (
    EmptyDatasetError,
    TrainLog,
    param_changes,
    sample_batch,
    train,
)
from retrofit_prae.utils.errors import RetrofitPraeError


@pytest.fixture
def samples(desk_dataset):
    return desk_dataset.training_samples()[:8]


def make_config(tiny_config, iterations, **kwargs):
    options = dict(model=tiny_config, iterations=iterations, batch_size=4, n_ini=1, n_ch=1, lr=0.01, log_every=1)
    options.update(kwargs)
    return TrainConfig(**options)


class TestSampleBatch:
    """Per-iteration batches"""

    def test_depends_only_on_seed_and_iteration(self, samples, tiny_config):
        cfg = make_config(tiny_config, 5)
        first = [s.id for s in sample_batch(samples, cfg, 3)]
        assert [s.id for s in sample_batch(samples, cfg, 3)] == first
        assert len(first) == 4


class TestTrain:
    """Alternating optimization"""

    def test_zero_iterations_leave_parameters(self, samples, tiny_model, tiny_config):
        trained, log = train(samples, tiny_model, make_config(tiny_config, 0, n_ini=0))
        assert trained.bitwise_equal(tiny_model)
        assert len(log) == 0

    def test_empty_training_cell(self, tiny_model, tiny_config):
        with pytest.raises(EmptyDatasetError):
            train([], tiny_model, make_config(tiny_config, 2))

    def test_empty_training_cell_rejected_without_iterations(self, tiny_model, tiny_config):
        with pytest.raises(EmptyDatasetError):
            train([], tiny_model, make_config(tiny_config, 0, n_ini=0))
        with pytest.raises(EmptyDatasetError):
            train([], tiny_model, make_config(tiny_config, 2), start_iteration=2)

    def test_start_beyond_schedule(self, samples, tiny_model, tiny_config):
        with pytest.raises(ValueError):
            train(samples, tiny_model, make_config(tiny_config, 2), start_iteration=3)

    def test_each_iteration_updates_one_set(self, samples, tiny_model, tiny_config):
        after_ae, _ = train(samples, tiny_model, make_config(tiny_config, 1))
        assert param_changes(tiny_model, after_ae, ParamGroup.RET) == []
        assert set(param_changes(tiny_model, after_ae, ParamGroup.AE)) == set(tiny_model.group_names(ParamGroup.AE))

        after_ret, log = train(samples, after_ae, make_config(tiny_config, 2), start_iteration=1)
        assert param_changes(after_ae, after_ret, ParamGroup.AE) == []
        assert param_changes(after_ae, after_ret, ParamGroup.RET)
        assert [r.target for r in log.records] == ["RET"]

    def test_log_records_schedule(self, samples, tiny_model, tiny_config):
        _, log = train(samples, tiny_model, make_config(tiny_config, 4))
        assert [r.iteration for r in log.records] == [0, 1, 2, 3]
        assert [r.target for r in log.records] == ["AE", "RET", "AE", "RET"]
        for r in log.records:
            assert r.is_finite()
            assert r.L_all == r.L_dsc + r.L_act + r.L_shr

    def test_deterministic(self, samples, tiny_model, tiny_config):
        cfg = make_config(tiny_config, 3)
        first, log_a = train(samples, tiny_model, cfg)
        second, log_b = train(samples, tiny_model, cfg)
        assert first.bitwise_equal(second)
        assert log_a.totals() == log_b.totals()

    def test_resume_matches_uninterrupted_run(self, samples, tiny_model, tiny_config, tmp_path):
        cfg = make_config(tiny_config, 4, checkpoint_every=2)
        straight, straight_log = train(samples, tiny_model, cfg)

        saved = []

        def on_checkpoint(model, completed, log):
            if completed == 2:
                saved.append(save_checkpoint(model, tmp_path / "ckpt.json", cfg, completed))

        train(samples, tiny_model, cfg, on_checkpoint=on_checkpoint)
        restored = read_checkpoint(saved[0])
        assert restored.completed_iterations == 2
        resumed, resumed_log = train(samples, restored.model, restored.train, start_iteration=2)
        assert resumed.bitwise_equal(straight)
        assert resumed_log.totals() == straight_log.totals()[2:]

    def test_seed_changes_result(self, samples, tiny_model, tiny_config):
        a, _ = train(samples, tiny_model, make_config(tiny_config, 2, seed=1))
        b, _ = train(samples, tiny_model, make_config(tiny_config, 2, seed=2))
        assert not a.bitwise_equal(b)

    @pytest.mark.slow
    def test_desk_config_reduces_loss_on_four_samples(self, desk_dataset, lexicon):
        few = desk_dataset.training_samples()[:4]
        cfg = TrainConfig.for_scale("desk").model_copy(update={"iterations": 300})
        table = synth_pretrained(lexicon, cfg.model.embed_dim, seed=0)
        model = init_model_params(cfg.model, table, lexicon.vocabulary(), seed=0)

        _, log = train(few, model, cfg)

        assert len(log) == 300
        assert {r.target for r in log.records} == {"AE", "RET"}
        assert log.records[-1].L_all < log.records[0].L_all


class TestTrainLog:
    """CSV persistence"""

    def test_csv_round_trip(self, samples, tiny_model, tiny_config, tmp_path):
        _, log = train(samples, tiny_model, make_config(tiny_config, 2))
        path = log.write_csv(tmp_path / "log.csv")
        assert path.read_text().splitlines()[0] == "iter,target,L_dsc,L_act,L_shr,L_all"
        assert TrainLog.read_csv(path).records == log.records

    def test_rejects_foreign_csv(self, tmp_path):
        path = tmp_path / "other.csv"
        path.write_text("a,b\n1,2\n")
        with pytest.raises(RetrofitPraeError):
            TrainLog.read_csv(path)


class TestCheckpoint:
    """Checkpoint persistence"""

    def test_round_trip_is_bitwise(self, samples, tiny_model, tiny_config, tmp_path):
        cfg = make_config(tiny_config, 2)
        trained, _ = train(samples, tiny_model, cfg)
        path = save_checkpoint(trained, tmp_path / "c.json", cfg, 2)
        loaded = read_checkpoint(path)
        assert loaded.model.bitwise_equal(trained)
        assert loaded.train == cfg
        assert load_checkpoint(path).bitwise_equal(trained)

    def test_unsupported_version(self, tiny_model, tmp_path):
        path = save_checkpoint(tiny_model, tmp_path / "c.json")
        document = orjson.loads(path.read_bytes())
        document["version"] = CHECKPOINT_VERSION + 1
        path.write_bytes(orjson.dumps(document))
        with pytest.raises(CheckpointVersionError):
            read_checkpoint(path)

    def test_truncated_file(self, tiny_model, tmp_path):
        path = save_checkpoint(tiny_model, tmp_path / "c.json")
        path.write_bytes(path.read_bytes()[:100])
        with pytest.raises(CheckpointError):
            read_checkpoint(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(CheckpointError):
            load_checkpoint(tmp_path / "none.json")

    def test_parameter_set_must_match_config(self, tiny_model, tmp_path):
        path = save_checkpoint(tiny_model, tmp_path / "c.json")
        document = orjson.loads(path.read_bytes())
        del document["params"]["ret.l1.W"]
        path.write_bytes(orjson.dumps(document))
        with pytest.raises(CheckpointError):
            read_checkpoint(path)
