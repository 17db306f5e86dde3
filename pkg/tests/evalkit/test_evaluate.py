"""
Experiment evaluation and report table tests
"""

from itertools import islice

import pytest

from retrofit_prae.embeddings.lexicon import SynonymLexicon
from retrofit_prae.embeddings.synth import synth_pretrained
from retrofit_prae.evalkit.evaluate import (
    Aggregate,
    ConfigCompatibilityError,
    EvalConfig,
    EvalMode,
    EvalReport,
    evaluate,
)
from retrofit_prae.evalkit.report import compare_reports, report_tables, rich_table, write_report
from retrofit_prae.rprae.params import ModelConfig, init_model_params
from retrofit_prae.simdata.dataset import Cell
from retrofit_prae.trainer.config import TrainConfig
from retrofit_prae.trainer.loop import train


@pytest.fixture
def mixed_samples(desk_dataset):
    """A few samples from every cell"""
    return [s for cell in Cell for s in islice(desk_dataset.samples(cell), 3)]


@pytest.fixture
def dsc2act(tiny_model, mixed_samples):
    return evaluate(tiny_model, mixed_samples, fold=1, mode="dsc2act", cfg=EvalConfig(batch_size=4))


class TestAggregate:
    """Mean and population standard deviation"""

    def test_of(self):
        agg = Aggregate.of([0.0, 100.0])
        assert (agg.mean, agg.std, agg.n) == (50.0, 50.0, 2)


class TestEvalConfig:
    """Scale presets"""

    def test_speed_thresholds(self):
        assert EvalConfig.for_scale("desk").speed_threshold == 16
        assert EvalConfig.for_scale("full").speed_threshold == 30
        assert EvalConfig.for_scale("desk", t_slow=30, t_fast=20).speed_threshold == 25


class TestEvaluate:
    """Both translation directions"""

    def test_act2dsc(self, tiny_model, mixed_samples):
        report = evaluate(tiny_model, mixed_samples, fold=1, mode=EvalMode.ACT2DSC)
        assert report.metrics() == ["description_success"]
        overall = report.get("all", "all", "all", "description_success")
        assert 0.0 <= overall.mean <= 100.0
        assert overall.n == len(report.items)
        train = report.get("train", "all", "all", "description_success")
        test = report.get("test", "all", "all", "description_success")
        assert train.n + test.n == overall.n

    def test_dsc2act_metrics(self, dsc2act, mixed_samples):
        assert dsc2act.metrics() == ["dtw", "speed_success", "task_success"]
        assert dsc2act.get("all", "all", "all", "dtw").n == len(mixed_samples)
        assert dsc2act.get("all", "all", "all", "dtw").mean > 0.0
        for item in dsc2act.items:
            assert item["speed_success"] in (0.0, 100.0)

    def test_dsc2act_breakdowns(self, dsc2act, mixed_samples):
        counts = dsc2act.groups("count")
        assert set(counts) <= {"0", "1", "2", "3"}
        assert "0" in counts
        total = sum(dsc2act.get("all", "count", g, "dtw").n for g in counts)
        assert total == len(mixed_samples)
        assert dsc2act.groups("pos")[0] == "-"

    def test_unseen_words_are_from_test_set(self, dsc2act, lexicon):
        for word in dsc2act.groups("word"):
            assert lexicon.group_of(word).members.index(word) == 0

    def test_threaded_matches_sequential(self, tiny_model, mixed_samples, dsc2act):
        threaded = evaluate(tiny_model, mixed_samples, fold=1, mode="dsc2act", cfg=EvalConfig(batch_size=4, threads=3))
        assert threaded.entries == dsc2act.entries

    def test_no_samples(self, tiny_model):
        with pytest.raises(ConfigCompatibilityError):
            evaluate(tiny_model, [], fold=1, mode="act2dsc")

    def test_json_round_trip(self, dsc2act, tmp_path):
        loaded = EvalReport.read_json(dsc2act.write_json(tmp_path / "r.json"))
        assert loaded.entries == dsc2act.entries
        assert loaded.mode == EvalMode.DSC2ACT


@pytest.fixture(scope="module")
def four_actions(desk_dataset):
    """One training pair for each of the first four actions"""
    first = {}
    for sample in desk_dataset.training_samples():
        first.setdefault(sample.spec.key, sample)
    return list(first.values())[:4]


@pytest.mark.slow
class TestOverfitFourActions:
    """A model memorizing four pairs describes all of them"""

    def test_training_description_success_is_total(self, four_actions):
        lexicon = SynonymLexicon()
        config = ModelConfig(embed_dim=8, retrofit_hidden=8, hidden=16, z_dim=8, t_max=30)
        params = init_model_params(config, synth_pretrained(lexicon, 8, seed=0), lexicon.vocabulary(), seed=0)
        cfg = TrainConfig(model=config, iterations=800, n_ini=800, batch_size=8, lr=0.01, log_every=100)
        trained, _ = train(four_actions, params, cfg)

        report = evaluate(trained, four_actions, fold=1, mode=EvalMode.ACT2DSC)
        agg = report.get("train", "all", "all", "description_success")
        assert agg.n == 4
        assert agg.mean == 100.0


class TestReportTables:
    """CSV layouts"""

    def test_dsc2act_tables(self, dsc2act, tmp_path):
        tables = report_tables(dsc2act)
        assert set(tables) == {
            f"{metric}_by_{kind}" for metric in ("dtw", "speed_success", "task_success") for kind in ("count", "pos", "word")
        }
        rows = tables["dtw_by_count"]
        assert rows[0][:2] == ["split", "stat"] and rows[0][-1] == "all"
        assert len(rows) == 1 + 3 * 3

        written = write_report(dsc2act, tmp_path)
        assert written[0].name == "report_dsc2act.json"
        assert (tmp_path / "dsc2act_task_success_by_pos.csv").exists()

    def test_act2dsc_table(self, tiny_model, mixed_samples):
        report = evaluate(tiny_model, mixed_samples, fold=1, mode="act2dsc")
        rows = report_tables(report)["description_success"]
        assert rows[0] == ["split", "mean", "std", "n"]
        assert [r[0] for r in rows[1:]] == ["train", "test", "all"]

    def test_compare_reports(self, dsc2act):
        rows = compare_reports({"rPRAE": dsc2act, "PRAE": dsc2act}, "dtw")
        assert rows[0][:2] == ["split", "model"]
        assert [r[1] for r in rows[1:3]] == ["rPRAE", "PRAE"]
        assert rows[1][2:] == rows[2][2:]
        assert rich_table(rows, "dtw").row_count == 6
