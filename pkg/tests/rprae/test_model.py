"""
rPRAE forward pass and generation tests
"""

from dataclasses import replace

import numpy as np
import pytest

from retrofit_prae.embeddings.lexicon import SynonymLexicon
from retrofit_prae.embeddings.synth import synth_pretrained
from retrofit_prae.evalkit.dtw import dtw
from retrofit_prae.ndkernel.optim import ParamState
from retrofit_prae.ndkernel.tape import Tape, named_grads
from retrofit_prae.rprae.model import PairedBatch, RetrofitPRAE, forward_losses, pad_frames
from retrofit_prae.rprae.params import ModelConfig, ParamGroup, VocabularyError, init_model_params
from retrofit_prae.rprae.rae import StopRule
from retrofit_prae.simdata.describe import Description
from retrofit_prae.trainer.config import TrainConfig
from retrofit_prae.trainer.loop import train


@pytest.fixture
def samples(desk_dataset):
    return desk_dataset.training_samples()[:3]


@pytest.fixture
def model(tiny_model):
    return RetrofitPRAE(tiny_model)


class TestPadFrames:
    """Padding variable-length sequences"""

    def test_pads_with_last_frame(self):
        a = np.arange(6, dtype=float).reshape(3, 2)
        b = np.ones((1, 2))
        frames, mask, lengths = pad_frames([a, b])
        assert frames.shape == (2, 3, 2)
        assert lengths.tolist() == [3, 1]
        assert mask.tolist() == [[1, 1, 1], [1, 0, 0]]
        assert np.array_equal(frames[1], np.ones((3, 2)))


class TestForwardLosses:
    """Teacher-forced losses on a paired batch"""

    def test_total_is_exact_sum(self, tiny_model, samples):
        tape = Tape()
        losses = forward_losses(tiny_model, PairedBatch.from_samples(samples, tiny_model), tape)
        values = losses.values()
        assert values["L_all"] == values["L_dsc"] + values["L_act"] + values["L_shr"]
        assert all(v > 0 for v in values.values())

    def test_detached_description_branch_blocks_retrofit_gradients(self, tiny_model, samples):
        batch = PairedBatch.from_samples(samples, tiny_model)
        tape = Tape()
        grads = named_grads(tape, forward_losses(tiny_model, batch, tape, detach_retrofit=True).total)
        for name in tiny_model.group_names(ParamGroup.RET):
            assert not np.any(grads[name])
        assert any(np.any(grads[name]) for name in tiny_model.group_names(ParamGroup.AE))

    def test_retrofit_receives_gradients(self, tiny_model, samples):
        batch = PairedBatch.from_samples(samples, tiny_model)
        tape = Tape()
        grads = named_grads(tape, forward_losses(tiny_model, batch, tape).total)
        assert np.any(grads["ret.l1.W"])

    def test_action_loss_ignores_retrofit(self, tiny_model, samples):
        batch = PairedBatch.from_samples(samples, tiny_model)
        tape = Tape()
        grads = named_grads(tape, forward_losses(tiny_model, batch, tape).act)
        for name in tiny_model.group_names(ParamGroup.RET):
            assert not np.any(grads[name])

    def test_prae_ablation(self, tiny_config, tiny_model, lexicon, samples):
        prae = init_model_params(
            tiny_config.model_copy(update={"use_retrofit": False}), tiny_model.embeddings, lexicon.vocabulary(), 0
        )
        tape = Tape()
        losses = forward_losses(prae, PairedBatch.from_samples(samples, prae), tape)
        assert np.isfinite(losses.values()["L_all"])

    def test_unknown_token_rejected(self, tiny_model, samples):
        broken = replace(samples[0], description=Description(("BOS", "push", "blue", "fast", "EOS")))
        with pytest.raises(VocabularyError):
            PairedBatch.from_samples([broken], tiny_model)


class TestEncoding:
    """Latent codes"""

    def test_shapes(self, model, samples):
        assert model.encode_descriptions([s.description for s in samples]).shape == (3, 5)
        assert model.encode_actions([s.sequence for s in samples]).shape == (3, 5)
        assert model.encode_action(samples[0].sequence).shape == (5,)

    def test_word_order_matters(self, model):
        a = model.encode_description(Description(("BOS", "push", "red", "slowly", "EOS")))
        b = model.encode_description(Description(("BOS", "slowly", "red", "push", "EOS")))
        assert not np.allclose(a, b)

    def test_deterministic(self, model, samples):
        first = model.encode_actions([s.sequence for s in samples])
        second = model.encode_actions([s.sequence for s in samples])
        assert np.array_equal(first, second)

    def test_batched_matches_single(self, model, samples):
        batched = model.encode_descriptions([s.description for s in samples])
        single = model.encode_description(samples[1].description)
        assert np.allclose(batched[1], single, atol=1e-12)


class TestDecoding:
    """Greedy descriptions and closed-loop actions"""

    def test_description_length_and_distributions(self, model, samples):
        z = model.encode_actions([s.sequence for s in samples])
        tokens, dists = model.decode_descriptions(z)
        for row, steps in zip(tokens, dists):
            assert 1 <= len(row) <= 5
            assert len(steps) == len(row)
            for y in steps:
                assert y.shape == (42,)
                assert y.sum() == pytest.approx(1.0, abs=1e-9)
                assert np.all(y >= 0)

    def test_description_stops_at_max_len(self, model):
        tokens, _ = model.decode_description(np.zeros(5), max_len=2)
        assert len(tokens) <= 2

    def test_actions_are_bounded(self, model, samples):
        initial = np.stack([s.sequence.joints[0] for s in samples])
        visual = np.stack([s.sequence.visual for s in samples])
        generated = model.act_from_descriptions([s.description for s in samples], initial, visual)
        assert len(generated) == 3
        for k, joints in enumerate(generated):
            assert 2 <= len(joints) <= model.config.t_max
            assert np.array_equal(joints[0], initial[k])
            assert np.all(np.abs(joints[1:]) <= 0.8)

    def test_stop_rule_caps_length(self, model, samples):
        sample = samples[0]
        joints = model.decode_action(
            np.ones(5), sample.sequence.joints[0], sample.sequence.visual, StopRule(t_max=4)
        )
        assert len(joints) <= 4

    def test_describe_actions(self, model, samples):
        described = model.describe_actions([s.sequence for s in samples])
        assert len(described) == 3
        assert all(token in model.params.vocabulary for row in described for token in row)

    def test_retrofitted_table(self, model, tiny_model):
        table = model.retrofitted_table()
        assert list(table.words) == list(tiny_model.vocabulary)
        assert table.dim == 8
        assert np.all(np.abs(table.matrix(table.words)) < 1.0)


def settling_model(params, target):
    """Action decoder whose every output frame is ``target`` whatever its input"""
    updates = [
        ParamState.fresh(name, np.full(params.params[name].value.shape, fill))
        for name, fill in (("ae.act.dec.out.W", 0.0), ("ae.act.dec.out.b", target))
    ]
    return RetrofitPRAE(params.with_updates(updates))


class TestStopRule:
    """Closed-loop termination"""

    @pytest.mark.parametrize("patience", [1, 2, 5])
    def test_stops_after_patience_still_frames(self, tiny_model, patience):
        model = settling_model(tiny_model, 0.3)
        joints = model.decode_action(np.zeros(5), np.zeros(10), np.zeros(10), StopRule(eps=0.01, patience=patience))
        # initial frame, the single moving step, then the still steps
        assert len(joints) == patience + 2
        assert np.all(joints[1:] == 0.3)

    def test_idle_decoder_runs_to_cap(self, tiny_model):
        model = settling_model(tiny_model, 0.0)
        joints = model.decode_action(np.zeros(5), np.zeros(10), np.zeros(10), StopRule(eps=0.01, patience=2, t_max=12))
        assert len(joints) == 12

    def test_items_stop_independently(self, tiny_model):
        model = settling_model(tiny_model, 0.3)
        initial = np.stack([np.zeros(10), np.full(10, 0.3)])
        generated = model.decode_actions(np.zeros((2, 5)), initial, np.zeros((2, 10)), StopRule(patience=2, t_max=12))
        assert [len(j) for j in generated] == [4, 12]

    def test_small_steps_are_still(self, tiny_model):
        model = settling_model(tiny_model, 0.005)
        joints = model.decode_action(np.zeros(5), np.zeros(10), np.zeros(10), StopRule(eps=0.01, patience=1, t_max=9))
        assert len(joints) == 9


@pytest.fixture(scope="module")
def overfit_one(desk_dataset):
    """Parameters trained on a single pair until they memorize it"""
    lexicon = SynonymLexicon()
    config = ModelConfig(embed_dim=8, retrofit_hidden=8, hidden=16, z_dim=8, t_max=30)
    params = init_model_params(config, synth_pretrained(lexicon, 8, seed=0), lexicon.vocabulary(), seed=0)
    sample = desk_dataset.training_samples()[0]
    cfg = TrainConfig(model=config, iterations=500, n_ini=500, batch_size=2, lr=0.01, log_every=100)
    trained, _ = train([sample], params, cfg)
    return RetrofitPRAE(trained), sample


@pytest.mark.slow
class TestOverfitSinglePair:
    """A model trained on one pair reproduces both of its sides"""

    def test_description_round_trip(self, overfit_one):
        model, sample = overfit_one
        tokens, _ = model.decode_description(model.encode_description(sample.description))
        assert tokens == list(sample.description.tokens[1:])

    def test_action_round_trip(self, overfit_one):
        model, sample = overfit_one
        target = sample.sequence
        joints = model.decode_action(model.encode_action(target), target.joints[0], target.visual)
        assert dtw(joints, target.joints) < 0.5
