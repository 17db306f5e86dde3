"""
rPRAE model - batching, the training forward pass and cross-modal generation
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from retrofit_prae.embeddings.lexicon import BOS, EOS, MERGED_SYMBOL
from retrofit_prae.embeddings.table import EmbeddingTable
from retrofit_prae.ndkernel.tape import Tape
from retrofit_prae.rprae.losses import LossBreakdown, loss_act, loss_dsc, loss_shr, total_loss
from retrofit_prae.rprae.params import ModelParams
from retrofit_prae.rprae.rae import (
    StopRule,
    action_predictions,
    description_step_probs,
    encode_actions,
    encode_descriptions,
    generate_actions,
    generate_descriptions,
)
from retrofit_prae.rprae.retrofit import word_matrix
from retrofit_prae.simdata.dataset import PairedSample
from retrofit_prae.simdata.describe import Description
from retrofit_prae.simdata.trajectory import ActionSequence


def pad_frames(sequences: Sequence[np.ndarray]) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Stack variable-length [T, D] arrays into [K, T_max, D]

    Padding repeats each item's last frame.

    Returns:
        (frames, mask [K, T_max], lengths [K])
    """
    lengths = np.array([len(s) for s in sequences], dtype=np.int64)
    t_max = int(lengths.max())
    frames = np.stack([np.concatenate([s, np.repeat(s[-1:], t_max - len(s), axis=0)]) for s in sequences])
    mask = (np.arange(t_max)[None, :] < lengths[:, None]).astype(np.float64)
    return frames, mask, lengths


@dataclass(frozen=True, eq=False)
class PairedBatch:
    """K paired items as arrays"""

    token_ids: np.ndarray  # [K, T_d]
    frames: np.ndarray  # [K, T_max, joints]
    visual: np.ndarray  # [K, visual]
    mask: np.ndarray  # [K, T_max]
    lengths: np.ndarray  # [K]

    @property
    def size(self) -> int:
        return int(self.token_ids.shape[0])

    @classmethod
    def from_samples(cls, samples: Sequence[PairedSample], params: ModelParams) -> "PairedBatch":
        if not samples:
            raise ValueError("a batch needs at least one sample")
        token_ids = np.stack([params.token_ids(s.description.tokens) for s in samples])
        frames, mask, lengths = pad_frames([s.sequence.joints for s in samples])
        visual = np.stack([s.sequence.visual for s in samples])
        return cls(token_ids, frames, visual, mask, lengths)


def forward_losses(
    params: ModelParams,
    batch: PairedBatch,
    tape: Tape,
    margin: float = 1.0,
    detach_retrofit: bool = False,
) -> LossBreakdown:
    """
    Teacher-forced pass over a paired batch

    Args:
        params: Model parameters
        batch: Paired items
        tape: Tape to record on
        margin: Binding-loss margin
        detach_retrofit: Stop gradients at the retrofitted word vectors

    Returns:
        L_dsc, L_act, L_shr and L_all on ``tape``
    """
    bound = params.bind(tape)
    words = word_matrix(params, bound, tape, detach=detach_retrofit)

    z_dsc = encode_descriptions(bound, words, batch.token_ids)
    probs = description_step_probs(bound, words, z_dsc, batch.token_ids)
    l_dsc = loss_dsc(probs, batch.token_ids[:, 1:])

    z_act = encode_actions(bound, batch.frames, batch.visual, batch.mask)
    pred = action_predictions(bound, z_act, batch.frames, batch.visual)
    l_act = loss_act(pred, batch.frames, batch.lengths)

    l_shr = loss_shr(z_act, z_dsc, margin)
    return total_loss(l_dsc, l_act, l_shr)


class RetrofitPRAE:
    """
    Inference facade over fixed parameters

    Responsibilities:
    - Encode descriptions and actions into the shared latent space
    - Decode latents into descriptions (greedy) and joint sequences (closed loop)
    - Translate action -> description and description -> action
    - Expose the retrofitted embedding table

    Parameters are never mutated, so one instance may serve several threads.
    """

    def __init__(self, params: ModelParams, stop: Optional[StopRule] = None):
        self.params = params
        self.config = params.config
        self.stop = stop or StopRule.from_config(params.config)

    def _graph(self):
        tape = Tape(grad_enabled=False)
        bound = self.params.bind(tape)
        return tape, bound, word_matrix(self.params, bound, tape)

    # latent codes

    def encode_descriptions(self, descriptions: Sequence[Description]) -> np.ndarray:
        _, bound, words = self._graph()
        ids = np.stack([self.params.token_ids(d.tokens) for d in descriptions])
        return encode_descriptions(bound, words, ids).value

    def encode_description(self, description: Description) -> np.ndarray:
        return self.encode_descriptions([description])[0]

    def encode_actions(self, sequences: Sequence[ActionSequence]) -> np.ndarray:
        _, bound, _ = self._graph()
        frames, mask, _ = pad_frames([s.joints for s in sequences])
        visual = np.stack([s.visual for s in sequences])
        return encode_actions(bound, frames, visual, mask).value

    def encode_action(self, sequence: ActionSequence) -> np.ndarray:
        return self.encode_actions([sequence])[0]

    # decoding

    def decode_descriptions(
        self, z: np.ndarray, max_len: Optional[int] = None
    ) -> Tuple[List[List[str]], List[List[np.ndarray]]]:
        tape, bound, words = self._graph()
        ids, dists = generate_descriptions(
            bound,
            words,
            tape.constant(np.atleast_2d(z)),
            bos_id=self.symbol_id("bos"),
            eos_id=self.symbol_id("eos"),
            max_len=max_len or self.config.max_description_len,
        )
        return [[self.params.token(i) for i in row] for row in ids], dists

    def decode_description(self, z: np.ndarray, max_len: Optional[int] = None) -> Tuple[List[str], List[np.ndarray]]:
        tokens, dists = self.decode_descriptions(np.atleast_2d(z), max_len)
        return tokens[0], dists[0]

    def decode_actions(
        self,
        z: np.ndarray,
        initial: np.ndarray,
        visual: np.ndarray,
        stop: Optional[StopRule] = None,
    ) -> List[np.ndarray]:
        tape, bound, _ = self._graph()
        return generate_actions(
            bound,
            tape.constant(np.atleast_2d(z)),
            np.atleast_2d(initial),
            np.atleast_2d(visual),
            stop or self.stop,
            self.config.joint_limit,
        )

    def decode_action(
        self,
        z: np.ndarray,
        initial: np.ndarray,
        visual: np.ndarray,
        stop: Optional[StopRule] = None,
    ) -> np.ndarray:
        return self.decode_actions(z, initial, visual, stop)[0]

    # cross-modal translation

    def describe_actions(self, sequences: Sequence[ActionSequence]) -> List[List[str]]:
        """Action -> description"""
        tokens, _ = self.decode_descriptions(self.encode_actions(sequences))
        return tokens

    def act_from_descriptions(
        self,
        descriptions: Sequence[Description],
        initial: np.ndarray,
        visual: np.ndarray,
    ) -> List[np.ndarray]:
        """Description -> action, starting from ``initial`` joints in the given scene"""
        return self.decode_actions(self.encode_descriptions(descriptions), initial, visual)

    def symbol_id(self, which: str) -> int:
        vocab = self.params.vocabulary
        if MERGED_SYMBOL in vocab:
            return vocab.index(MERGED_SYMBOL)
        return vocab.index(BOS if which == "bos" else EOS)

    def retrofitted_table(self) -> EmbeddingTable:
        """Description-side vectors of every vocabulary token"""
        _, _, words = self._graph()
        return EmbeddingTable(list(zip(self.params.vocabulary, words.value)))
