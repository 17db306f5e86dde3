"""
Recurrent autoencoders - biLSTM encoders and LSTM decoders for both modalities

All functions work on batches of K items. Description batches share one
length. Action batches are padded to the longest sequence; a mask freezes
the encoder state on padded frames so each item's final states are the
ones at its own last frame (forward) and first frame (backward).
"""

from dataclasses import dataclass
from typing import List, Mapping, Optional, Sequence, Tuple

import numpy as np

from retrofit_prae.ndkernel import ops
from retrofit_prae.ndkernel.layers import dense, lstm_step
from retrofit_prae.ndkernel.tape import Tape, Var
from retrofit_prae.ndkernel.tensor import TensorShapeError
from retrofit_prae.rprae.params import ModelConfig, dense_weights, lstm_weights

DSC = "ae.dsc"
ACT = "ae.act"


@dataclass(frozen=True)
class StopRule:
    """
    When closed-loop action generation ends

    Rule: a step is still when max |j_t+1 - j_t| < ``eps`` and moving
    otherwise. Generation ends at the ``patience``-th consecutive still step
    that follows the first moving step; that last still frame is kept. Still
    steps before the first movement never count, so a decoder that idles at
    the initial pose runs to ``t_max`` frames (initial frame included), the
    cap that applies in every case.
    """

    eps: float = 0.01
    patience: int = 2
    t_max: int = 40

    @classmethod
    def from_config(cls, cfg: ModelConfig) -> "StopRule":
        return cls(cfg.stop_eps, cfg.stop_patience, cfg.t_max)


def _tape(bound: Mapping[str, Var]) -> Tape:
    return next(iter(bound.values())).tape


def _blend(mask: np.ndarray, new: Var, old: Var) -> Var:
    return new * mask + old * (1.0 - mask)


def bilstm_encode(
    bound: Mapping[str, Var],
    prefix: str,
    inputs: Sequence[Var],
    mask: Optional[np.ndarray] = None,
) -> Var:
    """
    Encode a sequence of [K, d] inputs into z [K, z_dim]

    Args:
        bound: Bound parameters
        prefix: "ae.dsc" or "ae.act"
        inputs: One [K, d] Var per time step
        mask: Optional [K, T] validity mask (1 for real steps)

    Returns:
        tanh(proj(concat(final forward h, final backward h)))
    """
    if not inputs:
        raise TensorShapeError("cannot encode an empty sequence")
    fw = lstm_weights(bound, f"{prefix}.enc.fw")
    bw = lstm_weights(bound, f"{prefix}.enc.bw")
    tape = inputs[0].tape
    K = inputs[0].shape[0]
    zeros = tape.constant(np.zeros((K, fw.hidden)))

    def run(order: Sequence[int], weights) -> Var:
        h, c = zeros, zeros
        for t in order:
            h_new, c_new = lstm_step(inputs[t], h, c, weights)
            if mask is None:
                h, c = h_new, c_new
            else:
                m = mask[:, t : t + 1]
                h, c = _blend(m, h_new, h), _blend(m, c_new, c)
        return h

    steps = range(len(inputs))
    h_fw = run(steps, fw)
    h_bw = run(list(reversed(steps)), bw)
    return dense(ops.concat([h_fw, h_bw]), dense_weights(bound, f"{prefix}.enc.proj"), activation="tanh")


def _decoder_start(bound: Mapping[str, Var], prefix: str, z: Var) -> Tuple[Var, Var]:
    h = dense(z, dense_weights(bound, f"{prefix}.dec.init"), activation="tanh")
    c = z.tape.constant(np.zeros(h.shape))
    return h, c


def _check_z(bound: Mapping[str, Var], prefix: str, z: Var) -> None:
    z_dim = bound[f"{prefix}.dec.init.W"].shape[0]
    if z.shape[-1] != z_dim:
        raise TensorShapeError(f"latent code must have length {z_dim}, got {z.shape[-1]}")


# descriptions


def encode_descriptions(bound: Mapping[str, Var], words: Var, ids: np.ndarray) -> Var:
    """z_dsc [K, z] for token ids [K, T] looked up in the word matrix [V, e]"""
    ids = np.atleast_2d(ids)
    inputs = [ops.take(words, ids[:, t]) for t in range(ids.shape[1])]
    return bilstm_encode(bound, DSC, inputs)


def description_step_probs(bound: Mapping[str, Var], words: Var, z: Var, ids: np.ndarray) -> List[Var]:
    """
    Teacher-forced next-token distributions

    Step t reads token t and predicts token t + 1, for t = 0 .. T-2.
    """
    _check_z(bound, DSC, z)
    lstm = lstm_weights(bound, f"{DSC}.dec.lstm")
    head = dense_weights(bound, f"{DSC}.dec.out")
    h, c = _decoder_start(bound, DSC, z)
    probs: List[Var] = []
    for t in range(ids.shape[1] - 1):
        h, c = lstm_step(ops.take(words, ids[:, t]), h, c, lstm)
        probs.append(ops.softmax(dense(h, head)))
    return probs


def generate_descriptions(
    bound: Mapping[str, Var],
    words: Var,
    z: Var,
    bos_id: int,
    eos_id: int,
    max_len: int,
) -> Tuple[List[List[int]], List[List[np.ndarray]]]:
    """
    Greedy closed-loop decoding

    Returns:
        (emitted ids per item, per-step distributions per item); each item
        stops after emitting EOS or ``max_len`` tokens
    """
    _check_z(bound, DSC, z)
    lstm = lstm_weights(bound, f"{DSC}.dec.lstm")
    head = dense_weights(bound, f"{DSC}.dec.out")
    K = z.shape[0]
    h, c = _decoder_start(bound, DSC, z)
    current = np.full(K, bos_id, dtype=np.int64)
    done = np.zeros(K, dtype=bool)
    tokens: List[List[int]] = [[] for _ in range(K)]
    dists: List[List[np.ndarray]] = [[] for _ in range(K)]
    for _ in range(max_len):
        h, c = lstm_step(ops.take(words, current), h, c, lstm)
        y = ops.softmax(dense(h, head)).value
        emitted = np.argmax(y, axis=1)
        for k in np.flatnonzero(~done):
            tokens[k].append(int(emitted[k]))
            dists[k].append(y[k].copy())
        done |= emitted == eos_id
        if done.all():
            break
        current = emitted
    return tokens, dists


# actions


def _step_inputs(tape: Tape, frames: np.ndarray, visual: np.ndarray) -> List[Var]:
    return [tape.constant(np.concatenate([frames[:, t], visual], axis=1)) for t in range(frames.shape[1])]


def encode_actions(
    bound: Mapping[str, Var],
    frames: np.ndarray,
    visual: np.ndarray,
    mask: Optional[np.ndarray] = None,
) -> Var:
    """
    z_act [K, z] for padded frames [K, T, joints] and scene features [K, visual]

    The scene features are appended to every frame.
    """
    if frames.ndim != 3 or visual.ndim != 2 or frames.shape[0] != visual.shape[0]:
        raise TensorShapeError(f"frames {list(frames.shape)} and visual {list(visual.shape)} do not form a batch")
    return bilstm_encode(bound, ACT, _step_inputs(_tape(bound), frames, visual), mask)


def action_predictions(bound: Mapping[str, Var], z: Var, frames: np.ndarray, visual: np.ndarray) -> Var:
    """
    Teacher-forced frame predictions [K, T, joints]

    Index 0 repeats the given initial frame; index t + 1 is predicted from
    the ground-truth frame t.
    """
    _check_z(bound, ACT, z)
    if frames.shape[1] < 2:
        raise TensorShapeError("action sequences need at least 2 frames")
    tape = z.tape
    lstm = lstm_weights(bound, f"{ACT}.dec.lstm")
    head = dense_weights(bound, f"{ACT}.dec.out")
    inputs = _step_inputs(tape, frames[:, :-1], visual)
    h, c = _decoder_start(bound, ACT, z)
    outputs = [tape.constant(frames[:, 0])]
    for x in inputs:
        h, c = lstm_step(x, h, c, lstm)
        outputs.append(dense(h, head))
    return ops.stack(outputs, axis=1)


def generate_actions(
    bound: Mapping[str, Var],
    z: Var,
    initial: np.ndarray,
    visual: np.ndarray,
    stop: StopRule,
    joint_limit: float = 0.8,
) -> List[np.ndarray]:
    """
    Closed-loop frame generation, each output fed back as the next input

    Args:
        bound: Bound parameters
        z: Latent codes [K, z]
        initial: Initial joints [K, joints]
        visual: Scene features [K, visual]
        stop: Stop rule
        joint_limit: Clamp for generated joints

    Returns:
        One [T_k, joints] array per item, initial frame included, T_k <= t_max
    """
    _check_z(bound, ACT, z)
    tape = z.tape
    lstm = lstm_weights(bound, f"{ACT}.dec.lstm")
    head = dense_weights(bound, f"{ACT}.dec.out")
    K = initial.shape[0]
    h, c = _decoder_start(bound, ACT, z)

    current = np.asarray(initial, dtype=np.float64)
    frames = [current]
    lengths = np.full(K, stop.t_max, dtype=np.int64)
    active = np.ones(K, dtype=bool)
    started = np.zeros(K, dtype=bool)
    still = np.zeros(K, dtype=np.int64)
    for t in range(1, stop.t_max):
        x = tape.constant(np.concatenate([current, visual], axis=1))
        h, c = lstm_step(x, h, c, lstm)
        out = np.clip(dense(h, head).value, -joint_limit, joint_limit)
        frames.append(out)

        moving = np.max(np.abs(out - current), axis=1) >= stop.eps
        started |= moving
        still = np.where(started & ~moving, still + 1, 0)
        finished = active & started & (still >= stop.patience)
        lengths[finished] = t + 1
        active &= ~finished
        if not active.any():
            break
        current = out

    stacked = np.stack(frames, axis=1)
    return [stacked[k, : lengths[k]].copy() for k in range(K)]
