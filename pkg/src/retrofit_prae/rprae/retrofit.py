"""
Retrofit layer - three tanh dense layers mapping pre-trained embeddings
into vectors the description autoencoder can ground
"""

from typing import Mapping

from retrofit_prae.ndkernel import ops
from retrofit_prae.ndkernel.layers import dense
from retrofit_prae.ndkernel.tape import Tape, Var
from retrofit_prae.ndkernel.tensor import TensorShapeError
from retrofit_prae.rprae.params import ModelParams, dense_weights

RETROFIT_LAYERS = ("ret.l1", "ret.l2", "ret.l3")


def retrofit_forward(bound: Mapping[str, Var], e: Var) -> Var:
    """
    tanh(W3 tanh(W2 tanh(W1 e + b1) + b2) + b3)

    Args:
        bound: Parameters bound on the tape of ``e``
        e: One embedding [dim] or a stack of them [V, dim]

    Returns:
        Retrofitted vectors, same shape as ``e``
    """
    dim_in = bound["ret.l1.W"].shape[0]
    if e.shape[-1] != dim_in:
        raise TensorShapeError(f"retrofit expects embeddings of dim {dim_in}, got {e.shape[-1]}")
    out = e
    for prefix in RETROFIT_LAYERS:
        out = dense(out, dense_weights(bound, prefix), activation="tanh")
    return out


def word_matrix(params: ModelParams, bound: Mapping[str, Var], tape: Tape, detach: bool = False) -> Var:
    """
    Description-side word vectors for the whole vocabulary [V, dim]

    The PRAE ablation passes the pre-trained vectors through unchanged.
    With ``detach`` no gradient reaches the retrofit layer.
    """
    table = tape.constant(params.embedding_matrix())
    if not params.config.use_retrofit:
        return table
    words = retrofit_forward(bound, table)
    return ops.detach(words) if detach else words
