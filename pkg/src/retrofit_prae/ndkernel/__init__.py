"""
Minimal differentiable compute kernel

Tensors, a recording Tape with reverse-mode gradients, LSTM/dense layers,
Adam, and a finite-difference checker. Everything is float64 numpy.
"""

from retrofit_prae.ndkernel import ops
from retrofit_prae.ndkernel.gradcheck import grad_check
from retrofit_prae.ndkernel.layers import (
    DenseWeights,
    LSTMWeights,
    dense,
    glorot_uniform,
    init_dense,
    init_lstm,
    lstm_step,
)
from retrofit_prae.ndkernel.optim import AdamHyper, ParamState, adam_step
from retrofit_prae.ndkernel.rng import RngStream
from retrofit_prae.ndkernel.tape import BackpropError, Node, Tape, Var, backprop, backprop_arrays, named_grads
from retrofit_prae.ndkernel.tensor import NonFiniteError, Tensor, TensorShapeError

__all__ = [
    "ops",
    "grad_check",
    "DenseWeights",
    "LSTMWeights",
    "dense",
    "glorot_uniform",
    "init_dense",
    "init_lstm",
    "lstm_step",
    "AdamHyper",
    "ParamState",
    "adam_step",
    "RngStream",
    "BackpropError",
    "Node",
    "Tape",
    "Var",
    "backprop",
    "backprop_arrays",
    "named_grads",
    "NonFiniteError",
    "Tensor",
    "TensorShapeError",
]
