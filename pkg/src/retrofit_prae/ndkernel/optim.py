"""
Adam optimizer over immutable parameter states

``adam_step`` never mutates: it returns new ParamState objects, so the
caller decides which parameter set an iteration commits.
"""

from dataclasses import dataclass
from typing import List, Mapping, Sequence, Union

import numpy as np

from retrofit_prae.ndkernel.tensor import Tensor, TensorShapeError


@dataclass(frozen=True)
class AdamHyper:
    lr: float = 0.001
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8


@dataclass(frozen=True)
class ParamState:
    """A learnable parameter with its Adam moments"""

    name: str
    value: Tensor
    adam_m: Tensor
    adam_v: Tensor
    step: int = 0

    def __post_init__(self) -> None:
        if self.adam_m.shape != self.value.shape or self.adam_v.shape != self.value.shape:
            raise TensorShapeError(f"Adam moments of '{self.name}' do not match its shape {list(self.value.shape)}")
        if self.step < 0:
            raise ValueError(f"step of '{self.name}' must be non-negative")

    @classmethod
    def fresh(cls, name: str, value: Union[Tensor, np.ndarray]) -> "ParamState":
        tensor = value if isinstance(value, Tensor) else Tensor(value)
        zeros = Tensor.zeros(tensor.shape)
        return cls(name=name, value=tensor, adam_m=zeros, adam_v=zeros, step=0)

    def bitwise_equal(self, other: "ParamState") -> bool:
        return (
            self.name == other.name
            and self.step == other.step
            and self.value.bitwise_equal(other.value)
            and self.adam_m.bitwise_equal(other.adam_m)
            and self.adam_v.bitwise_equal(other.adam_v)
        )


def adam_step(
    params: Sequence[ParamState],
    grads: Mapping[str, Union[np.ndarray, Tensor]],
    hyper: AdamHyper = AdamHyper(),
) -> List[ParamState]:
    """
    Apply one bias-corrected Adam update to every parameter in ``params``

    Args:
        params: Parameters to update
        grads: Gradient per parameter name, same shapes
        hyper: Learning rate and moment decay rates

    Returns:
        Updated parameter states, step incremented by one
    """
    updated: List[ParamState] = []
    for state in params:
        if state.name not in grads:
            raise TensorShapeError(f"no gradient for parameter '{state.name}'")
        raw = grads[state.name]
        g = raw.array if isinstance(raw, Tensor) else np.asarray(raw, dtype=np.float64)
        if g.shape != state.value.shape:
            raise TensorShapeError(
                f"gradient of '{state.name}' has shape {list(g.shape)}, parameter {list(state.value.shape)}"
            )

        step = state.step + 1
        m = hyper.beta1 * state.adam_m.array + (1.0 - hyper.beta1) * g
        v = hyper.beta2 * state.adam_v.array + (1.0 - hyper.beta2) * (g * g)
        if hyper.lr == 0.0:
            value = state.value
        else:
            m_hat = m / (1.0 - hyper.beta1**step)
            v_hat = v / (1.0 - hyper.beta2**step)
            value = Tensor(state.value.array - hyper.lr * m_hat / (np.sqrt(v_hat) + hyper.eps))
        updated.append(ParamState(state.name, value, Tensor(m), Tensor(v), step))
    return updated
