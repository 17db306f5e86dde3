"""
Tape - Reverse-mode automatic differentiation

Ops append nodes to a Tape in execution order, so node ids are already a
topological order. ``backprop`` walks the nodes backwards from a scalar loss
and pushes vector-Jacobian products to the inputs.
"""

from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from retrofit_prae.ndkernel.tensor import NonFiniteError, Tensor
from retrofit_prae.utils.errors import RetrofitPraeError

VJP = Callable[[np.ndarray], Sequence[Optional[np.ndarray]]]

LEAF_OPS = ("leaf", "param")


class BackpropError(RetrofitPraeError):
    """Raised for an invalid backward pass (non-scalar loss, foreign variables)"""

    pass


@dataclass
class Node:
    """One recorded operation"""

    op: str
    inputs: Tuple[int, ...]
    value: np.ndarray
    vjp: Optional[VJP] = None
    requires_grad: bool = False
    name: Optional[str] = None


class Var:
    """Handle to a value computed on a Tape"""

    __slots__ = ("tape", "id", "value")

    def __init__(self, tape: "Tape", node_id: int, value: np.ndarray):
        self.tape = tape
        self.id = node_id
        self.value = value

    @property
    def shape(self) -> Tuple[int, ...]:
        return tuple(self.value.shape)

    def __add__(self, other: Any) -> "Var":
        from retrofit_prae.ndkernel import ops

        return ops.add(self, other)

    def __radd__(self, other: Any) -> "Var":
        from retrofit_prae.ndkernel import ops

        return ops.add(other, self)

    def __sub__(self, other: Any) -> "Var":
        from retrofit_prae.ndkernel import ops

        return ops.sub(self, other)

    def __rsub__(self, other: Any) -> "Var":
        from retrofit_prae.ndkernel import ops

        return ops.sub(other, self)

    def __mul__(self, other: Any) -> "Var":
        from retrofit_prae.ndkernel import ops

        return ops.mul(self, other)

    def __rmul__(self, other: Any) -> "Var":
        from retrofit_prae.ndkernel import ops

        return ops.mul(other, self)

    def __neg__(self) -> "Var":
        from retrofit_prae.ndkernel import ops

        return ops.mul(self, -1.0)

    def __truediv__(self, other: float) -> "Var":
        from retrofit_prae.ndkernel import ops

        return ops.mul(self, 1.0 / float(other))

    def __matmul__(self, other: "Var") -> "Var":
        from retrofit_prae.ndkernel import ops

        return ops.matmul(self, other)

    def __repr__(self) -> str:
        return f"Var(id={self.id}, shape={list(self.shape)})"


class Tape:
    """
    Ordered record of operations

    With ``grad_enabled=False`` ops are evaluated but nothing is kept, which is
    how inference runs.
    """

    def __init__(self, grad_enabled: bool = True):
        self.grad_enabled = grad_enabled
        self.nodes: List[Node] = []

    def __len__(self) -> int:
        return len(self.nodes)

    def _append(self, node: Node) -> Var:
        if not self.grad_enabled:
            return Var(self, -1, node.value)
        self.nodes.append(node)
        return Var(self, len(self.nodes) - 1, node.value)

    def leaf(self, value: Union[Tensor, np.ndarray, float], name: Optional[str] = None) -> Var:
        """Differentiable input"""
        array = _as_array(value)
        return self._append(Node("leaf", (), array, requires_grad=True, name=name))

    def param(self, name: str, value: Union[Tensor, np.ndarray]) -> Var:
        """Named learnable parameter"""
        array = _as_array(value)
        return self._append(Node("param", (), array, requires_grad=True, name=name))

    def constant(self, value: Union[Tensor, np.ndarray, float]) -> Var:
        """Non-differentiable input"""
        array = _as_array(value)
        return self._append(Node("const", (), array))

    def record(self, op: str, inputs: Sequence[Var], value: np.ndarray, vjp: VJP) -> Var:
        """Append the result of an op; ``vjp`` maps the output gradient to input gradients"""
        for var in inputs:
            if var.tape is not self:
                raise BackpropError(f"op '{op}' mixes variables from different tapes")
        if not self.grad_enabled:
            return Var(self, -1, value)
        input_ids = tuple(var.id for var in inputs)
        requires = any(self.nodes[i].requires_grad for i in input_ids)
        return self._append(
            Node(op, input_ids, value, vjp=vjp if requires else None, requires_grad=requires)
        )

    def lift(self, value: Any) -> Var:
        """Pass Vars through, wrap anything else as a constant"""
        if isinstance(value, Var):
            return value
        return self.constant(value)


def _as_array(value: Union[Tensor, np.ndarray, float]) -> np.ndarray:
    if isinstance(value, Tensor):
        return value.array
    return np.asarray(value, dtype=np.float64)


def _resolve_loss(tape: Tape, loss: Union[Var, int]) -> int:
    if not tape.grad_enabled:
        raise BackpropError("tape was recorded with gradients disabled")
    loss_id = loss.id if isinstance(loss, Var) else int(loss)
    if not 0 <= loss_id < len(tape.nodes):
        raise BackpropError(f"node {loss_id} is not on this tape")
    if tape.nodes[loss_id].value.size != 1:
        raise BackpropError(
            f"loss must be scalar, node {loss_id} has shape {list(tape.nodes[loss_id].value.shape)}"
        )
    return loss_id


def backprop_arrays(tape: Tape, loss: Union[Var, int]) -> Dict[int, np.ndarray]:
    """
    Gradients of a scalar loss for every leaf and param node

    Leaves the loss does not depend on get zeros. Accumulation follows node
    order, so identical tapes give bit-identical gradients.
    """
    loss_id = _resolve_loss(tape, loss)
    nodes = tape.nodes
    pending: Dict[int, np.ndarray] = {loss_id: np.ones_like(nodes[loss_id].value)}
    leaf_grads: Dict[int, np.ndarray] = {}

    for node_id in range(loss_id, -1, -1):
        grad = pending.pop(node_id, None)
        if grad is None:
            continue
        node = nodes[node_id]
        if node.op in LEAF_OPS:
            leaf_grads[node_id] = grad
            continue
        if node.vjp is None:
            continue
        for input_id, input_grad in zip(node.inputs, node.vjp(grad)):
            if input_grad is None or not nodes[input_id].requires_grad:
                continue
            if input_id in pending:
                pending[input_id] = pending[input_id] + input_grad
            else:
                pending[input_id] = input_grad

    result: Dict[int, np.ndarray] = {}
    for node_id, node in enumerate(nodes):
        if node.op in LEAF_OPS:
            grad = leaf_grads.get(node_id)
            result[node_id] = np.zeros_like(node.value) if grad is None else grad
    return result


def backprop(tape: Tape, loss: Union[Var, int]) -> Dict[int, Tensor]:
    """Gradients of a scalar loss as Tensors, keyed by node id"""
    grads = backprop_arrays(tape, loss)
    try:
        return {node_id: Tensor(grad) for node_id, grad in grads.items()}
    except NonFiniteError as e:
        raise NonFiniteError(f"non-finite gradient: {e}") from e


def named_grads(tape: Tape, loss: Union[Var, int]) -> Dict[str, np.ndarray]:
    """Gradients keyed by parameter name; repeated registrations are summed"""
    grads = backprop_arrays(tape, loss)
    named: Dict[str, np.ndarray] = {}
    for node_id, grad in grads.items():
        node = tape.nodes[node_id]
        if node.op != "param" or node.name is None:
            continue
        named[node.name] = named[node.name] + grad if node.name in named else grad
    return named
