"""
Tensor - Immutable float64 array value

Every parameter, input and gradient that crosses a module boundary is a
Tensor. Intermediate activations on a Tape stay plain numpy arrays.
"""

from typing import Any, Iterable, Optional, Sequence, Tuple

import numpy as np

from retrofit_prae.utils.errors import RetrofitPraeError


class TensorShapeError(RetrofitPraeError):
    """Raised when operand shapes are inconsistent"""

    pass


class NonFiniteError(RetrofitPraeError):
    """Raised when a NaN or Inf would enter a Tensor"""

    pass


class Tensor:
    """
    Immutable row-major float64 array

    Invariants:
    - product(shape) == number of elements, every dimension positive
    - every element finite
    """

    __slots__ = ("_array",)

    def __init__(self, data: Any, shape: Optional[Sequence[int]] = None):
        array = np.array(data, dtype=np.float64)
        if shape is not None:
            target = tuple(int(dim) for dim in shape)
            if int(np.prod(target, dtype=np.int64)) != array.size:
                raise TensorShapeError(
                    f"cannot lay out {array.size} values as shape {list(target)}"
                )
            array = array.reshape(target)
        if any(dim <= 0 for dim in array.shape):
            raise TensorShapeError(f"dimensions must be positive, got {list(array.shape)}")
        if not np.all(np.isfinite(array)):
            raise NonFiniteError("tensor data contains NaN or Inf")
        array.setflags(write=False)
        self._array = array

    @classmethod
    def zeros(cls, shape: Iterable[int]) -> "Tensor":
        return cls(np.zeros(tuple(shape)))

    @property
    def shape(self) -> Tuple[int, ...]:
        return tuple(self._array.shape)

    @property
    def size(self) -> int:
        return int(self._array.size)

    @property
    def data(self) -> np.ndarray:
        """Flat row-major view of the values (read-only)"""
        return self._array.reshape(-1)

    @property
    def array(self) -> np.ndarray:
        """Shaped read-only view of the values"""
        return self._array

    def numpy(self) -> np.ndarray:
        """Writable copy of the values"""
        return self._array.copy()

    def item(self) -> float:
        if self._array.size != 1:
            raise TensorShapeError(f"item() needs a single element, shape is {list(self.shape)}")
        return float(self._array.reshape(-1)[0])

    def bitwise_equal(self, other: "Tensor") -> bool:
        """True when shapes match and every float has identical bits"""
        return self.shape == other.shape and self._array.tobytes() == other._array.tobytes()

    def __repr__(self) -> str:
        return f"Tensor(shape={list(self.shape)}, data={np.array2string(self._array, threshold=8)})"
