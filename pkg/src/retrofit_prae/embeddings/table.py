"""
Embedding table - word to float64 vector map, word2vec text format I/O
"""

from pathlib import Path
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple, Union

import numpy as np
from loguru import logger

from retrofit_prae.utils.errors import RetrofitPraeError


class EmbeddingParseError(RetrofitPraeError):
    """Raised for a malformed word2vec text file"""

    def __init__(self, message: str, line: int = 0):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


class MissingWordError(RetrofitPraeError, KeyError):
    """Raised when words are absent from a table"""

    def __init__(self, words: Sequence[str]):
        self.words = list(words)
        super().__init__(f"words not in embedding table: {', '.join(self.words)}")

    def __str__(self) -> str:
        return self.args[0]


class EmbeddingTable:
    """
    Immutable ordered word -> vector map

    Invariants: every vector has length ``dim`` and finite entries; words unique.
    """

    def __init__(self, entries: Union[Mapping[str, Iterable[float]], Sequence[Tuple[str, Iterable[float]]]]):
        items = list(entries.items()) if isinstance(entries, Mapping) else list(entries)
        if not items:
            raise ValueError("embedding table needs at least one word")
        words = [w for w, _ in items]
        if len(set(words)) != len(words):
            raise ValueError("embedding table words must be unique")
        matrix = np.array([np.asarray(v, dtype=np.float64) for _, v in items])
        if matrix.ndim != 2 or matrix.shape[1] == 0:
            raise ValueError("embedding vectors must share one positive dimension")
        if not np.all(np.isfinite(matrix)):
            raise ValueError("embedding vectors must be finite")
        matrix.setflags(write=False)
        self._words: Tuple[str, ...] = tuple(words)
        self._index: Dict[str, int] = {w: i for i, w in enumerate(words)}
        self._matrix = matrix

    @property
    def dim(self) -> int:
        return int(self._matrix.shape[1])

    @property
    def words(self) -> Tuple[str, ...]:
        return self._words

    def __len__(self) -> int:
        return len(self._words)

    def __contains__(self, word: object) -> bool:
        return word in self._index

    def vector(self, word: str) -> np.ndarray:
        if word not in self._index:
            raise MissingWordError([word])
        return self._matrix[self._index[word]]

    def matrix(self, words: Sequence[str]) -> np.ndarray:
        """Rows for ``words`` in the given order"""
        missing = [w for w in words if w not in self._index]
        if missing:
            raise MissingWordError(missing)
        return self._matrix[[self._index[w] for w in words]]

    def restrict(self, words: Sequence[str]) -> "EmbeddingTable":
        """Sub-table with exactly ``words``, in that order"""
        return EmbeddingTable(list(zip(words, self.matrix(words))))

    def items(self) -> List[Tuple[str, np.ndarray]]:
        return [(w, self._matrix[i]) for i, w in enumerate(self._words)]

    def bitwise_equal(self, other: "EmbeddingTable") -> bool:
        return self._words == other._words and self._matrix.tobytes() == other._matrix.tobytes()


def _parse_line(raw: str, line_no: int, dim: int) -> Tuple[str, np.ndarray]:
    parts = raw.split()
    if len(parts) != dim + 1:
        raise EmbeddingParseError(f"expected a token and {dim} values, found {len(parts) - 1} values", line_no)
    try:
        vector = np.array([float(p) for p in parts[1:]], dtype=np.float64)
    except ValueError as e:
        raise EmbeddingParseError(f"bad number ({e})", line_no) from e
    if not np.all(np.isfinite(vector)):
        raise EmbeddingParseError("non-finite value", line_no)
    return parts[0], vector


def load_embedding_file(path: Union[str, Path]) -> EmbeddingTable:
    """
    Read a word2vec text file: header "<count> <dim>", then "<token> v1 ... vdim" lines

    Args:
        path: File to read (UTF-8, LF or CRLF line endings)

    Returns:
        Parsed table in file order

    Raises:
        EmbeddingParseError: malformed header or line, count mismatch, duplicate word
    """
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    lines = text.splitlines()
    if not lines or not lines[0].strip():
        raise EmbeddingParseError("missing header")

    header = lines[0].split()
    if len(header) != 2:
        raise EmbeddingParseError("header must be '<count> <dim>'", 1)
    try:
        count, dim = int(header[0]), int(header[1])
    except ValueError as e:
        raise EmbeddingParseError("header must hold two integers", 1) from e
    if count < 1 or dim < 1:
        raise EmbeddingParseError("header counts must be positive", 1)

    entries: List[Tuple[str, np.ndarray]] = []
    seen: Dict[str, int] = {}
    for line_no, raw in enumerate(lines[1:], start=2):
        if not raw.strip():
            continue
        word, vector = _parse_line(raw, line_no, dim)
        if word in seen:
            raise EmbeddingParseError(f"duplicate word '{word}' (first on line {seen[word]})", line_no)
        seen[word] = line_no
        entries.append((word, vector))

    if len(entries) != count:
        raise EmbeddingParseError(f"header announces {count} words, file has {len(entries)}")

    logger.info(f"Loaded {count} embeddings of dim {dim} from {path}")
    return EmbeddingTable(entries)


def save_embedding_file(table: EmbeddingTable, path: Union[str, Path]) -> Path:
    """Write a table in word2vec text format with round-trip exact floats"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    rows = [f"{len(table)} {table.dim}"]
    for word, vector in table.items():
        rows.append(word + " " + " ".join(repr(float(x)) for x in vector))
    path.write_text("\n".join(rows) + "\n", encoding="utf-8")
    logger.debug(f"Wrote {len(table)} embeddings to {path}")
    return path
