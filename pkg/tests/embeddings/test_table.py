"""
Embedding table and word2vec text format tests
"""

import numpy as np
import pytest

from retrofit_prae.embeddings.table import (
    EmbeddingParseError,
    EmbeddingTable,
    MissingWordError,
    load_embedding_file,
    save_embedding_file,
)


class TestLoadEmbeddingFile:
    """word2vec text parsing"""

    def test_parses_header_and_rows(self, tmp_path):
        path = tmp_path / "vectors.txt"
        path.write_text("2 3\na 1 2 3\nb 0 0 1\n", encoding="utf-8")
        table = load_embedding_file(path)
        assert table.dim == 3
        assert table.words == ("a", "b")
        assert table.vector("a").tolist() == [1.0, 2.0, 3.0]
        assert table.vector("b").tolist() == [0.0, 0.0, 1.0]

    def test_crlf_line_endings(self, tmp_path):
        path = tmp_path / "vectors.txt"
        path.write_bytes(b"1 2\r\nx 0.5 -1\r\n")
        assert load_embedding_file(path).vector("x").tolist() == [0.5, -1.0]

    def test_short_line_names_line_number(self, tmp_path):
        path = tmp_path / "vectors.txt"
        path.write_text("2 3\na 1 2 3\nb 0 1\n", encoding="utf-8")
        with pytest.raises(EmbeddingParseError) as info:
            load_embedding_file(path)
        assert info.value.line == 3

    def test_empty_file(self, tmp_path):
        path = tmp_path / "vectors.txt"
        path.write_text("", encoding="utf-8")
        with pytest.raises(EmbeddingParseError, match="missing header"):
            load_embedding_file(path)

    def test_count_mismatch(self, tmp_path):
        path = tmp_path / "vectors.txt"
        path.write_text("3 1\na 1\nb 2\n", encoding="utf-8")
        with pytest.raises(EmbeddingParseError):
            load_embedding_file(path)

    def test_duplicate_word(self, tmp_path):
        path = tmp_path / "vectors.txt"
        path.write_text("2 1\na 1\na 2\n", encoding="utf-8")
        with pytest.raises(EmbeddingParseError, match="duplicate"):
            load_embedding_file(path)

    def test_save_then_load_is_exact(self, tmp_path):
        rng = np.random.default_rng(0)
        table = EmbeddingTable([("w1", rng.standard_normal(4)), ("w2", rng.standard_normal(4))])
        path = save_embedding_file(table, tmp_path / "out.txt")
        assert load_embedding_file(path).bitwise_equal(table)


class TestEmbeddingTable:
    """Lookup and restriction"""

    def test_restrict_orders_and_reports_missing(self):
        table = EmbeddingTable({"a": [1.0], "b": [2.0], "c": [3.0]})
        assert table.restrict(["c", "a"]).words == ("c", "a")
        with pytest.raises(MissingWordError) as info:
            table.restrict(["a", "x", "y"])
        assert info.value.words == ["x", "y"]

    def test_missing_word_is_a_key_error(self):
        with pytest.raises(KeyError):
            EmbeddingTable({"a": [1.0]}).vector("b")

    def test_rejects_ragged_or_non_finite(self):
        with pytest.raises(ValueError):
            EmbeddingTable({"a": [1.0], "b": [np.nan]})
        with pytest.raises(ValueError):
            EmbeddingTable([])
