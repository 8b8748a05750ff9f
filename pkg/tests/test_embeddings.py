import numpy as np
import pytest

from ucnet.embeddings import (EmbeddingTable, embed_comment, load_embeddings,
                              save_embeddings)


def write_table(path, rows, dim=None, count=None):
    dim = dim if dim is not None else len(rows[0][1])
    count = count if count is not None else len(rows)
    lines = [f"{count} {dim}"]
    for token, values in rows:
        lines.append(token + " " + " ".join(str(v) for v in values))
    path.write_text("\n".join(lines) + "\n")


class TestLoadEmbeddings:
    def test_three_token_file(self, tmp_path):
        path = tmp_path / "vec.txt"
        write_table(path, [("a", [1, 2, 3, 4]), ("b", [0, 0, 0, 1]),
                           ("c", [0.5, -1, 2, 0])])
        table = load_embeddings(path, 4)
        assert len(table) == 3
        assert table.dimension == 4
        assert np.array_equal(table.lookup("b"), [0, 0, 0, 1])

    def test_dimension_mismatch_names_token(self, tmp_path):
        path = tmp_path / "vec.txt"
        write_table(path, [("ok", [1, 2, 3, 4]), ("bad", [1, 2, 3])], dim=4)
        with pytest.raises(ValueError, match="bad"):
            load_embeddings(path, 4)

    def test_expected_dim_mismatch(self, tmp_path):
        path = tmp_path / "vec.txt"
        write_table(path, [("a", [1, 2, 3])])
        with pytest.raises(ValueError, match="dimension"):
            load_embeddings(path, 4)

    def test_duplicate_token(self, tmp_path):
        path = tmp_path / "vec.txt"
        write_table(path, [("tok", [1, 2]), ("tok", [3, 4])])
        with pytest.raises(ValueError, match="tok"):
            load_embeddings(path, 2)

    def test_header_count_mismatch(self, tmp_path):
        path = tmp_path / "vec.txt"
        write_table(path, [("a", [1, 2])], count=5)
        with pytest.raises(ValueError, match="5"):
            load_embeddings(path, 2)

    def test_round_trip_is_exact(self, tmp_path):
        rng = np.random.default_rng(0)
        vectors = {f"tok{i}": rng.normal(size=300) for i in range(10)}
        table = EmbeddingTable(dimension=300, vectors=vectors)
        path = tmp_path / "vec.txt"
        save_embeddings(table, path)
        again = load_embeddings(path, 300)
        assert len(again) == 10
        for token, vec in vectors.items():
            assert np.array_equal(again.lookup(token), vec)


def toy_table():
    return EmbeddingTable(dimension=2, vectors={
        "fake": np.array([1.0, 0.0]),
        "video": np.array([0.0, 1.0]),
        "word": np.array([0.5, 0.5]),
    })


class TestEmbedComment:
    def test_all_oov_gives_empty_sequence(self):
        seq = embed_comment("uncovered tokens only", toy_table())
        assert seq.shape == (0, 2)

    def test_in_vocabulary_order_preserved(self):
        seq = embed_comment("Fake video", toy_table())
        assert seq.shape == (2, 2)
        assert np.array_equal(seq[0], [1.0, 0.0])
        assert np.array_equal(seq[1], [0.0, 1.0])

    def test_truncation_keeps_prefix(self):
        text = " ".join(["word"] * 150)
        seq = embed_comment(text, toy_table(), max_tokens=100)
        assert seq.shape == (100, 2)
        assert np.array_equal(seq[0], [0.5, 0.5])

    def test_oov_skipped_not_zero_filled(self):
        seq = embed_comment("fake mystery video", toy_table())
        assert seq.shape == (2, 2)

    def test_vectors_equal_stored_rows(self):
        table = toy_table()
        seq = embed_comment("word fake", table)
        assert np.array_equal(seq[0], table.lookup("word"))
        assert np.array_equal(seq[1], table.lookup("fake"))

    def test_table_validation(self):
        with pytest.raises(ValueError):
            EmbeddingTable(dimension=3, vectors={"a": np.zeros(2)})
        with pytest.raises(ValueError):
            EmbeddingTable(dimension=2,
                           vectors={"a": np.array([np.nan, 0.0])})
