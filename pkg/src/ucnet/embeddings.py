"""Pretrained word-vector tables and comment-to-sequence mapping.

The on-disk format is textual: a `<vocab_size> <dimension>` header line,
then one token per line followed by its components. The test suite and the
synthetic corpus ship small tables; real word2vec dumps can be converted to
this format offline.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

import numpy as np

from .lexical import tokenize

DEFAULT_MAX_TOKENS = 100


@dataclass(frozen=True)
class EmbeddingTable:
    dimension: int
    vectors: Mapping[str, np.ndarray] = field(repr=False)

    def __post_init__(self) -> None:
        if self.dimension <= 0:
            raise ValueError("embedding dimension must be positive")
        for token, vec in self.vectors.items():
            if vec.shape != (self.dimension,):
                raise ValueError(
                    f"token {token!r} has a vector of length {vec.shape}, "
                    f"expected {self.dimension}")
            if not np.all(np.isfinite(vec)):
                raise ValueError(f"token {token!r} has non-finite components")

    def __contains__(self, token: str) -> bool:
        return token in self.vectors

    def __len__(self) -> int:
        return len(self.vectors)

    def lookup(self, token: str) -> np.ndarray:
        return self.vectors[token]


def load_embeddings(path, expected_dim: int) -> EmbeddingTable:
    path = Path(path)
    lines = path.read_text(encoding="utf-8").splitlines()
    if not lines:
        raise ValueError(f"{path}: empty embedding file")
    header = lines[0].split()
    if len(header) != 2:
        raise ValueError(f"{path}: header must be '<vocab_size> <dimension>'")
    vocab_size, dim = int(header[0]), int(header[1])
    if dim != expected_dim:
        raise ValueError(
            f"{path}: file dimension {dim} does not match expected {expected_dim}")
    vectors: dict[str, np.ndarray] = {}
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split()
        token = parts[0]
        if token in vectors:
            raise ValueError(f"{path}: line {lineno}: duplicate token {token!r}")
        if len(parts) - 1 != expected_dim:
            raise ValueError(
                f"{path}: line {lineno}: token {token!r} has {len(parts) - 1} "
                f"values, expected {expected_dim}")
        vectors[token] = np.array([float(v) for v in parts[1:]], dtype=np.float64)
    if len(vectors) != vocab_size:
        raise ValueError(
            f"{path}: header promises {vocab_size} tokens, file has {len(vectors)}")
    return EmbeddingTable(dimension=expected_dim, vectors=vectors)


def save_embeddings(table: EmbeddingTable, path) -> None:
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"{len(table)} {table.dimension}\n")
        for token, vec in table.vectors.items():
            fh.write(token + " " + " ".join(f"{v:.17g}" for v in vec) + "\n")


def embed_comment(text: str, table: EmbeddingTable,
                  max_tokens: int = DEFAULT_MAX_TOKENS) -> np.ndarray:
    """Lower-cased in-vocabulary token vectors, in order, truncated.

    Out-of-vocabulary tokens are skipped rather than zero-filled so they do
    not dilute pooled embeddings. Returns a (k, dimension) array; k may be 0.
    """
    found: list[np.ndarray] = []
    for token in tokenize(text):
        lowered = token.lower()
        if lowered in table.vectors:
            found.append(table.vectors[lowered])
            if len(found) >= max_tokens:
                break
    if not found:
        return np.zeros((0, table.dimension))
    return np.stack(found)
