"""Unified-comments network: weighted comment pooling over LSTM embeddings.

Per comment, a binary fakeness-indicator vector is mapped through a sigmoid
dense head to a scalar weight in (0, 1); the comment's word-vector sequence
runs through an LSTM whose final hidden state is the comment embedding. The
mean of the weight-scaled embeddings is the video's unified embedding,
which is concatenated with the selected simple features and classified by a
ReLU dense layer into a 2-way softmax over (real, fake).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import neural, serialize
from .corpus import Comment, Dataset, VideoRecord, nfc
from .embeddings import EmbeddingTable, embed_comment
from .lexical import (FEATURE_NAMES, LexiconSet, TitleScorer, extract_features,
                      lexicon_digest, load_fakeness_phrases)

logger = logging.getLogger(__name__)

DEFAULT_LSTM_HIDDEN = 300
DEFAULT_HIDDEN_UNITS = 4
N_CLASSES = 2  # (real, fake)


def fakeness_vector(comment_text: str, phrases: Sequence[str]) -> np.ndarray:
    """Binary presence vector of the indicator phrases in one comment."""
    if not phrases:
        raise ValueError("phrase list must be non-empty")
    folded = nfc(comment_text).casefold()
    return np.array([1.0 if nfc(p).casefold() in folded else 0.0
                     for p in phrases], dtype=np.float64)


@dataclass
class TrainingConfig:
    learning_rate: float = 1e-4
    epochs: int = 30
    batch_size: int = 16
    seed: int = 0
    max_comments_per_video: int = 200
    max_tokens_per_comment: int = 100

    def __post_init__(self) -> None:
        if self.learning_rate <= 0 or self.batch_size <= 0:
            raise ValueError("learning_rate and batch_size must be positive")
        if self.epochs < 0:
            raise ValueError("epochs must be >= 0")
        if self.max_comments_per_video <= 0 or self.max_tokens_per_comment <= 0:
            raise ValueError("comment/token caps must be positive")


@dataclass
class UCNetParams:
    lstm: neural.LSTMCell
    weight_head: neural.DenseLayer  # (1, n_phrases), sigmoid
    hidden: neural.DenseLayer       # (hidden_units, lstm_hidden + n_features), relu
    output: neural.DenseLayer       # (2, hidden_units), softmax

    def __post_init__(self) -> None:
        if self.weight_head.out_dim != 1:
            raise ValueError("weight head must have a single output")
        if self.hidden.in_dim != self.lstm.hidden_dim + self.n_features:
            raise ValueError("hidden layer width does not match lstm + features")
        if self.output.in_dim != self.hidden.out_dim or self.output.out_dim != N_CLASSES:
            raise ValueError("output layer shapes are inconsistent")

    @property
    def n_phrases(self) -> int:
        return self.weight_head.in_dim

    @property
    def n_features(self) -> int:
        return self.hidden.in_dim - self.lstm.hidden_dim


def init_params(rng: np.random.Generator, embedding_dim: int, n_phrases: int,
                n_features: int, lstm_hidden: int = DEFAULT_LSTM_HIDDEN,
                hidden_units: int = DEFAULT_HIDDEN_UNITS) -> UCNetParams:
    return UCNetParams(
        lstm=neural.init_lstm(rng, embedding_dim, lstm_hidden),
        weight_head=neural.init_dense(rng, 1, n_phrases, "sigmoid"),
        hidden=neural.init_dense(rng, hidden_units, lstm_hidden + n_features, "relu"),
        output=neural.init_dense(rng, N_CLASSES, hidden_units, "softmax"),
    )


@dataclass(frozen=True)
class Prediction:
    p_real: float
    p_fake: float

    def __post_init__(self) -> None:
        if abs(self.p_real + self.p_fake - 1.0) > 1e-12:
            raise ValueError("class probabilities must sum to 1")


def classify(prediction: Prediction) -> str:
    """Argmax readout; the 0.5 tie goes to fake (conservative flagging)."""
    return "fake" if prediction.p_fake >= 0.5 else "real"


@dataclass
class PreparedVideo:
    """Embedding sequences and fakeness vectors for one video, ready to batch."""

    comment_seqs: list[np.ndarray]  # (length_i, embedding_dim) each
    fvs: np.ndarray                 # (n_comments, n_phrases)
    features: np.ndarray            # (n_features,)
    label: int | None = None


def _select_comments(comments: Sequence[Comment],
                     max_comments: int) -> Sequence[Comment]:
    if len(comments) <= max_comments:
        return comments
    # Keep the most recent comments; ISO-8601 strings sort chronologically.
    ranked = sorted(comments, key=lambda c: (c.published_at, c.id), reverse=True)
    return ranked[:max_comments]


def prepare_video(comments: Sequence[Comment], features: np.ndarray,
                  table: EmbeddingTable, phrases: Sequence[str],
                  max_comments: int = 200, max_tokens: int = 100,
                  label: int | None = None) -> PreparedVideo:
    chosen = _select_comments(comments, max_comments)
    seqs = [embed_comment(c.text, table, max_tokens) for c in chosen]
    if chosen:
        fvs = np.stack([fakeness_vector(c.text, phrases) for c in chosen])
    else:
        fvs = np.zeros((0, len(phrases)))
    return PreparedVideo(comment_seqs=seqs, fvs=fvs,
                         features=np.asarray(features, dtype=np.float64),
                         label=label)


@dataclass
class _Batch:
    seqs: np.ndarray      # (n_comments_total, t_max, embedding_dim)
    lengths: np.ndarray   # (n_comments_total,)
    fvs: np.ndarray       # (n_comments_total, n_phrases)
    offsets: np.ndarray   # (n_videos + 1,) comment segment boundaries
    features: np.ndarray  # (n_videos, n_features)
    labels: np.ndarray | None


def _collate(videos: Sequence[PreparedVideo], embedding_dim: int,
             n_phrases: int) -> _Batch:
    counts = [len(v.comment_seqs) for v in videos]
    offsets = np.concatenate([[0], np.cumsum(counts)]).astype(np.int64)
    total = int(offsets[-1])
    lengths = np.array([len(seq) for v in videos for seq in v.comment_seqs],
                       dtype=np.int64)
    t_max = int(lengths.max()) if total else 0
    seqs = np.zeros((total, t_max, embedding_dim))
    row = 0
    for v in videos:
        for seq in v.comment_seqs:
            if len(seq):
                seqs[row, :len(seq), :] = seq
            row += 1
    if total:
        fvs = np.concatenate([v.fvs for v in videos if len(v.fvs)])
    else:
        fvs = np.zeros((0, n_phrases))
    features = np.stack([v.features for v in videos])
    labels = None
    if all(v.label is not None for v in videos):
        labels = np.array([v.label for v in videos], dtype=np.int64)
    return _Batch(seqs=seqs, lengths=lengths, fvs=fvs, offsets=offsets,
                  features=features, labels=labels)


def _exact_mean(rows: np.ndarray) -> np.ndarray:
    """Column means via exactly-rounded summation, so the result is
    invariant under row permutation and duplication."""
    k = rows.shape[0]
    return np.array([math.fsum(rows[:, j]) for j in range(rows.shape[1])]) / k


def _forward_batch(params: UCNetParams, batch: _Batch):
    hidden_dim = params.lstm.hidden_dim
    n_videos = batch.features.shape[0]
    if batch.seqs.shape[0]:
        finals, lstm_cache = neural.lstm_forward_batch(
            params.lstm, batch.seqs, batch.lengths)
        weight_pre = batch.fvs @ params.weight_head.weights.T + params.weight_head.bias
        weights = neural.sigmoid(weight_pre)  # (n_comments, 1)
        weighted = weights * finals
    else:
        finals = np.zeros((0, hidden_dim))
        lstm_cache = []
        weights = np.zeros((0, 1))
        weighted = finals
    unified = np.zeros((n_videos, hidden_dim))
    for v in range(n_videos):
        start, end = batch.offsets[v], batch.offsets[v + 1]
        if end > start:
            unified[v] = _exact_mean(weighted[start:end])
    x = np.concatenate([unified, batch.features], axis=1)
    z1 = neural.dense_preactivation(params.hidden, x)
    h1 = neural.relu(z1)
    z2 = neural.dense_preactivation(params.output, h1)
    probs = neural.softmax(z2)
    cache = (lstm_cache, finals, weights, x, z1, h1)
    return probs, cache


def _backward_batch(params: UCNetParams, batch: _Batch, cache, probs,
                    labels: np.ndarray) -> dict[str, np.ndarray]:
    lstm_cache, finals, weights, x, z1, h1 = cache
    hidden_dim = params.lstm.hidden_dim
    n_videos = batch.features.shape[0]

    delta2 = probs.copy()
    delta2[np.arange(n_videos), labels] -= 1.0
    delta2 /= n_videos
    grads: dict[str, np.ndarray] = {
        "output.weights": delta2.T @ h1,
        "output.bias": delta2.sum(axis=0),
    }
    dh1 = delta2 @ params.output.weights
    dz1 = dh1 * (z1 > 0)
    grads["hidden.weights"] = dz1.T @ x
    grads["hidden.bias"] = dz1.sum(axis=0)
    dx = dz1 @ params.hidden.weights
    d_unified = dx[:, :hidden_dim]

    d_weighted = np.zeros_like(finals)
    for v in range(n_videos):
        start, end = batch.offsets[v], batch.offsets[v + 1]
        if end > start:
            d_weighted[start:end] = d_unified[v] / (end - start)
    if finals.shape[0]:
        d_finals = weights * d_weighted
        d_w = (finals * d_weighted).sum(axis=1, keepdims=True)
        d_pre = d_w * weights * (1.0 - weights)
        grads["weight_head.weights"] = d_pre.T @ batch.fvs
        grads["weight_head.bias"] = d_pre.sum(axis=0)
        lstm_grads = neural.lstm_backward_batch(params.lstm, lstm_cache, d_finals)
    else:
        grads["weight_head.weights"] = np.zeros_like(params.weight_head.weights)
        grads["weight_head.bias"] = np.zeros_like(params.weight_head.bias)
        lstm_grads = {"wx": np.zeros_like(params.lstm.wx),
                      "wh": np.zeros_like(params.lstm.wh),
                      "bias": np.zeros_like(params.lstm.bias)}
    grads["lstm.wx"] = lstm_grads["wx"]
    grads["lstm.wh"] = lstm_grads["wh"]
    grads["lstm.bias"] = lstm_grads["bias"]
    return grads


def _batch_loss(probs: np.ndarray, labels: np.ndarray) -> float:
    picked = np.clip(probs[np.arange(len(labels)), labels], 1e-12, None)
    return float(-np.log(picked).mean())


class UCNetModel:
    """Trained parameters bundled with the phrase list and feature selection.

    Implements the network protocol of :mod:`ucnet.neural` (``parameters``,
    ``loss``, ``loss_and_gradients``) over a :class:`PreparedVideo`, so the
    finite-difference gradient checker applies to the full architecture.
    """

    def __init__(self, params: UCNetParams, phrases: Sequence[str],
                 feature_names: Sequence[str], embedding_dim: int,
                 config: TrainingConfig | None = None):
        if params.n_phrases != len(phrases):
            raise ValueError("weight head width must match the phrase count")
        if params.n_features != len(feature_names):
            raise ValueError("hidden width must match the feature selection")
        if params.lstm.input_dim != embedding_dim:
            raise ValueError("LSTM input width must match the embedding dimension")
        self.params = params
        self.phrases = tuple(phrases)
        self.feature_names = tuple(feature_names)
        self.embedding_dim = embedding_dim
        self.config = config if config is not None else TrainingConfig()
        self.loss_history: list[float] = []

    def parameters(self) -> dict[str, np.ndarray]:
        p = self.params
        return {
            "lstm.wx": p.lstm.wx,
            "lstm.wh": p.lstm.wh,
            "lstm.bias": p.lstm.bias,
            "weight_head.weights": p.weight_head.weights,
            "weight_head.bias": p.weight_head.bias,
            "hidden.weights": p.hidden.weights,
            "hidden.bias": p.hidden.bias,
            "output.weights": p.output.weights,
            "output.bias": p.output.bias,
        }

    def prepare(self, comments: Sequence[Comment], features: np.ndarray,
                table: EmbeddingTable, label: int | None = None) -> PreparedVideo:
        return prepare_video(comments, features, table, self.phrases,
                             self.config.max_comments_per_video,
                             self.config.max_tokens_per_comment, label)

    def _single_batch(self, prepared: PreparedVideo) -> _Batch:
        return _collate([prepared], self.embedding_dim, len(self.phrases))

    def loss(self, prepared: PreparedVideo, true_class: int) -> float:
        probs, _ = _forward_batch(self.params, self._single_batch(prepared))
        return _batch_loss(probs, np.array([true_class]))

    def loss_and_gradients(self, prepared: PreparedVideo, true_class: int):
        batch = self._single_batch(prepared)
        probs, cache = _forward_batch(self.params, batch)
        labels = np.array([true_class])
        return (_batch_loss(probs, labels),
                _backward_batch(self.params, batch, cache, probs, labels))

    def predict_prepared(self, prepared: PreparedVideo) -> Prediction:
        probs, _ = _forward_batch(self.params, self._single_batch(prepared))
        return Prediction(p_real=float(probs[0, 0]), p_fake=float(probs[0, 1]))

    def predict(self, comments: Sequence[Comment], features: np.ndarray,
                table: EmbeddingTable) -> Prediction:
        return self.predict_prepared(self.prepare(comments, features, table))

    def predict_record(self, record: VideoRecord, table: EmbeddingTable,
                       lexicons: LexiconSet, scorer: TitleScorer) -> Prediction:
        features = _select_features(record, lexicons, scorer, self.feature_names)
        return self.predict(record.comments, features, table)

    def comment_embeddings(self, comments: Sequence[Comment],
                           table: EmbeddingTable) -> np.ndarray:
        """Raw per-comment LSTM embeddings (before weighting), stacked."""
        chosen = _select_comments(comments, self.config.max_comments_per_video)
        prepared = PreparedVideo(
            comment_seqs=[embed_comment(c.text, table,
                                        self.config.max_tokens_per_comment)
                          for c in chosen],
            fvs=np.zeros((len(chosen), len(self.phrases))),
            features=np.zeros(len(self.feature_names)))
        batch = self._single_batch(prepared)
        if not batch.seqs.shape[0]:
            return np.zeros((0, self.params.lstm.hidden_dim))
        finals, _ = neural.lstm_forward_batch(self.params.lstm, batch.seqs,
                                              batch.lengths)
        return finals

    def unified_embedding(self, comments: Sequence[Comment],
                          table: EmbeddingTable) -> np.ndarray:
        prepared = self.prepare(comments, np.zeros(len(self.feature_names)), table)
        batch = self._single_batch(prepared)
        _, cache = _forward_batch(self.params, batch)
        _, finals, weights, x, _, _ = cache
        return x[0, :self.params.lstm.hidden_dim].copy()

    def save(self, path) -> None:
        tensors = self.parameters()
        meta = {
            "kind": "ucnet",
            "embedding_dim": str(self.embedding_dim),
            "lstm_hidden": str(self.params.lstm.hidden_dim),
            "n_phrases": str(len(self.phrases)),
            "phrase_digest": lexicon_digest(self.phrases),
            "feature_names": ",".join(self.feature_names),
            "learning_rate": f"{self.config.learning_rate:.17g}",
            "epochs": str(self.config.epochs),
            "batch_size": str(self.config.batch_size),
            "seed": str(self.config.seed),
            "max_comments_per_video": str(self.config.max_comments_per_video),
            "max_tokens_per_comment": str(self.config.max_tokens_per_comment),
        }
        serialize.save_tensors(path, tensors, meta)

    @classmethod
    def load(cls, path, phrases: Sequence[str] | None = None) -> "UCNetModel":
        tensors, meta = serialize.load_tensors(path)
        if meta.get("kind") != "ucnet":
            raise ValueError(f"{path}: not a ucnet model file")
        phrases = tuple(phrases) if phrases is not None else load_fakeness_phrases()
        if lexicon_digest(phrases) != meta.get("phrase_digest"):
            raise ValueError(
                f"{path}: fakeness phrase list does not match the one the "
                "model was trained with; refusing to run inference")
        params = UCNetParams(
            lstm=neural.LSTMCell(tensors["lstm.wx"], tensors["lstm.wh"],
                                 tensors["lstm.bias"]),
            weight_head=neural.DenseLayer(tensors["weight_head.weights"],
                                          tensors["weight_head.bias"], "sigmoid"),
            hidden=neural.DenseLayer(tensors["hidden.weights"],
                                     tensors["hidden.bias"], "relu"),
            output=neural.DenseLayer(tensors["output.weights"],
                                     tensors["output.bias"], "softmax"),
        )
        config = TrainingConfig(
            learning_rate=float(meta["learning_rate"]),
            epochs=int(meta["epochs"]),
            batch_size=int(meta["batch_size"]),
            seed=int(meta["seed"]),
            max_comments_per_video=int(meta["max_comments_per_video"]),
            max_tokens_per_comment=int(meta["max_tokens_per_comment"]),
        )
        feature_names = tuple(meta["feature_names"].split(","))
        return cls(params, phrases, feature_names,
                   int(meta["embedding_dim"]), config)


def comment_weight(fv: np.ndarray, params: UCNetParams) -> float:
    """Learned scalar importance of one comment, strictly inside (0, 1)."""
    out = neural.dense_forward(params.weight_head, np.asarray(fv, dtype=np.float64))
    return float(out[0])


def unified_embedding(comments: Sequence[Comment], table: EmbeddingTable,
                      params: UCNetParams, phrases: Sequence[str],
                      max_comments: int = 200,
                      max_tokens: int = 100) -> np.ndarray:
    """Mean of weight-scaled comment embeddings; zero vector for no comments."""
    placeholder_names = tuple(f"f{i}" for i in range(params.n_features))
    model = UCNetModel(params, phrases, placeholder_names, params.lstm.input_dim,
                       TrainingConfig(max_comments_per_video=max_comments,
                                      max_tokens_per_comment=max_tokens))
    return model.unified_embedding(comments, table)


def forward(video: VideoRecord, features: np.ndarray, table: EmbeddingTable,
            params: UCNetParams, phrases: Sequence[str],
            max_comments: int = 200, max_tokens: int = 100) -> Prediction:
    """Class probabilities for one video given its selected simple features."""
    features = np.asarray(features, dtype=np.float64)
    if features.shape != (params.n_features,):
        raise ValueError(
            f"expected {params.n_features} features, got shape {features.shape}")
    prepared = prepare_video(video.comments, features, table, phrases,
                             max_comments, max_tokens)
    batch = _collate([prepared], params.lstm.input_dim, len(phrases))
    probs, _ = _forward_batch(params, batch)
    return Prediction(p_real=float(probs[0, 0]), p_fake=float(probs[0, 1]))


def _select_features(record: VideoRecord, lexicons: LexiconSet,
                     scorer: TitleScorer,
                     feature_names: Sequence[str]) -> np.ndarray:
    full = extract_features(record, lexicons, scorer).as_array()
    index = {name: i for i, name in enumerate(FEATURE_NAMES)}
    return np.array([full[index[name]] for name in feature_names])


def train(train_set: Dataset, table: EmbeddingTable, lexicons: LexiconSet,
          scorer: TitleScorer, config: TrainingConfig | None = None,
          phrases: Sequence[str] | None = None,
          feature_indices: Sequence[int] | None = None,
          lstm_hidden: int = DEFAULT_LSTM_HIDDEN,
          hidden_units: int = DEFAULT_HIDDEN_UNITS) -> UCNetModel:
    """Mini-batch Adam training with cross-entropy over shuffled epochs.

    feature_indices selects a subset of the eight simple features (the
    post-pruning selection); None feeds all eight. Deterministic for a
    fixed config seed; per-epoch mean loss lands in model.loss_history.
    """
    config = config if config is not None else TrainingConfig()
    phrases = tuple(phrases) if phrases is not None else load_fakeness_phrases()
    if feature_indices is None:
        feature_indices = tuple(range(len(FEATURE_NAMES)))
    feature_names = tuple(FEATURE_NAMES[i] for i in feature_indices)

    bad = [r.label for r in train_set if r.label not in ("fake", "real")]
    if bad:
        raise ValueError(
            f"training set contains {len(bad)} records without fake/real labels")
    labels = [1 if r.label == "fake" else 0 for r in train_set]
    if len(set(labels)) < 2:
        raise ValueError("training set must contain both classes")

    rng = np.random.default_rng(config.seed)
    params = init_params(rng, table.dimension, len(phrases), len(feature_names),
                         lstm_hidden, hidden_units)
    model = UCNetModel(params, phrases, feature_names, table.dimension, config)

    prepared = []
    for record, label in zip(train_set, labels):
        features = _select_features(record, lexicons, scorer, feature_names)
        prepared.append(model.prepare(record.comments, features, table, label))

    live = model.parameters()
    state = neural.AdamState.for_params(live, learning_rate=config.learning_rate)
    n = len(prepared)
    for epoch in range(config.epochs):
        order = rng.permutation(n)
        epoch_loss = 0.0
        for start in range(0, n, config.batch_size):
            chunk = [prepared[i] for i in order[start:start + config.batch_size]]
            batch = _collate(chunk, table.dimension, len(phrases))
            probs, cache = _forward_batch(params, batch)
            loss = _batch_loss(probs, batch.labels)
            grads = _backward_batch(params, batch, cache, probs, batch.labels)
            updated, state = neural.adam_step(live, grads, state)
            for key in live:
                live[key][...] = updated[key]
            epoch_loss += loss * len(chunk)
        mean_loss = epoch_loss / n
        model.loss_history.append(mean_loss)
        logger.info("epoch %d/%d: mean loss %.6f", epoch + 1, config.epochs,
                    mean_loss)
    return model


def extract_unified_embeddings(dataset: Dataset, table: EmbeddingTable,
                               params: UCNetParams, phrases: Sequence[str],
                               max_comments: int = 200,
                               max_tokens: int = 100) -> np.ndarray:
    """One unified-embedding row per video, in dataset order (feeds PCA)."""
    rows = [unified_embedding(r.comments, table, params, phrases,
                              max_comments, max_tokens)
            for r in dataset]
    if not rows:
        return np.zeros((0, params.lstm.hidden_dim))
    return np.stack(rows)
