"""Baseline classifiers: CART decision tree, random forest, logistic regression.

Class indices follow the package convention: 0 = real, 1 = fake. Prediction
ties always go to fake (conservative flagging).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import serialize


def gini(counts) -> float:
    """Gini impurity of a node given its per-class counts."""
    counts = np.asarray(counts, dtype=np.float64)
    total = counts.sum()
    if total == 0:
        return 0.0
    p = counts / total
    return float(1.0 - np.sum(p * p))


def _class_counts(y: np.ndarray) -> np.ndarray:
    return np.bincount(y, minlength=2).astype(np.float64)


@dataclass
class DecisionTree:
    """Flat-array CART tree; feature < 0 marks a leaf."""

    feature: np.ndarray      # (n_nodes,) int, -1 for leaves
    threshold: np.ndarray    # (n_nodes,) float
    left: np.ndarray         # (n_nodes,) int child ids, -1 for leaves
    right: np.ndarray        # (n_nodes,) int
    impurity: np.ndarray     # (n_nodes,) float
    n_samples: np.ndarray    # (n_nodes,) int
    class_probs: np.ndarray  # (n_nodes, 2)
    max_depth: int
    min_samples_leaf: int

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        out = np.zeros((X.shape[0], 2))
        for row in range(X.shape[0]):
            node = 0
            while self.feature[node] >= 0:
                if X[row, self.feature[node]] < self.threshold[node]:
                    node = self.left[node]
                else:
                    node = self.right[node]
            out[row] = self.class_probs[node]
        return out

    def predict(self, X: np.ndarray) -> np.ndarray:
        probs = self.predict_proba(X)
        return (probs[:, 1] >= probs[:, 0]).astype(np.int64)


class _TreeBuilder:
    def __init__(self, X, y, max_depth, min_samples_leaf, rng, features_per_split):
        self.X = X
        self.y = y
        self.max_depth = max_depth
        self.min_samples_leaf = min_samples_leaf
        self.rng = rng
        self.features_per_split = features_per_split
        self.feature: list[int] = []
        self.threshold: list[float] = []
        self.left: list[int] = []
        self.right: list[int] = []
        self.impurity: list[float] = []
        self.n_samples: list[int] = []
        self.class_probs: list[np.ndarray] = []

    def _new_node(self, idx) -> int:
        counts = _class_counts(self.y[idx])
        node = len(self.feature)
        self.feature.append(-1)
        self.threshold.append(0.0)
        self.left.append(-1)
        self.right.append(-1)
        self.impurity.append(gini(counts))
        self.n_samples.append(len(idx))
        self.class_probs.append(counts / counts.sum())
        return node

    def _candidate_features(self) -> np.ndarray:
        n_features = self.X.shape[1]
        if self.features_per_split is None or self.features_per_split >= n_features:
            return np.arange(n_features)
        chosen = self.rng.choice(n_features, size=self.features_per_split,
                                 replace=False)
        return np.sort(chosen)

    def _best_split(self, idx):
        """Highest Gini-decrease (feature, threshold); ties keep the lowest
        feature index, then the lowest threshold."""
        y_node = self.y[idx]
        node_gini = gini(_class_counts(y_node))
        n = len(idx)
        best = None  # (decrease, feature, threshold, left_mask)
        for f in self._candidate_features():
            values = self.X[idx, f]
            order = np.argsort(values, kind="stable")
            v_sorted = values[order]
            y_sorted = y_node[order]
            ones = np.cumsum(y_sorted)
            total_ones = ones[-1]
            for k in range(self.min_samples_leaf, n - self.min_samples_leaf + 1):
                if k >= n or v_sorted[k] == v_sorted[k - 1]:
                    continue
                left_ones = ones[k - 1]
                left_counts = (k - left_ones, left_ones)
                right_counts = ((n - k) - (total_ones - left_ones),
                                total_ones - left_ones)
                weighted = (k * gini(left_counts) + (n - k) * gini(right_counts)) / n
                decrease = node_gini - weighted
                if decrease <= 0:
                    continue
                if best is None or decrease > best[0]:
                    thr = (v_sorted[k - 1] + v_sorted[k]) / 2.0
                    best = (decrease, int(f), float(thr))
        return best

    def grow(self, idx, depth) -> int:
        node = self._new_node(idx)
        if depth >= self.max_depth or self.impurity[node] == 0.0 \
                or len(idx) < 2 * self.min_samples_leaf:
            return node
        found = self._best_split(idx)
        if found is None:
            return node
        _, f, thr = found
        mask = self.X[idx, f] < thr
        left_id = self.grow(idx[mask], depth + 1)
        right_id = self.grow(idx[~mask], depth + 1)
        self.feature[node] = f
        self.threshold[node] = thr
        self.left[node] = left_id
        self.right[node] = right_id
        return node

    def build(self) -> DecisionTree:
        self.grow(np.arange(self.X.shape[0]), 0)
        return DecisionTree(
            feature=np.array(self.feature, dtype=np.int64),
            threshold=np.array(self.threshold, dtype=np.float64),
            left=np.array(self.left, dtype=np.int64),
            right=np.array(self.right, dtype=np.int64),
            impurity=np.array(self.impurity, dtype=np.float64),
            n_samples=np.array(self.n_samples, dtype=np.int64),
            class_probs=np.stack(self.class_probs),
            max_depth=self.max_depth,
            min_samples_leaf=self.min_samples_leaf,
        )


def _validate_xy(X, y):
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    if X.ndim != 2 or len(X) != len(y):
        raise ValueError("X must be 2-d with one label per row")
    if len(y) == 0:
        raise ValueError("training data is empty")
    if not np.all((y == 0) | (y == 1)):
        raise ValueError("labels must be 0 (real) or 1 (fake)")
    return X, y


def train_tree(X, y, max_depth: int = 8, min_samples_leaf: int = 2,
               seed: int = 0) -> DecisionTree:
    """Greedy CART with Gini impurity over all features."""
    X, y = _validate_xy(X, y)
    builder = _TreeBuilder(X, y, max_depth, max(1, min_samples_leaf),
                           np.random.default_rng(seed), None)
    return builder.build()


@dataclass
class RandomForest:
    trees: tuple[DecisionTree, ...]
    tree_seeds: tuple[int, ...]
    features_per_split: int
    n_features: int

    def __post_init__(self) -> None:
        if not self.trees:
            raise ValueError("a forest needs at least one tree")

    def tree_votes(self, X: np.ndarray) -> np.ndarray:
        """Per-tree class votes, shape (n_trees, n_rows)."""
        return np.stack([tree.predict(np.asarray(X, dtype=np.float64))
                         for tree in self.trees])

    def predict_proba_fake(self, X: np.ndarray) -> np.ndarray:
        return self.tree_votes(X).mean(axis=0)

    def predict(self, X: np.ndarray) -> np.ndarray:
        votes = self.tree_votes(X).sum(axis=0)
        return (2 * votes >= len(self.trees)).astype(np.int64)


def train_forest(X, y, n_trees: int = 100, max_depth: int = 8,
                 features_per_split: int = 3, seed: int = 0) -> RandomForest:
    """Bootstrap-aggregated CART trees with per-node feature subsampling.

    Per-tree seeds are derived deterministically from the master seed, so
    the same call is reproducible and trees could train in parallel.
    """
    X, y = _validate_xy(X, y)
    if n_trees < 1:
        raise ValueError("n_trees must be >= 1")
    tree_seeds = [int(s) for s in np.random.SeedSequence(seed).generate_state(n_trees)]
    trees = []
    n = len(y)
    for tree_seed in tree_seeds:
        rng = np.random.default_rng(tree_seed)
        bootstrap = rng.integers(0, n, size=n)
        builder = _TreeBuilder(X[bootstrap], y[bootstrap], max_depth, 2,
                               rng, features_per_split)
        trees.append(builder.build())
    return RandomForest(trees=tuple(trees), tree_seeds=tuple(tree_seeds),
                        features_per_split=features_per_split,
                        n_features=X.shape[1])


def feature_importances(forest: RandomForest) -> np.ndarray:
    """Mean normalized Gini-decrease per feature, summing to 1.

    Follows the standard impurity-based convention: each tree's total
    weighted impurity decrease per feature is normalized within the tree,
    averaged over trees, then normalized again. A forest of pure leaves
    yields the uniform vector.
    """
    n_features = forest.n_features
    totals = np.zeros(n_features)
    for tree in forest.trees:
        per_tree = np.zeros(n_features)
        root_n = tree.n_samples[0]
        for node in range(len(tree.feature)):
            f = tree.feature[node]
            if f < 0:
                continue
            l, r = tree.left[node], tree.right[node]
            decrease = (tree.n_samples[node] * tree.impurity[node]
                        - tree.n_samples[l] * tree.impurity[l]
                        - tree.n_samples[r] * tree.impurity[r]) / root_n
            per_tree[f] += decrease
        tree_total = per_tree.sum()
        if tree_total > 0:
            totals += per_tree / tree_total
    grand = totals.sum()
    if grand == 0:
        return np.full(n_features, 1.0 / n_features)
    return totals / grand


@dataclass
class LogisticModel:
    weights: np.ndarray
    intercept: float

    def predict_proba_fake(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        z = X @ self.weights + self.intercept
        e = np.exp(-np.abs(z))
        return np.where(z >= 0, 1.0 / (1.0 + e), e / (1.0 + e))

    def predict(self, X: np.ndarray) -> np.ndarray:
        return (self.predict_proba_fake(X) >= 0.5).astype(np.int64)


def logistic_loss_and_gradient(weights: np.ndarray, intercept: float,
                               X: np.ndarray, y: np.ndarray):
    """Mean cross-entropy of the logistic model and its analytic gradient."""
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    z = X @ weights + intercept
    e = np.exp(-np.abs(z))
    p = np.where(z >= 0, 1.0 / (1.0 + e), e / (1.0 + e))
    eps = 1e-12
    loss = float(-np.mean(y * np.log(np.clip(p, eps, None))
                          + (1.0 - y) * np.log(np.clip(1.0 - p, eps, None))))
    delta = (p - y) / len(y)
    return loss, X.T @ delta, float(delta.sum())


def train_logistic(X, y, learning_rate: float = 0.1, epochs: int = 500,
                   seed: int = 0) -> LogisticModel:
    """Full-batch gradient descent on cross-entropy from zero initialization."""
    X, y = _validate_xy(X, y)
    if len(set(y.tolist())) < 2:
        raise ValueError("logistic regression needs both classes present")
    weights = np.zeros(X.shape[1])
    intercept = 0.0
    for _ in range(epochs):
        _, grad_w, grad_b = logistic_loss_and_gradient(weights, intercept, X, y)
        weights = weights - learning_rate * grad_w
        intercept = intercept - learning_rate * grad_b
    return LogisticModel(weights=weights, intercept=intercept)


def _tree_tensors(tree: DecisionTree, prefix: str) -> dict[str, np.ndarray]:
    return {
        f"{prefix}.feature": tree.feature.astype(np.float64),
        f"{prefix}.threshold": tree.threshold,
        f"{prefix}.left": tree.left.astype(np.float64),
        f"{prefix}.right": tree.right.astype(np.float64),
        f"{prefix}.impurity": tree.impurity,
        f"{prefix}.n_samples": tree.n_samples.astype(np.float64),
        f"{prefix}.class_probs": tree.class_probs,
    }


def _tree_from_tensors(tensors, prefix: str, max_depth: int,
                       min_samples_leaf: int) -> DecisionTree:
    return DecisionTree(
        feature=tensors[f"{prefix}.feature"].astype(np.int64),
        threshold=tensors[f"{prefix}.threshold"],
        left=tensors[f"{prefix}.left"].astype(np.int64),
        right=tensors[f"{prefix}.right"].astype(np.int64),
        impurity=tensors[f"{prefix}.impurity"],
        n_samples=tensors[f"{prefix}.n_samples"].astype(np.int64),
        class_probs=tensors[f"{prefix}.class_probs"],
        max_depth=max_depth,
        min_samples_leaf=min_samples_leaf,
    )


def save_forest(forest: RandomForest, path, max_depth: int = 8,
                min_samples_leaf: int = 2) -> None:
    tensors: dict[str, np.ndarray] = {
        "tree_seeds": np.array(forest.tree_seeds, dtype=np.float64),
    }
    for i, tree in enumerate(forest.trees):
        tensors.update(_tree_tensors(tree, f"tree{i}"))
    meta = {
        "kind": "random-forest",
        "n_trees": str(len(forest.trees)),
        "features_per_split": str(forest.features_per_split),
        "n_features": str(forest.n_features),
        "max_depth": str(max_depth),
        "min_samples_leaf": str(min_samples_leaf),
    }
    serialize.save_tensors(path, tensors, meta)


def load_forest(path) -> RandomForest:
    tensors, meta = serialize.load_tensors(path)
    if meta.get("kind") != "random-forest":
        raise ValueError(f"{path}: not a random-forest file")
    n_trees = int(meta["n_trees"])
    max_depth = int(meta.get("max_depth", "8"))
    min_leaf = int(meta.get("min_samples_leaf", "2"))
    trees = tuple(_tree_from_tensors(tensors, f"tree{i}", max_depth, min_leaf)
                  for i in range(n_trees))
    seeds = tuple(int(s) for s in tensors["tree_seeds"])
    return RandomForest(trees=trees, tree_seeds=seeds,
                        features_per_split=int(meta["features_per_split"]),
                        n_features=int(meta["n_features"]))


def save_tree(tree: DecisionTree, path) -> None:
    meta = {
        "kind": "decision-tree",
        "max_depth": str(tree.max_depth),
        "min_samples_leaf": str(tree.min_samples_leaf),
    }
    serialize.save_tensors(path, _tree_tensors(tree, "tree"), meta)


def load_tree(path) -> DecisionTree:
    tensors, meta = serialize.load_tensors(path)
    if meta.get("kind") != "decision-tree":
        raise ValueError(f"{path}: not a decision-tree file")
    return _tree_from_tensors(tensors, "tree", int(meta["max_depth"]),
                              int(meta["min_samples_leaf"]))


def save_logistic(model: LogisticModel, path) -> None:
    serialize.save_tensors(
        path,
        {"weights": model.weights,
         "intercept": np.array([model.intercept])},
        {"kind": "logistic"},
    )


def load_logistic(path) -> LogisticModel:
    tensors, meta = serialize.load_tensors(path)
    if meta.get("kind") != "logistic":
        raise ValueError(f"{path}: not a logistic-model file")
    return LogisticModel(weights=tensors["weights"],
                         intercept=float(tensors["intercept"][0]))
