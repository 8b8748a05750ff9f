#!/usr/bin/env python3
"""Walk through the eight simple features and correlation-based pruning.

We build a handful of videos by hand, extract the feature vectors, train a
small random forest for importances, and prune correlated features the way
the batch pipeline does.
"""

import numpy as np

from ucnet import (FEATURE_NAMES, LexiconSet, extract_features,
                   feature_importances, prune_correlated, train_forest,
                   train_title_scorer)
from ucnet.corpus import Comment, VideoRecord
from ucnet.synthetic import make_labeled_titles


def comment(i, text, replies=0):
    return Comment(id=f"c{i}", text=text, like_count=0, reply_count=replies,
                   published_at="2015-01-01T00:00:00Z")


def video(vid, label, title, texts, likes, dislikes):
    return VideoRecord(
        id=vid, title=title, description="", tags=(),
        view_count=50_000, like_count=likes, dislike_count=dislikes,
        channel_subscriber_count=1000,
        comments=tuple(comment(i, t, replies=i % 2) for i, t in enumerate(texts)),
        label=label)


lexicons = LexiconSet.default()

# The title scorer is one of the eight features; train it on a small
# labeled-title set first.
scorer = train_title_scorer(make_labeled_titles(120, seed=1), lexicons)

videos = [
    video("v1", "fake", "This will blow your mind KILL cam",
          ["faaake", "total hoax", "nice one", "so staged"], likes=50, dislikes=40),
    video("v2", "fake", "SHOCKING footage exposed",
          ["fake fake fake", "complete bullshit", "wow"], likes=30, dislikes=25),
    video("v3", "real", "Morning piano practice",
          ["lovely", "what song is this", "great tone"], likes=500, dislikes=4),
    video("v4", "real", "How to cook pasta",
          ["thanks", "worked for me", "nice recipe"], likes=200, dislikes=6),
]

print("Feature vectors")
print("---------------")
matrix = []
for v in videos:
    fv = extract_features(v, lexicons, scorer)
    matrix.append(fv.as_array())
    print(f"{v.id} ({v.label}):")
    for name, value in zip(FEATURE_NAMES, fv.as_array()):
        print(f"    {name:>28s} = {value:.3f}")
matrix = np.array(matrix)

# Importances come from a forest trained on the labeled videos.
labels = np.array([1 if v.label == "fake" else 0 for v in videos])
forest = train_forest(matrix, labels, n_trees=25, max_depth=3, seed=0)
importances = feature_importances(forest)

print("\nRandom-forest importances")
print("-------------------------")
for name, imp in sorted(zip(FEATURE_NAMES, importances), key=lambda t: -t[1]):
    print(f"    {name:>28s}  {imp:.3f}")

# Prune any |r| > 0.2 pair, dropping the less important member.
kept = prune_correlated(matrix, importances, threshold=0.2)
print("\nSelected features at threshold 0.2:")
for index in kept:
    print(f"    [{index}] {FEATURE_NAMES[index]}")
print(f"\n{len(kept)} of {len(FEATURE_NAMES)} features survive on this tiny sample.")
