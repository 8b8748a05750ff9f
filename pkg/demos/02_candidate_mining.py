#!/usr/bin/env python3
"""Demonstrate the candidate-mining heuristics and agreement statistics.

Mining keeps popular videos, bootstraps a seed-phrase set against comment
text, then filters and ranks by dislike:like ratio. We run it over a small
synthetic pool and show how the phrase set grows, then tabulate a toy
two-round annotation agreement matrix.
"""

import numpy as np

from ucnet import agreement_matrix, mine_candidates
from ucnet.corpus import ANNOTATION_LABELS
from ucnet.lexical import load_fakeness_phrases
from ucnet.synthetic import make_synthetic_corpus

pool = make_synthetic_corpus(n_videos=80, seed=21)
print(f"pool: {len(pool)} videos "
      f"({len(pool.with_label('fake'))} fake / {len(pool.with_label('real'))} real)")

# The synthetic corpus has modest comment counts, so the popularity floors
# are scaled down from the production defaults (10,000 views / 120 comments).
mined = mine_candidates(
    pool,
    seed_phrases=["fake fake fake", "complete bullshit"],
    min_views=15_000,
    min_comments=5,
    min_dislike_like_ratio=0.3,
    rounds=3,
    expansion_lexicon=load_fakeness_phrases(),
)

fake_share_before = len(pool.with_label("fake")) / len(pool)
fake_share_after = len(mined.with_label("fake")) / max(len(mined), 1)
print(f"mined candidates: {len(mined)}")
print(f"fake share: {fake_share_before:.2f} in the pool "
      f"-> {fake_share_after:.2f} after mining")

print("\ntop candidates by dislike:like ratio")
for record in mined.records[:5]:
    ratio = record.dislike_count / record.like_count
    print(f"    {record.id}  ratio={ratio:.2f}  label={record.label}")

# Two annotators rarely agree perfectly; the agreement matrix makes the
# disagreement structure visible.
rng = np.random.default_rng(5)
round1, round2 = {}, {}
for record in mined:
    truth = "spam" if record.label == "fake" else "legitimate"
    round1[record.id] = truth
    round2[record.id] = truth if rng.random() < 0.8 else \
        str(rng.choice(ANNOTATION_LABELS))

matrix = agreement_matrix(round1, round2)
print("\nagreement matrix (rows = round 1, columns = round 2)")
header = " ".join(f"{label:>12s}" for label in ANNOTATION_LABELS)
print(f"{'':>12s} {header}")
for i, label in enumerate(ANNOTATION_LABELS):
    cells = " ".join(f"{int(v):>12d}" for v in matrix[i])
    print(f"{label:>12s} {cells}")
print(f"total co-annotated videos: {int(matrix.sum())}")
