"""Corpus builders for classifier tests. Sentences state their own position,
so precedence is recoverable from text alone."""

import json
import random

WORDS = ("valley", "harbor", "lantern", "meadow", "quarry", "drift", "ember",
         "tide", "granite", "willow")


def positional_corpus(n_docs, v_min, v_max, seed):
    rng = random.Random(seed)
    docs = []
    for n in range(n_docs):
        v = rng.randint(v_min, v_max)
        filler = lambda: " ".join(rng.choice(WORDS) for _ in range(rng.randint(3, 6)))
        docs.append({
            "id": f"doc{n:05d}",
            "sentences": [f"step {k + 1} of {v}: {filler()}." for k in range(v)],
        })
    return docs


def write_corpus(docs, path):
    with open(path, "w", encoding="utf-8") as fh:
        for doc in docs:
            fh.write(json.dumps(doc) + "\n")
    return path
