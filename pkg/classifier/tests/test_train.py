import pytest
import torch

from util import positional_corpus, write_corpus

from pairclassifier.data import make_training_pairs, read_corpus, read_manifest
from pairclassifier.predict import load_checkpoint, predict_corpus
from pairclassifier.train import TrainConfig, train

QUIET = lambda *args: None

SMALL_CONFIG = dict(lr=1e-3, max_epochs=1, batch_size=32, seed=0,
                    d_model=32, n_heads=2, n_layers=1, ffn_dim=64)


def test_empty_training_set_is_an_error(tmp_path):
    with pytest.raises(ValueError, match="empty training set"):
        train([], TrainConfig(), tmp_path / "m.pt")


def test_same_seed_reproduces_validation_accuracy(tmp_path):
    pairs = make_training_pairs(positional_corpus(60, 4, 6, seed=2), seed=2)
    runs = [train(pairs, TrainConfig(**SMALL_CONFIG), tmp_path / f"m{k}.pt", log=QUIET)
            for k in range(2)]
    assert runs[0].val_accuracy == runs[1].val_accuracy
    assert runs[0].history == runs[1].history


def test_checkpoint_roundtrip_and_prediction_contract(tmp_path):
    docs = positional_corpus(60, 4, 6, seed=3)
    corpus = write_corpus(docs, tmp_path / "c.jsonl")
    pairs = make_training_pairs(docs, seed=3)
    result = train(pairs, TrainConfig(**SMALL_CONFIG), tmp_path / "model.pt", log=QUIET)
    assert result.checkpoint.exists()
    assert 0.0 <= result.val_accuracy <= 1.0

    model, vocab, train_config = load_checkpoint(result.checkpoint)
    assert train_config["max_seq_len"] == 105
    assert not model.training

    # identity shuffles: trivial manifest honoring the file contract
    manifest = tmp_path / "m.jsonl"
    with open(manifest, "w") as fh:
        for doc in docs:
            import json
            fh.write(json.dumps({"id": doc["id"], "seed": 0,
                                 "shuffle": list(range(len(doc["sentences"])))}) + "\n")
    out = tmp_path / "preds.tsv"
    rows = predict_corpus(result.checkpoint, corpus, manifest, out)
    expected = sum(len(d["sentences"]) * (len(d["sentences"]) - 1) // 2 for d in docs)
    assert rows == expected
    lines = out.read_text().splitlines()
    assert len(lines) == expected
    for line in lines:
        doc_id, i, j, p = line.split("\t")
        assert int(i) < int(j)
        assert 0.0 <= float(p) <= 1.0


def test_predict_requires_matching_manifest(tmp_path):
    docs = positional_corpus(4, 4, 4, seed=4)
    corpus = write_corpus(docs, tmp_path / "c.jsonl")
    pairs = make_training_pairs(docs, seed=4)
    result = train(pairs, TrainConfig(**SMALL_CONFIG), tmp_path / "model.pt", log=QUIET)
    manifest = tmp_path / "m.jsonl"
    manifest.write_text('{"id":"doc00000","seed":0,"shuffle":[0,1]}\n')
    with pytest.raises(ValueError, match="wrong length"):
        predict_corpus(result.checkpoint, corpus, manifest, tmp_path / "p.tsv")
