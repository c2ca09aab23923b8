import json
import random

import pytest
from hypothesis import given, strategies as st

from pairorder.core import (Document, PairPrediction, ShuffledDocument,
                            ValidationError, enumerate_pairs, invert_permutation,
                            is_permutation, load_corpus, load_manifest, save_corpus,
                            save_manifest, shuffle_document)


# ---------------------------------------------------------------------------
# permutation helpers

def test_is_permutation():
    assert is_permutation([0])
    assert is_permutation([2, 0, 1])
    assert not is_permutation([0, 0])        # repeated index
    assert not is_permutation([1, 2])        # out of range
    assert not is_permutation([0, 2])
    assert not is_permutation([True, False])  # bools are not indices
    assert is_permutation([])


@given(st.permutations(list(range(8))))
def test_invert_roundtrip(perm):
    inv = invert_permutation(perm)
    assert invert_permutation(inv) == tuple(perm)
    assert all(inv[perm[k]] == k for k in range(len(perm)))


# ---------------------------------------------------------------------------
# documents

def test_document_invariants():
    doc = Document(id="d1", sentences=("a.", "b."))
    assert doc.v == 2
    with pytest.raises(ValidationError):
        Document(id="", sentences=("a.",))
    with pytest.raises(ValidationError):
        Document(id="d1", sentences=())
    with pytest.raises(ValidationError):
        Document(id="d1", sentences=("a.", ""))


def test_load_corpus_single_line(tmp_path):
    path = tmp_path / "c.jsonl"
    path.write_text('{"id":"d1","sentences":["a.","b."]}\n', encoding="utf-8")
    docs = load_corpus(path)
    assert len(docs) == 1
    assert docs[0].id == "d1"
    assert docs[0].v == 2


def test_load_corpus_duplicate_id(tmp_path):
    path = tmp_path / "c.jsonl"
    path.write_text('{"id":"d1","sentences":["a."]}\n{"id":"d1","sentences":["b."]}\n',
                    encoding="utf-8")
    with pytest.raises(ValidationError, match="d1"):
        load_corpus(path)


def test_load_corpus_empty_document(tmp_path):
    path = tmp_path / "c.jsonl"
    path.write_text('{"id":"d2","sentences":[]}\n', encoding="utf-8")
    with pytest.raises(ValidationError, match="empty sentence list"):
        load_corpus(path)


def test_load_corpus_malformed_line_reports_lineno(tmp_path):
    path = tmp_path / "c.jsonl"
    path.write_text('{"id":"d1","sentences":["a."]}\nnot json\n', encoding="utf-8")
    with pytest.raises(ValidationError, match=":2:"):
        load_corpus(path)


def test_load_corpus_rejects_non_string_sentences(tmp_path):
    path = tmp_path / "c.jsonl"
    path.write_text('{"id":"d1","sentences":[1,2]}\n', encoding="utf-8")
    with pytest.raises(ValidationError, match="array of strings"):
        load_corpus(path)


def test_corpus_roundtrip_canonical(tmp_path):
    src = tmp_path / "src.jsonl"
    src.write_text('{"sentences": ["a.", "bé."],  "id": "d1"}\n\n'
                   '{"id": "d2", "sentences": ["x."]}\n', encoding="utf-8")
    docs = load_corpus(src)
    canon = tmp_path / "canon.jsonl"
    save_corpus(docs, canon)
    again = tmp_path / "again.jsonl"
    save_corpus(load_corpus(canon), again)
    assert canon.read_bytes() == again.read_bytes()
    assert load_corpus(canon) == docs


# ---------------------------------------------------------------------------
# pair enumeration

def test_enumerate_pairs_four_sentences():
    # four sentences give six constraints, one per unordered pair
    assert enumerate_pairs(4) == [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]


def test_enumerate_pairs_edges():
    assert enumerate_pairs(1) == []
    assert len(enumerate_pairs(10)) == 45
    assert enumerate_pairs(10) == [(i, j) for i in range(10) for j in range(i + 1, 10)]
    with pytest.raises(ValidationError):
        enumerate_pairs(0)


@given(st.integers(min_value=1, max_value=200))
def test_enumerate_pairs_count_formula(v):
    pairs = enumerate_pairs(v)
    assert len(pairs) == v * (v - 1) // 2
    assert len(set(pairs)) == len(pairs)
    assert all(0 <= i < j < v for i, j in pairs)


# ---------------------------------------------------------------------------
# shuffling

def test_shuffle_singleton_is_identity():
    doc = Document(id="one", sentences=("a.",))
    assert shuffle_document(doc, 123).shuffle == (0,)
    assert shuffle_document(doc, 999).shuffle == (0,)


def test_shuffle_deterministic_per_seed_and_id():
    doc = Document(id="d", sentences=tuple(f"s{k}." for k in range(12)))
    assert shuffle_document(doc, 42) == shuffle_document(doc, 42)
    assert shuffle_document(doc, 42).shuffle != shuffle_document(doc, 43).shuffle


def test_shuffle_independent_of_sibling_documents():
    a = Document(id="a", sentences=tuple(f"s{k}." for k in range(9)))
    alone = shuffle_document(a, 7)
    b = Document(id="b", sentences=("x.", "y."))
    assert shuffle_document(a, 7) == alone  # other docs never affect the stream
    assert shuffle_document(b, 7).v == 2


def test_shuffle_always_bijective_1000_keys():
    rng = random.Random(20240817)
    for _ in range(1000):
        seed = rng.getrandbits(63)
        doc_id = f"doc{rng.randrange(10**9)}"
        doc = Document(id=doc_id, sentences=tuple(f"s{k}." for k in range(5)))
        sh = shuffle_document(doc, seed)
        assert is_permutation(sh.shuffle)


def test_gold_order_inverts_shuffle():
    doc = Document(id="d", sentences=tuple(f"s{k}." for k in range(6)))
    sh = shuffle_document(doc, 5)
    in_shuffled = sh.sentences_in_shuffled_order(doc)
    assert tuple(in_shuffled[s] for s in sh.gold_order()) == doc.sentences


# ---------------------------------------------------------------------------
# manifests

def test_manifest_roundtrip(tmp_path):
    docs = [Document(id=f"d{k}", sentences=tuple(f"s{j}." for j in range(k + 1)))
            for k in range(5)]
    shdocs = [shuffle_document(doc, 11) for doc in docs]
    path = tmp_path / "m.jsonl"
    save_manifest(shdocs, path)
    loaded = load_manifest(path)
    assert list(loaded) == [d.id for d in docs]
    assert all(loaded[sh.doc_id] == sh for sh in shdocs)


def test_manifest_rejects_bad_shuffle(tmp_path):
    path = tmp_path / "m.jsonl"
    path.write_text('{"id":"d1","seed":0,"shuffle":[0,0]}\n', encoding="utf-8")
    with pytest.raises(ValidationError, match=":1:"):
        load_manifest(path)


def test_manifest_rejects_duplicate_id(tmp_path):
    path = tmp_path / "m.jsonl"
    entry = json.dumps({"id": "d1", "seed": 0, "shuffle": [0]})
    path.write_text(entry + "\n" + entry + "\n", encoding="utf-8")
    with pytest.raises(ValidationError, match="duplicate"):
        load_manifest(path)


def test_shuffled_document_validates_permutation():
    with pytest.raises(ValidationError):
        ShuffledDocument(doc_id="d", shuffle=(0, 0), seed=1)


def test_pair_prediction_invariants():
    pred = PairPrediction(doc_id="d", i=0, j=3, p_precedes=0.75)
    assert pred.p_precedes == 0.75
    with pytest.raises(ValidationError, match="i < j"):
        PairPrediction(doc_id="d", i=3, j=3, p_precedes=0.5)
    with pytest.raises(ValidationError, match="outside"):
        PairPrediction(doc_id="d", i=0, j=1, p_precedes=-0.1)
