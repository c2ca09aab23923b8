"""Sentence ordering from pairwise precedence constraints, plus its evaluation suite."""

from .core import (Document, PairPrediction, ShuffledDocument, ValidationError,
                   enumerate_pairs, invert_permutation, is_permutation, load_corpus,
                   load_manifest, save_corpus, save_manifest, shuffle_document)
from .metrics import (CorpusReport, DocumentScore, HumanEvalReport, aggregate,
                      displacement_within, filter_long, human_eval_aggregate,
                      kendall_tau, lcs_ratio, mismatch_rate, pmr, rouge_s,
                      score_document, sentence_accuracy)
from .oracles import (MissingPolicy, PredictionTable, file_query, gold_query,
                      load_predictions, noisy_query)
from .ordering import (ConstraintGraph, OrderingResult, brute_force_max_agreement,
                       build_constraint_graph, merge_sort_order, topological_sort)

__version__ = "0.1.0"
