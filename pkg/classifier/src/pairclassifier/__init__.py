"""Pairwise sentence-precedence classifier for the pairorder pipeline."""

from .data import TrainPair, Vocab, make_training_pairs, read_corpus, read_manifest
from .model import EncoderConfig, PairClassifier
from .predict import load_checkpoint, predict_corpus
from .train import TrainConfig, TrainResult, train

__version__ = "0.1.0"
