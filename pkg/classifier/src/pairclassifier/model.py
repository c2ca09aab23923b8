"""Reduced bidirectional transformer encoder with a pooled classification head.

Same shape as the usual pretrained-encoder recipe (token + position + segment
embeddings, self-attention stack, tanh pooler over the first token, linear
head), just sized to train from scratch on a desk machine.
"""

from __future__ import annotations

from dataclasses import dataclass

import torch
from torch import nn

from .data import PAD_ID


@dataclass
class EncoderConfig:
    vocab_size: int
    max_seq_len: int = 105
    d_model: int = 64
    n_heads: int = 4
    n_layers: int = 2
    ffn_dim: int = 128
    dropout: float = 0.1


class PairClassifier(nn.Module):
    def __init__(self, config: EncoderConfig):
        super().__init__()
        self.config = config
        self.token_embedding = nn.Embedding(config.vocab_size, config.d_model,
                                            padding_idx=PAD_ID)
        self.position_embedding = nn.Embedding(config.max_seq_len, config.d_model)
        self.segment_embedding = nn.Embedding(2, config.d_model)
        self.input_norm = nn.LayerNorm(config.d_model)
        self.input_dropout = nn.Dropout(config.dropout)
        layer = nn.TransformerEncoderLayer(
            d_model=config.d_model, nhead=config.n_heads,
            dim_feedforward=config.ffn_dim, dropout=config.dropout,
            batch_first=True, activation="gelu")
        self.encoder = nn.TransformerEncoder(layer, num_layers=config.n_layers)
        self.pooler = nn.Linear(config.d_model, config.d_model)
        self.classifier = nn.Linear(config.d_model, 2)

    def forward(self, input_ids: torch.Tensor, segment_ids: torch.Tensor,
                attention_mask: torch.Tensor) -> torch.Tensor:
        """Logits over {0: b-first, 1: a-first} for each sequence in the batch."""
        positions = torch.arange(input_ids.size(1), device=input_ids.device)
        x = (self.token_embedding(input_ids)
             + self.position_embedding(positions)[None, :, :]
             + self.segment_embedding(segment_ids))
        x = self.input_dropout(self.input_norm(x))
        x = self.encoder(x, src_key_padding_mask=attention_mask == 0)
        pooled = torch.tanh(self.pooler(x[:, 0]))
        return self.classifier(self.input_dropout(pooled))

    @torch.no_grad()
    def precedence_probability(self, input_ids, segment_ids, attention_mask) -> torch.Tensor:
        """P(first shown sentence precedes the second), one value per row."""
        logits = self(input_ids, segment_ids, attention_mask)
        return torch.softmax(logits, dim=-1)[:, 1]
