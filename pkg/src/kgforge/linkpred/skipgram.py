"""Skip-gram with negative sampling, plain numpy SGD.

The minibatched update is deterministic for a fixed seed. The pair-level
loss/gradient helper is exposed separately so tests can check the analytic
gradients against finite differences.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import expit

from .config import EmbeddingConfig


def sigmoid(x):
    return expit(x)


def skipgram_pair_loss(center, context, negatives):
    """Loss and gradients for one (center, context, negatives) example.

    loss = -log s(c.o) - sum_i log s(-c.n_i)
    """
    pos = sigmoid(center @ context)
    neg = sigmoid(negatives @ center)
    loss = -np.log(pos) - np.log(1.0 - neg).sum()
    g_center = -(1.0 - pos) * context + neg @ negatives
    g_context = -(1.0 - pos) * center
    g_negatives = np.outer(neg, center)
    return loss, g_center, g_context, g_negatives


@dataclass
class Embedding:
    vectors: np.ndarray
    index: dict                       # handle -> row
    epoch_losses: list = field(default_factory=list)

    def vector(self, handle):
        return self.vectors[self.index[handle]]

    def export_tsv(self, graph) -> str:
        lines = []
        for handle in sorted(self.index):
            values = "\t".join(repr(float(v)) for v in self.vector(handle))
            lines.append(f"{graph.node(handle).curie}\t{values}")
        return "\n".join(lines) + "\n"


def _noise_cdf(counts):
    weights = np.asarray(counts, dtype=float) ** 0.75
    return np.cumsum(weights / weights.sum())


def sgns_train(centers, contexts, vocab_size, counts, config: EmbeddingConfig):
    """Core SGNS loop shared by the walk-based and edge-based trainers."""
    rng = np.random.default_rng(config.seed)
    d = config.dimensions
    w_in = (rng.random((vocab_size, d)) - 0.5) / d
    w_out = np.zeros((vocab_size, d))
    losses = []
    if config.epochs == 0 or len(centers) == 0:
        return w_in, losses

    cdf = _noise_cdf(counts)
    batch = 4096
    n_pairs = len(centers)
    total_batches = config.epochs * ((n_pairs + batch - 1) // batch)
    step = 0
    for epoch in range(config.epochs):
        order = rng.permutation(n_pairs)
        epoch_loss = 0.0
        for lo in range(0, n_pairs, batch):
            idx = order[lo:lo + batch]
            c = centers[idx]
            o = contexts[idx]
            negs = np.searchsorted(cdf, rng.random((len(idx), config.negatives)))
            lr = config.learning_rate * max(1e-4, 1.0 - step / total_batches)
            step += 1

            x = w_in[c]                     # (B, d)
            y = w_out[o]                    # (B, d)
            z = w_out[negs]                 # (B, k, d)
            pos = sigmoid(np.einsum("bd,bd->b", x, y))
            neg = sigmoid(np.einsum("bkd,bd->bk", z, x))
            epoch_loss += float(-np.log(np.clip(pos, 1e-12, None)).sum()
                                - np.log1p(-np.clip(neg, None, 1 - 1e-12)).sum())

            g_x = -(1.0 - pos)[:, None] * y + np.einsum("bk,bkd->bd", neg, z)
            g_y = -(1.0 - pos)[:, None] * x
            g_z = neg[:, :, None] * x[:, None, :]
            # average the scattered gradients per row: all contributions in a
            # batch are computed at the same stale parameters, so summing them
            # at full step size diverges when the vocabulary is much smaller
            # than the batch
            flat_neg = negs.ravel()
            hits_in = np.bincount(c, minlength=vocab_size)[c]
            hits_out = (np.bincount(o, minlength=vocab_size)
                        + np.bincount(flat_neg, minlength=vocab_size))
            np.add.at(w_in, c, (-lr / hits_in)[:, None] * g_x)
            np.add.at(w_out, o, (-lr / hits_out[o])[:, None] * g_y)
            np.add.at(w_out, flat_neg,
                      (-lr / hits_out[flat_neg])[:, None]
                      * g_z.reshape(-1, d))
        losses.append(epoch_loss / n_pairs)
    return w_in, losses


def _walk_pairs(walks, index, window):
    centers = []
    contexts = []
    for walk in walks:
        ids = [index[h] for h in walk]
        for i, center in enumerate(ids):
            lo = max(0, i - window)
            hi = min(len(ids), i + window + 1)
            for j in range(lo, hi):
                if j != i:
                    centers.append(center)
                    contexts.append(ids[j])
    return np.asarray(centers, dtype=np.int64), np.asarray(contexts, dtype=np.int64)


def train_skipgram(corpus, config: EmbeddingConfig) -> Embedding:
    """Embed nodes from a walk corpus; zero epochs returns the init."""
    if not corpus.walks:
        raise ValueError("empty walk corpus")
    vocab = sorted({h for walk in corpus.walks for h in walk})
    index = {h: i for i, h in enumerate(vocab)}
    centers, contexts = _walk_pairs(corpus.walks, index, config.window)
    counts = np.bincount(centers, minlength=len(vocab))
    counts = np.maximum(counts, 1)
    vectors, losses = sgns_train(centers, contexts, len(vocab), counts, config)
    return Embedding(vectors, index, losses)
