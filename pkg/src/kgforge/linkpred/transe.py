"""TransE margin-ranking embeddings for directed typed triples."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config import EmbeddingConfig

_EPS = 1e-12


def _distance_and_grad(v, norm):
    """Dissimilarity of a residual vector and its gradient wrt v."""
    if norm == "L1":
        return np.abs(v).sum(), np.sign(v)
    d = np.linalg.norm(v)
    return d, v / (d + _EPS)


def transe_triple_loss(h, r, t, hc, tc, margin, norm="L2"):
    """Margin loss max(0, margin + d(h+r,t) - d(hc+r,tc)) with gradients.

    Returns (loss, g_h, g_r, g_t, g_hc, g_tc).
    """
    d_pos, g_pos = _distance_and_grad(h + r - t, norm)
    d_neg, g_neg = _distance_and_grad(hc + r - tc, norm)
    loss = margin + d_pos - d_neg
    if loss <= 0:
        zero = np.zeros_like(h)
        return 0.0, zero, zero.copy(), zero.copy(), zero.copy(), zero.copy()
    return loss, g_pos, g_pos - g_neg, -g_pos, -g_neg, g_neg


@dataclass
class TranseModel:
    entity_vectors: np.ndarray
    entity_index: dict
    relation_vectors: np.ndarray
    relation_index: dict
    epoch_losses: list = field(default_factory=list)
    norm: str = "L2"

    def score(self, head, relation, tail, norm=None):
        norm = self.norm if norm is None else norm
        v = (self.entity_vectors[self.entity_index[head]]
             + self.relation_vectors[self.relation_index[relation]]
             - self.entity_vectors[self.entity_index[tail]])
        return float(np.abs(v).sum() if norm == "L1" else np.linalg.norm(v))


def train_transe(triples, config: EmbeddingConfig) -> TranseModel:
    """SGD on corrupted triples; entity vectors renormalized every epoch."""
    if not triples:
        raise ValueError("empty triple set")
    entities = sorted({t[0] for t in triples} | {t[2] for t in triples})
    relations = sorted({t[1] for t in triples})
    e_index = {e: i for i, e in enumerate(entities)}
    r_index = {r: i for i, r in enumerate(relations)}
    n_e, n_r, d = len(entities), len(relations), config.dimensions

    rng = np.random.default_rng(config.seed)
    bound = 6.0 / np.sqrt(d)
    E = rng.uniform(-bound, bound, (n_e, d))
    R = rng.uniform(-bound, bound, (n_r, d))
    R /= np.linalg.norm(R, axis=1, keepdims=True) + _EPS
    E /= np.linalg.norm(E, axis=1, keepdims=True) + _EPS

    heads = np.array([e_index[t[0]] for t in triples])
    rels = np.array([r_index[t[1]] for t in triples])
    tails = np.array([e_index[t[2]] for t in triples])
    known = set(zip(heads.tolist(), rels.tolist(), tails.tolist()))
    n = len(triples)
    batch = 1024
    losses = []

    for _ in range(config.epochs):
        order = rng.permutation(n)
        epoch_loss = 0.0
        for lo in range(0, n, batch):
            idx = order[lo:lo + batch]
            h_i, r_i, t_i = heads[idx], rels[idx], tails[idx]
            corrupt_head = rng.random(len(idx)) < 0.5
            hc_i = h_i.copy()
            tc_i = t_i.copy()
            repl = rng.integers(n_e, size=len(idx))
            hc_i[corrupt_head] = repl[corrupt_head]
            tc_i[~corrupt_head] = repl[~corrupt_head]
            # redraw corruptions that collide with known triples (one pass)
            bad = [k for k in range(len(idx))
                   if (hc_i[k], r_i[k], tc_i[k]) in known]
            if bad:
                redraw = rng.integers(n_e, size=len(bad))
                for k, e in zip(bad, redraw):
                    if corrupt_head[k]:
                        hc_i[k] = e
                    else:
                        tc_i[k] = e

            pos = E[h_i] + R[r_i] - E[t_i]
            neg = E[hc_i] + R[r_i] - E[tc_i]
            if config.norm == "L1":
                d_pos = np.abs(pos).sum(axis=1)
                d_neg = np.abs(neg).sum(axis=1)
                g_pos = np.sign(pos)
                g_neg = np.sign(neg)
            else:
                d_pos = np.linalg.norm(pos, axis=1)
                d_neg = np.linalg.norm(neg, axis=1)
                g_pos = pos / (d_pos[:, None] + _EPS)
                g_neg = neg / (d_neg[:, None] + _EPS)
            viol = config.margin + d_pos - d_neg
            active = viol > 0
            epoch_loss += float(viol[active].sum())
            if not active.any():
                continue
            lr = config.learning_rate
            g_pos = g_pos[active]
            g_neg = g_neg[active]
            np.add.at(E, h_i[active], -lr * g_pos)
            np.add.at(E, t_i[active], lr * g_pos)
            np.add.at(R, r_i[active], -lr * (g_pos - g_neg))
            np.add.at(E, hc_i[active], lr * g_neg)
            np.add.at(E, tc_i[active], -lr * g_neg)
        E /= np.linalg.norm(E, axis=1, keepdims=True) + _EPS
        losses.append(epoch_loss / n)
    return TranseModel(E, e_index, R, r_index, losses, norm=config.norm)
