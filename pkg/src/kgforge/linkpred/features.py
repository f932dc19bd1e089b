"""Deterministic node feature extractors.

Stand-ins for learned sequence/text encoders: k-mer composition vectors
for nucleotide sequences and signed hashing for free-text descriptions.
"""

from __future__ import annotations

import hashlib
import re

import numpy as np

from ..errors import SequenceTooShort

_BASES = "ACGU"
_BASE_INDEX = {b: i for i, b in enumerate(_BASES)}
_WORD_RE = re.compile(r"[a-z0-9]+")


def kmer_features(sequence: str, k: int) -> np.ndarray:
    """Normalized k-mer counts (length 4^k); windows containing N are skipped."""
    if not 1 <= k <= 4:
        raise ValueError("k must be in [1, 4]")
    if len(sequence) < k:
        raise SequenceTooShort(f"length {len(sequence)} < k={k}")
    counts = np.zeros(4 ** k)
    for i in range(len(sequence) - k + 1):
        window = sequence[i:i + k]
        if "N" in window:
            continue
        index = 0
        for ch in window:
            index = index * 4 + _BASE_INDEX[ch]
        counts[index] += 1
    total = counts.sum()
    return counts / total if total > 0 else counts


def _hash_bytes(token: str) -> bytes:
    return hashlib.md5(token.encode("utf-8")).digest()


def text_hash_features(text: str, dim: int) -> np.ndarray:
    """Signed bag-of-words hashing, L2-normalized; order-insensitive."""
    if dim < 8:
        raise ValueError("dim must be >= 8")
    vec = np.zeros(dim)
    for token in _WORD_RE.findall(text.lower()):
        digest = _hash_bytes(token)
        bucket = int.from_bytes(digest[:8], "big") % dim
        sign = 1.0 if digest[8] % 2 == 0 else -1.0
        vec[bucket] += sign
    norm = np.linalg.norm(vec)
    return vec / norm if norm > 0 else vec
