"""Smoothed n-gram language model behind a pluggable next-token interface.

Any object with ``vocab_size`` and ``next_dist(context) -> ndarray`` can
drive the decoders; the in-repo implementation is an n-gram model with
interpolated absolute discounting.
"""

from __future__ import annotations

import math
from typing import Protocol, Sequence

import numpy as np

from .tokenizers import TokenizerKind, Vocab

DEFAULT_DISCOUNT = 0.75

# Longer contexts for finer-grained tokenizations, to keep the effective
# character context roughly comparable.
DEFAULT_ORDER = {
    TokenizerKind.UNICODE: 8,
    TokenizerKind.SYLLABLE: 4,
    TokenizerKind.BASE: 3,
    TokenizerKind.OUR: 3,
}

MODEL_MAGIC = "verseforge-ngram v1"


class NGramError(ValueError):
    pass


class LanguageModel(Protocol):
    vocab_size: int

    def next_dist(self, context: Sequence[int]) -> np.ndarray: ...


class NGramModel:
    """Interpolated absolute-discounting n-gram model over token ids."""

    def __init__(self, order: int, vocab_size: int, vocab_hash: str = "",
                 discount: float = DEFAULT_DISCOUNT):
        if order < 1:
            raise NGramError(f"order must be >= 1, got {order}")
        if not 0 < discount < 1:
            raise NGramError(f"discount must be in (0, 1), got {discount}")
        self.order = order
        self.vocab_size = vocab_size
        self.vocab_hash = vocab_hash
        self.discount = discount
        # context tuple (length < order) -> {token id: count}
        self.counts: dict[tuple[int, ...], dict[int, int]] = {}
        self._cache: dict[tuple[int, ...], np.ndarray] = {}

    def _count(self, ctx: tuple[int, ...], token: int) -> None:
        bucket = self.counts.setdefault(ctx, {})
        bucket[token] = bucket.get(token, 0) + 1

    def add_sequence(self, ids: Sequence[int]) -> None:
        ids = list(ids)
        for i, token in enumerate(ids):
            for k in range(min(self.order, i + 1)):
                self._count(tuple(ids[i - k:i]), token)
        self._cache.clear()

    def next_dist(self, context: Sequence[int]) -> np.ndarray:
        """Distribution over the vocabulary given trailing context ids."""
        ctx = tuple(context[-(self.order - 1):]) if self.order > 1 else ()
        cached = self._cache.get(ctx)
        if cached is not None:
            return cached
        p = np.full(self.vocab_size, 1.0 / self.vocab_size)
        d = self.discount
        for k in range(len(ctx) + 1):
            sub = ctx[len(ctx) - k:]
            bucket = self.counts.get(sub)
            if not bucket:
                continue
            total = sum(bucket.values())
            arr = np.zeros(self.vocab_size)
            for t, c in bucket.items():
                arr[t] = c - d if c > d else 0.0
            arr /= total
            p = arr + (d * len(bucket) / total) * p
        self._cache[ctx] = p
        return p

    def logprob(self, ids: Sequence[int]) -> float:
        lp = 0.0
        for i, token in enumerate(ids):
            lp += math.log(self.next_dist(ids[max(0, i - self.order + 1):i])[token])
        return lp

    def perplexity(self, sequences) -> float:
        lp = n = 0
        for seq in sequences:
            lp += self.logprob(seq)
            n += len(seq)
        if n == 0:
            raise NGramError("no tokens to score")
        return math.exp(-lp / n)


def train(sequences, order: int, vocab: Vocab,
          discount: float = DEFAULT_DISCOUNT) -> NGramModel:
    """Exact n-gram counting over id sequences (append EOS beforehand)."""
    model = NGramModel(order, len(vocab), vocab.content_hash(), discount)
    empty = True
    for seq in sequences:
        model.add_sequence(seq)
        empty = False
    if empty:
        raise NGramError("cannot train on an empty corpus")
    return model


def sample(model, context, temperature: float, seed: int) -> int:
    """One token draw; deterministic for fixed (model, context, T, seed)."""
    rng = np.random.default_rng(seed)
    return sample_with_rng(model, context, temperature, rng)


def sample_with_rng(model, context, temperature: float, rng) -> int:
    if temperature <= 0:
        raise NGramError(f"temperature must be > 0, got {temperature}")
    p = model.next_dist(context)
    if temperature != 1.0:
        with np.errstate(divide="ignore"):
            logits = np.log(p) / temperature
        logits -= logits.max()
        p = np.exp(logits)
        total = p.sum()
        if not np.isfinite(total) or total <= 0:
            return int(np.argmax(model.next_dist(context)))
        p = p / total
    else:
        p = p / p.sum()
    return int(rng.choice(len(p), p=p))


def save(model: NGramModel, path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(MODEL_MAGIC + "\n")
        f.write(f"order\t{model.order}\n")
        f.write(f"discount\t{model.discount!r}\n")
        f.write(f"vocab_size\t{model.vocab_size}\n")
        f.write(f"vocab_hash\t{model.vocab_hash}\n")
        for ctx in sorted(model.counts):
            bucket = model.counts[ctx]
            ctx_s = ",".join(map(str, ctx))
            ev = " ".join(f"{t}:{c}" for t, c in sorted(bucket.items()))
            f.write(f"C\t{ctx_s}\t{ev}\n")


def load(path, vocab: Vocab | None = None) -> NGramModel:
    """Load a count dump; refuses to pair with a mismatched vocabulary."""
    with open(path, encoding="utf-8") as f:
        if f.readline().rstrip("\n") != MODEL_MAGIC:
            raise NGramError(f"{path}: not a verseforge n-gram model")
        header = {}
        counts = {}
        for lineno, line in enumerate(f, 2):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if parts[0] == "C":
                ctx = tuple(int(x) for x in parts[1].split(",")) if parts[1] else ()
                bucket = {}
                for ev in parts[2].split(" "):
                    t, c = ev.split(":")
                    bucket[int(t)] = int(c)
                counts[ctx] = bucket
            else:
                header[parts[0]] = parts[1]
    model = NGramModel(
        order=int(header["order"]),
        vocab_size=int(header["vocab_size"]),
        vocab_hash=header["vocab_hash"],
        discount=float(header["discount"]),
    )
    if vocab is not None and vocab.content_hash() != model.vocab_hash:
        raise NGramError(
            f"{path}: model was trained against a different vocabulary "
            f"({model.vocab_hash} != {vocab.content_hash()})")
    model.counts = counts
    return model
