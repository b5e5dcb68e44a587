"""Interpolated n-gram language model with add-k smoothing.

Backs the built-in `ngram` scorer: sentences are scored by their
log-probability under a target-side model. Small and serializable; not
meant to compete with real language models.
"""

from __future__ import annotations

import json
import math
from collections import Counter

from .errors import UsageError, ValidationError

BOS = "<s>"
EOS = "</s>"
UNK = "<unk>"


class NgramModel:
    def __init__(self, order=3, add_k=1.0, lambdas=None):
        if order < 1:
            raise UsageError(f"order must be >= 1, got {order}")
        if add_k <= 0:
            raise UsageError(f"add_k must be positive, got {add_k}")
        self.order = order
        self.add_k = add_k
        if lambdas is None:
            lambdas = [1.0 / order] * order
        if len(lambdas) != order or abs(sum(lambdas) - 1.0) > 1e-9:
            raise UsageError("interpolation weights must sum to 1, one per order")
        self.lambdas = list(lambdas)
        self.counts = [Counter() for _ in range(order)]  # n-1 -> Counter[ngram]
        self.context_counts = [Counter() for _ in range(order)]
        self.vocab = {UNK, EOS}

    def fit(self, sentences) -> "NgramModel":
        """`sentences`: iterable of token lists."""
        for tokens in sentences:
            self.vocab.update(tokens)
            padded = [BOS] * (self.order - 1) + list(tokens) + [EOS]
            for i in range(self.order - 1, len(padded)):
                for n in range(1, self.order + 1):
                    if n - 1 > i:
                        continue
                    gram = tuple(padded[i - n + 1 : i + 1])
                    self.counts[n - 1][gram] += 1
                    self.context_counts[n - 1][gram[:-1]] += 1
        return self

    def _cond_prob(self, gram) -> float:
        """Interpolated P(w | history) with add-k smoothing at every order."""
        v = len(self.vocab)
        p = 0.0
        for n in range(1, self.order + 1):
            sub = gram[len(gram) - n :]
            num = self.counts[n - 1][sub] + self.add_k
            den = self.context_counts[n - 1][sub[:-1]] + self.add_k * v
            p += self.lambdas[n - 1] * (num / den)
        return p

    def _normalize(self, token: str) -> str:
        return token if token in self.vocab else UNK

    def logprob(self, tokens) -> float:
        """Log-probability of a token sequence (EOS included)."""
        padded = [BOS] * (self.order - 1) + [
            self._normalize(t) for t in tokens
        ] + [EOS]
        total = 0.0
        for i in range(self.order - 1, len(padded)):
            gram = tuple(padded[i - self.order + 1 : i + 1])
            total += math.log(self._cond_prob(gram))
        return total

    def save(self, path):
        payload = {
            "format": "pronex-ngram",
            "version": 1,
            "order": self.order,
            "add_k": self.add_k,
            "lambdas": self.lambdas,
            "vocab": sorted(self.vocab),
            "counts": [
                {" ".join(g): c for g, c in sorted(counter.items())}
                for counter in self.counts
            ],
        }
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, ensure_ascii=False)

    @classmethod
    def load(cls, path) -> "NgramModel":
        with open(path, encoding="utf-8") as fh:
            payload = json.load(fh)
        if payload.get("format") != "pronex-ngram":
            raise ValidationError(f"{path}: not an n-gram model file")
        model = cls(payload["order"], payload["add_k"], payload["lambdas"])
        model.vocab = set(payload["vocab"])
        for n_m1, grams in enumerate(payload["counts"]):
            for key, c in grams.items():
                gram = tuple(key.split(" "))
                model.counts[n_m1][gram] = c
                model.context_counts[n_m1][gram[:-1]] += c
        return model
