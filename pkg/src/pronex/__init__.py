"""Contrastive pronoun-translation test sets from document-aligned parallel
corpora, plus an evaluation harness for arbitrary translation scorers."""

__version__ = "0.1.0"
