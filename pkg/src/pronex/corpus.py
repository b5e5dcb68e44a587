"""Document-aligned parallel corpora: loading, tokenization, context windows.

A corpus is a sequence of documents, each a sequence of aligned sentence
pairs. Documents are the unit over which context windows and coreference
are resolved; no operation ever reaches across a document boundary.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path

from .errors import UsageError, ValidationError

SOURCE = "source"
TARGET = "target"

# Abbreviations whose trailing period stays attached (Moses-style
# nonbreaking prefixes, heavily trimmed).
_NONBREAKING_PREFIXES = {
    "en": {
        "Mr", "Mrs", "Ms", "Dr", "Prof", "Rev", "Hon", "St", "Sgt", "Capt",
        "Gen", "Lt", "Col", "Jr", "Sr", "vs", "etc", "inc", "Inc", "Ltd",
        "Co", "Corp", "No", "Nos", "art", "pp", "ca", "approx", "fig",
        "e.g", "i.e", "cf", "al", "Jan", "Feb", "Mar", "Apr", "Jun", "Jul",
        "Aug", "Sep", "Sept", "Oct", "Nov", "Dec", "Mon", "Tue", "Wed",
        "Thu", "Fri", "Sat", "Sun",
    },
    "de": {
        "Dr", "Prof", "Hr", "Fr", "Nr", "Nrn", "St", "bzw", "usw", "etc",
        "ca", "evtl", "ggf", "inkl", "max", "min", "sog", "vgl", "z.B",
        "d.h", "u.a", "Abs", "Abb", "Art", "Aufl", "Bd", "bspw", "Str",
        "Tel", "Mio", "Mrd", "Jh", "Jan", "Feb", "Mär", "Apr", "Jun",
        "Jul", "Aug", "Sep", "Okt", "Nov", "Dez", "Mo", "Di", "Mi", "Do",
        "Fr", "Sa", "So",
    },
}

# Tokens the splitter itself produces; they pass through untouched so that
# tokenize is idempotent on its own space-joined output.
_CONTRACTION_TOKENS = {
    "n't", "'s", "'m", "'re", "'ve", "'ll", "'d", "'t", "'",
    "n’t", "’s", "’m", "’re", "’ve", "’ll", "’d", "’t", "’",
}

_ALWAYS_SPLIT_RE = re.compile(r'([!"#$%&()*+/:;<=>?@\[\\\]^_`{|}~„“”«»‚…¡¿–—])')
_NT_RE = re.compile(r"([^\W\d_])([nN]['’][tT])$")
# the lookbehind keeps word-initial n't units (already split) intact
_ALPHA_APOS_ALPHA_RE = re.compile(r"([^\W\d_])(?<!\b[nN])(['’])(?=[^\W\d_])")
_DIGIT_APOS_S_RE = re.compile(r"(\d)(['’][sS])$")
_EDGE_APOS_LEAD_RE = re.compile(r"^(['’])(?=.)")
_EDGE_APOS_TRAIL_RE = re.compile(r"(?<=.)(['’])$")
_COMMA_RE_A = re.compile(r",(?!\d)")
_COMMA_RE_B = re.compile(r"(?<!\d),")
_MULTIDOT_RE = re.compile(r"\.\.+")


@dataclass(frozen=True)
class Token:
    surface: str
    index: int

    def __post_init__(self):
        if not self.surface or re.search(r"\s", self.surface):
            raise ValidationError(
                f"bad token surface {self.surface!r} at index {self.index}"
            )


@dataclass(frozen=True)
class Sentence:
    tokens: tuple[Token, ...]
    lang: str = SOURCE

    def __post_init__(self):
        for i, tok in enumerate(self.tokens):
            if tok.index != i:
                raise ValidationError(
                    f"token index {tok.index} at position {i}: indices must be "
                    "contiguous from 0"
                )

    def __len__(self):
        return len(self.tokens)

    def surfaces(self) -> list[str]:
        return [t.surface for t in self.tokens]

    def text(self) -> str:
        return " ".join(t.surface for t in self.tokens)

    @classmethod
    def from_surfaces(cls, surfaces, lang=SOURCE) -> "Sentence":
        return cls(tuple(Token(s, i) for i, s in enumerate(surfaces)), lang)


@dataclass(frozen=True)
class ParallelDocument:
    doc_id: str
    pairs: tuple[tuple[Sentence, Sentence], ...]

    def __len__(self):
        return len(self.pairs)

    def source(self, idx: int) -> Sentence:
        return self.pairs[idx][0]

    def target(self, idx: int) -> Sentence:
        return self.pairs[idx][1]


@dataclass(frozen=True)
class ParallelCorpus:
    documents: tuple[ParallelDocument, ...]
    # Set when no boundary information was given and the whole input was
    # wrapped in one synthetic document: context windows may then cross
    # true (unknown) document boundaries.
    synthetic_boundaries: bool = False

    def __post_init__(self):
        seen = set()
        for doc in self.documents:
            if doc.doc_id in seen:
                raise ValidationError(f"duplicate document id {doc.doc_id!r}")
            seen.add(doc.doc_id)

    def __len__(self):
        return len(self.documents)

    def num_pairs(self) -> int:
        return sum(len(d) for d in self.documents)

    def iter_pairs(self):
        """Yields (document, sentence index, source Sentence, target Sentence)
        in corpus order."""
        for doc in self.documents:
            for idx, (src, tgt) in enumerate(doc.pairs):
                yield doc, idx, src, tgt


def _peel_periods(chunk: str, lang: str) -> list[str] | None:
    """Splits a trailing period off `chunk` unless it belongs to an
    abbreviation. Returns None if nothing to do."""
    if not chunk.endswith(".") or chunk == ".":
        return None
    base = chunk[:-1]
    if base.endswith("."):
        return None  # multidot runs are shielded before we get here
    prefixes = _NONBREAKING_PREFIXES.get(lang, _NONBREAKING_PREFIXES["en"])
    if base in prefixes:
        return None
    if len(base) == 1 and base.isalpha():
        return None  # initials: "A."
    if "." in base and base.replace(".", "").isalpha():
        return None  # acronyms spelled with dots: "U.S."
    return [base, "."]


def _split_chunk(chunk: str, lang: str) -> list[str]:
    if chunk in _CONTRACTION_TOKENS or chunk == "...":
        return [chunk]

    s = chunk
    # shield "..." runs so the generic period logic leaves them alone
    s = _MULTIDOT_RE.sub(lambda m: " " + "\x00" * len(m.group(0)) + " ", s)
    s = _ALWAYS_SPLIT_RE.sub(r" \1 ", s)
    s = _COMMA_RE_A.sub(" , ", s)
    s = _COMMA_RE_B.sub(" , ", s)
    # apostrophes not flanked by letters split off as quote marks
    s = _EDGE_APOS_LEAD_RE.sub(r"\1 ", s)
    s = _EDGE_APOS_TRAIL_RE.sub(r" \1", s)
    if lang == "en":
        s = _NT_RE.sub(r"\1 \2", s)
        s = _DIGIT_APOS_S_RE.sub(r"\1 \2", s)
    s = _ALPHA_APOS_ALPHA_RE.sub(r"\1 \2", s)

    # restore shielded dot runs
    pieces = s.replace("\x00", ".").split()
    if pieces == [chunk]:
        peeled = _peel_periods(chunk, lang)
        if peeled is None:
            return [chunk]
        return _split_chunk(peeled[0], lang) + ["."]
    out = []
    for piece in pieces:
        out.extend(_split_chunk(piece, lang))
    return out


def tokenize(text: str, lang: str = "en") -> list[Token]:
    """Moses-style tokenization, trimmed to what extraction needs:
    punctuation is split from words, English contractions are split
    (wo n't, John 's), abbreviations keep their period. Deterministic, and
    idempotent on its own output joined with single spaces.
    """
    surfaces = []
    for chunk in text.split():
        surfaces.extend(_split_chunk(chunk, lang))
    return [Token(s, i) for i, s in enumerate(surfaces)]


def _sentence_from_line(line: str, lang_tag: str, side: str, pretokenized: bool) -> Sentence:
    if pretokenized:
        return Sentence.from_surfaces(line.split(), side)
    return Sentence(tuple(tokenize(line, lang_tag)), side)


def _read_lines(path) -> list[str]:
    with open(path, encoding="utf-8") as fh:
        return [line.rstrip("\n") for line in fh]


def _parse_boundaries(boundaries, n_lines: int) -> list[int]:
    if isinstance(boundaries, (str, Path)):
        ends = []
        for ln, raw in enumerate(_read_lines(boundaries), start=1):
            raw = raw.strip()
            if not raw:
                continue
            if not raw.isdigit():
                raise ValidationError(
                    f"boundary file line {ln}: expected a decimal index, got {raw!r}"
                )
            ends.append(int(raw))
    else:
        ends = list(boundaries)
    prev = 0
    for end in ends:
        if end <= prev:
            raise ValidationError(
                f"boundary indices must be strictly increasing, got {end} after {prev}"
            )
        if end > n_lines:
            raise ValidationError(
                f"boundary index {end} out of range for {n_lines} lines"
            )
        prev = end
    if ends and ends[-1] != n_lines:
        raise ValidationError(
            f"last boundary index {ends[-1]} does not equal line count {n_lines}"
        )
    if not ends and n_lines > 0:
        raise ValidationError(
            f"boundary list is empty but input has {n_lines} lines"
        )
    return ends


def load_parallel_documents(
    src_path,
    tgt_path,
    boundaries=None,
    *,
    pretokenized: bool = False,
    src_lang: str = "en",
    tgt_lang: str = "de",
) -> ParallelCorpus:
    """Loads a line-aligned file pair into a document-structured corpus.

    `boundaries` is a path to a boundary file, an inline list of document
    end indices, or None. Without boundaries the whole input becomes one
    synthetic document (flagged on the corpus, since adjacent-line context
    may then be random).
    """
    src_lines = _read_lines(src_path)
    tgt_lines = _read_lines(tgt_path)
    if len(src_lines) != len(tgt_lines):
        raise ValidationError(
            f"line count mismatch: source has {len(src_lines)} lines, "
            f"target has {len(tgt_lines)} lines"
        )
    n = len(src_lines)

    synthetic = boundaries is None
    if synthetic:
        ends = [n] if n else []
    else:
        ends = _parse_boundaries(boundaries, n)

    docs = []
    start = 0
    for doc_idx, end in enumerate(ends):
        pairs = tuple(
            (
                _sentence_from_line(src_lines[i], src_lang, SOURCE, pretokenized),
                _sentence_from_line(tgt_lines[i], tgt_lang, TARGET, pretokenized),
            )
            for i in range(start, end)
        )
        docs.append(ParallelDocument(f"d{doc_idx:04d}", pairs))
        start = end
    return ParallelCorpus(tuple(docs), synthetic_boundaries=synthetic)


def load_jsonl_documents(
    path,
    *,
    pretokenized: bool = True,
    src_lang: str = "en",
    tgt_lang: str = "de",
) -> ParallelCorpus:
    """Loads the JSONL document format:
    {"doc_id": str, "src": [str], "tgt": [str]} per line."""
    docs = []
    with open(path, encoding="utf-8") as fh:
        for ln, raw in enumerate(fh, start=1):
            raw = raw.strip()
            if not raw:
                continue
            try:
                rec = json.loads(raw)
            except json.JSONDecodeError as exc:
                raise ValidationError(f"{path}: line {ln}: bad JSON: {exc}") from exc
            for key in ("doc_id", "src", "tgt"):
                if key not in rec:
                    raise ValidationError(f"{path}: line {ln}: missing field {key!r}")
            if len(rec["src"]) != len(rec["tgt"]):
                raise ValidationError(
                    f"{path}: line {ln}: document {rec['doc_id']!r} has "
                    f"{len(rec['src'])} source vs {len(rec['tgt'])} target sentences"
                )
            pairs = tuple(
                (
                    _sentence_from_line(s, src_lang, SOURCE, pretokenized),
                    _sentence_from_line(t, tgt_lang, TARGET, pretokenized),
                )
                for s, t in zip(rec["src"], rec["tgt"])
            )
            docs.append(ParallelDocument(str(rec["doc_id"]), pairs))
    return ParallelCorpus(tuple(docs))


def corpus_to_lines(corpus: ParallelCorpus) -> tuple[list[str], list[str]]:
    """Serializes back to line format by joining tokens with single spaces."""
    src_lines, tgt_lines = [], []
    for _, _, src, tgt in corpus.iter_pairs():
        src_lines.append(src.text())
        tgt_lines.append(tgt.text())
    return src_lines, tgt_lines


def context_window(doc: ParallelDocument, sent_idx: int, k: int, side: str = SOURCE) -> list[Sentence]:
    """Up to `k` sentences preceding `sent_idx`, in document order, truncated
    (never padded) at the document start."""
    if not 0 <= sent_idx < len(doc):
        raise ValidationError(
            f"sentence index {sent_idx} out of range for document "
            f"{doc.doc_id!r} of length {len(doc)}"
        )
    if k < 0:
        raise UsageError(f"context depth must be >= 0, got {k}")
    lo = max(0, sent_idx - k)
    pick = 0 if side == SOURCE else 1
    if side not in (SOURCE, TARGET):
        raise UsageError(f"side must be {SOURCE!r} or {TARGET!r}, got {side!r}")
    return [doc.pairs[i][pick] for i in range(lo, sent_idx)]
