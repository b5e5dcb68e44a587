"""Scorer wire protocol: newline-delimited JSON over a scorer process's
standard input/output.

Handshake: the evaluator sends {"protocol": 1, "score_kind_requested":
"logprob"}; the scorer replies {"protocol": 1, "score_kind": "logprob"|
"nll"}. Then one request line per example part and exactly one response
line per request, in order. UTF-8, LF-terminated. The canonical line
encoding is compact JSON with no spaces, so transcripts are byte-comparable
across implementations.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from .errors import ProtocolError

PROTOCOL_VERSION = 1
SCORE_KINDS = ("logprob", "nll")


@dataclass(frozen=True)
class ScoreRequest:
    id: str
    src_context: tuple[str, ...]
    src: str
    tgt_context: tuple[str, ...]
    tgt: str


@dataclass(frozen=True)
class ScoreResponse:
    id: str
    logprob: float  # canonical: higher is better

    def __post_init__(self):
        if not math.isfinite(self.logprob):
            raise ProtocolError(f"non-finite score for id {self.id!r}")


def dump_line(obj: dict) -> str:
    return json.dumps(obj, ensure_ascii=False, separators=(",", ":")) + "\n"


def handshake_line() -> str:
    return dump_line({"protocol": PROTOCOL_VERSION, "score_kind_requested": "logprob"})


def parse_handshake_reply(line: str) -> str:
    """Returns the scorer's declared score kind."""
    try:
        rec = json.loads(line)
    except json.JSONDecodeError as exc:
        raise ProtocolError(f"bad handshake reply: {line!r}") from exc
    if rec.get("protocol") != PROTOCOL_VERSION:
        raise ProtocolError(
            f"scorer speaks protocol {rec.get('protocol')!r}, "
            f"expected {PROTOCOL_VERSION}"
        )
    kind = rec.get("score_kind")
    if kind not in SCORE_KINDS:
        raise ProtocolError(f"bad score_kind in handshake: {kind!r}")
    return kind


def request_line(req: ScoreRequest) -> str:
    return dump_line(
        {
            "id": req.id,
            "src_context": list(req.src_context),
            "src": req.src,
            "tgt_context": list(req.tgt_context),
            "tgt": req.tgt,
        }
    )


def parse_response_line(line: str, score_kind: str) -> ScoreResponse:
    """Decodes a response, normalizing nll scores to log-probabilities."""
    try:
        rec = json.loads(line)
    except json.JSONDecodeError as exc:
        raise ProtocolError(f"bad response line: {line!r}") from exc
    if "error" in rec:
        raise ProtocolError(f"scorer error for id {rec.get('id')!r}: {rec['error']}")
    if "id" not in rec or "score" not in rec:
        raise ProtocolError(f"response missing id/score: {line!r}")
    score = rec["score"]
    if not isinstance(score, (int, float)) or isinstance(score, bool) or not math.isfinite(score):
        raise ProtocolError(f"non-finite or non-numeric score for id {rec['id']!r}")
    value = -float(score) if score_kind == "nll" else float(score)
    return ScoreResponse(str(rec["id"]), value)
