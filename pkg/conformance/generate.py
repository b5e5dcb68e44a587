#!/usr/bin/env python3
"""Regenerates the scorer-protocol conformance fixture.

Writes three files next to this script:
  requests.jsonl           100 canonical request lines
  stdin.ndjson             handshake line + the 100 requests (exact bytes a
                           scorer receives)
  golden_transcript.ndjson handshake reply + 100 responses of the
                           neg-length stub in logprob mode (exact bytes a
                           conforming stub must emit)
"""

from pathlib import Path

from pronex.protocol import ScoreRequest, dump_line, handshake_line, request_line

HERE = Path(__file__).parent

SENTENCE_POOL = [
    ("The house is old .", "Das Haus ist alt .", "Es sieht schön aus ."),
    ("What 's with the door ?", "Was ist mit der Tür ?", "Sie geht nicht auf ."),
    ("Watch out for a bat .", "Pass auf eine Fledermaus auf .", "Sie könnte sich verfangen ."),
    ("The key is gone .", "Der Schlüssel ist weg .", "Er war hier ."),
    ('He said " hello " .', 'Er sagte " Hallo " .', 'Es klang " seltsam " .'),
    ("A path like C:\\tmp .", "Ein Pfad wie C:\\tmp .", "Er meint C:\\tmp ."),
    ("It is a party 🎉 .", "Es ist eine Party 🎉 .", "Sie beginnt jetzt 🎉 ."),
    ("The street sign fell .", "Das Straßenschild fiel um .", "Es lag an der Straße ."),
]


def build_requests():
    requests = []
    for i in range(100):
        src, tgt_ctx, tgt = SENTENCE_POOL[i % len(SENTENCE_POOL)]
        requests.append(
            ScoreRequest(
                id=f"conf-{i:03d}",
                src_context=(f"Context sentence {i} .",) if i % 3 else (),
                src=src,
                tgt_context=(tgt_ctx,) if i % 2 else (),
                tgt=f"{tgt[:-1].rstrip()} {i} .",
            )
        )
    return requests


def main():
    requests = build_requests()
    with open(HERE / "requests.jsonl", "w", encoding="utf-8", newline="") as fh:
        for req in requests:
            fh.write(request_line(req))
    with open(HERE / "stdin.ndjson", "w", encoding="utf-8", newline="") as fh:
        fh.write(handshake_line())
        for req in requests:
            fh.write(request_line(req))
    with open(HERE / "golden_transcript.ndjson", "w", encoding="utf-8", newline="") as fh:
        fh.write(dump_line({"protocol": 1, "score_kind": "logprob"}))
        for req in requests:
            fh.write(dump_line({"id": req.id, "score": -len(req.tgt)}))
    print(f"wrote conformance fixture for {len(requests)} requests to {HERE}")


if __name__ == "__main__":
    main()
