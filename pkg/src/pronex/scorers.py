"""Scorer implementations: built-in test doubles (bracketing oracles,
majority-class prior, seeded random, n-gram) and the subprocess client for
external scorers speaking the wire protocol.

Every scorer exposes `score(requests) -> responses` in canonical units
(log-probability, higher is better) with responses in request order.
"""

from __future__ import annotations

import hashlib
import math
import subprocess

from . import protocol
from .errors import ProtocolError, TransportError, UsageError
from .ngram import NgramModel
from .protocol import ScoreResponse
from .testgen import CLASS_GENDER, PRONOUN_CLASSES

# it->{es, sie, er} alignment probabilities observed in large training
# corpora; the majority-class baseline scores with these.
DEFAULT_CLASS_PRIORS = {"es": 0.334, "sie": 0.084, "er": 0.058}


def split_request_id(request_id: str) -> tuple[str, str]:
    """'{example_id}#{part}' -> (example_id, part); part is 'ref' or 'cN'."""
    example_id, _, part = request_id.rpartition("#")
    return example_id, part


class EchoScorer:
    """Scores everything 0; every judgement ties and counts incorrect."""

    name = "echo"

    def score(self, requests):
        return [ScoreResponse(r.id, 0.0) for r in requests]


class OracleScorer:
    """Gives 0 to the candidate whose pronoun gender matches the gold
    antecedent gender, -1 otherwise. With an unknown gold gender, the
    reference surface wins instead. `invert` flips the sign, turning the
    upper accuracy bracket into the lower one."""

    def __init__(self, testset, invert=False):
        self.name = "anti_oracle" if invert else "oracle"
        self.invert = invert
        self._examples = {ex.example_id: ex for ex in testset.examples}

    def _candidate_class(self, ex, part):
        if part == "ref":
            return ex.candidate.ref_pronoun_class
        idx = int(part[1:])
        return ex.contrastive[idx].replaced

    def score(self, requests):
        out = []
        for req in requests:
            example_id, part = split_request_id(req.id)
            ex = self._examples.get(example_id)
            if ex is None:
                raise UsageError(f"request {req.id!r} matches no example")
            cls = self._candidate_class(ex, part)
            gold = ex.candidate.tgt_antecedent_gender
            if gold != "unknown":
                good = CLASS_GENDER[cls] == gold
            else:
                good = cls == ex.candidate.ref_pronoun_class
            score = 0.0 if good else -1.0
            out.append(ScoreResponse(req.id, -score if self.invert else score))
        return out


class PriorScorer:
    """Scores a sentence by the class prior of its candidate pronoun: the
    first er/sie/es token found in the target sentence."""

    name = "prior"

    def __init__(self, priors=None):
        self.priors = dict(DEFAULT_CLASS_PRIORS if priors is None else priors)
        missing = [c for c in PRONOUN_CLASSES if c not in self.priors]
        if missing:
            raise UsageError(f"prior table missing classes: {missing}")

    def score(self, requests):
        out = []
        for req in requests:
            cls = next(
                (t.lower() for t in req.tgt.split() if t.lower() in PRONOUN_CLASSES),
                None,
            )
            prior = self.priors.get(cls, min(self.priors.values()) / 10) if cls else 1e-9
            out.append(ScoreResponse(req.id, math.log(prior)))
        return out


class RandomScorer:
    """Uniform scores, deterministic in (seed, request id): two runs over
    the same test set agree, and scores are exchangeable across the three
    candidates of an example."""

    name = "random"

    def __init__(self, seed=0):
        self.seed = int(seed)

    def score(self, requests):
        out = []
        for req in requests:
            digest = hashlib.sha256(
                f"{self.seed}:{req.id}".encode("utf-8")
            ).digest()
            u = int.from_bytes(digest[:8], "big") / 2**64
            out.append(ScoreResponse(req.id, u))
        return out


class NgramScorer:
    """Sentence log-probability of the target side under an n-gram model."""

    name = "ngram"

    def __init__(self, model: NgramModel):
        self.model = model

    def score(self, requests):
        return [
            ScoreResponse(req.id, self.model.logprob(req.tgt.split()))
            for req in requests
        ]


class SubprocessScorer:
    """Client side of the wire protocol. Launches the scorer command,
    performs the handshake, then streams one request and reads one response
    at a time (the protocol forbids reordering)."""

    def __init__(self, command):
        self.command = list(command)
        self.name = "cmd:" + " ".join(self.command)
        self._proc = None
        self._kind = None

    def __enter__(self):
        self._proc = subprocess.Popen(
            self.command,
            stdin=subprocess.PIPE,
            stdout=subprocess.PIPE,
            text=True,
            encoding="utf-8",
        )
        self._send(protocol.handshake_line())
        reply = self._readline(context="handshake")
        self._kind = protocol.parse_handshake_reply(reply)
        return self

    def __exit__(self, *exc):
        self.close()

    def close(self):
        if self._proc is not None:
            if self._proc.stdin:
                try:
                    self._proc.stdin.close()
                except BrokenPipeError:
                    pass
            self._proc.wait(timeout=10)
            self._proc = None

    def _send(self, line: str):
        try:
            self._proc.stdin.write(line)
            self._proc.stdin.flush()
        except BrokenPipeError as exc:
            raise TransportError(
                f"scorer process died while writing: {self.command}"
            ) from exc

    def _readline(self, context: str) -> str:
        line = self._proc.stdout.readline()
        if not line:
            code = self._proc.poll()
            raise TransportError(
                f"scorer closed its output during {context} (exit code {code})"
            )
        return line

    def score(self, requests):
        if self._proc is None:
            with self:
                return self._score_inner(requests)
        return self._score_inner(requests)

    def _score_inner(self, requests):
        responses = []
        for req in requests:
            self._send(protocol.request_line(req))
            try:
                line = self._readline(context=f"request {req.id!r}")
            except TransportError as exc:
                exc.completed = len(responses)
                raise
            resp = protocol.parse_response_line(line, self._kind)
            if resp.id != req.id:
                raise ProtocolError(
                    f"response id {resp.id!r} does not match request {req.id!r}"
                )
            responses.append(resp)
        return responses


def parse_scorer_spec(spec: str, testset=None):
    """Builds a scorer from a CLI spec: 'oracle', 'prior:es=0.3,sie=0.1,
    er=0.05', 'random:seed=7', 'ngram:model=m.json', 'ngram:train=tgt.txt',
    or 'cmd:<command line>' for an external process."""
    if spec.startswith("cmd:"):
        import shlex

        return SubprocessScorer(shlex.split(spec[len("cmd:"):]))
    kind, _, rest = spec.partition(":")
    config = {}
    if rest:
        for part in rest.split(","):
            key, _, value = part.partition("=")
            if not value:
                raise UsageError(f"bad scorer option {part!r} in {spec!r}")
            config[key.strip()] = value.strip()
    return builtin_scorer(kind, config, testset=testset)


def builtin_scorer(kind: str, config=None, testset=None):
    """Factory for the built-in scorers (test doubles standing in for real
    translation systems)."""
    config = dict(config or {})
    if kind == "echo":
        return EchoScorer()
    if kind == "oracle":
        if testset is None:
            raise UsageError("oracle scorer needs the test set")
        return OracleScorer(testset)
    if kind == "anti_oracle":
        if testset is None:
            raise UsageError("anti_oracle scorer needs the test set")
        return OracleScorer(testset, invert=True)
    if kind == "prior":
        if config:
            try:
                priors = {k: float(v) for k, v in config.items()}
            except ValueError as exc:
                raise UsageError(f"bad prior value in {config}") from exc
        else:
            priors = None
        return PriorScorer(priors)
    if kind == "random":
        return RandomScorer(config.get("seed", 0))
    if kind == "ngram":
        if "model" in config:
            model = NgramModel.load(config["model"])
        elif "train" in config:
            model = NgramModel(order=int(config.get("order", 3)))
            with open(config["train"], encoding="utf-8") as fh:
                model.fit(line.split() for line in fh)
        else:
            raise UsageError(
                "ngram scorer needs model=<path> or train=<text path>"
            )
        return NgramScorer(model)
    raise UsageError(f"unknown scorer kind {kind!r}")
