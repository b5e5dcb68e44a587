"""POS, morphology, and coreference layers over a parallel corpus.

Layers normally come from external tools and are ingested from a JSONL
stream; a rule-based annotator is included as a desk-scale fallback so the
pipeline runs end to end without any third-party parser.
"""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass

from .corpus import ParallelCorpus, ParallelDocument
from .errors import UsageError, ValidationError

GENDERS = ("masc", "fem", "neut", "unknown")
NUMBERS = ("sg", "pl", "unknown")

_GENDER_CODE = {"masc": "m", "fem": "f", "neut": "n", "unknown": "?"}
_CODE_GENDER = {v: k for k, v in _GENDER_CODE.items()}
_NUMBER_CODE = {"sg": "sg", "pl": "pl", "unknown": "?"}
_CODE_NUMBER = {v: k for k, v in _NUMBER_CODE.items()}

# POS conventions used by the built-in annotator: PRP/PPER personal
# pronouns, PPOSAT possessive pronouns, NN nouns, X anything else.
PRONOUN_TAGS = {"PRP", "PPER", "PRON"}
POSSESSIVE_TAGS = {"PPOSAT", "PRP$"}
NOUN_TAGS = {"NN", "NE", "NOUN", "PROPN"}

EN_PRONOUNS = {
    "i", "you", "he", "she", "it", "we", "they", "me", "him", "her", "us",
    "them",
}
EN_DETERMINERS = {
    "a", "an", "the", "this", "that", "these", "those", "my", "your", "his",
    "her", "its", "our", "their", "another", "each", "every", "no",
}
DE_PERSONAL = {"er", "sie", "es", "ich", "du", "wir", "ihr"}

_POSSESSIVE_SUFFIXES = ("", "e", "em", "en", "er", "es")


def is_possessive_surface(surface: str) -> bool:
    low = surface.lower()
    for stem in ("sein", "ihr"):
        if low.startswith(stem) and low[len(stem):] in _POSSESSIVE_SUFFIXES:
            return True
    return False


# Grammatical genders for common German nouns. Only used by the fallback
# annotator; real pipelines ingest parser output instead.
GENDER_LEXICON = {
    "Abend": "masc", "Adler": "masc", "Affe": "masc", "Ampel": "fem",
    "Apfel": "masc", "Arm": "masc", "Auge": "neut", "Auto": "neut",
    "Bahnhof": "masc", "Ball": "masc", "Banane": "fem", "Bank": "fem",
    "Bär": "masc", "Baum": "masc", "Berg": "masc", "Besen": "masc",
    "Bett": "neut", "Bier": "neut", "Bild": "neut", "Biene": "fem",
    "Birne": "fem", "Bleistift": "masc", "Blume": "fem", "Boden": "masc",
    "Boot": "neut", "Brief": "masc", "Brille": "fem", "Brot": "neut",
    "Brücke": "fem", "Buch": "neut", "Burg": "fem", "Bus": "masc",
    "Computer": "masc", "Dach": "neut", "Decke": "fem", "Dorf": "neut",
    "Drache": "masc", "Dusche": "fem", "Ecke": "fem", "Ei": "neut",
    "Eimer": "masc", "Eis": "neut", "Elefant": "masc", "Ente": "fem",
    "Erde": "fem", "Esel": "masc", "Essen": "neut", "Eule": "fem",
    "Fahrrad": "neut", "Falke": "masc", "Farbe": "fem", "Feder": "fem",
    "Fenster": "neut", "Feuer": "neut", "Film": "masc", "Fisch": "masc",
    "Flasche": "fem", "Fledermaus": "fem", "Fliege": "fem", "Flugzeug": "neut",
    "Fluss": "masc", "Frage": "fem", "Frau": "fem", "Frosch": "masc",
    "Frühstück": "neut", "Fuchs": "masc", "Fuß": "masc", "Gabel": "fem",
    "Gans": "fem", "Garten": "masc", "Gebäude": "neut", "Geld": "neut",
    "Gemüse": "neut", "Geschenk": "neut", "Gesicht": "neut", "Gitarre": "fem",
    "Glas": "neut", "Glocke": "fem", "Gras": "neut", "Gurke": "fem",
    "Gürtel": "masc", "Haar": "neut", "Hafen": "masc", "Hammer": "masc",
    "Hand": "fem", "Handschuh": "masc", "Handtuch": "neut", "Hase": "masc",
    "Haus": "neut", "Heft": "neut", "Heizung": "fem", "Hemd": "neut",
    "Herz": "neut", "Himmel": "masc", "Hose": "fem", "Hotel": "neut",
    "Huhn": "neut", "Hund": "masc", "Hut": "masc", "Igel": "masc",
    "Insel": "fem", "Jacke": "fem", "Jahr": "neut", "Junge": "masc",
    "Kabel": "neut", "Kaffee": "masc", "Kamera": "fem", "Kamin": "masc",
    "Kamm": "masc", "Karte": "fem", "Kartoffel": "fem", "Käse": "masc",
    "Katze": "fem", "Keller": "masc", "Kerze": "fem", "Kette": "fem",
    "Kind": "neut", "Kirche": "fem", "Kirsche": "fem", "Kiste": "fem",
    "Kleid": "neut", "Knochen": "masc", "Knopf": "masc", "Koffer": "masc",
    "Kopf": "masc", "Korb": "masc", "Krawatte": "fem", "Kuchen": "masc",
    "Kugel": "fem", "Kuh": "fem", "Küche": "fem", "Lampe": "fem",
    "Land": "neut", "Lappen": "masc", "Lehrer": "masc", "Leiter": "fem",
    "Licht": "neut", "Lied": "neut", "Löffel": "masc", "Loch": "neut",
    "Löwe": "masc", "Luft": "fem", "Mädchen": "neut", "Mann": "masc",
    "Mantel": "masc", "Maschine": "fem", "Mauer": "fem", "Maus": "fem",
    "Meer": "neut", "Messer": "neut", "Milch": "fem", "Minute": "fem",
    "Mond": "masc", "Morgen": "masc", "Motor": "masc", "Mücke": "fem",
    "Müll": "masc", "Mund": "masc", "Münze": "fem", "Mütze": "fem",
    "Nacht": "fem", "Nadel": "fem", "Nagel": "masc", "Nase": "fem",
    "Nest": "neut", "Ofen": "masc", "Ohr": "neut", "Orange": "fem",
    "Paket": "neut", "Papier": "neut", "Pfanne": "fem", "Pferd": "neut",
    "Pflanze": "fem", "Pinguin": "masc", "Pilz": "masc", "Puppe": "fem",
    "Rad": "neut", "Radio": "neut", "Ratte": "fem", "Regal": "neut",
    "Regen": "masc", "Ring": "masc", "Rock": "masc", "Rose": "fem",
    "Rucksack": "masc", "Salz": "neut", "Säge": "fem", "Schaf": "neut",
    "Schal": "masc", "Schere": "fem", "Schiff": "neut", "Schild": "neut",
    "Schlange": "fem", "Schloss": "neut", "Schlüssel": "masc",
    "Schmetterling": "masc", "Schnee": "masc", "Schraube": "fem",
    "Schrank": "masc", "Schuh": "masc", "Schule": "fem", "Schwein": "neut",
    "See": "masc", "Seife": "fem", "Sekunde": "fem", "Sessel": "masc",
    "Socke": "fem", "Sofa": "neut", "Sonne": "fem", "Spiegel": "masc",
    "Spinne": "fem", "Stadt": "fem", "Stern": "masc", "Stift": "masc",
    "Straße": "fem", "Strand": "masc", "Stuhl": "masc", "Stunde": "fem",
    "Suppe": "fem", "Tag": "masc", "Tal": "neut", "Tasche": "fem",
    "Tasse": "fem", "Tee": "masc", "Teller": "masc", "Teppich": "masc",
    "Tier": "neut", "Tiger": "masc", "Tisch": "masc", "Tomate": "fem",
    "Topf": "masc", "Tor": "neut", "Traube": "fem", "Treppe": "fem",
    "Turm": "masc", "Tür": "fem", "Uhr": "fem", "Vogel": "masc",
    "Wand": "fem", "Wald": "masc", "Wasser": "neut", "Weg": "masc",
    "Wein": "masc", "Wespe": "fem", "Wiese": "fem", "Woche": "fem",
    "Wolf": "masc", "Wolke": "fem", "Wurm": "masc", "Zahn": "masc",
    "Zange": "fem", "Zaun": "masc", "Zebra": "neut", "Zeit": "fem",
    "Zeitung": "fem", "Zelt": "neut", "Ziege": "fem", "Zimmer": "neut",
    "Zitrone": "fem", "Zug": "masc", "Zunge": "fem", "Zwiebel": "fem",
}


@dataclass(frozen=True)
class Morph:
    gender: str = "unknown"
    number: str = "unknown"
    person: int | None = None  # 1, 2, 3, or None for unknown

    def __post_init__(self):
        if self.gender not in GENDERS:
            raise ValidationError(f"bad gender {self.gender!r}")
        if self.number not in NUMBERS:
            raise ValidationError(f"bad number {self.number!r}")
        if self.person not in (None, 1, 2, 3):
            raise ValidationError(f"bad person {self.person!r}")

    def to_codes(self) -> dict:
        return {
            "g": _GENDER_CODE[self.gender],
            "n": _NUMBER_CODE[self.number],
            "p": str(self.person) if self.person else "?",
        }

    @classmethod
    def from_codes(cls, rec: dict) -> "Morph":
        g = rec.get("g", "?")
        n = rec.get("n", "?")
        p = str(rec.get("p", "?"))
        if g not in _CODE_GENDER:
            raise ValidationError(f"bad gender code {g!r}")
        if n not in _CODE_NUMBER:
            raise ValidationError(f"bad number code {n!r}")
        if p not in ("1", "2", "3", "?"):
            raise ValidationError(f"bad person code {p!r}")
        return cls(_CODE_GENDER[g], _CODE_NUMBER[n], int(p) if p != "?" else None)


@dataclass(frozen=True)
class Mention:
    sent_idx: int
    start: int
    end: int  # exclusive
    head: int
    is_nominal: bool
    is_pronoun: bool

    def __post_init__(self):
        if not self.start < self.end:
            raise ValidationError(f"empty mention span [{self.start}, {self.end})")
        if not self.start <= self.head < self.end:
            raise ValidationError(
                f"head {self.head} outside span [{self.start}, {self.end})"
            )

    def key(self):
        return (self.sent_idx, self.start)


@dataclass(frozen=True)
class CorefChain:
    chain_id: str
    mentions: tuple[Mention, ...]

    def __post_init__(self):
        if not self.mentions:
            raise ValidationError(f"chain {self.chain_id!r} has no mentions")
        keys = [m.key() for m in self.mentions]
        if keys != sorted(keys) or len(set(keys)) != len(keys):
            raise ValidationError(
                f"chain {self.chain_id!r} mentions not strictly ordered"
            )


@dataclass(frozen=True)
class Layer:
    """Per-sentence annotation: one POS tag and one Morph per token."""

    pos: tuple[str, ...]
    morph: tuple[Morph, ...]


@dataclass(frozen=True)
class AnnotatedDocument:
    doc: ParallelDocument
    src_layers: tuple[Layer, ...]
    tgt_layers: tuple[Layer, ...]
    src_chains: tuple[CorefChain, ...]
    tgt_chains: tuple[CorefChain, ...]

    @property
    def doc_id(self) -> str:
        return self.doc.doc_id

    def layer(self, side: str, sent_idx: int) -> Layer:
        return (self.src_layers if side == "src" else self.tgt_layers)[sent_idx]

    def chains(self, side: str) -> tuple[CorefChain, ...]:
        return self.src_chains if side == "src" else self.tgt_chains


def validate_annotated(adoc: AnnotatedDocument):
    """Re-checks every structural invariant; raises ValidationError on the
    first violation."""
    doc = adoc.doc
    for side, layers in (("src", adoc.src_layers), ("tgt", adoc.tgt_layers)):
        if len(layers) != len(doc):
            raise ValidationError(
                f"{doc.doc_id}: {side} has {len(layers)} layers for "
                f"{len(doc)} sentences"
            )
        for idx, layer in enumerate(layers):
            sent = doc.source(idx) if side == "src" else doc.target(idx)
            if len(layer.pos) != len(sent) or len(layer.morph) != len(sent):
                raise ValidationError(
                    f"{doc.doc_id}: {side} sentence {idx}: layer length "
                    f"{len(layer.pos)}/{len(layer.morph)} for {len(sent)} tokens"
                )
    for side, chains in (("src", adoc.src_chains), ("tgt", adoc.tgt_chains)):
        for chain in chains:
            for m in chain.mentions:
                if not 0 <= m.sent_idx < len(doc):
                    raise ValidationError(
                        f"{doc.doc_id}: chain {chain.chain_id}: sentence index "
                        f"{m.sent_idx} out of range"
                    )
                sent = doc.source(m.sent_idx) if side == "src" else doc.target(m.sent_idx)
                if m.end > len(sent):
                    raise ValidationError(
                        f"{doc.doc_id}: chain {chain.chain_id}: span end {m.end} "
                        f"beyond sentence {m.sent_idx} length {len(sent)}"
                    )


def _default_layer(sent_len: int) -> Layer:
    return Layer(("X",) * sent_len, (Morph(),) * sent_len)


def ingest_annotations(corpus: ParallelCorpus, source) -> list[AnnotatedDocument]:
    """Builds annotated documents from a JSONL stream (path or iterable of
    record dicts). Chains may be spread over any records of a document and
    are merged by id. Sentences with no record get an empty default layer.
    """
    if isinstance(source, (str, bytes)) or hasattr(source, "__fspath__"):
        records = []
        with open(source, encoding="utf-8") as fh:
            for ln, raw in enumerate(fh, start=1):
                raw = raw.strip()
                if not raw:
                    continue
                try:
                    records.append(json.loads(raw))
                except json.JSONDecodeError as exc:
                    raise ValidationError(
                        f"{source}: line {ln}: bad JSON: {exc}"
                    ) from exc
    else:
        records = list(source)

    docs_by_id = {d.doc_id: d for d in corpus.documents}
    layers = defaultdict(dict)  # (doc_id, side) -> {sent_idx: Layer}
    chain_mentions = defaultdict(dict)  # (doc_id, side) -> {chain_id: [mention dict]}

    for rec in records:
        doc_id = rec.get("doc_id")
        side = rec.get("side")
        if doc_id not in docs_by_id:
            raise ValidationError(f"annotation references unknown document {doc_id!r}")
        if side not in ("src", "tgt"):
            raise ValidationError(f"{doc_id}: bad side {side!r}")
        doc = docs_by_id[doc_id]

        if "sent_idx" in rec and ("pos" in rec or "morph" in rec):
            sent_idx = rec["sent_idx"]
            if not 0 <= sent_idx < len(doc):
                raise ValidationError(
                    f"{doc_id}: sentence index {sent_idx} out of range "
                    f"(document has {len(doc)} pairs)"
                )
            sent = doc.source(sent_idx) if side == "src" else doc.target(sent_idx)
            pos = tuple(rec.get("pos", ()))
            morph = tuple(Morph.from_codes(m) for m in rec.get("morph", ()))
            if len(pos) != len(sent) or len(morph) != len(sent):
                raise ValidationError(
                    f"{doc_id}: {side} sentence {sent_idx}: {len(pos)} tags / "
                    f"{len(morph)} morphs for {len(sent)} tokens"
                )
            layers[(doc_id, side)][sent_idx] = Layer(pos, morph)

        for chain_rec in rec.get("chains", ()):
            cid = chain_rec["id"]
            store = chain_mentions[(doc_id, side)].setdefault(cid, [])
            store.extend(chain_rec.get("mentions", ()))

    out = []
    for doc in corpus.documents:
        side_layers = {}
        side_chains = {}
        for side in ("src", "tgt"):
            got = layers.get((doc.doc_id, side), {})
            filled = []
            for idx in range(len(doc)):
                sent = doc.source(idx) if side == "src" else doc.target(idx)
                filled.append(got.get(idx, _default_layer(len(sent))))
            side_layers[side] = tuple(filled)

            chains = []
            for cid, mrecs in sorted(chain_mentions.get((doc.doc_id, side), {}).items()):
                mentions = []
                for m in mrecs:
                    mention = Mention(
                        m["sent"], m["start"], m["end"], m["head"],
                        bool(m.get("nominal")), bool(m.get("pronoun")),
                    )
                    if not 0 <= mention.sent_idx < len(doc):
                        raise ValidationError(
                            f"{doc.doc_id}: chain {cid}: sentence {mention.sent_idx} "
                            "out of range"
                        )
                    sent = (
                        doc.source(mention.sent_idx)
                        if side == "src"
                        else doc.target(mention.sent_idx)
                    )
                    if mention.end > len(sent):
                        raise ValidationError(
                            f"{doc.doc_id}: chain {cid}: span [{mention.start}, "
                            f"{mention.end}) beyond sentence {mention.sent_idx} "
                            f"length {len(sent)}"
                        )
                    mentions.append(mention)
                mentions.sort(key=lambda m: m.key())
                chains.append(CorefChain(cid, tuple(mentions)))
            side_chains[side] = tuple(chains)

        adoc = AnnotatedDocument(
            doc, side_layers["src"], side_layers["tgt"],
            side_chains["src"], side_chains["tgt"],
        )
        validate_annotated(adoc)
        out.append(adoc)
    return out


def _en_annotate(sent):
    """POS + morph + (mention, compat-gender) candidates for an English
    sentence."""
    pos, morph, mentions = [], [], []
    for tok in sent.tokens:
        low = tok.surface.lower()
        if low in EN_PRONOUNS:
            pos.append("PRP")
            number = "pl" if low in ("we", "they", "them", "us") else "sg"
            person = 3 if low in ("he", "she", "it", "him", "her", "they", "them") else 1
            morph.append(Morph("unknown", number, person))
            if low == "it":
                mentions.append(
                    (Mention(0, tok.index, tok.index + 1, tok.index, False, True),
                     "unknown")
                )
        elif (
            tok.index > 0
            and sent.tokens[tok.index - 1].surface.lower() in EN_DETERMINERS
            and tok.surface.isalpha()
            and low not in EN_DETERMINERS
        ):
            pos.append("NN")
            morph.append(Morph("unknown", "sg", None))
            mentions.append(
                (Mention(0, tok.index, tok.index + 1, tok.index, True, False),
                 "unknown")
            )
        else:
            pos.append("X")
            morph.append(Morph())
    return pos, morph, mentions


def _de_pronoun_morph(surface: str, sent_initial: bool):
    """Morph for a German personal pronoun surface, or None if it is not an
    er/sie/es form. Capitalized 'Sie' off sentence start is polite address
    (2nd person); sentence-initial 'Sie' stays ambiguous until chain linking
    confirms a third-person reading."""
    low = surface.lower()
    gender = {"er": "masc", "sie": "fem", "es": "neut"}.get(low)
    if gender is None:
        return None
    if surface[0].isupper() and low == "sie" and not sent_initial:
        return Morph("unknown", "unknown", 2)
    return Morph(gender, "sg", 3)


def _de_annotate(sent, lexicon):
    pos, morph, mentions = [], [], []
    for tok in sent.tokens:
        surface = tok.surface
        low = surface.lower()
        sent_initial = tok.index == 0 or (
            tok.index == 1 and not sent.tokens[0].surface[0].isalnum()
        )
        pron = _de_pronoun_morph(surface, sent_initial)
        if pron is not None:
            pos.append("PPER")
            morph.append(pron)
            if pron.person == 3:  # polite "Sie" stays out of chains
                mentions.append(
                    (Mention(0, tok.index, tok.index + 1, tok.index, False, True),
                     pron.gender)
                )
        elif is_possessive_surface(surface):
            pos.append("PPOSAT")
            # possessor gender class: sein- covers masc and neut
            morph.append(Morph("fem" if low.startswith("ihr") else "unknown", "sg", 3))
            mentions.append(
                (Mention(0, tok.index, tok.index + 1, tok.index, False, True),
                 "fem" if low.startswith("ihr") else "masc/neut")
            )
        elif low in DE_PERSONAL:
            pos.append("PPER")
            morph.append(Morph("unknown", "unknown", 1))
        elif surface[0].isupper() and surface.isalpha() and (
            not sent_initial or surface in lexicon
        ):
            gender = lexicon.get(surface, "unknown")
            pos.append("NN")
            morph.append(Morph(gender, "sg", None))
            mentions.append(
                (Mention(0, tok.index, tok.index + 1, tok.index, True, False),
                 gender)
            )
        else:
            pos.append("X")
            morph.append(Morph())
    return pos, morph, mentions


def _compatible(pron_gender: str, nominal_gender: str) -> bool:
    if pron_gender in ("unknown",):  # English "it": any non-person nominal
        return True
    if pron_gender == "masc/neut":
        return nominal_gender in ("masc", "neut", "unknown")
    return nominal_gender in (pron_gender, "unknown")


def _link_chains(side: str, per_sent_mentions, skip_es: bool):
    """Nearest-preceding-compatible-antecedent linking. Returns chains.

    per_sent_mentions: list over sentences of (mention, gender_label,
    surface) triples, already re-indexed with real sent_idx.
    """
    flat = [m for sent in per_sent_mentions for m in sent]
    flat.sort(key=lambda rec: rec[0].key())
    chain_of = {}
    chains = defaultdict(list)
    counter = 0
    for idx, (mention, gender, surface) in enumerate(flat):
        if mention.is_nominal:
            cid = f"{side}{counter}"
            counter += 1
            chain_of[mention.key()] = cid
            chains[cid].append(mention)
            continue
        if skip_es and surface.lower() == "es":
            continue  # target-side "es" is never chained
        antecedent = None
        for prev, prev_gender, _ in reversed(flat[:idx]):
            if prev.is_nominal and _compatible(gender, prev_gender):
                antecedent = prev
                break
        if antecedent is None:
            # polite-address candidates stay out of chains entirely
            if gender == "fem" and surface[0].isupper():
                continue
            cid = f"{side}{counter}"
            counter += 1
            chain_of[mention.key()] = cid
            chains[cid].append(mention)
        else:
            cid = chain_of[antecedent.key()]
            chain_of[mention.key()] = cid
            chains[cid].append(mention)
    return tuple(
        CorefChain(cid, tuple(sorted(ms, key=lambda m: m.key())))
        for cid, ms in sorted(chains.items())
        if ms
    )


def heuristic_annotate(corpus: ParallelCorpus, gender_lexicon=None) -> list[AnnotatedDocument]:
    """Rule-based annotation fallback. Closed-class pronouns are tagged from
    embedded lists; capitalized non-initial German words become nouns with
    the lexicon's gender; each third-person pronoun links to the nearest
    preceding gender- and number-compatible nominal in the same document.
    Unknown words get unknown morphology and stay outside chains.
    """
    lexicon = gender_lexicon if gender_lexicon is not None else GENDER_LEXICON
    out = []
    for doc in corpus.documents:
        src_layers, tgt_layers = [], []
        src_mentions, tgt_mentions = [], []
        for idx, (src, tgt) in enumerate(doc.pairs):
            pos, morph, mentions = _en_annotate(src)
            src_layers.append(Layer(tuple(pos), tuple(morph)))
            src_mentions.append([
                (Mention(idx, m.start, m.end, m.head, m.is_nominal, m.is_pronoun),
                 g, src.tokens[m.head].surface)
                for m, g in mentions
            ])
            pos, morph, mentions = _de_annotate(tgt, lexicon)
            tgt_layers.append(Layer(tuple(pos), tuple(morph)))
            tgt_mentions.append([
                (Mention(idx, m.start, m.end, m.head, m.is_nominal, m.is_pronoun),
                 g, tgt.tokens[m.head].surface)
                for m, g in mentions
            ])

        src_chains = _link_chains("s", src_mentions, skip_es=False)
        tgt_chains = _link_chains("t", tgt_mentions, skip_es=True)

        # a sentence-initial "Sie" that found no feminine antecedent keeps
        # its ambiguous reading: demote person so extraction skips it
        chained = {m.key() for c in tgt_chains for m in c.mentions}
        fixed_layers = []
        for idx, layer in enumerate(tgt_layers):
            tgt = doc.target(idx)
            morphs = list(layer.morph)
            for tok in tgt.tokens:
                if (
                    tok.surface == "Sie"
                    and morphs[tok.index].person == 3
                    and (idx, tok.index) not in chained
                ):
                    morphs[tok.index] = Morph("unknown", "unknown", None)
            fixed_layers.append(Layer(layer.pos, tuple(morphs)))

        adoc = AnnotatedDocument(
            doc, tuple(src_layers), tuple(fixed_layers), src_chains, tgt_chains
        )
        validate_annotated(adoc)
        out.append(adoc)
    return out


def chain_antecedent(chain: CorefChain, pronoun_mention: Mention) -> Mention | None:
    """Nearest nominal mention preceding `pronoun_mention` in the chain, or
    None when the chain contains no preceding nominal (callers then fall
    back to recording the pronoun itself)."""
    if pronoun_mention not in chain.mentions:
        raise UsageError(
            f"mention at {pronoun_mention.key()} is not in chain {chain.chain_id!r}"
        )
    best = None
    for m in chain.mentions:
        if m.key() >= pronoun_mention.key():
            break
        if m.is_nominal:
            best = m
    return best
