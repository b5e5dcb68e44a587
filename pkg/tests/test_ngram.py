import math

import pytest

from pronex.errors import UsageError, ValidationError
from pronex.ngram import NgramModel


TRAIN = [
    "der Hund bellt laut .".split(),
    "der Hund schläft gern .".split(),
    "die Katze schläft .".split(),
    "die Katze bellt nie .".split(),
]


def test_probabilities_form_a_distribution():
    model = NgramModel(order=2, add_k=0.5).fit(TRAIN)
    # conditional distribution over the vocabulary sums to 1 per history
    for history in (("der",), ("Katze",), ("<s>",)):
        total = sum(
            model._cond_prob(history + (w,)) for w in model.vocab
        )
        assert total == pytest.approx(1.0, abs=1e-9)


def test_seen_pattern_beats_unseen():
    model = NgramModel(order=2).fit(TRAIN)
    assert model.logprob("der Hund bellt .".split()) > model.logprob(
        "Hund der . bellt".split()
    )


def test_oov_tokens_map_to_unk():
    model = NgramModel(order=2).fit(TRAIN)
    score = model.logprob("zzz qqq".split())
    assert math.isfinite(score)


def test_save_load_round_trip(tmp_path):
    model = NgramModel(order=3, add_k=0.25, lambdas=[0.2, 0.3, 0.5]).fit(TRAIN)
    path = tmp_path / "lm.json"
    model.save(path)
    loaded = NgramModel.load(path)
    for sent in TRAIN + ["die Hund bellt .".split()]:
        assert loaded.logprob(sent) == pytest.approx(model.logprob(sent), abs=1e-12)


def test_bad_model_file_rejected(tmp_path):
    path = tmp_path / "nope.json"
    path.write_text('{"format": "something-else"}', encoding="utf-8")
    with pytest.raises(ValidationError):
        NgramModel.load(path)


def test_bad_parameters_rejected():
    with pytest.raises(UsageError):
        NgramModel(order=0)
    with pytest.raises(UsageError):
        NgramModel(order=2, add_k=0.0)
    with pytest.raises(UsageError):
        NgramModel(order=2, lambdas=[0.9, 0.2])
