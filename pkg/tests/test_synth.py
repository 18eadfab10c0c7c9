import json

import pytest

from lexmerge.fs import Lexicon
from lexmerge.synth import (
    GeneratorSpec,
    SpecError,
    format_truth,
    generate_pair,
    identity_spec,
    paperlike,
)
from lexmerge.units import Level


def _dump(lex):
    return [(e.lemma, e.features.pairs(), [f.pairs() for f in e.forms]) for e in lex]


def test_deterministic():
    a1, b1, t1 = generate_pair(paperlike(seed=9, lemma_count=300))
    a2, b2, t2 = generate_pair(paperlike(seed=9, lemma_count=300))
    assert _dump(a1) == _dump(a2) and _dump(b1) == _dump(b2)
    assert format_truth(t1) == format_truth(t2)
    a3, _, _ = generate_pair(paperlike(seed=10, lemma_count=300))
    assert _dump(a1) != _dump(a3)


def test_identity_configuration():
    a, b, truth = generate_pair(identity_spec(seed=1, lemma_count=250))
    assert Lexicon("x", a).equivalent(b)
    assert len(truth.shared) == 250
    assert all(k[1] == v for k, v in truth.rules.items())


def test_disjoint_configuration():
    a, b, truth = generate_pair(paperlike(seed=1, lemma_count=300, shared_lemma_ratio=0.0))
    assert truth.shared == [] and not set(a.by_lemma) & set(b.by_lemma)
    assert len(b) == 300


def test_paperlike_shape():
    spec = paperlike(seed=0, lemma_count=2000)
    a, b, truth = generate_pair(spec)
    assert len(a) == 2000
    assert {e.pos for e in a} == {"noun", "adj", "verb", "adv", "np"}
    assert "np" not in {e.pos for e in b}
    shared = set(truth.shared)
    assert len(shared) == round(0.7 * 2000)
    assert shared <= set(b.by_lemma)
    assert len(truth.conflicts) == 3
    assert {b.homographs(l)[0].pos for l in truth.conflicts} == {"adverbNegative"}
    assert truth.rules[(Level.ENTRY, "partOfSpeech=np")] is None
    assert truth.rules[(Level.WORDFORM, "tense=pis")] == "mood=subjunctive|tense=imperfect"
    assert truth.b_extra


def test_from_json():
    data = {
        "seed": 3, "lemma_count": 100,
        "pos": [{"tag": "n", "weight": 1.0, "blocks": [{"axes": {"number": ["sg", "pl"]}}]}],
        "rewrite": {"partOfSpeech=n": [["partOfSpeech", "noun"]], "number=sg": [["num", "s"]],
                    "number=pl": [["num", "p"]]},
    }
    a, b, _ = generate_pair(GeneratorSpec.from_json(json.dumps(data)))
    assert {e.pos for e in b} == {"noun"}
    assert {f["num"] for e in b for f in e.forms} <= {"s", "p"}


@pytest.mark.parametrize("change, fragment", [
    ({"rewrite": {"partOfSpeech=n": [["partOfSpeech", "noun"]]}}, "lacks targets"),
    ({"rewrite": {"partOfSpeech=n": [["partOfSpeech", "noun"]], "number=sg": None, "number=pl": [["n", "p"]]}},
     "only PoS units"),
    ({"rewrite": {"partOfSpeech=n": [], "number=sg": [["n", "s"]], "number=pl": [["n", "p"]]}}, "empty target"),
    ({"rewrite": {"bogus=1": [["a", "b"]]}}, "unknown units"),
    ({"pos": []}, "empty PoS"),
    ({"lemma_count": 0}, "lemma_count"),
])
def test_spec_errors(change, fragment):
    data = {
        "pos": [{"tag": "n", "weight": 1.0, "blocks": [{"axes": {"number": ["sg", "pl"]}}]}],
        "rewrite": {"partOfSpeech=n": [["partOfSpeech", "noun"]], "number=sg": [["n", "s"]],
                    "number=pl": [["n", "p"]]},
    }
    data.update(change)
    with pytest.raises(SpecError, match=fragment):
        generate_pair(GeneratorSpec.from_dict(data))


def test_unknown_spec_key():
    with pytest.raises(SpecError):
        GeneratorSpec.from_dict({"colour": "red"})
