from pathlib import Path

import pytest

from lexmerge.fs import FlatFS, LexEntry, Lexicon

DATA = Path(__file__).parent / "data"


@pytest.fixture
def apertium_xml():
    return (DATA / "apertium_sample.xml").read_bytes()


@pytest.fixture
def freeling_xml():
    return (DATA / "freeling_sample.xml").read_bytes()


def entry(lemma, pos, *forms, id=None, **entry_feats):
    feats = {"partOfSpeech": pos, **entry_feats}
    return LexEntry(lemma, FlatFS(feats), tuple(FlatFS(f) for f in forms), id=id,
                    sources=(("t", id or lemma),))


def lexicon(name, *entries):
    return Lexicon(name, entries)


def random_lexicon(seed, n_entries=200, name="R"):
    """Lexicon with random, partly correlated features and unique forms."""
    import random

    rng = random.Random(seed)
    pos_tags = ["n", "v", "adj", "adv"]
    entries = []
    for i in range(n_entries):
        lemma = f"l{rng.randrange(n_entries)}"
        pos = rng.choice(pos_tags)
        feats = {"partOfSpeech": pos}
        if rng.random() < 0.3:
            feats["register"] = rng.choice(["formal", "slang"])
        forms = []
        for k in range(rng.randrange(4)):
            f = {"writtenForm": f"{lemma}_{i}_{k}"}
            if pos == "v":
                # mood and tense travel together, person varies freely
                f.update(rng.choice([{"mood": "sub", "tense": "pres"}, {"mood": "ind", "tense": "past"}]))
                f["person"] = rng.choice("123")
            elif rng.random() < 0.7:
                f["number"] = rng.choice(["sg", "pl"])
            forms.append(f)
        entries.append(entry(lemma, pos, *forms, id=f"e{i}", **{k: v for k, v in feats.items() if k != "partOfSpeech"}))
    return Lexicon(name, entries)


def brute_force_units(view):
    """Units by pairwise comparison of per-container indicator vectors."""
    from lexmerge.units import VARIABLE, Level

    out = set()
    for level in Level:
        containers = [set(c.pairs) for c in view.containers[level]]
        pairs = sorted({p for c in containers for p in c}, key=repr)
        indicator = {p: tuple(p in c for c in containers) for p in pairs}
        assigned = set()
        for p in pairs:
            if p in assigned:
                continue
            if p[1] is VARIABLE:
                group = [p]
            else:
                group = [q for q in pairs if q[1] is not VARIABLE and q not in assigned
                         and indicator[q] == indicator[p]]
            assigned.update(group)
            out.add((level, frozenset(group)))
    return out
