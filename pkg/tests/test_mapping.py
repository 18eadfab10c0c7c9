import pytest
from hypothesis import given
from hypothesis import strategies as st

from lexmerge.fs import FlatFS, LexEntry, Lexicon
from lexmerge.mapping import (
    EvidenceError,
    MappingParams,
    MappingRule,
    MappingTable,
    TableFormatError,
    format_report,
    jaccard,
    learn_mapping,
    mapping_report,
    read_table,
    write_table,
)
from lexmerge.synth import generate_pair, identity_spec, paperlike, planted_recovery
from lexmerge.units import Level, MinimalUnit

from conftest import entry


def test_jaccard_examples():
    assert jaccard({"a", "b"}, {"a", "b"}) == 1.0
    assert jaccard({"a"}, {"b"}) == 0.0
    assert jaccard({"a", "b", "c"}, {"b", "c", "d"}) == 0.5
    assert jaccard(set(), set()) == 0.0


sets = st.frozensets(st.integers(0, 20), max_size=10)


@given(sets, sets)
def test_jaccard_laws(a, b):
    assert jaccard(a, b) == jaccard(b, a)
    assert 0.0 <= jaccard(a, b) <= 1.0
    if a:
        assert jaccard(a, a) == 1.0


def test_params_validated():
    with pytest.raises(ValueError):
        MappingParams(sim_threshold=1.5)
    with pytest.raises(ValueError):
        MappingParams(min_support=-1)


@pytest.fixture(scope="module")
def paperlike_pair():
    return generate_pair(paperlike(seed=1, lemma_count=1500))


@pytest.fixture(scope="module")
def paperlike_table(paperlike_pair):
    a, b, _ = paperlike_pair
    return learn_mapping(a, b)


def test_self_mapping():
    a, _, _ = generate_pair(identity_spec(seed=2, lemma_count=300))
    table = learn_mapping(a, a)
    for r in table.rules:
        assert r.candidates[0] == (r.source, 1.0)


def test_planted_recovery(paperlike_pair, paperlike_table):
    _, _, truth = paperlike_pair
    rec = planted_recovery(paperlike_table, truth)
    assert rec["ratio"] >= 0.95, rec["missed"]
    np_rule = paperlike_table.rule(MinimalUnit(Level.ENTRY, (("partOfSpeech", "np"),)))
    assert np_rule is not None and np_rule.status == "UNMAPPED"
    hist = mapping_report(paperlike_table)
    assert hist["1"] >= 0.9 * hist["total"]


def test_split_rule_learned(paperlike_pair, paperlike_table):
    rule = paperlike_table.rule(MinimalUnit(Level.WORDFORM, (("tense", "pis"),)))
    assert [t.id for t in rule.targets] == ["mood=subjunctive|tense=imperfect"]
    assert paperlike_pair[2].rules[(Level.WORDFORM, "tense=pis")] == "mood=subjunctive|tense=imperfect"


def test_low_evidence_unit(paperlike_pair, paperlike_table):
    a, b, truth = paperlike_pair
    fts = MinimalUnit(Level.WORDFORM, (("tense", "fts"),))
    shared = set(a.by_lemma) & set(b.by_lemma)
    carriers = {e.lemma for e in a for f in e.forms if f.get("tense") == "fts"}
    assert len(carriers & shared) == 2
    assert [t.id for t in paperlike_table.rule(fts).targets] == [truth.rules[(Level.WORDFORM, fts.id)]]


def _rename(lex, mapping, name):
    def ren(fs):
        return FlatFS((mapping.get(k, k), v) for k, v in fs.items())
    return Lexicon(name, [LexEntry(e.lemma, ren(e.features), tuple(ren(f) for f in e.forms), e.id, e.sources)
                          for e in lex])


def test_relabeling_invariance(paperlike_pair, paperlike_table):
    a, b, _ = paperlike_pair
    renames = {"grammaticalGender": "g", "grammaticalNumber": "n", "mood": "m"}
    table2 = learn_mapping(a, _rename(b, renames, "B2"))
    for r1, r2 in zip(paperlike_table.rules, table2.rules):
        assert r1.source == r2.source
        renamed = [MinimalUnit(t.level, tuple((renames.get(k, k), v) for k, v in t.pairs)) for t in r1.targets]
        assert renamed == r2.targets


def test_threshold_monotone(paperlike_pair):
    a, b, _ = paperlike_pair
    previous = None
    for th in (0.5, 0.7, 0.8, 0.9, 1.0):
        table = learn_mapping(a, b, MappingParams(sim_threshold=th))
        mapped = {r.source for r in table.rules if r.mapped}
        if previous is not None:
            assert mapped <= previous
        previous = mapped


def test_deterministic_and_parallel(paperlike_pair, paperlike_table):
    a, b, _ = paperlike_pair
    assert write_table(learn_mapping(a, b)) == write_table(paperlike_table)
    assert write_table(learn_mapping(a, b, workers=4)) == write_table(paperlike_table)


def test_evidence_error():
    a = Lexicon("A", [entry("x", "n")])
    b = Lexicon("B", [entry("y", "n")])
    with pytest.raises(EvidenceError, match="min_shared_lemmas"):
        learn_mapping(a, b)
    with pytest.raises(EvidenceError):
        learn_mapping(a, Lexicon("C", [entry("x", "n")]), MappingParams(min_shared_lemmas=2))


def test_report_uniform():
    units = [MinimalUnit(Level.WORDFORM, (("a", str(i)),)) for i in range(5)]
    table = MappingTable([MappingRule(u, ((u, 1.0),)) for u in units])
    assert mapping_report(table) == {"0": 0, "1": 5, "2": 0, "3+": 0, "total": 5}
    assert format_report(mapping_report(table)).splitlines()[-1] == "Total\t5"


def test_table_file_round_trip(paperlike_table):
    text = write_table(paperlike_table)
    assert "# UNMAPPED partOfSpeech=np\tENTRY" in text
    back = read_table(text)
    assert write_table(back) == text
    assert back.direction == paperlike_table.direction == ("apertium", "freeling")
    assert back.source_open == paperlike_table.source_open


def test_table_format_error():
    with pytest.raises(TableFormatError, match="line 2"):
        read_table("# direction\tA\tB\nWORDFORM\tonly-two\n")


def test_inverse_requires_bijection():
    u, v = MinimalUnit(Level.WORDFORM, (("a", "x"),)), MinimalUnit(Level.WORDFORM, (("b", "y"),))
    table = MappingTable([MappingRule(u, ((v, 1.0),))], ("A", "B"))
    inv = table.inverse()
    assert inv.rules[0].source == v and inv.rules[0].targets == [u]
    assert inv.direction == ("B", "A")
    with pytest.raises(ValueError):
        MappingTable([MappingRule(u, ())]).inverse()
