import pytest
from hypothesis import given
from hypothesis import strategies as st

from lexmerge.fs import (
    FlatFS,
    Lexicon,
    entry_from_raw,
    entry_subsumes,
    subsumes,
    unify_entries,
    unify_flat,
)
from lexmerge.lmf_io import LmfStructureError, RawEntry, parse_lmf

from conftest import entry

fs = st.dictionaries(st.sampled_from("abcde"), st.sampled_from("xy"), max_size=5).map(FlatFS)


def test_unify_examples():
    a = FlatFS({"gender": "m", "number": "sg"})
    b = FlatFS({"number": "sg", "type": "sup"})
    assert unify_flat(a, b) == {"gender": "m", "number": "sg", "type": "sup"}
    assert list(unify_flat(a, b)) == ["gender", "number", "type"]
    assert unify_flat(FlatFS({"gender": "m"}), FlatFS({"gender": "f"})) is None


def test_subsumes_examples():
    assert subsumes(FlatFS(), FlatFS({"a": "x"}))
    assert subsumes(FlatFS({"gender": "m"}), FlatFS({"gender": "m", "number": "sg"}))
    assert not subsumes(FlatFS({"gender": "m"}), FlatFS({"gender": "f", "number": "sg"}))


def test_flatfs_rejects_duplicates_and_ignores_order():
    with pytest.raises(ValueError):
        FlatFS([("a", "x"), ("a", "y")])
    p, q = FlatFS([("a", "x"), ("b", "y")]), FlatFS([("b", "y"), ("a", "x")])
    assert p == q and hash(p) == hash(q)


@given(fs, fs)
def test_commutative(a, b):
    assert unify_flat(a, b) == unify_flat(b, a)


@given(fs)
def test_idempotent(a):
    assert unify_flat(a, a) == a


@given(fs, fs, fs)
def test_associative_where_defined(a, b, c):
    ab, bc = unify_flat(a, b), unify_flat(b, c)
    if ab is not None and bc is not None:
        assert unify_flat(ab, c) == unify_flat(a, bc)


@given(fs, fs)
def test_upper_bound(a, b):
    u = unify_flat(a, b)
    if u is None:
        assert any(a[k] != b[k] for k in set(a) & set(b))
    else:
        assert subsumes(a, u) and subsumes(b, u)
        assert set(u) == set(a) | set(b)


def test_sample_entry_from_raw(apertium_xml):
    raw = parse_lmf(apertium_xml).entries[0]
    e = entry_from_raw(raw, "apertium", 1)
    assert e.lemma == "tenebroso"
    assert e.features == {"partOfSpeech": "adj"}
    assert e.forms == (FlatFS({"writtenForm": "tenebrosísimo", "type": "sup", "gender": "m", "number": "sg"}),)
    assert e.ref == "id20588-s"


def test_entry_without_forms_and_duplicate_forms():
    raw = RawEntry((("partOfSpeech", "adv"),), (("writtenForm", "ya"),))
    e = entry_from_raw(raw, "x", 3)
    assert e.forms == () and e.ref == "#3"
    wf = (("writtenForm", "ya"),)
    assert len(entry_from_raw(RawEntry(raw.feats, raw.lemma, (wf, wf))).forms) == 2


def test_entry_needs_pos():
    with pytest.raises(LmfStructureError, match="partOfSpeech"):
        entry_from_raw(RawEntry((), (("writtenForm", "ya"),)), "x", 1)


def test_contador_gains_feminine_forms():
    masc = entry("contador", "n",
                 {"writtenForm": "contador", "gender": "m", "number": "sg"},
                 {"writtenForm": "contadores", "gender": "m", "number": "pl"})
    both = entry("contador", "n",
                 {"writtenForm": "contador", "gender": "m", "number": "sg"},
                 {"writtenForm": "contadora", "gender": "f", "number": "sg"})
    u = unify_entries(masc, both)
    genders = sorted(f["gender"] for f in u.forms)
    assert genders == ["f", "m", "m"]
    assert entry_subsumes(masc, u) and entry_subsumes(both, u)
    assert not entry_subsumes(u, masc)


def test_no_adverb_conflict():
    a = entry("no", "adverbGeneral", {"writtenForm": "no"})
    b = entry("no", "adverbNegative", {"writtenForm": "no"})
    assert unify_entries(a, b) is None


def test_self_unification():
    e = entry("gato", "n", {"writtenForm": "gato", "number": "sg"}, {"writtenForm": "gatos", "number": "pl"})
    assert unify_entries(e, e) == e


def test_forms_never_fail_unification():
    a = entry("gato", "n", {"writtenForm": "gato", "number": "sg"})
    b = entry("gato", "n", {"writtenForm": "gato", "number": "pl"})
    u = unify_entries(a, b)
    assert u is not None and len(u.forms) == 2


def test_lemma_mismatch_raises():
    with pytest.raises(ValueError):
        unify_entries(entry("a", "n"), entry("b", "n"))


@given(st.lists(fs, max_size=3), st.lists(fs, max_size=3), fs, fs)
def test_entry_unify_commutes_up_to_order(fa, fb, ea, eb):
    a = entry("w", "n", *fa, **dict(ea))
    b = entry("w", "n", *fb, **dict(eb))
    ab, ba = unify_entries(a, b), unify_entries(b, a)
    assert (ab is None) == (ba is None)
    if ab is not None:
        assert ab.features == ba.features
        assert len(ab.forms) == len(ba.forms)


def test_lexicon_equivalence_ignores_order():
    e1 = entry("a", "n", {"writtenForm": "a"}, {"writtenForm": "as"})
    e2 = entry("a", "n", {"writtenForm": "as"}, {"writtenForm": "a"})
    assert Lexicon("x", [e1]).equivalent(Lexicon("y", [e2]))
    assert Lexicon("x", [e1, e1]).homographs("a") == [e1, e1]
