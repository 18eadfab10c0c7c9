"""
Flat feature structures, lexical entries and the unification algebra.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET
from collections import Counter
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field

from .lmf_io import LmfStructureError, RawEntry, RawLmfDocument, iter_lmf

POS = "partOfSpeech"
WRITTEN_FORM = "writtenForm"
# marks alternative conversions of one source entry inside a converted file
VARIANT_TAG = "Variant"


class FlatFS(Mapping):
    """Immutable attribute -> value map.

    Equality ignores order; iteration follows insertion order so that output
    keeps the feat order of the source.
    """

    __slots__ = ("_d", "_hash")

    def __init__(self, pairs: Iterable[tuple[str, str]] | Mapping = ()):
        if isinstance(pairs, Mapping):
            pairs = pairs.items()
        d: dict[str, str] = {}
        for att, val in pairs:
            if att in d:
                raise ValueError(f"duplicate attribute {att!r}")
            d[att] = val
        self._d = d
        self._hash = None

    def __getitem__(self, key: str) -> str:
        return self._d[key]

    def __iter__(self) -> Iterator[str]:
        return iter(self._d)

    def __len__(self) -> int:
        return len(self._d)

    def __eq__(self, other):
        if isinstance(other, FlatFS):
            return self._d == other._d
        if isinstance(other, Mapping):
            return self._d == dict(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._d.items()))
        return self._hash

    def __repr__(self):
        inner = ", ".join(f"{k}={v}" for k, v in self._d.items())
        return f"FlatFS({inner})"

    def pairs(self) -> tuple[tuple[str, str], ...]:
        return tuple(self._d.items())

    @classmethod
    def _trusted(cls, d: dict[str, str]) -> "FlatFS":
        fs = cls.__new__(cls)
        fs._d = d
        fs._hash = None
        return fs


def unify_flat(a: Mapping, b: Mapping) -> FlatFS | None:
    """Least structure containing both ``a`` and ``b``; ``None`` on a clash.

    Attribute order is ``a``'s, followed by attributes only ``b`` has.
    """
    out = dict(a.items())
    for att, val in b.items():
        mine = out.get(att)
        if mine is None:
            out[att] = val
        elif mine != val:
            return None
    return FlatFS._trusted(out)


def subsumes(a: Mapping, b: Mapping) -> bool:
    """True iff every pair of ``a`` is also in ``b``."""
    if len(a) > len(b):
        return False
    for att, val in a.items():
        if b.get(att) != val:
            return False
    return True


@dataclass(frozen=True)
class LexEntry:
    """A lexical entry: entry-level features plus a bag of word forms.

    ``lemma`` is the external key and is not part of either feature map.
    ``sources`` records ``(lexicon name, entry ref)`` provenance and does not
    take part in equality, neither does ``extra`` (opaque XML children) or
    ``variant`` (set by the converter on alternative conversions).
    """

    lemma: str
    features: FlatFS
    forms: tuple[FlatFS, ...] = ()
    id: str | None = None
    sources: tuple[tuple[str, str], ...] = field(default=(), compare=False)
    extra: tuple[str, ...] = field(default=(), compare=False)
    variant: tuple[str, int] | None = field(default=None, compare=False)

    @property
    def pos(self) -> str | None:
        return self.features.get(POS)

    @property
    def ref(self) -> str:
        return self.sources[0][1] if self.sources else (self.id or "-")

    def content_key(self):
        """Identity up to word-form order (multiset of forms)."""
        return (self.lemma, self.features, frozenset(Counter(self.forms).items()))


def entry_from_raw(raw: RawEntry, source: str = "", position: int = 0) -> LexEntry:
    try:
        features = FlatFS(raw.feats)
        forms = tuple(FlatFS(wf) for wf in raw.word_forms)
    except ValueError as exc:
        raise LmfStructureError(str(exc), position or None) from None
    if POS not in features:
        raise LmfStructureError(f"entry has no {POS} feat", position or None)
    ref = raw.id if raw.id is not None else f"#{position}"
    extra, variant = [], None
    for blob in raw.extra:
        if blob.startswith(f"<{VARIANT_TAG} "):
            elem = ET.fromstring(blob)
            variant = (elem.get("of", ref), int(elem.get("rank", "0")))
            ref = variant[0]
        else:
            extra.append(blob)
    return LexEntry(
        lemma=raw.written_form,
        features=features,
        forms=forms,
        id=raw.id,
        sources=((source, ref),),
        extra=tuple(extra),
        variant=variant,
    )


def entry_to_raw(entry: LexEntry) -> RawEntry:
    extra = entry.extra
    if entry.variant is not None:
        of, rank = entry.variant
        marker = ET.Element(VARIANT_TAG, {"of": of, "rank": str(rank)})
        extra = extra + (ET.tostring(marker, encoding="unicode"),)
    return RawEntry(
        feats=entry.features.pairs(),
        lemma=((WRITTEN_FORM, entry.lemma),),
        word_forms=tuple(f.pairs() for f in entry.forms),
        id=entry.id,
        extra=extra,
    )


def _pair_forms(a_forms, b_forms):
    """Greedy pairing on shared writtenForm; unpaired forms of both sides kept."""
    by_form: dict[str, list[int]] = {}
    for j, fb in enumerate(b_forms):
        wf = fb.get(WRITTEN_FORM)
        if wf is not None:
            by_form.setdefault(wf, []).append(j)
    used = [False] * len(b_forms)
    out = []
    for fa in a_forms:
        wf = fa.get(WRITTEN_FORM)
        merged = None
        for j in by_form.get(wf, ()) if wf is not None else ():
            if used[j]:
                continue
            merged = unify_flat(fa, b_forms[j])
            if merged is not None:
                used[j] = True
                break
        out.append(fa if merged is None else merged)
    out.extend(fb for j, fb in enumerate(b_forms) if not used[j])
    return tuple(out)


def unify_entries(a: LexEntry, b: LexEntry) -> LexEntry | None:
    """Unify two entries with the same lemma, or ``None`` if their entry-level
    features clash. Word forms never make the unification fail."""
    if a.lemma != b.lemma:
        raise ValueError(f"lemma mismatch: {a.lemma!r} vs {b.lemma!r}")
    features = unify_flat(a.features, b.features)
    if features is None:
        return None
    extra = a.extra + tuple(x for x in b.extra if x not in a.extra)
    return LexEntry(
        lemma=a.lemma,
        features=features,
        forms=_pair_forms(a.forms, b.forms),
        id=a.id if a.id is not None else b.id,
        sources=a.sources + b.sources,
        extra=extra,
    )


def entry_subsumes(a: LexEntry, b: LexEntry) -> bool:
    """True iff ``b`` holds all of ``a``'s information: entry features and
    every word form of ``a`` subsumed by some word form of ``b``."""
    if not subsumes(a.features, b.features):
        return False
    return all(any(subsumes(fa, fb) for fb in b.forms) for fa in a.forms)


class Lexicon:
    """Entries in document order, indexed by lemma (homographs in order)."""

    def __init__(self, name: str = "", entries: Iterable[LexEntry] = (), meta=()):
        self.name = name
        self.meta = tuple(meta)
        self._entries: list[LexEntry] = []
        self.by_lemma: dict[str, list[LexEntry]] = {}
        for e in entries:
            self.add(e)

    def add(self, entry: LexEntry) -> None:
        self._entries.append(entry)
        self.by_lemma.setdefault(entry.lemma, []).append(entry)

    def __iter__(self) -> Iterator[LexEntry]:
        return iter(self._entries)

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, lemma) -> bool:
        return lemma in self.by_lemma

    def __repr__(self):
        return f"Lexicon({self.name!r}, {len(self)} entries)"

    def lemmas(self) -> list[str]:
        return list(self.by_lemma)

    def homographs(self, lemma: str) -> list[LexEntry]:
        return self.by_lemma.get(lemma, [])

    def content(self) -> Counter:
        """Entry multiset ignoring entry and word-form order."""
        return Counter(e.content_key() for e in self._entries)

    def equivalent(self, other: "Lexicon") -> bool:
        return self.content() == other.content()

    @classmethod
    def from_document(cls, doc: RawLmfDocument, name: str = "") -> "Lexicon":
        return cls(
            name,
            (entry_from_raw(raw, name, i) for i, raw in enumerate(doc.entries, start=1)),
            meta=doc.lexicon_feats,
        )

    @classmethod
    def from_xml(cls, data: bytes | str, name: str = "") -> "Lexicon":
        """Stream-parse LMF XML straight into a lexicon."""
        meta: list = []
        lex = cls(name)
        for i, raw in enumerate(iter_lmf(data, meta), start=1):
            lex.add(entry_from_raw(raw, name, i))
        lex.meta = tuple(meta)
        return lex

    def to_document(self) -> RawLmfDocument:
        return RawLmfDocument(tuple(entry_to_raw(e) for e in self._entries), self.meta)
