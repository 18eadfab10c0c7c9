"""
Open-value detection and minimal-unit discovery.

A minimal unit is a bundle of (attribute, value) pairs that occur in exactly
the same containers. Containers are the entry-level feature map of each entry
and each of its word forms; the two levels never mix.
"""

from __future__ import annotations

import re
from collections import Counter
from collections.abc import Iterable
from dataclasses import dataclass, field
from enum import Enum

from .fs import WRITTEN_FORM, FlatFS, Lexicon


class Level(str, Enum):
    ENTRY = "ENTRY"
    WORDFORM = "WORDFORM"


class _Variable:
    __slots__ = ()

    def __repr__(self):
        return "VARIABLE"

    def __reduce__(self):
        return "VARIABLE"


VARIABLE = _Variable()


class UnitNotFoundError(ValueError):
    pass


# -- openness ----------------------------------------------------------------


@dataclass(frozen=True)
class OpenParams:
    absolute_min: int = 50
    ratio: float = 0.5


@dataclass(frozen=True)
class OpenFeatureSet:
    attributes: frozenset[str] = frozenset()
    distinct: dict = field(default_factory=dict, compare=False)
    occurrences: dict = field(default_factory=dict, compare=False)

    def __contains__(self, att) -> bool:
        return att in self.attributes

    def __iter__(self):
        return iter(sorted(self.attributes))

    def __len__(self):
        return len(self.attributes)


def iter_containers(lex: Lexicon):
    """Yield ``(level, entry_index, lemma, FlatFS)`` for every container."""
    for i, entry in enumerate(lex):
        yield Level.ENTRY, i, entry.lemma, entry.features
        for form in entry.forms:
            yield Level.WORDFORM, i, entry.lemma, form


def detect_open_features(lex: Lexicon, params: OpenParams = OpenParams()) -> OpenFeatureSet:
    """An attribute is open when its number of distinct values exceeds
    ``max(params.absolute_min, params.ratio * containers carrying it)``."""
    values: dict[str, set] = {}
    occurrences: Counter = Counter()
    for _, _, _, fs in iter_containers(lex):
        for att, val in fs.items():
            values.setdefault(att, set()).add(val)
            occurrences[att] += 1
    distinct = {att: len(v) for att, v in values.items()}
    open_atts = frozenset(
        att
        for att, n in distinct.items()
        if n > max(params.absolute_min, params.ratio * occurrences[att])
    )
    return OpenFeatureSet(open_atts, distinct, dict(occurrences))


# -- abstraction -------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class Container:
    level: Level
    entry_index: int
    lemma: str
    pairs: tuple  # abstracted, source order
    concrete: FlatFS


class LexiconView:
    """A lexicon read with open values replaced by :data:`VARIABLE`.

    The concrete feature map of each container stays reachable through
    ``Container.concrete``.
    """

    def __init__(self, lex: Lexicon, open_set: OpenFeatureSet):
        self.lexicon = lex
        self.open = open_set
        self.containers: dict[Level, list[Container]] = {Level.ENTRY: [], Level.WORDFORM: []}
        cache: dict = {}
        for level, i, lemma, fs in iter_containers(lex):
            pairs = []
            for att, val in fs.items():
                key = (att, VARIABLE) if att in open_set else (att, val)
                pairs.append(cache.setdefault(key, key))
            self.containers[level].append(Container(level, i, lemma, tuple(pairs), fs))

    def __iter__(self):
        for level in Level:
            yield from self.containers[level]

    def sibling_attribute(self, level: Level) -> str | None:
        """Open attribute whose values serve as evidence at ``level``:
        writtenForm when open there, else the open attribute with most values."""
        present = set()
        for c in self.containers[level]:
            present.update(att for att, v in c.pairs if v is VARIABLE)
        if not present:
            return None
        if WRITTEN_FORM in present:
            return WRITTEN_FORM
        return max(sorted(present), key=lambda a: self.open.distinct.get(a, 0))


def abstract_open_values(lex: Lexicon, open_set: OpenFeatureSet) -> LexiconView:
    return LexiconView(lex, open_set)


# -- units -------------------------------------------------------------------

_ESC = re.compile(r"[%|=*\t\n\r]")


def _esc(text: str) -> str:
    return _ESC.sub(lambda m: f"%{ord(m.group()):02X}", text)


def _unesc(text: str) -> str:
    return re.sub(r"%([0-9A-F]{2})", lambda m: chr(int(m.group(1), 16)), text)


def _pair_key(pair) -> str:
    att, val = pair
    return f"{_esc(att)}={'*' if val is VARIABLE else _esc(val)}"


@dataclass(frozen=True)
class MinimalUnit:
    level: Level
    pairs: tuple  # canonical (sorted by id fragment)
    id: str = field(init=False, compare=False)

    def __post_init__(self):
        if not self.pairs:
            raise ValueError("a unit needs at least one pair")
        ordered = tuple(sorted(self.pairs, key=_pair_key))
        object.__setattr__(self, "pairs", ordered)
        object.__setattr__(self, "id", "|".join(_pair_key(p) for p in ordered))

    @classmethod
    def from_id(cls, level: Level | str, unit_id: str) -> "MinimalUnit":
        pairs = []
        for chunk in unit_id.split("|"):
            att, sep, val = chunk.partition("=")
            if not sep or not att:
                raise ValueError(f"bad unit id {unit_id!r}")
            pairs.append((_unesc(att), VARIABLE if val == "*" else _unesc(val)))
        return cls(Level(level), tuple(pairs))

    @property
    def variable_attribute(self) -> str | None:
        for att, val in self.pairs:
            if val is VARIABLE:
                return att
        return None

    @property
    def attributes(self) -> tuple[str, ...]:
        return tuple(att for att, _ in self.pairs)

    def __repr__(self):
        return f"<{self.level.value} {self.id}>"

    def sort_key(self):
        return (self.level.value, self.id)


def find_minimal_units(view: LexiconView) -> list[MinimalUnit]:
    """Partition the abstracted pairs of each level by occurrence signature.

    Pairs with an abstracted (open) value always form a unit of their own, so
    that no unit carries more than one variable slot.
    """
    units = []
    for level in Level:
        signatures: dict = {}
        for i, c in enumerate(view.containers[level]):
            for pair in c.pairs:
                signatures.setdefault(pair, []).append(i)
        groups: dict = {}
        for pair, sig in signatures.items():
            if pair[1] is VARIABLE:
                units.append(MinimalUnit(level, (pair,)))
            else:
                groups.setdefault(tuple(sig), []).append(pair)
        units.extend(MinimalUnit(level, tuple(pairs)) for pairs in groups.values())
    return sorted(units, key=MinimalUnit.sort_key)


class UnitIndex:
    """Lookup from abstracted pair to the unit that owns it."""

    def __init__(self, units: Iterable[MinimalUnit]):
        self.units = sorted(units, key=MinimalUnit.sort_key)
        self.by_pair: dict = {}
        for u in self.units:
            for pair in u.pairs:
                self.by_pair[(u.level, pair)] = u

    def decompose(self, level: Level, pairs) -> tuple[list[MinimalUnit], list]:
        """Split a container's pairs into known complete units (in order of
        first appearance) and leftover pairs that fit no complete unit."""
        hits: dict[MinimalUnit, int] = {}
        for pair in pairs:
            u = self.by_pair.get((level, pair))
            if u is not None:
                hits[u] = hits.get(u, 0) + 1
        complete = [u for u, n in hits.items() if n == len(u.pairs)]
        done = {p for u in complete for p in u.pairs}
        leftover = [p for p in pairs if p not in done]
        return complete, leftover


# -- occurrence vectors ------------------------------------------------------


@dataclass(frozen=True)
class OccurrenceVector:
    unit: MinimalUnit
    support: frozenset
    mode: str  # "lemma" or the open attribute whose values are the keys

    @property
    def by_value(self) -> bool:
        return self.mode != "lemma"


def occurrence_vectors(
    view: LexiconView,
    units: Iterable[MinimalUnit],
    lemmas: set | None = None,
) -> dict[MinimalUnit, OccurrenceVector]:
    """Support sets for all ``units`` in one pass.

    Keys are lemmas, or, at a level holding an open attribute, that
    attribute's concrete values in the containers carrying the unit. With
    ``lemmas`` given, only containers of those lemmas are read.
    """
    index = UnitIndex(units)
    lemma_sup: dict[MinimalUnit, set] = {u: set() for u in index.units}
    value_sup: dict[MinimalUnit, set] = {u: set() for u in index.units}
    siblings = {level: view.sibling_attribute(level) for level in Level}
    for c in view:
        if lemmas is not None and c.lemma not in lemmas:
            continue
        found, _ = index.decompose(c.level, c.pairs)
        sib = siblings[c.level]
        sib_val = c.concrete.get(sib) if sib is not None else None
        for u in found:
            lemma_sup[u].add(c.lemma)
            if sib_val is not None:
                value_sup[u].add(sib_val)
    out = {}
    for u in index.units:
        sib = siblings[u.level]
        if sib is not None and (value_sup[u] or not lemma_sup[u]):
            out[u] = OccurrenceVector(u, frozenset(value_sup[u]), sib)
        else:
            out[u] = OccurrenceVector(u, frozenset(lemma_sup[u]), "lemma")
    return out


def occurrence_vector(unit: MinimalUnit, view: LexiconView) -> OccurrenceVector:
    vec = occurrence_vectors(view, [unit])[unit]
    if not vec.support:
        raise UnitNotFoundError(f"unit {unit.id} does not occur in {view.lexicon.name!r}")
    return vec


def discover(lex: Lexicon, params: OpenParams = OpenParams()):
    """Run open detection, abstraction and discovery; returns
    ``(view, units)``."""
    view = abstract_open_values(lex, detect_open_features(lex, params))
    return view, find_minimal_units(view)


def units_dump(units: Iterable[MinimalUnit], vectors: dict) -> str:
    rows = sorted(units, key=lambda u: (u.id, u.level.value))
    return "".join(f"{u.level.value}\t{u.id}\t{len(vectors[u].support)}\n" for u in rows)
