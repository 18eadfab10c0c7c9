"""
Deterministic synthetic lexicon pairs with a planted unit rewrite.

Lexicon A is generated from per-PoS paradigms; lexicon B re-encodes a shared
subset of A's lemmas through the rewrite and adds lemmas of its own. The
rewrite doubles as the ground truth for mapping, conversion and merging.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field

from .fs import POS, WRITTEN_FORM, FlatFS, LexEntry, Lexicon
from .units import Level, MinimalUnit


class SpecError(ValueError):
    pass


@dataclass
class Block:
    """A slice of a paradigm: the cross product of ``axes`` plus ``fixed``."""

    fixed: dict = field(default_factory=dict)
    axes: dict = field(default_factory=dict)
    rate: float = 1.0
    shared_count: int | None = None  # exactly this many shared lemmas carry it in A
    b_all: bool = False  # every lemma of this PoS carries it in B

    def cells(self) -> list[dict]:
        names = list(self.axes)
        out = []
        for combo in itertools.product(*(self.axes[n] for n in names)):
            cell = dict(self.fixed)
            cell.update(zip(names, combo))
            out.append(cell)
        return out


@dataclass
class PosSpec:
    tag: str
    weight: float
    blocks: list = field(default_factory=lambda: [Block()])
    lemma_axes: dict = field(default_factory=dict)  # one value per lemma, on every form
    capitalize: bool = False


@dataclass
class GeneratorSpec:
    seed: int = 0
    lemma_count: int = 5000
    shared_lemma_ratio: float = 0.7
    b_unique_count: int | None = None
    pos: list = field(default_factory=list)
    rewrite: dict = field(default_factory=dict)  # "att=val" -> [[att, val], ...] or None
    pos_conflicts: int = 0
    conflict_pos: dict = field(default_factory=dict)  # A tag -> literal B tag
    a_name: str = "A"
    b_name: str = "B"

    @classmethod
    def from_dict(cls, data: dict) -> "GeneratorSpec":
        data = dict(data)
        pos = []
        for p in data.pop("pos", []):
            p = dict(p)
            p["blocks"] = [Block(**b) for b in p.get("blocks", [{}])]
            pos.append(PosSpec(**p))
        try:
            return cls(pos=pos, **data)
        except TypeError as exc:
            raise SpecError(str(exc)) from None

    @classmethod
    def from_json(cls, text: str) -> "GeneratorSpec":
        return cls.from_dict(json.loads(text))


@dataclass
class GroundTruth:
    rules: dict  # (Level, source unit id) -> target unit id or None
    shared: list
    conflicts: list
    b_extra: bool  # B carries blocks A lacks for shared lemmas


def _pairs(text: str):
    att, sep, val = text.partition("=")
    if not sep:
        raise SpecError(f"rewrite key {text!r} is not att=val")
    return att, val


def paperlike(seed: int = 0, lemma_count: int = 5000, **overrides) -> GeneratorSpec:
    """Two Spanish-flavoured encodings: a compact source tagset and a target
    that renames everything, splits one tense value into mood+tense and has no
    proper nouns."""
    gn = {"gender": ["m", "f"], "number": ["sg", "pl"]}
    pn = {"person": ["p1", "p2", "p3"], "number": ["sg", "pl"]}
    spec = GeneratorSpec(
        seed=seed,
        lemma_count=lemma_count,
        shared_lemma_ratio=0.7,
        pos=[
            PosSpec("noun", 0.40, [Block(axes={"number": ["sg", "pl"]})], {"gender": ["m", "f"]}),
            PosSpec("adj", 0.18, [Block(axes=gn), Block(fixed={"type": "sup"}, axes=gn, rate=0.3)]),
            PosSpec("verb", 0.12, [
                Block(fixed={"vform": "inf"}),
                Block(axes={"tense": ["pri", "ifi", "fti", "pis"], **pn}),
                Block(fixed={"tense": "fts"}, axes=pn, shared_count=2, b_all=True),
            ]),
            PosSpec("adv", 0.10),
            PosSpec("np", 0.20, capitalize=True),
        ],
        rewrite={
            "partOfSpeech=noun": [["partOfSpeech", "nounCommon"]],
            "partOfSpeech=adj": [["partOfSpeech", "adjectiveQualifier"]],
            "partOfSpeech=verb": [["partOfSpeech", "verbMain"]],
            "partOfSpeech=adv": [["partOfSpeech", "adverbGeneral"]],
            "partOfSpeech=np": None,
            "gender=m": [["grammaticalGender", "masculine"]],
            "gender=f": [["grammaticalGender", "feminine"]],
            "number=sg": [["grammaticalNumber", "singular"]],
            "number=pl": [["grammaticalNumber", "plural"]],
            "type=sup": [["grade", "superlative"]],
            "vform=inf": [["verbForm", "infinitive"]],
            "person=p1": [["person", "1"]],
            "person=p2": [["person", "2"]],
            "person=p3": [["person", "3"]],
            "tense=pri": [["tense", "present"]],
            "tense=ifi": [["tense", "past"]],
            "tense=fti": [["tense", "future"]],
            "tense=pis": [["mood", "subjunctive"], ["tense", "imperfect"]],
            "tense=fts": [["tense", "futureSubjunctive"]],
        },
        pos_conflicts=3,
        conflict_pos={"adv": "adverbNegative"},
        a_name="apertium",
        b_name="freeling",
    )
    for key, val in overrides.items():
        setattr(spec, key, val)
    return spec


def identity_spec(seed: int = 0, lemma_count: int = 200, **overrides) -> GeneratorSpec:
    """Paperlike paradigms (no proper nouns, no B-only blocks) with an
    identity rewrite."""
    base = paperlike(seed, lemma_count)
    pos = [p for p in base.pos if p.tag != "np"]
    for p in pos:
        for b in p.blocks:
            b.b_all = False
    rewrite = {k: [list(_pairs(k))] for k, v in base.rewrite.items() if k != "partOfSpeech=np"}
    spec = GeneratorSpec(seed=seed, lemma_count=lemma_count, shared_lemma_ratio=1.0,
                         b_unique_count=0, pos=pos, rewrite=rewrite)
    for key, val in overrides.items():
        setattr(spec, key, val)
    return spec


_ONSETS = "b c d f g l m n p r s t v z ch".split()
_VOWELS = "a e i o u".split()


def _word(rng: random.Random) -> str:
    return "".join(rng.choice(_ONSETS) + rng.choice(_VOWELS) for _ in range(rng.randint(2, 4)))


class _Generator:
    def __init__(self, spec: GeneratorSpec):
        self.spec = spec
        self.rng = random.Random(spec.seed)
        self.used: set[str] = set()
        self.pos = {p.tag: p for p in spec.pos}
        if not spec.pos:
            raise SpecError("empty PoS inventory")
        if spec.lemma_count < 1:
            raise SpecError("lemma_count must be at least 1")
        self._check_rewrite()

    def _inventory(self) -> set[str]:
        keys = set()
        for p in self.spec.pos:
            keys.add(f"{POS}={p.tag}")
            for att, vals in p.lemma_axes.items():
                keys.update(f"{att}={v}" for v in vals)
            for b in p.blocks:
                for cell in b.cells():
                    keys.update(f"{a}={v}" for a, v in cell.items())
        return keys

    def _check_rewrite(self):
        inventory = self._inventory()
        unknown = set(self.spec.rewrite) - inventory
        if unknown:
            raise SpecError(f"rewrite references unknown units: {sorted(unknown)}")
        missing = inventory - set(self.spec.rewrite)
        if missing:
            raise SpecError(f"rewrite lacks targets for: {sorted(missing)}")
        for key, target in self.spec.rewrite.items():
            if target is not None and not target:
                raise SpecError(f"empty target for {key}")
            if target is None and not key.startswith(f"{POS}="):
                raise SpecError(f"only PoS units may lack a target ({key})")

    def lemma(self, p: PosSpec) -> str:
        while True:
            w = _word(self.rng)
            if p.capitalize:
                w = w.capitalize()
            if w not in self.used:
                self.used.add(w)
                return w

    def pick_pos(self, tags) -> PosSpec:
        specs = [self.pos[t] for t in tags]
        return self.rng.choices(specs, weights=[p.weight for p in specs])[0]

    def cells(self, p: PosSpec, include) -> list[tuple[int, dict]]:
        """``(cell index, features)`` for blocks chosen by ``include(block)``."""
        out, k = [], 0
        for b in p.blocks:
            cells = b.cells()
            if include(b):
                out.extend((k + i, c) for i, c in enumerate(cells))
            k += len(cells)
        return out

    def build(self, lemma: str, p: PosSpec, lemma_feats: dict, cells) -> tuple[tuple, list]:
        forms = []
        for k, cell in cells:
            wf = lemma if k == 0 else f"{lemma}_{k}"
            forms.append(((WRITTEN_FORM, wf),) + tuple(lemma_feats.items()) + tuple(cell.items()))
        return ((POS, p.tag),), forms

    def rewrite_pairs(self, pairs) -> tuple:
        out = []
        for att, val in pairs:
            if att == WRITTEN_FORM:
                out.append((att, val))
                continue
            target = self.spec.rewrite[f"{att}={val}"]
            if target is None:
                return None
            out.extend(tuple(t) for t in target)
        return tuple(out)


def _entry(lemma, feats, forms, name, ref, with_id) -> LexEntry:
    return LexEntry(
        lemma=lemma,
        features=FlatFS(feats),
        forms=tuple(FlatFS(f) for f in forms),
        id=ref if with_id else None,
        sources=((name, ref if with_id else f"#{ref[1:]}"),),
    )


def generate_pair(spec: GeneratorSpec) -> tuple[Lexicon, Lexicon, GroundTruth]:
    """Build ``(A, B, truth)``; identical specs give identical output."""
    g = _Generator(spec)
    rng = g.rng

    # A-side lemmas with their paradigm choices.
    rows = []
    for _ in range(spec.lemma_count):
        p = g.pick_pos([q.tag for q in spec.pos])
        lemma = g.lemma(p)
        lemma_feats = {att: rng.choice(vals) for att, vals in p.lemma_axes.items()}
        chosen = {id(b): (b.shared_count is None and rng.random() < b.rate) for b in p.blocks}
        rows.append([lemma, p, lemma_feats, chosen])

    eligible = [i for i, r in enumerate(rows) if spec.rewrite.get(f"{POS}={r[1].tag}") is not None]
    n_shared = min(round(spec.shared_lemma_ratio * spec.lemma_count), len(eligible))
    shared_idx = sorted(rng.sample(eligible, n_shared))
    shared_set = set(shared_idx)

    for p in spec.pos:
        for b in p.blocks:
            if b.shared_count is None:
                continue
            pool = [i for i in shared_idx if rows[i][1] is p]
            for i in rng.sample(pool, min(b.shared_count, len(pool))):
                rows[i][3][id(b)] = True

    conflict_pool = [i for i in shared_idx if rows[i][1].tag in spec.conflict_pos]
    conflicts = set(rng.sample(conflict_pool, min(spec.pos_conflicts, len(conflict_pool))))

    a_entries, b_entries = [], []
    for n, (lemma, p, lemma_feats, chosen) in enumerate(rows, start=1):
        feats, forms = g.build(lemma, p, lemma_feats, g.cells(p, lambda b: chosen[id(b)]))
        a_entries.append(_entry(lemma, feats, forms, spec.a_name, f"a{n}", True))

    b_unique = spec.b_unique_count
    if b_unique is None:
        b_unique = round((1 - spec.shared_lemma_ratio) * spec.lemma_count)
    targeted = [p.tag for p in spec.pos if spec.rewrite.get(f"{POS}={p.tag}") is not None]
    b_rows = [(i, rows[i]) for i in shared_idx]
    for _ in range(b_unique if targeted else 0):
        p = g.pick_pos(targeted)
        lemma = g.lemma(p)
        lemma_feats = {att: rng.choice(vals) for att, vals in p.lemma_axes.items()}
        chosen = {id(b): (b.shared_count is None and rng.random() < b.rate) for b in p.blocks}
        b_rows.append((None, [lemma, p, lemma_feats, chosen]))

    b_extra = False
    for n, (i, (lemma, p, lemma_feats, chosen)) in enumerate(b_rows, start=1):
        include = lambda b, chosen=chosen: chosen[id(b)] or b.b_all
        if i is not None and any(b.b_all and not chosen[id(b)] for b in p.blocks):
            b_extra = True
        feats, forms = g.build(lemma, p, lemma_feats, g.cells(p, include))
        new_feats = g.rewrite_pairs(feats)
        if i in conflicts:
            new_feats = ((POS, spec.conflict_pos[p.tag]),)
        new_forms = [g.rewrite_pairs(f) for f in forms]
        b_entries.append(_entry(lemma, new_feats, new_forms, spec.b_name, f"b{n}", False))

    rules = {(Level.WORDFORM, f"{WRITTEN_FORM}=*"): f"{WRITTEN_FORM}=*"}
    for key, target in spec.rewrite.items():
        att, val = _pairs(key)
        level = Level.ENTRY if att == POS else Level.WORDFORM
        src = MinimalUnit(level, ((att, val),)).id
        rules[(level, src)] = (
            None if target is None else MinimalUnit(level, tuple(tuple(t) for t in target)).id
        )
    truth = GroundTruth(
        rules=rules,
        shared=[rows[i][0] for i in shared_idx],
        conflicts=sorted(rows[i][0] for i in conflicts),
        b_extra=b_extra,
    )
    return Lexicon(spec.a_name, a_entries), Lexicon(spec.b_name, b_entries), truth


def planted_recovery(table, truth: GroundTruth) -> dict:
    """Compare a learned table with the planted rules that have a target.

    A rule counts as recovered when its candidate list is exactly the planted
    target unit.
    """
    present = {(r.source.level, r.source.id): r for r in table.rules}
    checked = recovered = 0
    missed = []
    for key, target in sorted(truth.rules.items(), key=lambda kv: (kv[0][0].value, kv[0][1])):
        rule = present.get(key)
        if rule is None or target is None:
            continue
        checked += 1
        if [t.id for t in rule.targets] == [target]:
            recovered += 1
        else:
            missed.append(key[1])
    return {
        "checked": checked,
        "recovered": recovered,
        "ratio": recovered / checked if checked else 1.0,
        "missed": missed,
    }


def format_truth(truth: GroundTruth) -> str:
    lines = [f"# shared\t{len(truth.shared)}", "# conflicts\t" + ",".join(truth.conflicts)]
    for (level, src), tgt in sorted(truth.rules.items(), key=lambda kv: (kv[0][1], kv[0][0].value)):
        lines.append(f"{level.value}\t{src}\t{tgt if tgt is not None else '-'}")
    return "\n".join(lines) + "\n"

