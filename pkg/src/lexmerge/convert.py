"""
Rewriting a lexicon into another tagset with a learned mapping table.
"""

from __future__ import annotations

import itertools
import logging
from collections import Counter
from dataclasses import dataclass, field

from .fs import FlatFS, LexEntry, Lexicon
from .mapping import MappingTable
from .units import VARIABLE, Level, MinimalUnit, UnitIndex

log = logging.getLogger(__name__)

DEFAULT_VARIANT_CAP = 4


@dataclass
class ConversionOutcome:
    converted: Lexicon
    variants: dict = field(default_factory=dict)  # entry ref -> number of variants
    residue: dict = field(default_factory=dict)  # entry ref -> [unit id, ...]
    unseen: Counter = field(default_factory=Counter)  # pair text -> count
    capped: list = field(default_factory=list)  # refs whose variants were cut to one
    collisions: int = 0


def _unseen_key(pair) -> str:
    att, val = pair
    return f"{att}={'*' if val is VARIABLE else val}"


class _Converter:
    def __init__(self, table: MappingTable, variant_cap: int):
        self.table = table
        self.index = UnitIndex(table.source_units)
        self.open = table.source_open
        self.cap = variant_cap

    def abstract(self, fs: FlatFS):
        return [(att, VARIABLE) if att in self.open else (att, val) for att, val in fs.items()]

    def plan(self, level: Level, fs: FlatFS):
        """Decompose one container: list of ``(kind, payload)`` steps in source
        order, where kind is 'unit' (a known source unit) or 'pair' (a leftover
        concrete pair)."""
        abstracted = self.abstract(fs)
        units, leftover = self.index.decompose(level, abstracted)
        owner = {}
        for u in units:
            for p in u.pairs:
                owner[p] = u
        leftover = set(leftover)
        steps, seen = [], set()
        for (att, val), ab in zip(fs.items(), abstracted):
            u = owner.get(ab)
            if u is not None:
                if u not in seen:
                    seen.add(u)
                    steps.append(("unit", u))
            else:
                assert ab in leftover
                steps.append(("pair", (att, val, ab)))
        return steps

    def realize(self, steps, fs: FlatFS, choice: dict, residue: list, unseen: Counter):
        out: dict[str, str] = {}
        collisions = 0

        def put(att, val):
            nonlocal collisions
            if att in out and out[att] != val:
                collisions += 1
                return
            out[att] = val

        for kind, payload in steps:
            if kind == "pair":
                att, val, ab = payload
                unseen[_unseen_key(ab)] += 1
                put(att, val)
                continue
            unit = payload
            target = choice.get(unit)
            if target is None:
                residue.append(unit.id)
                for att in fs:
                    if att in unit.attributes:
                        put(att, fs[att])
                continue
            var_att = unit.variable_attribute
            var_val = fs[var_att] if var_att is not None else None
            src_order = [att for att in fs if att in unit.attributes]
            ordered = sorted(
                target.pairs,
                key=lambda p: (src_order.index(p[0]), "") if p[0] in src_order else (len(src_order), p[0]),
            )
            for att, val in ordered:
                put(att, var_val if val is VARIABLE else val)
        return FlatFS._trusted(out), collisions

    def convert_entry(self, entry: LexEntry, outcome: ConversionOutcome) -> list[LexEntry]:
        plans = [(Level.ENTRY, entry.features, self.plan(Level.ENTRY, entry.features))]
        plans += [(Level.WORDFORM, f, self.plan(Level.WORDFORM, f)) for f in entry.forms]

        options: dict[MinimalUnit, tuple] = {}
        for _, _, steps in plans:
            for kind, payload in steps:
                if kind == "unit" and payload not in options:
                    rule = self.table.rule(payload)
                    options[payload] = rule.candidates if rule else ()
        multi = [u for u, c in options.items() if len(c) > 1]
        base = {u: (c[0][0] if c else None) for u, c in options.items()}

        combos = [base]
        if multi:
            n = 1
            for u in multi:
                n *= len(options[u])
            if n > self.cap:
                outcome.capped.append(entry.ref)
                log.info("entry %s: %d variant combinations exceed cap %d; keeping top", entry.ref, n, self.cap)
            else:
                scored = []
                for picks in itertools.product(*(options[u] for u in multi)):
                    choice = dict(base)
                    choice.update({u: t for u, (t, _) in zip(multi, picks)})
                    key = (-sum(s for _, s in picks), tuple(t.id for t, _ in picks))
                    scored.append((key, choice))
                scored.sort(key=lambda kc: kc[0])
                combos = [c for _, c in scored]

        results = []
        for rank, choice in enumerate(combos):
            residue: list[str] = []
            unseen: Counter = Counter()
            converted = []
            for _, fs, steps in plans:
                new, coll = self.realize(steps, fs, choice, residue, unseen)
                outcome.collisions += coll
                converted.append(new)
            if rank == 0:
                outcome.unseen.update(unseen)
                if residue:
                    outcome.residue[entry.ref] = residue
            results.append(
                LexEntry(
                    lemma=entry.lemma,
                    features=converted[0],
                    forms=tuple(converted[1:]),
                    id=entry.id,
                    sources=entry.sources,
                    extra=entry.extra,
                    variant=(entry.ref, rank) if len(combos) > 1 else None,
                )
            )
        if len(combos) > 1:
            outcome.variants[entry.ref] = len(combos)
        return results


def apply_mapping(
    lex: Lexicon,
    table: MappingTable,
    variant_cap: int = DEFAULT_VARIANT_CAP,
) -> ConversionOutcome:
    """Rewrite ``lex`` unit by unit through ``table``.

    Mapped units are replaced by their target pairs, with variable slots
    refilled from the container's concrete value. Unmapped units and pairs
    outside the table's inventory are carried through unchanged; the former
    are recorded as residue, the latter tallied in ``unseen``.
    """
    if variant_cap < 1:
        raise ValueError("variant_cap must be at least 1")
    conv = _Converter(table, variant_cap)
    name = table.direction[1] if table.direction[1] else lex.name
    outcome = ConversionOutcome(Lexicon(f"{lex.name}>{name}", meta=lex.meta))
    for entry in lex:
        for new in conv.convert_entry(entry, outcome):
            outcome.converted.add(new)
    if outcome.unseen:
        log.warning("%d pairs outside the table inventory were carried through", sum(outcome.unseen.values()))
    return outcome


def conversion_report(outcome: ConversionOutcome) -> dict:
    residue = Counter(uid for ids in outcome.residue.values() for uid in ids)
    source_entries = sum(1 for e in outcome.converted if e.variant is None) + len(outcome.variants)
    return {
        "entries": source_entries,
        "converted_entries": len(outcome.converted),
        "entries_with_variants": len(outcome.variants),
        "variant_multiplicity": dict(sorted(Counter(outcome.variants.values()).items())),
        "capped_entries": len(outcome.capped),
        "entries_with_residue": len(outcome.residue),
        "residue": dict(sorted(residue.items())),
        "unseen": dict(sorted(outcome.unseen.items())),
        "collisions": outcome.collisions,
    }


def format_conversion_report(report: dict) -> str:
    lines = [
        f"# entries\t{report['entries']}",
        f"# converted_entries\t{report['converted_entries']}",
        f"# entries_with_variants\t{report['entries_with_variants']}",
        f"# capped_entries\t{report['capped_entries']}",
        f"# entries_with_residue\t{report['entries_with_residue']}",
        f"# collisions\t{report['collisions']}",
    ]
    for n, count in report["variant_multiplicity"].items():
        lines.append(f"variants\t{n}\t{count}")
    for uid, count in report["residue"].items():
        lines.append(f"residue\t{uid}\t{count}")
    for key, count in report["unseen"].items():
        lines.append(f"unseen\t{key}\t{count}")
    return "\n".join(lines) + "\n"
