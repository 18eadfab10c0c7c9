"""
Combination step: unify two lexica that share one tagset, lemma by lemma.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field
from enum import Enum

from .fs import LexEntry, Lexicon, entry_subsumes, unify_entries


class Outcome(str, Enum):
    UNIFIED = "UNIFIED"
    UNIQUE_NO_UNIFY = "UNIQUE_NO_UNIFY"
    UNIQUE_LEMMA_A = "UNIQUE_LEMMA_A"
    UNIQUE_LEMMA_B = "UNIQUE_LEMMA_B"


@dataclass(frozen=True)
class MergeRecord:
    outcome: Outcome
    lemma: str
    pos: str
    id_a: str | None = None
    id_b: str | None = None
    same_information: bool | None = None  # only for UNIFIED
    variants_failed: bool = False  # all converted variants of the A entry failed

    def line(self) -> str:
        return "\t".join(
            [self.outcome.value, self.lemma, self.pos or "-", self.id_a or "-", self.id_b or "-"]
        )


@dataclass
class MergeResult:
    merged: Lexicon
    log: list[MergeRecord] = field(default_factory=list)

    @property
    def stats(self) -> dict:
        return merge_stats(self.log)


def _slots(entries: list[LexEntry]) -> list[list[LexEntry]]:
    """Group converter variants of one source entry; plain entries stand alone."""
    slots: list[list[LexEntry]] = []
    by_group: dict = {}
    for e in entries:
        if e.variant is None:
            slots.append([e])
            continue
        group = by_group.get(e.variant[0])
        if group is None:
            group = by_group[e.variant[0]] = []
            slots.append(group)
        group.append(e)
    for group in slots:
        group.sort(key=lambda e: e.variant[1] if e.variant else 0)
    return slots


def _plain(e: LexEntry) -> LexEntry:
    if e.variant is None:
        return e
    return LexEntry(e.lemma, e.features, e.forms, e.id, e.sources, e.extra)


def _merge_lemma(lemma, a_entries, b_entries, out, log):
    used = [False] * len(b_entries)
    for slot in _slots(a_entries):
        done = False
        for cand in slot:
            for j, b in enumerate(b_entries):
                if used[j]:
                    continue
                merged = unify_entries(cand, b)
                if merged is None:
                    continue
                used[j] = True
                same = entry_subsumes(cand, b) and entry_subsumes(b, cand)
                out.append(merged)
                log.append(MergeRecord(Outcome.UNIFIED, lemma, merged.pos, cand.ref, b.ref, same))
                done = True
                break
            if done:
                break
        if not done:
            top = _plain(slot[0])
            out.append(top)
            log.append(
                MergeRecord(Outcome.UNIQUE_NO_UNIFY, lemma, top.pos, top.ref, None,
                            variants_failed=len(slot) > 1)
            )
    for j, b in enumerate(b_entries):
        if not used[j]:
            out.append(b)
            log.append(MergeRecord(Outcome.UNIQUE_NO_UNIFY, lemma, b.pos, None, b.ref))


def merge(lex_a: Lexicon, lex_b: Lexicon, name: str = "merged") -> MergeResult:
    """Merge ``lex_a`` (already in ``lex_b``'s tagset) with ``lex_b``.

    Lemmas are emitted in sorted order; within a lemma, entries stemming from
    ``lex_a`` come first, then leftover ``lex_b`` homographs.
    """
    result = MergeResult(Lexicon(name, meta=lex_b.meta or lex_a.meta))
    for lemma in sorted(set(lex_a.by_lemma) | set(lex_b.by_lemma)):
        a_entries = lex_a.homographs(lemma)
        b_entries = lex_b.homographs(lemma)
        out: list[LexEntry] = []
        if a_entries and b_entries:
            _merge_lemma(lemma, a_entries, b_entries, out, result.log)
        elif a_entries:
            for slot in _slots(a_entries):
                top = _plain(slot[0])
                out.append(top)
                result.log.append(MergeRecord(Outcome.UNIQUE_LEMMA_A, lemma, top.pos, top.ref, None))
        else:
            for b in b_entries:
                out.append(b)
                result.log.append(MergeRecord(Outcome.UNIQUE_LEMMA_B, lemma, b.pos, None, b.ref))
        for e in out:
            result.merged.add(e)
    return result


def merge_stats(log: list[MergeRecord]) -> dict:
    """Outcome counts, overall and per part of speech.

    ``same_information`` and ``gained_information`` split the UNIFIED
    records; ``no_unify`` counts UNIQUE_NO_UNIFY records.
    """
    totals = Counter(r.outcome.value for r in log)
    per_pos: dict[str, Counter] = defaultdict(Counter)
    for r in log:
        pos = r.pos or "-"
        if r.outcome is Outcome.UNIFIED:
            per_pos["same_information" if r.same_information else "gained_information"][pos] += 1
        elif r.outcome is Outcome.UNIQUE_NO_UNIFY:
            per_pos["no_unify"][pos] += 1
        else:
            per_pos[r.outcome.value.lower()][pos] += 1
    return {
        "records": len(log),
        "outcomes": {o.value: totals.get(o.value, 0) for o in Outcome},
        "per_pos": {k: dict(sorted(v.items())) for k, v in sorted(per_pos.items())},
        "flagged_variants": sum(r.variants_failed for r in log),
    }


def format_log(result: MergeResult) -> str:
    lines = [r.line() for r in result.log]
    stats = result.stats
    lines.append(f"# records\t{stats['records']}")
    for outcome, n in stats["outcomes"].items():
        lines.append(f"# outcome\t{outcome}\t{n}")
    for table, counts in stats["per_pos"].items():
        for pos, n in counts.items():
            lines.append(f"# {table}\t{pos}\t{n}")
    lines.append(f"# flagged_variants\t{stats['flagged_variants']}")
    return "\n".join(lines) + "\n"


def lexicon_stats(lex: Lexicon) -> dict:
    entries = len(lex)
    forms = sum(len(e.forms) for e in lex)
    per_pos = Counter(e.pos or "-" for e in lex)
    return {
        "entries": entries,
        "word_forms": forms,
        "avg_word_forms": round(forms / entries, 2) if entries else 0.0,
        "per_pos": dict(sorted(per_pos.items())),
    }


def format_stats(stats: dict, name: str = "") -> str:
    prefix = f"{name}\t" if name else ""
    lines = [
        f"{prefix}entries\t{stats['entries']}",
        f"{prefix}word_forms\t{stats['word_forms']}",
        f"{prefix}avg_word_forms\t{stats['avg_word_forms']:.2f}",
    ]
    lines += [f"{prefix}pos\t{pos}\t{n}" for pos, n in stats["per_pos"].items()]
    return "\n".join(lines) + "\n"
