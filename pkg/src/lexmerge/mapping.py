"""
Learning correspondences between the minimal units of two lexica.

Each source unit is scored against every target unit of the same level by
the Jaccard similarity of their occurrence vectors, restricted to evidence
both lexica share. The best-scoring targets (all of them, when several tie
within ``comax_eps``) become the candidates of the unit's rule.
"""

from __future__ import annotations

from collections import Counter
from collections.abc import Iterable
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

from .fs import Lexicon
from .units import (
    Level,
    LexiconView,
    MinimalUnit,
    OccurrenceVector,
    OpenParams,
    discover,
    occurrence_vectors,
)


class EvidenceError(ValueError):
    """Too little overlap between the lexica to learn from."""


class TableFormatError(ValueError):
    pass


def jaccard(a: Iterable, b: Iterable) -> float:
    """``|a & b| / |a | b|``; 0.0 for two empty sets."""
    a, b = set(a), set(b)
    union = len(a | b)
    if not union:
        return 0.0
    return len(a & b) / union


@dataclass(frozen=True)
class MappingParams:
    sim_threshold: float = 0.8
    min_support: int = 2
    comax_eps: float = 0.02
    min_shared_lemmas: int = 1

    def __post_init__(self):
        if not 0.0 <= self.sim_threshold <= 1.0:
            raise ValueError("sim_threshold must lie in [0, 1]")
        if not 0.0 <= self.comax_eps <= 1.0:
            raise ValueError("comax_eps must lie in [0, 1]")
        if self.min_support < 0 or self.min_shared_lemmas < 0:
            raise ValueError("support floors must be non-negative")


@dataclass(frozen=True)
class MappingRule:
    source: MinimalUnit
    candidates: tuple = ()  # ((target unit, score), ...) best first
    support: int = field(default=0, compare=False)

    @property
    def mapped(self) -> bool:
        return bool(self.candidates)

    @property
    def status(self) -> str:
        return "MAPPED" if self.candidates else "UNMAPPED"

    @property
    def targets(self) -> list[MinimalUnit]:
        return [t for t, _ in self.candidates]


@dataclass
class MappingTable:
    rules: list[MappingRule]
    direction: tuple[str, str] = ("", "")
    params: dict = field(default_factory=dict)
    source_open: frozenset = frozenset()
    target_open: frozenset = frozenset()

    def __post_init__(self):
        self.rules = sorted(self.rules, key=lambda r: (r.source.id, r.source.level.value))
        self._by_source = {r.source: r for r in self.rules}

    def rule(self, unit: MinimalUnit) -> MappingRule | None:
        return self._by_source.get(unit)

    @property
    def source_units(self) -> list[MinimalUnit]:
        return [r.source for r in self.rules]

    def inverse(self) -> "MappingTable":
        """Inverse of a one-to-one table."""
        targets = []
        for r in self.rules:
            if len(r.candidates) != 1:
                raise ValueError(f"rule for {r.source.id} is not one-to-one")
            targets.append(r.candidates[0][0])
        if len(set(targets)) != len(targets):
            raise ValueError("two source units share a target")
        rules = [
            MappingRule(t, ((r.source, r.candidates[0][1]),), r.support)
            for r, t in zip(self.rules, targets)
        ]
        return MappingTable(
            rules,
            (self.direction[1], self.direction[0]),
            dict(self.params),
            self.target_open,
            self.source_open,
        )


def identity_table(units: Iterable[MinimalUnit], open_atts=frozenset(), name: str = "") -> MappingTable:
    rules = [MappingRule(u, ((u, 1.0),)) for u in units]
    return MappingTable(rules, (name, name), {}, frozenset(open_atts), frozenset(open_atts))


def _value_universe(view: LexiconView, level: Level, lemmas: set) -> set:
    sib = view.sibling_attribute(level)
    if sib is None:
        return set()
    return {
        c.concrete[sib]
        for c in view.containers[level]
        if c.lemma in lemmas and sib in c.concrete
    }


def _restrict(vectors: dict, universes: dict) -> dict:
    out = {}
    for u, vec in vectors.items():
        if vec.by_value:
            vec = OccurrenceVector(u, vec.support & universes[u.level], vec.mode)
        out[u] = vec
    return out


def _kind(vec: OccurrenceVector) -> tuple:
    return (vec.unit.level, vec.by_value, vec.unit.variable_attribute is not None)


def _score_rule(src: OccurrenceVector, inverted: dict, target_vecs: dict, params: MappingParams) -> MappingRule:
    kind = _kind(src)
    overlaps: Counter = Counter()
    for key in src.support:
        for t in inverted.get((kind, key), ()):
            overlaps[t] += 1
    size = len(src.support)
    eligible = []
    for t, inter in overlaps.items():
        score = inter / (size + len(target_vecs[t].support) - inter)
        if score >= params.sim_threshold and inter >= params.min_support:
            eligible.append((t, score))
    if not eligible:
        return MappingRule(src.unit, (), size)
    best = max(s for _, s in eligible)
    chosen = sorted(
        ((t, s) for t, s in eligible if s >= best - params.comax_eps),
        key=lambda ts: (-ts[1], ts[0].id),
    )
    return MappingRule(src.unit, tuple(chosen), size)


def learn_mapping(
    lex_a: Lexicon,
    lex_b: Lexicon,
    params: MappingParams = MappingParams(),
    open_params: OpenParams = OpenParams(),
    workers: int = 1,
) -> MappingTable:
    """Learn a table rewriting ``lex_a``'s units into ``lex_b``'s."""
    shared = set(lex_a.by_lemma) & set(lex_b.by_lemma)
    needed = max(1, params.min_shared_lemmas)
    if len(shared) < needed:
        raise EvidenceError(
            f"{len(shared)} shared lemmas, need at least {needed}; lower "
            "min_shared_lemmas or supply lexica with more overlap"
        )
    view_a, units_a = discover(lex_a, open_params)
    view_b, units_b = discover(lex_b, open_params)
    vec_a = occurrence_vectors(view_a, units_a, shared)
    vec_b = occurrence_vectors(view_b, units_b, shared)
    universes = {
        level: _value_universe(view_a, level, shared) & _value_universe(view_b, level, shared)
        for level in Level
    }
    vec_a = _restrict(vec_a, universes)
    vec_b = _restrict(vec_b, universes)

    inverted: dict = {}
    for t in units_b:
        vec = vec_b[t]
        kind = _kind(vec)
        for key in vec.support:
            inverted.setdefault((kind, key), []).append(t)

    def score(u):
        return _score_rule(vec_a[u], inverted, vec_b, params)

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            rules = list(pool.map(score, units_a))
    else:
        rules = [score(u) for u in units_a]
    recorded = asdict(params)
    recorded.update(open_abs=open_params.absolute_min, open_ratio=open_params.ratio)
    return MappingTable(
        rules,
        (lex_a.name, lex_b.name),
        recorded,
        view_a.open.attributes,
        view_b.open.attributes,
    )


def mapping_report(table: MappingTable) -> dict:
    """Count source units by number of candidates: 0, 1, 2 and 3+."""
    hist = {"0": 0, "1": 0, "2": 0, "3+": 0}
    for r in table.rules:
        n = len(r.candidates)
        hist["3+" if n >= 3 else str(n)] += 1
    hist["total"] = len(table.rules)
    return hist


def format_report(hist: dict) -> str:
    lines = ["# possible mappings\tunits"]
    lines += [f"{k}\t{v}" for k, v in hist.items() if k != "total"]
    lines.append(f"Total\t{hist['total']}")
    return "\n".join(lines) + "\n"


# -- table file ---------------------------------------------------------------


def write_table(table: MappingTable) -> str:
    out = [
        "# lexmerge mapping table",
        f"# direction\t{table.direction[0]}\t{table.direction[1]}",
    ]
    for key in sorted(table.params):
        out.append(f"# param\t{key}\t{table.params[key]}")
    out.append("# open-source\t" + ",".join(sorted(table.source_open)))
    out.append("# open-target\t" + ",".join(sorted(table.target_open)))
    for r in table.rules:
        if not r.candidates:
            out.append(f"# UNMAPPED {r.source.id}\t{r.source.level.value}")
        for t, score in r.candidates:
            out.append(f"{r.source.level.value}\t{r.source.id}\t{t.id}\t{score:.6f}")
    return "\n".join(out) + "\n"


def read_table(text: str) -> MappingTable:
    direction = ("", "")
    params: dict = {}
    opens = {"open-source": frozenset(), "open-target": frozenset()}
    cands: dict[MinimalUnit, list] = {}
    try:
        for line_no, line in enumerate(text.splitlines(), start=1):
            if not line.strip():
                continue
            if line.startswith("# UNMAPPED "):
                unit_id, _, level = line[len("# UNMAPPED "):].partition("\t")
                cands.setdefault(MinimalUnit.from_id(level or "WORDFORM", unit_id), [])
            elif line.startswith("#"):
                parts = line[1:].strip().split("\t")
                if parts[0] == "direction" and len(parts) == 3:
                    direction = (parts[1], parts[2])
                elif parts[0] == "param" and len(parts) == 3:
                    params[parts[1]] = parts[2]
                elif parts[0] in opens:
                    names = parts[1] if len(parts) > 1 else ""
                    opens[parts[0]] = frozenset(n for n in names.split(",") if n)
            else:
                level, src, tgt, score = line.split("\t")
                unit = MinimalUnit.from_id(level, src)
                cands.setdefault(unit, []).append((MinimalUnit.from_id(level, tgt), float(score)))
    except ValueError as exc:
        raise TableFormatError(f"line {line_no}: {exc}") from None
    rules = [
        MappingRule(u, tuple(sorted(c, key=lambda ts: (-ts[1], ts[0].id))))
        for u, c in cands.items()
    ]
    return MappingTable(rules, direction, params, opens["open-source"], opens["open-target"])
