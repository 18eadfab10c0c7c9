"""
Reader and writer for the small LMF subset used by morphosyntactic lexica.

Only ``LexicalResource/Lexicon/LexicalEntry/{Lemma, WordForm}/feat`` is
interpreted. Any other child of a ``LexicalEntry`` is kept as an opaque XML
string so that it survives a read/write cycle.
"""

from __future__ import annotations

import io
import re
import sys
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from xml.sax.saxutils import quoteattr

Feat = tuple[str, str]


class LmfError(Exception):
    """Base class for LMF input problems."""


class LmfParseError(LmfError):
    """Malformed XML."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class LmfStructureError(LmfError):
    """Well-formed XML that does not fit the lexicon model."""

    def __init__(self, message: str, entry_index: int | None = None):
        if entry_index is not None:
            message = f"LexicalEntry #{entry_index}: {message}"
        super().__init__(message)
        self.entry_index = entry_index


class TaglineError(LmfError):
    def __init__(self, message: str, line_no: int):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


@dataclass(frozen=True)
class RawEntry:
    """One ``LexicalEntry`` exactly as written, feats in document order."""

    feats: tuple[Feat, ...]
    lemma: tuple[Feat, ...]
    word_forms: tuple[tuple[Feat, ...], ...] = ()
    id: str | None = None
    extra: tuple[str, ...] = ()

    @property
    def written_form(self) -> str:
        for att, val in self.lemma:
            if att == "writtenForm":
                return val
        raise LmfStructureError("Lemma has no writtenForm")


@dataclass(frozen=True)
class RawLmfDocument:
    entries: tuple[RawEntry, ...] = ()
    lexicon_feats: tuple[Feat, ...] = field(default=())


def _feats(elem: ET.Element, where: str, index: int) -> tuple[Feat, ...]:
    out = []
    for child in elem:
        if child.tag != "feat":
            continue
        att = child.get("att")
        val = child.get("val")
        if not att or not val:
            raise LmfStructureError(f"{where} has a feat without att/val", index)
        out.append((sys.intern(att), sys.intern(val)))
    return tuple(out)


def _check_unique(feats: tuple[Feat, ...], where: str, index: int) -> None:
    seen = set()
    for att, _ in feats:
        if att in seen:
            raise LmfStructureError(f"duplicate feat {att!r} in {where}", index)
        seen.add(att)


def _raw_entry(elem: ET.Element, index: int) -> RawEntry:
    lemma_elems = elem.findall("Lemma")
    if len(lemma_elems) != 1:
        raise LmfStructureError("expected exactly one Lemma", index)
    lemma = _feats(lemma_elems[0], "Lemma", index)
    if not any(att == "writtenForm" for att, _ in lemma):
        raise LmfStructureError("Lemma lacks a writtenForm feat", index)
    word_forms = []
    extra = []
    for child in elem:
        if child.tag == "WordForm":
            wf = _feats(child, "WordForm", index)
            _check_unique(wf, "WordForm", index)
            word_forms.append(wf)
        elif child.tag not in ("feat", "Lemma"):
            child.tail = None
            extra.append(ET.tostring(child, encoding="unicode"))
    return RawEntry(
        feats=_feats(elem, "LexicalEntry", index),
        lemma=lemma,
        word_forms=tuple(word_forms),
        id=elem.get("id"),
        extra=tuple(extra),
    )


def iter_lmf(data: bytes | str, lexicon_feats: list | None = None):
    """Yield a :class:`RawEntry` per ``LexicalEntry``, streaming.

    Feats of the ``Lexicon`` element are appended to ``lexicon_feats`` when a
    list is given. Entries are numbered from 1 in error messages.
    """
    if isinstance(data, str):
        data = data.encode("utf-8")
    stack: list[str] = []
    count = 0
    try:
        for event, elem in ET.iterparse(io.BytesIO(data), events=("start", "end")):
            if event == "start":
                stack.append(elem.tag)
                continue
            stack.pop()
            if elem.tag == "LexicalEntry":
                count += 1
                yield _raw_entry(elem, count)
                elem.clear()
            elif elem.tag == "feat" and stack and stack[-1] == "Lexicon":
                att, val = elem.get("att"), elem.get("val")
                if not att or not val:
                    raise LmfStructureError("Lexicon has a feat without att/val")
                if lexicon_feats is not None:
                    lexicon_feats.append((att, val))
    except ET.ParseError as exc:
        line, column = exc.position
        raise LmfParseError(str(exc).split(":")[0], line, column) from None


def parse_lmf(data: bytes | str) -> RawLmfDocument:
    """Parse LMF XML into a :class:`RawLmfDocument`."""
    meta: list[Feat] = []
    entries = tuple(iter_lmf(data, meta))
    return RawLmfDocument(entries, tuple(meta))


def _feat_line(att: str, val: str, indent: str) -> str:
    return f"{indent}<feat att={quoteattr(att)} val={quoteattr(val)}/>"


def serialize_lmf(doc: RawLmfDocument) -> bytes:
    """Write ``doc`` as indented UTF-8 LMF XML."""
    lines = ['<?xml version="1.0" encoding="UTF-8"?>', "<LexicalResource>", "  <Lexicon>"]
    for att, val in doc.lexicon_feats:
        lines.append(_feat_line(att, val, "    "))
    for entry in doc.entries:
        if entry.id is None:
            lines.append("    <LexicalEntry>")
        else:
            lines.append(f"    <LexicalEntry id={quoteattr(entry.id)}>")
        for att, val in entry.feats:
            lines.append(_feat_line(att, val, "      "))
        lines.append("      <Lemma>")
        for att, val in entry.lemma:
            lines.append(_feat_line(att, val, "        "))
        lines.append("      </Lemma>")
        for wf in entry.word_forms:
            lines.append("      <WordForm>")
            for att, val in wf:
                lines.append(_feat_line(att, val, "        "))
            lines.append("      </WordForm>")
        for blob in entry.extra:
            lines.append("      " + blob)
        lines.append("    </LexicalEntry>")
    lines += ["  </Lexicon>", "</LexicalResource>", ""]
    return "\n".join(lines).encode("utf-8")


# -- tagline import ----------------------------------------------------------

_TAG = re.compile(r"<([^<>]*)>")


def parse_tagline_schema(text: str) -> dict[str, list[str]]:
    """Read a schema table: ``pos  att1 att2 ...`` per line, ``#`` comments."""
    schema: dict[str, list[str]] = {}
    for line_no, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        pos, *atts = line.replace(":", " ").split()
        if pos in schema:
            raise TaglineError(f"duplicate schema row for {pos!r}", line_no)
        schema[pos] = atts
    return schema


def import_tagline(
    text: str,
    schema: dict[str, list[str]],
    pos_att: str = "partOfSpeech",
) -> RawLmfDocument:
    """Convert ``form:lemma<pos><t1>...`` lines into raw LMF entries.

    Lines sharing lemma and PoS tag are grouped into one entry, in first-seen
    order. Tags after the PoS are assigned to the attribute names the schema
    lists for that PoS, positionally.
    """
    order: list[tuple[str, str]] = []
    forms: dict[tuple[str, str], list[tuple[Feat, ...]]] = {}
    for line_no, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        head, lt, tail = line.partition("<")
        if ":" not in head:
            raise TaglineError("missing ':' between form and lemma", line_no)
        form, _, lemma = head.partition(":")
        if not form or not lemma:
            raise TaglineError("empty form or lemma", line_no)
        tags = _TAG.findall(lt + tail)
        if not tags or any(not t for t in tags):
            raise TaglineError("missing or empty tag", line_no)
        pos, rest = tags[0], tags[1:]
        names = schema.get(pos, [])
        if len(rest) > len(names):
            raise TaglineError(
                f"{len(rest)} tags after <{pos}> but schema lists {len(names)}", line_no
            )
        key = (lemma, pos)
        if key not in forms:
            forms[key] = []
            order.append(key)
        forms[key].append((("writtenForm", form),) + tuple(zip(names, rest)))
    entries = tuple(
        RawEntry(
            feats=((pos_att, pos),),
            lemma=(("writtenForm", lemma),),
            word_forms=tuple(forms[(lemma, pos)]),
        )
        for lemma, pos in order
    )
    return RawLmfDocument(entries)
