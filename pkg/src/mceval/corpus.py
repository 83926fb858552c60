"""Bibliographic-corpus pipeline: parse, filter, dedupe, pair, count.

Ingests tab-separated database exports (plus CSV/JSONL equivalents), keeps
records matching a keyword list, removes duplicates, and emits one
title -> abstract instruction pair per record with an abstract.
"""

from __future__ import annotations

import csv
import io
import json
import re
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import BinaryIO, Iterable

DEFAULT_KEYWORDS = (
    "sustainable energy", "wind energy", "solar energy", "photovoltaic power",
    "Hydrogen energy", "biomass energy", "geothermal energy", "energy storage",
    "photothermal", "carbon neutrality", "Energy Internet", "virtual power plant",
)

DOC_TYPE_CANONICAL = {
    "article": "journal paper",
    "patent": "patent",
    "proceedings paper": "conference paper",
    "meeting": "conference paper",
    "book": "book",
    "book in series": "book in series",
}


class CorpusError(Exception):
    pass


class MissingRequiredColumnError(CorpusError):
    pass


class UnreadableStreamError(CorpusError):
    pass


def normalize_ws(text: str) -> str:
    return re.sub(r"\s+", " ", text).strip()


@dataclass(frozen=True)
class BibRecord:
    title: str
    abstract: str | None = None
    id: str | None = None
    doc_type: str | None = None
    source: str | None = None
    year: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "title", normalize_ws(self.title))
        if not self.title:
            raise CorpusError("title must be non-empty")
        if self.year is not None and not (1800 <= self.year <= 2100):
            raise CorpusError(f"implausible year {self.year}")


@dataclass(frozen=True)
class InstructionPair:
    input: str
    output: str


@dataclass(frozen=True)
class KeywordFilter:
    keywords: tuple[str, ...] = DEFAULT_KEYWORDS
    match_fields: str = "both"           # "title" | "abstract" | "both"
    case_sensitive: bool = False

    def __post_init__(self):
        object.__setattr__(self, "keywords", tuple(self.keywords))
        if not self.keywords or any(not k.strip() for k in self.keywords):
            raise CorpusError("need at least one non-empty keyword")
        if self.match_fields not in ("title", "abstract", "both"):
            raise CorpusError(f"unknown match_fields {self.match_fields!r}")


@dataclass(frozen=True)
class CorpusStats:
    total: int
    by_doc_type: dict[str, int]
    top_sources: tuple[tuple[str, int], ...]
    skipped_no_abstract: int = 0
    duplicates_removed: int = 0

    def to_json(self) -> str:
        return json.dumps({
            "total": self.total,
            "by_doc_type": dict(sorted(self.by_doc_type.items())),
            "top_sources": [[s, c] for s, c in self.top_sources],
            "skipped_no_abstract": self.skipped_no_abstract,
            "duplicates_removed": self.duplicates_removed,
        }, indent=2)


@dataclass
class Diagnostic:
    line: int
    message: str


# Tab-separated export field tags.
_WOS_FIELDS = {"TI": "title", "AB": "abstract", "DT": "doc_type",
               "SO": "source", "PY": "year", "UT": "id"}


def _decode(stream) -> io.TextIOBase:
    if isinstance(stream, (str, Path)):
        return open(stream, encoding="utf-8-sig")
    if isinstance(stream, bytes):
        stream = io.BytesIO(stream)
    if hasattr(stream, "read") and isinstance(stream.read(0), bytes):
        return io.TextIOWrapper(stream, encoding="utf-8-sig")
    return stream


def _make_record(fields: dict[str, str], lineno: int,
                 diagnostics: list[Diagnostic]) -> BibRecord | None:
    title = normalize_ws(fields.get("title", ""))
    if not title:
        diagnostics.append(Diagnostic(lineno, "empty title"))
        return None
    year = None
    raw_year = (fields.get("year") or "").strip()
    if raw_year:
        try:
            year = int(raw_year)
        except ValueError:
            diagnostics.append(Diagnostic(lineno, f"bad year {raw_year!r}"))
    try:
        return BibRecord(
            title=title,
            abstract=fields.get("abstract") or None,
            id=(fields.get("id") or "").strip() or None,
            doc_type=(fields.get("doc_type") or "").strip() or None,
            source=(fields.get("source") or "").strip() or None,
            year=year,
        )
    except CorpusError as exc:
        diagnostics.append(Diagnostic(lineno, str(exc)))
        return None


def parse_records(stream: str | Path | bytes | BinaryIO, format: str = "wos-tab"
                  ) -> tuple[list[BibRecord], list[Diagnostic]]:
    """Parse a byte stream (or path) into records plus per-line diagnostics.

    Malformed lines are skipped with a diagnostic; they never abort the stream.
    """
    try:
        text = _decode(stream)
    except OSError as exc:
        raise UnreadableStreamError(str(exc)) from exc
    records: list[BibRecord] = []
    diagnostics: list[Diagnostic] = []
    try:
        if format == "wos-tab":
            header_line = text.readline()
            if not header_line.strip():
                raise MissingRequiredColumnError("empty input, no TI column")
            tags = header_line.rstrip("\r\n").split("\t")
            if "TI" not in tags:
                raise MissingRequiredColumnError("header lacks required TI column")
            for lineno, line in enumerate(text, start=2):
                if not line.strip():
                    continue
                cells = line.rstrip("\r\n").split("\t")
                if len(cells) != len(tags):
                    diagnostics.append(Diagnostic(
                        lineno, f"expected {len(tags)} columns, got {len(cells)}"))
                    continue
                fields = {_WOS_FIELDS[tag]: cell for tag, cell in zip(tags, cells)
                          if tag in _WOS_FIELDS}
                rec = _make_record(fields, lineno, diagnostics)
                if rec:
                    records.append(rec)
        elif format == "csv":
            reader = csv.DictReader(text)
            if reader.fieldnames is None or "title" not in reader.fieldnames:
                raise MissingRequiredColumnError("header lacks required title column")
            for lineno, row in enumerate(reader, start=2):
                if None in row or any(v is None for v in row.values()):
                    diagnostics.append(Diagnostic(lineno, "column count mismatch"))
                    continue
                rec = _make_record(row, lineno, diagnostics)
                if rec:
                    records.append(rec)
        elif format == "jsonl":
            for lineno, line in enumerate(text, start=1):
                if not line.strip():
                    continue
                try:
                    doc = json.loads(line)
                except json.JSONDecodeError as exc:
                    diagnostics.append(Diagnostic(lineno, f"bad JSON: {exc}"))
                    continue
                if not isinstance(doc, dict) or "title" not in doc:
                    diagnostics.append(Diagnostic(lineno, "object lacks title"))
                    continue
                fields = {k: "" if doc.get(k) is None else str(doc[k])
                          for k in ("id", "title", "abstract", "doc_type", "source", "year")}
                rec = _make_record(fields, lineno, diagnostics)
                if rec:
                    records.append(rec)
        else:
            raise CorpusError(f"unknown format {format!r}")
    except UnicodeDecodeError as exc:
        raise UnreadableStreamError(str(exc)) from exc
    return records, diagnostics


def filter_records(records: Iterable[BibRecord], f: KeywordFilter) -> list[BibRecord]:
    """Keep records where any keyword phrase occurs as a substring of the
    selected fields, whitespace-run insensitive."""
    def fold(text: str) -> str:
        text = normalize_ws(text)
        return text if f.case_sensitive else text.casefold()

    needles = [fold(k) for k in f.keywords]
    kept = []
    for rec in records:
        haystacks = []
        if f.match_fields in ("title", "both"):
            haystacks.append(fold(rec.title))
        if f.match_fields in ("abstract", "both") and rec.abstract:
            haystacks.append(fold(rec.abstract))
        if any(n in h for n in needles for h in haystacks):
            kept.append(rec)
    return kept


_PUNCT = re.compile(r"[^\w\s]", re.UNICODE)


def _dedupe_key(rec: BibRecord) -> str:
    if rec.id:
        return f"id:{rec.id}"
    title = _PUNCT.sub("", rec.title.casefold())
    return "title:" + normalize_ws(title)


def dedupe(records: Iterable[BibRecord]) -> tuple[list[BibRecord], int]:
    """First occurrence wins; key = accession id, else normalized title."""
    seen: set[str] = set()
    unique: list[BibRecord] = []
    removed = 0
    for rec in records:
        key = _dedupe_key(rec)
        if key in seen:
            removed += 1
        else:
            seen.add(key)
            unique.append(rec)
    return unique, removed


def build_pairs(records: Iterable[BibRecord]) -> tuple[list[InstructionPair], int]:
    """One whitespace-normalized title -> abstract pair per abstracted record."""
    pairs: list[InstructionPair] = []
    skipped = 0
    for rec in records:
        abstract = normalize_ws(rec.abstract or "")
        if not abstract:
            skipped += 1
            continue
        pairs.append(InstructionPair(normalize_ws(rec.title), abstract))
    return pairs, skipped


def canonical_doc_type(raw: str | None) -> str:
    if not raw:
        return "other"
    return DOC_TYPE_CANONICAL.get(normalize_ws(raw).casefold(), "other")


def stats(records: Iterable[BibRecord], k: int = 20, *,
          skipped_no_abstract: int = 0, duplicates_removed: int = 0) -> CorpusStats:
    """Doc-type distribution and top-k sources. Unknown types count as
    "other" so the per-type counts always sum to the total."""
    if k < 1:
        raise CorpusError("k must be >= 1")
    records = list(records)
    by_type = Counter(canonical_doc_type(r.doc_type) for r in records)
    by_source = Counter(r.source for r in records if r.source)
    top = sorted(by_source.items(), key=lambda kv: (-kv[1], kv[0]))[:k]
    return CorpusStats(
        total=len(records),
        by_doc_type=dict(by_type),
        top_sources=tuple(top),
        skipped_no_abstract=skipped_no_abstract,
        duplicates_removed=duplicates_removed,
    )


def write_pairs_jsonl(pairs: Iterable[InstructionPair], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for pair in pairs:
            fh.write(json.dumps({"input": pair.input, "output": pair.output},
                                ensure_ascii=False) + "\n")


def read_pairs_jsonl(path: str | Path) -> list[InstructionPair]:
    pairs = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                doc = json.loads(line)
                pairs.append(InstructionPair(doc["input"], doc["output"]))
    return pairs


def stats_report(s: CorpusStats) -> str:
    lines = [
        f"records: {s.total}",
        f"duplicates removed: {s.duplicates_removed}",
        f"skipped (no abstract): {s.skipped_no_abstract}",
        "by type:",
    ]
    for name, count in sorted(s.by_doc_type.items(), key=lambda kv: (-kv[1], kv[0])):
        lines.append(f"  {name}: {count}")
    lines.append(f"top {len(s.top_sources)} sources:")
    for source, count in s.top_sources:
        lines.append(f"  {source}: {count}")
    return "\n".join(lines) + "\n"
