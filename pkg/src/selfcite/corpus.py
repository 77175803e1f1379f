"""Citation corpus data model and file adapters.

A corpus is an immutable snapshot of three record collections: researchers,
publications, and citation edges between publications. Two on-disk formats
are supported:

* JSON Lines, one self-describing record per line with a ``"kind"``
  discriminator in ``{"researcher", "publication", "citation"}``:

  - ``{"kind":"researcher","id":...,"names":[...],"orcid":null|"...",
    "gender":"male"|"female"|null,"discipline":...,"first_pub_year":null|int}``
  - ``{"kind":"publication","id":...,"title":...,"year":int,
    "authors":[ids],"discipline":...}`` with an optional ``"citation_count"``
    carrying a pre-counted total from the source database
  - ``{"kind":"citation","citing":id,"cited":id}``

  Files are UTF-8 with LF line endings. Unknown keys are ignored so the
  format stays forward-extensible.

* A CSV bundle: a directory holding ``researchers.csv``, ``publications.csv``
  and ``citations.csv`` with the same vocabulary. Multi-valued cells
  (name variants, author lists) join their entries with ``|``.

Loading is all-or-nothing: any structural problem raises and no corpus is
returned, so downstream metrics never run on a silently truncated graph.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from datetime import date
from enum import Enum
from functools import cached_property
from pathlib import Path
from typing import Iterable, Optional

MIN_YEAR = 1500


def max_valid_year() -> int:
    """Upper bound for publication years: next calendar year."""
    return date.today().year + 1


class Discipline(Enum):
    COMPUTER_SCIENCE = "ComputerScience"
    LIFE_SCIENCES = "LifeSciences"
    PHYSICAL_SCIENCES = "PhysicalSciences"
    SOCIAL_SCIENCES = "SocialSciences"
    ENGINEERING = "Engineering"
    HUMANITIES = "Humanities"
    OTHER = "Other"


class Gender(Enum):
    MALE = "male"
    FEMALE = "female"
    UNREPORTED = "unreported"


class CorpusFormat(Enum):
    JSONL = "jsonl"
    CSV_BUNDLE = "csv_bundle"


FORMAT_VERSION = "1"


class CorpusError(Exception):
    """Base class for corpus loading and lookup failures."""


class MalformedRecord(CorpusError):
    """A record is syntactically or semantically invalid.

    ``location`` names the line or row when the record came from a file.
    """

    def __init__(self, reason: str, location: str | None = None):
        self.reason = reason
        self.location = location
        where = f"{location}: " if location else ""
        super().__init__(f"{where}{reason}")


class DanglingReference(CorpusError):
    """An identifier does not resolve to any record in the corpus."""

    def __init__(self, identifier: str, context: str = ""):
        self.identifier = identifier
        detail = f" ({context})" if context else ""
        super().__init__(f"unresolved identifier {identifier!r}{detail}")


class DuplicateId(CorpusError):
    """An identifier (or citation pair) appears more than once."""

    def __init__(self, identifier: str):
        self.identifier = identifier
        super().__init__(f"duplicate identifier {identifier!r}")


class UnknownResearcher(CorpusError):
    def __init__(self, researcher_id: str):
        self.researcher_id = researcher_id
        super().__init__(f"unknown researcher {researcher_id!r}")


@dataclass(frozen=True)
class Publication:
    pub_id: str
    title: str
    year: int
    author_ids: tuple[str, ...]
    discipline: Discipline
    source_citation_count: Optional[int] = None


@dataclass(frozen=True)
class CitationEdge:
    citing_id: str
    cited_id: str

    @property
    def pair(self) -> tuple[str, str]:
        return (self.citing_id, self.cited_id)


@dataclass(frozen=True)
class Researcher:
    researcher_id: str
    name_variants: tuple[str, ...]
    orcid: Optional[str] = None
    gender: Gender = Gender.UNREPORTED
    first_pub_year: Optional[int] = None
    discipline: Discipline = Discipline.OTHER


@dataclass(frozen=True)
class Provenance:
    source: str
    format_version: str


class WarningCode(Enum):
    TIME_TRAVEL_CITATION = "time_travel_citation"
    ORPHAN_RESEARCHER = "orphan_researcher"
    OTHER_DISCIPLINE = "other_discipline"


@dataclass(frozen=True)
class CorpusWarning:
    code: WarningCode
    subject: str
    detail: str


@dataclass(frozen=True, eq=False)
class Corpus:
    """Validated, read-only citation corpus.

    Instances are only created through :meth:`from_parts` (or the parsers,
    which delegate to it), so every corpus in circulation satisfies
    referential integrity. Treat the contained collections as read-only;
    the derived indexes below are cached against the loaded state.
    """

    publications: dict[str, Publication]
    researchers: dict[str, Researcher]
    edges: tuple[CitationEdge, ...]
    provenance: Provenance

    @classmethod
    def from_parts(
        cls,
        researchers: Iterable[Researcher],
        publications: Iterable[Publication],
        edges: Iterable[CitationEdge],
        provenance: Provenance,
    ) -> "Corpus":
        """Assemble and fully validate a corpus; raises on any violation."""
        year_hi = max_valid_year()

        researcher_map: dict[str, Researcher] = {}
        for r in researchers:
            if not r.researcher_id:
                raise MalformedRecord("researcher with empty id")
            if r.researcher_id in researcher_map:
                raise DuplicateId(r.researcher_id)
            if not r.name_variants or any(not n.strip() for n in r.name_variants):
                raise MalformedRecord(
                    f"researcher {r.researcher_id!r} needs at least one non-blank name"
                )
            if r.first_pub_year is not None and not (
                MIN_YEAR <= r.first_pub_year <= year_hi
            ):
                raise MalformedRecord(
                    f"researcher {r.researcher_id!r} first_pub_year "
                    f"{r.first_pub_year} outside [{MIN_YEAR}, {year_hi}]"
                )
            researcher_map[r.researcher_id] = r

        publication_map: dict[str, Publication] = {}
        for p in publications:
            if not p.pub_id:
                raise MalformedRecord("publication with empty id")
            if p.pub_id in publication_map:
                raise DuplicateId(p.pub_id)
            if not p.author_ids:
                raise MalformedRecord(f"publication {p.pub_id!r} has no authors")
            if not (MIN_YEAR <= p.year <= year_hi):
                raise MalformedRecord(
                    f"publication {p.pub_id!r} year {p.year} "
                    f"outside [{MIN_YEAR}, {year_hi}]"
                )
            if p.source_citation_count is not None and p.source_citation_count < 0:
                raise MalformedRecord(
                    f"publication {p.pub_id!r} has negative citation_count"
                )
            publication_map[p.pub_id] = p

        for p in publication_map.values():
            for author_id in p.author_ids:
                if author_id not in researcher_map:
                    raise DanglingReference(
                        author_id, f"author of publication {p.pub_id!r}"
                    )

        edge_list: list[CitationEdge] = []
        seen_pairs: set[tuple[str, str]] = set()
        for e in edges:
            if e.citing_id not in publication_map:
                raise DanglingReference(e.citing_id, "citing side of citation")
            if e.cited_id not in publication_map:
                raise DanglingReference(e.cited_id, "cited side of citation")
            if e.citing_id == e.cited_id:
                raise MalformedRecord(
                    f"publication {e.citing_id!r} cannot cite itself"
                )
            if e.pair in seen_pairs:
                raise DuplicateId(f"{e.citing_id}->{e.cited_id}")
            seen_pairs.add(e.pair)
            edge_list.append(e)

        return cls(
            publications=publication_map,
            researchers=researcher_map,
            edges=tuple(edge_list),
            provenance=provenance,
        )

    def researcher(self, researcher_id: str) -> Researcher:
        try:
            return self.researchers[researcher_id]
        except KeyError:
            raise UnknownResearcher(researcher_id) from None

    @cached_property
    def publications_by_author(self) -> dict[str, tuple[str, ...]]:
        """Researcher id -> that researcher's publication ids, sorted."""
        index: dict[str, list[str]] = {rid: [] for rid in self.researchers}
        for pub in self.publications.values():
            for author_id in pub.author_ids:
                index[author_id].append(pub.pub_id)
        return {rid: tuple(sorted(pids)) for rid, pids in index.items()}

    @cached_property
    def incoming_edges(self) -> dict[str, tuple[CitationEdge, ...]]:
        """Cited publication id -> edges pointing at it."""
        index: dict[str, list[CitationEdge]] = {}
        for edge in self.edges:
            index.setdefault(edge.cited_id, []).append(edge)
        return {pid: tuple(es) for pid, es in index.items()}


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------


def _parse_discipline(value: object, location: str) -> Discipline:
    try:
        return Discipline(value)
    except ValueError:
        known = ", ".join(d.value for d in Discipline)
        raise MalformedRecord(
            f"unknown discipline {value!r} (expected one of: {known})", location
        ) from None


def _parse_gender(value: object, location: str) -> Gender:
    if value is None or value == "":
        return Gender.UNREPORTED
    if value in ("male", "female", "unreported"):
        return Gender(value)
    raise MalformedRecord(
        f"gender must be \"male\", \"female\" or null, got {value!r}", location
    )


def _require_str(record: dict, key: str, location: str) -> str:
    value = record.get(key)
    if not isinstance(value, str) or not value:
        raise MalformedRecord(f"missing or empty string field {key!r}", location)
    return value


def _require_int(value: object, what: str, location: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise MalformedRecord(f"{what} must be an integer, got {value!r}", location)
    return value


def _researcher_from_json(record: dict, location: str) -> Researcher:
    names = record.get("names")
    if not isinstance(names, list) or not names or not all(
        isinstance(n, str) for n in names
    ):
        raise MalformedRecord("\"names\" must be a non-empty list of strings", location)
    orcid = record.get("orcid")
    if orcid is not None and not isinstance(orcid, str):
        raise MalformedRecord("\"orcid\" must be a string or null", location)
    first_pub_year = record.get("first_pub_year")
    if first_pub_year is not None:
        first_pub_year = _require_int(first_pub_year, "first_pub_year", location)
    return Researcher(
        researcher_id=_require_str(record, "id", location),
        name_variants=tuple(names),
        orcid=orcid,
        gender=_parse_gender(record.get("gender"), location),
        first_pub_year=first_pub_year,
        discipline=_parse_discipline(record.get("discipline"), location),
    )


def _publication_from_json(record: dict, location: str) -> Publication:
    authors = record.get("authors")
    if not isinstance(authors, list) or not authors or not all(
        isinstance(a, str) and a for a in authors
    ):
        raise MalformedRecord(
            "\"authors\" must be a non-empty list of researcher ids", location
        )
    count = record.get("citation_count")
    if count is not None:
        count = _require_int(count, "citation_count", location)
    return Publication(
        pub_id=_require_str(record, "id", location),
        title=_require_str(record, "title", location),
        year=_require_int(record.get("year"), "year", location),
        author_ids=tuple(authors),
        discipline=_parse_discipline(record.get("discipline"), location),
        source_citation_count=count,
    )


def _edge_from_json(record: dict, location: str) -> CitationEdge:
    return CitationEdge(
        citing_id=_require_str(record, "citing", location),
        cited_id=_require_str(record, "cited", location),
    )


def parse_corpus(source, format: CorpusFormat = CorpusFormat.JSONL) -> Corpus:
    """Parse and validate a corpus file.

    ``source`` is a filesystem path (or ``Path``) for either format, or a
    readable text/byte stream for JSONL. Loading is all-or-nothing.

    Raises ``MalformedRecord``, ``DanglingReference`` or ``DuplicateId``
    with the offending location where one is known.
    """
    if format is CorpusFormat.JSONL:
        return _parse_jsonl(source)
    if format is CorpusFormat.CSV_BUNDLE:
        return _parse_csv_bundle(source)
    raise ValueError(f"unsupported corpus format: {format!r}")


def _open_text(source) -> tuple[io.TextIOBase, str, bool]:
    """Return (text stream, provenance label, needs_close)."""
    if isinstance(source, (str, Path)):
        path = Path(source)
        return path.open("r", encoding="utf-8"), str(path), True
    if isinstance(source, (bytes, bytearray)):
        return io.StringIO(source.decode("utf-8")), "<bytes>", False
    if hasattr(source, "read"):
        data = source.read()
        if isinstance(data, bytes):
            data = data.decode("utf-8")
        return io.StringIO(data), "<stream>", False
    raise TypeError(f"cannot read corpus from {type(source).__name__}")


def _parse_jsonl(source) -> Corpus:
    stream, label, needs_close = _open_text(source)
    researchers: list[Researcher] = []
    publications: list[Publication] = []
    edges: list[CitationEdge] = []
    try:
        for lineno, line in enumerate(stream, start=1):
            line = line.strip()
            if not line:
                continue
            location = f"{label} line {lineno}"
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise MalformedRecord(f"invalid JSON ({exc.msg})", location) from None
            if not isinstance(record, dict):
                raise MalformedRecord("record must be a JSON object", location)
            kind = record.get("kind")
            if kind == "researcher":
                researchers.append(_researcher_from_json(record, location))
            elif kind == "publication":
                publications.append(_publication_from_json(record, location))
            elif kind == "citation":
                edges.append(_edge_from_json(record, location))
            else:
                raise MalformedRecord(f"unknown record kind {kind!r}", location)
    finally:
        if needs_close:
            stream.close()
    provenance = Provenance(source=label, format_version=f"jsonl/{FORMAT_VERSION}")
    return Corpus.from_parts(researchers, publications, edges, provenance)


def _split_multi(cell: str) -> tuple[str, ...]:
    return tuple(part for part in (piece.strip() for piece in cell.split("|")) if part)


def _csv_rows(path: Path, required: list[str]) -> Iterable[tuple[dict, str]]:
    with path.open("r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        missing = [col for col in required if col not in header]
        if missing:
            raise MalformedRecord(
                f"missing columns {missing}", f"{path.name} header"
            )
        for rownum, row in enumerate(reader, start=2):
            yield row, f"{path.name} row {rownum}"


def _int_cell(cell: str, what: str, location: str) -> int:
    try:
        return int(cell)
    except ValueError:
        raise MalformedRecord(f"{what} must be an integer, got {cell!r}", location) from None


def _parse_csv_bundle(source) -> Corpus:
    base = Path(source)
    if not base.is_dir():
        raise MalformedRecord(f"CSV bundle {base} is not a directory")
    researchers: list[Researcher] = []
    publications: list[Publication] = []
    edges: list[CitationEdge] = []

    for row, location in _csv_rows(
        base / "researchers.csv", ["id", "names", "orcid", "gender", "discipline", "first_pub_year"]
    ):
        names = _split_multi(row["names"])
        if not names:
            raise MalformedRecord("names cell is empty", location)
        if not row["id"]:
            raise MalformedRecord("empty id", location)
        fp_cell = row["first_pub_year"].strip()
        researchers.append(
            Researcher(
                researcher_id=row["id"],
                name_variants=names,
                orcid=row["orcid"] or None,
                gender=_parse_gender(row["gender"], location),
                first_pub_year=_int_cell(fp_cell, "first_pub_year", location) if fp_cell else None,
                discipline=_parse_discipline(row["discipline"], location),
            )
        )

    for row, location in _csv_rows(
        base / "publications.csv", ["id", "title", "year", "authors", "discipline"]
    ):
        if not row["id"] or not row["title"]:
            raise MalformedRecord("empty id or title", location)
        count_cell = (row.get("citation_count") or "").strip()
        publications.append(
            Publication(
                pub_id=row["id"],
                title=row["title"],
                year=_int_cell(row["year"], "year", location),
                author_ids=_split_multi(row["authors"]),
                discipline=_parse_discipline(row["discipline"], location),
                source_citation_count=_int_cell(count_cell, "citation_count", location)
                if count_cell
                else None,
            )
        )

    for row, location in _csv_rows(base / "citations.csv", ["citing", "cited"]):
        if not row["citing"] or not row["cited"]:
            raise MalformedRecord("empty citing or cited id", location)
        edges.append(CitationEdge(citing_id=row["citing"], cited_id=row["cited"]))

    provenance = Provenance(source=str(base), format_version=f"csv_bundle/{FORMAT_VERSION}")
    return Corpus.from_parts(researchers, publications, edges, provenance)


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def _researcher_to_json(r: Researcher) -> dict:
    return {
        "kind": "researcher",
        "id": r.researcher_id,
        "names": list(r.name_variants),
        "orcid": r.orcid,
        "gender": None if r.gender is Gender.UNREPORTED else r.gender.value,
        "discipline": r.discipline.value,
        "first_pub_year": r.first_pub_year,
    }


def _publication_to_json(p: Publication) -> dict:
    record = {
        "kind": "publication",
        "id": p.pub_id,
        "title": p.title,
        "year": p.year,
        "authors": list(p.author_ids),
        "discipline": p.discipline.value,
    }
    if p.source_citation_count is not None:
        record["citation_count"] = p.source_citation_count
    return record


def serialize_corpus(corpus: Corpus) -> str:
    """Render a corpus to canonical JSONL text.

    Records are sorted (researchers, then publications, then citations, each
    by identifier), so equal corpora serialize to byte-identical text.
    """
    lines = []
    for rid in sorted(corpus.researchers):
        lines.append(json.dumps(
            _researcher_to_json(corpus.researchers[rid]),
            ensure_ascii=False, separators=(",", ":"),
        ))
    for pid in sorted(corpus.publications):
        lines.append(json.dumps(
            _publication_to_json(corpus.publications[pid]),
            ensure_ascii=False, separators=(",", ":"),
        ))
    for edge in sorted(corpus.edges, key=lambda e: e.pair):
        lines.append(json.dumps(
            {"kind": "citation", "citing": edge.citing_id, "cited": edge.cited_id},
            ensure_ascii=False, separators=(",", ":"),
        ))
    return "\n".join(lines) + "\n"


def write_corpus(corpus: Corpus, path) -> None:
    Path(path).write_text(serialize_corpus(corpus), encoding="utf-8", newline="\n")


# ---------------------------------------------------------------------------
# Non-fatal checks and derivations
# ---------------------------------------------------------------------------


def validate_corpus(corpus: Corpus) -> list[CorpusWarning]:
    """Collect non-fatal data-quality warnings. Pure; never mutates.

    Flags citations whose citing paper predates the cited one (preprints and
    in-press citations legitimately produce these), researchers without any
    publication, and publications filed under the catch-all discipline.
    """
    warnings: list[CorpusWarning] = []
    for edge in corpus.edges:
        citing = corpus.publications[edge.citing_id]
        cited = corpus.publications[edge.cited_id]
        if citing.year < cited.year:
            warnings.append(CorpusWarning(
                code=WarningCode.TIME_TRAVEL_CITATION,
                subject=edge.citing_id,
                detail=(
                    f"{edge.citing_id} ({citing.year}) cites "
                    f"{edge.cited_id} ({cited.year})"
                ),
            ))
    for rid in sorted(corpus.researchers):
        if not corpus.publications_by_author.get(rid):
            warnings.append(CorpusWarning(
                code=WarningCode.ORPHAN_RESEARCHER,
                subject=rid,
                detail=f"researcher {rid} has no publications",
            ))
    for pid in sorted(corpus.publications):
        if corpus.publications[pid].discipline is Discipline.OTHER:
            warnings.append(CorpusWarning(
                code=WarningCode.OTHER_DISCIPLINE,
                subject=pid,
                detail=f"publication {pid} is filed under discipline Other",
            ))
    return warnings


def derive_first_pub_year(corpus: Corpus, researcher_id: str) -> Optional[int]:
    """First-publication year for a researcher.

    An explicitly recorded year wins; otherwise the minimum year over the
    researcher's publications; ``None`` for a researcher with neither.
    """
    researcher = corpus.researcher(researcher_id)
    if researcher.first_pub_year is not None:
        return researcher.first_pub_year
    pub_ids = corpus.publications_by_author.get(researcher_id, ())
    if not pub_ids:
        return None
    return min(corpus.publications[pid].year for pid in pub_ids)
