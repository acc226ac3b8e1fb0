"""Canonical article records and the line-delimited record store."""

from __future__ import annotations

import hashlib
import json
import logging
import re
import urllib.parse
from dataclasses import dataclass, field
from typing import Iterable

from .errors import MathRepoError
from .msc import is_msc_code
from .parsers import Citation, DcRecord, Junii2Record, parse_citation_string

log = logging.getLogger(__name__)

_DATE_RE = re.compile(r"^\d{4}(-\d{2})?(-\d{2})?$")
_DATE_PREFIX_RE = re.compile(r"^(\d{4})(-\d{2})?(-\d{2})?")


class RecordError(MathRepoError):
    """Record cannot be canonicalized or fails an invariant."""


class StoreError(MathRepoError):
    """Record store file unreadable or malformed."""


@dataclass(frozen=True)
class NameParts:
    """Personal name split into family/given; the raw form is kept as
    provenance but does not take part in equality."""

    family: str
    given: str = ""
    raw: str = field(default="", compare=False)

    def __post_init__(self):
        if not self.raw:
            object.__setattr__(self, "raw", self.display())

    def display(self) -> str:
        return f"{self.family}, {self.given}" if self.given else self.family


def split_name(raw: str) -> NameParts:
    """Split "FAMILY, Given" on the first comma; no comma means family only."""
    family, _, given = raw.partition(",")
    return NameParts(family=family.strip(), given=given.strip(), raw=raw)


@dataclass(frozen=True)
class RelatedUrl:
    url: str
    type: str = ""


def make_record_id(source: str, oai_identifier: str) -> str:
    """Stable internal id derived from the harvest source and OAI identifier."""
    digest = hashlib.sha256(f"{source}\n{oai_identifier}".encode("utf-8")).hexdigest()
    return digest[:16]


def _is_http_url(value: str) -> bool:
    parsed = urllib.parse.urlparse(value)
    return parsed.scheme in ("http", "https") and bool(parsed.netloc)


@dataclass
class CanonicalRecord:
    """Normalized article record carrying bibliographic and enrichment fields."""

    record_id: str
    source: str
    oai_identifier: str
    title: str
    creators: list[NameParts] = field(default_factory=list)
    publication: str = ""
    volume: str = ""
    issue: str = ""
    pagerange: str = ""
    date: str = ""
    publisher: str = ""
    official_url: str = ""
    full_text_url: str = ""
    msc_primary: str = ""
    msc_secondary: list[str] = field(default_factory=list)
    mr_number: int | None = None
    related_urls: list[RelatedUrl] = field(default_factory=list)
    refereed: bool = True
    language: str = ""

    def __post_init__(self):
        if self.record_id != make_record_id(self.source, self.oai_identifier):
            raise RecordError(
                f"record_id {self.record_id!r} does not derive from "
                f"({self.source!r}, {self.oai_identifier!r})"
            )
        if not self.title:
            raise RecordError("canonical record requires a title")
        if not _is_http_url(self.official_url):
            raise RecordError(f"official_url must be an absolute URL: {self.official_url!r}")
        if self.date and not _DATE_RE.match(self.date):
            raise RecordError(f"date must be YYYY[-MM[-DD]]: {self.date!r}")
        for code in [self.msc_primary, *self.msc_secondary]:
            if code and not is_msc_code(code):
                raise RecordError(f"invalid MSC code on record: {code!r}")
        if self.mr_number is not None and self.mr_number <= 0:
            raise RecordError(f"mr_number must be positive: {self.mr_number}")

    @property
    def year(self) -> int | None:
        return int(self.date[:4]) if self.date else None


def _clean_date(value: str) -> str:
    match = _DATE_PREFIX_RE.match(value.strip())
    return match.group(0) if match else ""


def _pagerange(spage, epage) -> str:
    if spage is None or spage == "":
        return ""
    if epage is None or epage == "":
        return str(spage)
    return f"{spage}-{epage}"


def canonical_from_dc(rec: DcRecord, source: str, oai_identifier: str) -> CanonicalRecord:
    """Canonicalize an oai_dc record.

    The first URL identifier becomes official_url, "doi:" identifiers go to
    related_urls, and the first remaining identifier is treated as the
    citation string carrying journal/volume/issue/pages/year.
    """
    official = ""
    related: list[RelatedUrl] = []
    citation: Citation | None = None
    for ident in rec.identifiers:
        if _is_http_url(ident):
            if not official:
                official = ident
            else:
                related.append(RelatedUrl(url=ident, type="url"))
        elif ident.lower().startswith("doi:"):
            related.append(RelatedUrl(url=ident, type="doi"))
        elif citation is None:
            citation = parse_citation_string(ident)
    if not official:
        raise RecordError(f"no URL identifier found for {oai_identifier!r}")

    date = _clean_date(rec.date)
    if not date and citation is not None and citation.year is not None:
        date = str(citation.year)
    return CanonicalRecord(
        record_id=make_record_id(source, oai_identifier),
        source=source,
        oai_identifier=oai_identifier,
        title=rec.title,
        creators=[split_name(name) for name in rec.creators],
        publication=citation.journal_title if citation else "",
        volume=citation.volume if citation else "",
        issue=citation.issue if citation else "",
        pagerange=_pagerange(citation.spage, citation.epage) if citation else "",
        date=date,
        publisher=rec.publisher,
        official_url=official,
        msc_secondary=[code for code in rec.subjects if is_msc_code(code)],
        related_urls=related,
        language=rec.language,
    )


def canonical_from_junii2(rec: Junii2Record, source: str, oai_identifier: str) -> CanonicalRecord:
    """Canonicalize a junii2 record; the element-per-field layout maps 1:1."""
    if not rec.uri:
        raise RecordError(f"junii2 record without URI: {oai_identifier!r}")
    return CanonicalRecord(
        record_id=make_record_id(source, oai_identifier),
        source=source,
        oai_identifier=oai_identifier,
        title=rec.title,
        creators=[split_name(name) for name in rec.creators],
        publication=rec.jtitle,
        volume=rec.volume,
        issue=rec.issue,
        pagerange=_pagerange(rec.spage, rec.epage),
        date=_clean_date(rec.date_of_issued),
        publisher=rec.publisher,
        official_url=rec.uri,
        full_text_url=rec.full_text_url,
    )


def _to_json(rec: CanonicalRecord) -> dict:
    return {
        "record_id": rec.record_id,
        "source": rec.source,
        "oai_identifier": rec.oai_identifier,
        "title": rec.title,
        "creators": [
            {"family": n.family, "given": n.given, "raw": n.raw} for n in rec.creators
        ],
        "publication": rec.publication,
        "volume": rec.volume,
        "issue": rec.issue,
        "pagerange": rec.pagerange,
        "date": rec.date,
        "publisher": rec.publisher,
        "official_url": rec.official_url,
        "full_text_url": rec.full_text_url,
        "msc_primary": rec.msc_primary,
        "msc_secondary": list(rec.msc_secondary),
        "mr_number": rec.mr_number,
        "related_urls": [{"url": r.url, "type": r.type} for r in rec.related_urls],
        "refereed": rec.refereed,
        "language": rec.language,
    }


def _from_json(data: dict) -> CanonicalRecord:
    return CanonicalRecord(
        record_id=data["record_id"],
        source=data["source"],
        oai_identifier=data["oai_identifier"],
        title=data["title"],
        creators=[
            NameParts(family=n["family"], given=n.get("given", ""), raw=n.get("raw", ""))
            for n in data.get("creators", [])
        ],
        publication=data.get("publication", ""),
        volume=data.get("volume", ""),
        issue=data.get("issue", ""),
        pagerange=data.get("pagerange", ""),
        date=data.get("date", ""),
        publisher=data.get("publisher", ""),
        official_url=data.get("official_url", ""),
        full_text_url=data.get("full_text_url", ""),
        msc_primary=data.get("msc_primary", ""),
        msc_secondary=list(data.get("msc_secondary", [])),
        mr_number=data.get("mr_number"),
        related_urls=[
            RelatedUrl(url=r["url"], type=r.get("type", "")) for r in data.get("related_urls", [])
        ],
        refereed=data.get("refereed", True),
        language=data.get("language", ""),
    )


def store_records(records: Iterable[CanonicalRecord], path, append: bool = False) -> int:
    """Write records to a UTF-8 JSON-lines store; returns the count written."""
    records = list(records)
    mode = "a" if append else "w"
    with open(path, mode, encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(_to_json(rec), ensure_ascii=False) + "\n")
    return len(records)


def load_records(path, lenient: bool = False) -> list[CanonicalRecord]:
    """Load a record store, deduplicating by record_id (later lines win).

    In lenient mode malformed lines are skipped with a warning instead of
    aborting the load.
    """
    by_id: dict[str, CanonicalRecord] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                rec = _from_json(json.loads(line))
            except (json.JSONDecodeError, KeyError, TypeError, ValueError, RecordError) as exc:
                if lenient:
                    log.warning("skipping malformed record at %s:%d: %s", path, lineno, exc)
                    continue
                raise StoreError(f"{path}:{lineno}: {exc}") from exc
            by_id[rec.record_id] = rec
    return list(by_id.values())
