"""Metadata dialect parsers: oai_dc, junii2, and free-text citation strings."""

from __future__ import annotations

import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field

from .errors import MathRepoError
from .xmlutil import collapse_ws, local_name


class MetadataError(MathRepoError):
    """Payload violates the dialect contract (missing title, bad pages, ...)."""


@dataclass
class DcRecord:
    """Simple Dublin Core payload as delivered inside oai_dc metadata."""

    title: str
    creators: list[str] = field(default_factory=list)
    subjects: list[str] = field(default_factory=list)
    publisher: str = ""
    date: str = ""
    type: str = ""
    format: str = ""
    identifiers: list[str] = field(default_factory=list)
    language: str = ""
    rights: str = ""


@dataclass
class Junii2Record:
    """junii2 payload; every bibliographic element is a distinct field."""

    title: str
    uri: str
    creators: list[str] = field(default_factory=list)
    ndc: str = ""
    publisher: str = ""
    nii_type: str = ""
    formats: list[str] = field(default_factory=list)
    full_text_url: str = ""
    issn: str = ""
    ncid: str = ""
    jtitle: str = ""
    volume: str = ""
    issue: str = ""
    spage: str = ""
    epage: str = ""
    date_of_issued: str = ""


@dataclass
class Citation:
    """Best-effort structure extracted from a free-text citation string."""

    raw: str
    journal_title: str = ""
    volume: str = ""
    issue: str = ""
    year: int | None = None
    spage: int | None = None
    epage: int | None = None


def _as_element(payload) -> ET.Element:
    if isinstance(payload, ET.Element):
        return payload
    if isinstance(payload, (str, bytes)):
        try:
            return ET.fromstring(payload)
        except ET.ParseError as exc:
            raise MetadataError(f"malformed metadata payload: {exc}") from exc
    raise TypeError(f"payload must be XML text or an Element, not {type(payload)!r}")


_DC_LISTS = {"creator": "creators", "subject": "subjects", "identifier": "identifiers"}
_DC_SCALARS = ("title", "publisher", "date", "type", "format", "language", "rights")


def parse_oai_dc(payload) -> DcRecord:
    """Map dc:* children onto a DcRecord.

    Repeated list elements accumulate in source order; repeated scalar
    elements keep the first occurrence. Text is whitespace-collapsed.
    """
    root = _as_element(payload)
    lists: dict[str, list[str]] = {name: [] for name in _DC_LISTS.values()}
    scalars: dict[str, str] = {}
    for node in root.iter():
        name = local_name(node.tag)
        text = collapse_ws(node.text)
        if not text:
            continue
        if name in _DC_LISTS:
            lists[_DC_LISTS[name]].append(text)
        elif name in _DC_SCALARS and name not in scalars:
            scalars[name] = text
    if "title" not in scalars:
        raise MetadataError("oai_dc payload has no dc:title")
    if not lists["identifiers"]:
        raise MetadataError("oai_dc payload has no dc:identifier")
    return DcRecord(
        title=scalars["title"],
        creators=lists["creators"],
        subjects=lists["subjects"],
        publisher=scalars.get("publisher", ""),
        date=scalars.get("date", ""),
        type=scalars.get("type", ""),
        format=scalars.get("format", ""),
        identifiers=lists["identifiers"],
        language=scalars.get("language", ""),
        rights=scalars.get("rights", ""),
    )


# junii2 element name -> record field, scalars only
_JUNII2_SCALARS = {
    "title": "title",
    "NDC": "ndc",
    "publisher": "publisher",
    "NIItype": "nii_type",
    "URI": "uri",
    "fullTextURL": "full_text_url",
    "issn": "issn",
    "NCID": "ncid",
    "jtitle": "jtitle",
    "volume": "volume",
    "issue": "issue",
    "spage": "spage",
    "epage": "epage",
    "dateofissued": "date_of_issued",
}
_JUNII2_NUMERIC = ("volume", "issue", "spage", "epage")


def parse_junii2(payload) -> Junii2Record:
    """Map junii2 children onto a Junii2Record and validate numeric fields."""
    root = _as_element(payload)
    creators: list[str] = []
    formats: list[str] = []
    scalars: dict[str, str] = {}
    for node in root.iter():
        name = local_name(node.tag)
        text = collapse_ws(node.text)
        if not text:
            continue
        if name == "creator":
            creators.append(text)
        elif name == "format":
            formats.append(text)
        elif name in _JUNII2_SCALARS and _JUNII2_SCALARS[name] not in scalars:
            scalars[_JUNII2_SCALARS[name]] = text
    if "title" not in scalars:
        raise MetadataError("junii2 payload has no title")
    if "uri" not in scalars:
        raise MetadataError("junii2 payload has no URI")
    for key in _JUNII2_NUMERIC:
        value = scalars.get(key, "")
        if value and not value.isdigit():
            raise MetadataError(f"junii2 {key} must be digits, got {value!r}")
    spage, epage = scalars.get("spage", ""), scalars.get("epage", "")
    if spage and epage and int(spage) > int(epage):
        raise MetadataError(f"junii2 page range inverted: spage {spage} > epage {epage}")
    issn = scalars.get("issn", "")
    if issn and len(issn.replace("-", "")) != 8:
        raise MetadataError(f"junii2 ISSN must have 8 characters: {issn!r}")
    return Junii2Record(
        title=scalars["title"],
        uri=scalars["uri"],
        creators=creators,
        ndc=scalars.get("ndc", ""),
        publisher=scalars.get("publisher", ""),
        nii_type=scalars.get("nii_type", ""),
        formats=formats,
        full_text_url=scalars.get("full_text_url", ""),
        issn=issn,
        ncid=scalars.get("ncid", ""),
        jtitle=scalars.get("jtitle", ""),
        volume=scalars.get("volume", ""),
        issue=scalars.get("issue", ""),
        spage=spage,
        epage=epage,
        date_of_issued=scalars.get("date_of_issued", ""),
    )


# Layered citation grammar, applied back to front:
# trailing page range, parenthesized year, issue marker, volume, journal.
_PAGE_RANGE_RE = re.compile(r"[\s.,;:]*(?:pp?\.?\s*)?(\d+)\s*[-–]\s*(\d+)\s*\.?\s*$")
_YEAR_RE = re.compile(r"\((\d{4})\)")
_ISSUE_RE = re.compile(r"(?:\bno\.?|\bissue\b)\s*(\d+)", re.IGNORECASE)
_STANDALONE_INT_RE = re.compile(r"(?<![\w.])(\d+)(?![\w.])")


def parse_citation_string(s: str) -> Citation:
    """Extract journal/volume/issue/year/pages from a citation string.

    Total on non-empty input: unidentifiable fields stay empty, and a
    string with no recognizable structure comes back as journal_title.
    """
    if not s or not s.strip():
        raise ValueError("citation string must be non-empty")
    work = s.strip()
    spage = epage = None
    pages_found = False
    match = _PAGE_RANGE_RE.search(work)
    if match:
        spage, epage = int(match.group(1)), int(match.group(2))
        pages_found = True
        work = work[: match.start()]

    year = None
    year_span = None
    for ym in _YEAR_RE.finditer(work):
        value = int(ym.group(1))
        if 1600 <= value <= 2100:
            year, year_span = value, ym.span()

    issue = ""
    issue_span = None
    im = _ISSUE_RE.search(work)
    if im:
        issue, issue_span = im.group(1), im.span()

    # Volume needs an anchor (year or page range) so that bare trailing
    # numbers in unstructured strings are not misread as volumes.
    volume = ""
    volume_span = None
    if year_span is not None or pages_found:
        limit = year_span[0] if year_span is not None else len(work)
        for vm in _STANDALONE_INT_RE.finditer(work, 0, limit):
            if issue_span is not None and issue_span[0] <= vm.start() < issue_span[1]:
                continue
            volume, volume_span = vm.group(1), vm.span()

    if volume_span is not None:
        prefix = work[: volume_span[0]]
    elif year_span is not None:
        prefix = work[: year_span[0]]
    else:
        prefix = work
    journal = prefix.strip().rstrip(",;:").rstrip()
    if not journal and year is None and not volume and not pages_found:
        journal = work
    return Citation(
        raw=s,
        journal_title=journal,
        volume=volume,
        issue=issue,
        year=year,
        spage=spage,
        epage=epage,
    )


def format_citation(c: Citation) -> str:
    """Canonical rendering "journal volume (year), spage-epage"."""
    out = c.journal_title
    if c.volume:
        out = f"{out} {c.volume}" if out else c.volume
    if c.year is not None:
        out = f"{out} ({c.year})" if out else f"({c.year})"
    if c.spage is not None and c.epage is not None:
        out = f"{out}, {c.spage}-{c.epage}" if out else f"{c.spage}-{c.epage}"
    return out
