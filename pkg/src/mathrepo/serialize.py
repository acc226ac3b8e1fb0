"""Exchange-format serializers: EPrints XML, ORE Atom entries, METS packages.

All serializers are deterministic (same record, byte-identical output) and
emit well-formed UTF-8 XML.
"""

from __future__ import annotations

import urllib.parse
import xml.etree.ElementTree as ET
from dataclasses import dataclass

import requests

from .errors import MathRepoError
from .msc import msc_top_level
from .records import CanonicalRecord, NameParts, RelatedUrl, make_record_id
from .xmlutil import first_child, descendants, local_name

EPRINTS_NS = "http://eprints.org/ep2/data/2.0"
ATOM_NS = "http://www.w3.org/2005/Atom"
METS_NS = "http://www.loc.gov/METS/"
DC_NS = "http://purl.org/dc/elements/1.1/"
XLINK_NS = "http://www.w3.org/1999/xlink"
ORE_AGGREGATES_REL = "http://www.openarchives.org/ore/terms/aggregates"

ET.register_namespace("atom", ATOM_NS)
ET.register_namespace("mets", METS_NS)
ET.register_namespace("dc", DC_NS)
ET.register_namespace("xlink", XLINK_NS)


class SerializationError(MathRepoError):
    """Record or aggregation cannot be rendered in the requested format."""


def _document(root: ET.Element) -> str:
    ET.indent(root, space="  ")
    return '<?xml version="1.0" encoding="utf-8" ?>\n' + ET.tostring(root, encoding="unicode")


# ---------------------------------------------------------------------------
# EPrints XML

def _ep(parent: ET.Element, tag: str, text: str | None = None) -> ET.Element:
    # plain tags; the namespace is declared as a literal xmlns attribute on
    # the eprint element so the document matches the platform layout
    elem = ET.SubElement(parent, tag)
    if text is not None:
        elem.text = text
    return elem


def _subject_items(rec: CanonicalRecord) -> list[str]:
    # Presentation-only: collective "-xx" forms of the record's top-level
    # fields, plus the library class for mathematics.
    tops: list[str] = []
    for code in (rec.msc_primary, *rec.msc_secondary):
        if not code:
            continue
        top = msc_top_level(code) + "-xx"
        if top not in tops:
            tops.append(top)
    if tops:
        tops.append("QA")
    return tops


def to_eprints_xml(rec: CanonicalRecord) -> str:
    """Render a record as an EPrints XML import document.

    Emits the platform boilerplate plus the bibliographic and enrichment
    elements; fields absent from the record are omitted. Provenance fields
    (source, oai_identifier, full_text_url, language) ride along as custom
    elements so the document round-trips.
    """
    root = ET.Element("eprints")
    ep = ET.SubElement(root, "eprint", {"xmlns": EPRINTS_NS})
    _ep(ep, "rev_number", "1")
    _ep(ep, "eprint_status", "archive")
    _ep(ep, "userid", "1")
    _ep(ep, "metadata_visibility", "show")
    _ep(ep, "type", "article")
    _ep(ep, "ispublished", "pub")
    subjects = _subject_items(rec)
    if subjects:
        container = _ep(ep, "subjects")
        for code in subjects:
            _ep(container, "item", code)
    _ep(ep, "refereed", "TRUE" if rec.refereed else "FALSE")
    _ep(ep, "full_text_status", "public")
    _ep(ep, "date_type", "published")
    if rec.publication:
        _ep(ep, "publication", rec.publication)
    _ep(ep, "title", rec.title)
    if rec.creators:
        creators = _ep(ep, "creators_name")
        for name in rec.creators:
            item = _ep(creators, "item")
            _ep(item, "family", name.family)
            _ep(item, "given", name.given)
    _ep(ep, "official_url", rec.official_url)
    if rec.pagerange:
        _ep(ep, "pagerange", rec.pagerange)
    if rec.volume:
        _ep(ep, "volume", rec.volume)
    if rec.issue:
        _ep(ep, "number", rec.issue)
    if rec.date:
        _ep(ep, "date", rec.date)
    if rec.publisher:
        _ep(ep, "publisher", rec.publisher)
    if rec.msc_primary:
        _ep(ep, "msc_p", rec.msc_primary)
    if rec.msc_secondary:
        msc = _ep(ep, "msc")
        for code in rec.msc_secondary:
            _ep(msc, "item", code)
    if rec.mr_number is not None:
        _ep(ep, "mr", str(rec.mr_number))
    if rec.related_urls:
        related = _ep(ep, "related_url")
        for ru in rec.related_urls:
            item = _ep(related, "item")
            _ep(item, "url", ru.url)
            _ep(item, "type", ru.type)
    if rec.full_text_url:
        _ep(ep, "full_text_url", rec.full_text_url)
    if rec.language:
        _ep(ep, "language", rec.language)
    if rec.source:
        _ep(ep, "source", rec.source)
    if rec.oai_identifier:
        _ep(ep, "oai_identifier", rec.oai_identifier)
    return _document(root)


def _text_of(parent: ET.Element, tag: str) -> str:
    elem = first_child(parent, tag)
    return (elem.text or "").strip() if elem is not None else ""


def from_eprints_xml(data) -> CanonicalRecord:
    """Read an EPrints XML document back into a CanonicalRecord.

    Platform boilerplate and the derived subjects block are ignored;
    missing provenance elements default to empty strings.
    """
    try:
        root = ET.fromstring(data)
    except ET.ParseError as exc:
        raise SerializationError(f"malformed EPrints XML: {exc}") from exc
    if local_name(root.tag) == "eprint":
        ep = root
    else:
        ep = next(iter(descendants(root, "eprint")), None)
    if ep is None:
        raise SerializationError("document has no eprint element")

    title = _text_of(ep, "title")
    if not title:
        raise SerializationError("eprint element has no title")
    creators: list[NameParts] = []
    creators_container = first_child(ep, "creators_name")
    if creators_container is not None:
        for item in creators_container:
            family = _text_of(item, "family")
            given = _text_of(item, "given")
            if family or given:
                creators.append(NameParts(family=family, given=given))
    msc_secondary: list[str] = []
    msc_container = first_child(ep, "msc")
    if msc_container is not None:
        msc_secondary = [(item.text or "").strip() for item in msc_container if (item.text or "").strip()]
    related: list[RelatedUrl] = []
    related_container = first_child(ep, "related_url")
    if related_container is not None:
        for item in related_container:
            url = _text_of(item, "url")
            if url:
                related.append(RelatedUrl(url=url, type=_text_of(item, "type")))
    mr_text = _text_of(ep, "mr")
    refereed_text = _text_of(ep, "refereed")
    source = _text_of(ep, "source")
    oai_identifier = _text_of(ep, "oai_identifier")
    return CanonicalRecord(
        record_id=make_record_id(source, oai_identifier),
        source=source,
        oai_identifier=oai_identifier,
        title=title,
        creators=creators,
        publication=_text_of(ep, "publication"),
        volume=_text_of(ep, "volume"),
        issue=_text_of(ep, "number"),
        pagerange=_text_of(ep, "pagerange"),
        date=_text_of(ep, "date"),
        publisher=_text_of(ep, "publisher"),
        official_url=_text_of(ep, "official_url"),
        full_text_url=_text_of(ep, "full_text_url"),
        msc_primary=_text_of(ep, "msc_p"),
        msc_secondary=msc_secondary,
        mr_number=int(mr_text) if mr_text else None,
        related_urls=related,
        refereed=refereed_text != "FALSE",
        language=_text_of(ep, "language"),
    )


# ---------------------------------------------------------------------------
# OAI-ORE Atom serialization

def _is_absolute_uri(value: str) -> bool:
    return bool(urllib.parse.urlparse(value).scheme)


@dataclass(frozen=True)
class AggregatedResource:
    href: str
    title: str


@dataclass(frozen=True)
class Aggregation:
    """A resource map aggregating web resources (e.g. the article's official
    location and its portal entry)."""

    resource_map_uri: str
    aggregated: tuple[AggregatedResource, ...]
    created: str = "1970-01-01T00:00:00Z"
    modified: str = "1970-01-01T00:00:00Z"

    def __post_init__(self):
        object.__setattr__(self, "aggregated", tuple(self.aggregated))
        if not self.aggregated:
            raise SerializationError("aggregation must contain at least one resource")
        if not _is_absolute_uri(self.resource_map_uri):
            raise SerializationError(f"resource map URI must be absolute: {self.resource_map_uri!r}")
        seen = set()
        for res in self.aggregated:
            if not _is_absolute_uri(res.href):
                raise SerializationError(f"aggregated href must be absolute: {res.href!r}")
            if res.href in seen:
                raise SerializationError(f"duplicate aggregated href: {res.href!r}")
            seen.add(res.href)


def to_ore_atom(agg: Aggregation) -> str:
    """Render an aggregation as an Atom entry with one ore:aggregates link
    per resource."""
    entry = ET.Element(f"{{{ATOM_NS}}}entry")
    ET.SubElement(entry, f"{{{ATOM_NS}}}id").text = agg.resource_map_uri
    ET.SubElement(entry, f"{{{ATOM_NS}}}title").text = agg.resource_map_uri
    ET.SubElement(entry, f"{{{ATOM_NS}}}published").text = agg.created
    ET.SubElement(entry, f"{{{ATOM_NS}}}updated").text = agg.modified
    entry.append(ET.Comment(" Aggregated Resources "))
    for res in agg.aggregated:
        link = ET.SubElement(entry, f"{{{ATOM_NS}}}link")
        link.set("href", res.href)
        link.set("title", res.title)
        link.set("rel", ORE_AGGREGATES_REL)
    return _document(entry)


# ---------------------------------------------------------------------------
# METS

def _mets(parent: ET.Element, tag: str, attrib: dict | None = None) -> ET.Element:
    return ET.SubElement(parent, f"{{{METS_NS}}}{tag}", attrib or {})


def _dc(parent: ET.Element, tag: str, text: str) -> None:
    ET.SubElement(parent, f"{{{DC_NS}}}{tag}").text = text


def _citation_line(rec: CanonicalRecord) -> str:
    out = rec.publication
    if rec.volume:
        out += f" {rec.volume}"
    if rec.year is not None:
        out += f" ({rec.year})"
    if rec.pagerange:
        out += f", {rec.pagerange}"
    return out


def to_mets(rec: CanonicalRecord) -> str:
    """Render a record as a minimal METS package: header, Dublin Core
    descriptive section, file section (empty without a full-text URL), and
    a single-division structural map."""
    if not rec.official_url:
        raise SerializationError("METS export requires official_url")
    mets = ET.Element(f"{{{METS_NS}}}mets", {"OBJID": rec.record_id, "LABEL": rec.title})
    header = _mets(mets, "metsHdr")
    agent = _mets(header, "agent", {"ROLE": "CREATOR", "TYPE": "OTHER", "OTHERTYPE": "SOFTWARE"})
    _mets(agent, "name").text = "mathrepo"
    dmd = _mets(mets, "dmdSec", {"ID": "DMD1"})
    wrap = _mets(dmd, "mdWrap", {"MDTYPE": "DC"})
    xml_data = _mets(wrap, "xmlData")
    _dc(xml_data, "title", rec.title)
    for name in rec.creators:
        _dc(xml_data, "creator", name.display())
    if rec.publisher:
        _dc(xml_data, "publisher", rec.publisher)
    if rec.date:
        _dc(xml_data, "date", rec.date)
    if rec.publication:
        _dc(xml_data, "source", _citation_line(rec))
    _dc(xml_data, "identifier", rec.official_url)
    if rec.language:
        _dc(xml_data, "language", rec.language)
    file_sec = _mets(mets, "fileSec")
    if rec.full_text_url:
        group = _mets(file_sec, "fileGrp", {"USE": "public"})
        file_elem = _mets(group, "file", {"ID": "FILE1", "MIMETYPE": "application/pdf"})
        _mets(file_elem, "FLocat", {"LOCTYPE": "URL", f"{{{XLINK_NS}}}href": rec.full_text_url})
    struct = _mets(mets, "structMap", {"TYPE": "PHYSICAL"})
    div = _mets(struct, "div", {"TYPE": "article", "DMDID": "DMD1"})
    if rec.full_text_url:
        _mets(div, "fptr", {"FILEID": "FILE1"})
    return _document(mets)


def post_package(package: str | bytes, deposit_url: str, timeout: float = 30.0) -> int:
    """Push a serialized package to a deposit URL with a single HTTP POST.

    Returns the response status code; raises on transport or HTTP errors.
    """
    data = package.encode("utf-8") if isinstance(package, str) else package
    response = requests.post(
        deposit_url,
        data=data,
        headers={"Content-Type": "text/xml; charset=utf-8"},
        timeout=timeout,
    )
    response.raise_for_status()
    return response.status_code
