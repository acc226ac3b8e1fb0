"""OAI-PMH harvesting client: ListRecords paging and envelope handling."""

from __future__ import annotations

import time
import urllib.parse
import xml.etree.ElementTree as ET
from dataclasses import dataclass
from datetime import datetime, timezone
from xml.sax.saxutils import escape

import requests

from .errors import MathRepoError
from .xmlutil import children, descendants, first_child, local_name

SUPPORTED_PREFIXES = ("oai_dc", "junii2")

OAI_NS = "http://www.openarchives.org/OAI/2.0/"

# keep extracted payload subtrees readable when re-serialized
ET.register_namespace("oai_dc", "http://www.openarchives.org/OAI/2.0/oai_dc/")
ET.register_namespace("junii2", "http://ju.nii.ac.jp/junii2")


class HarvestError(MathRepoError):
    """Transport-level failure while talking to an endpoint."""


class OaiProtocolError(MathRepoError):
    """The endpoint answered with an OAI-PMH error condition."""

    def __init__(self, code: str, message: str = ""):
        super().__init__(f"{code}: {message}" if message else code)
        self.code = code


class EnvelopeError(MathRepoError):
    """Malformed or incomplete OAI-PMH response envelope."""


@dataclass(frozen=True)
class EndpointConfig:
    """One harvested repository: where it lives and how to ask it."""

    name: str
    base_url: str
    metadata_prefix: str
    set_spec: str | None = None
    from_date: str | None = None
    until_date: str | None = None

    def __post_init__(self):
        if self.metadata_prefix not in SUPPORTED_PREFIXES:
            raise ValueError(
                f"unsupported metadata prefix {self.metadata_prefix!r}; "
                f"expected one of {SUPPORTED_PREFIXES}"
            )
        parsed = urllib.parse.urlparse(self.base_url)
        if parsed.scheme not in ("http", "https") or not parsed.netloc:
            raise ValueError(f"base_url must be an absolute HTTP(S) URL: {self.base_url!r}")


@dataclass(frozen=True)
class OaiRecord:
    """Raw harvested envelope entry.

    ``payload`` holds the serialized metadata subtree (the first element
    child of ``<metadata>``); immutable and safe to share across threads.
    """

    identifier: str
    datestamp: str
    set_specs: tuple[str, ...] = ()
    payload: str | None = None
    deleted: bool = False

    def __post_init__(self):
        if not self.identifier:
            raise ValueError("OAI record identifier must be non-empty")
        if self.deleted and self.payload is not None:
            raise ValueError("deleted record cannot carry a metadata payload")
        parse_datestamp(self.datestamp)


def parse_datestamp(value: str) -> datetime:
    """Parse an OAI datestamp, either date-only or a full UTC timestamp."""
    for fmt in ("%Y-%m-%d", "%Y-%m-%dT%H:%M:%SZ"):
        try:
            return datetime.strptime(value, fmt).replace(tzinfo=timezone.utc)
        except ValueError:
            continue
    raise ValueError(f"bad OAI datestamp: {value!r}")


def _parse_xml(data) -> ET.Element:
    try:
        return ET.fromstring(data)
    except ET.ParseError as exc:
        raise EnvelopeError(f"malformed envelope XML: {exc}") from exc


def _record_from_element(elem: ET.Element) -> OaiRecord:
    header = first_child(elem, "header")
    if header is None:
        raise EnvelopeError("record element without header")
    ident = first_child(header, "identifier")
    identifier = (ident.text or "").strip() if ident is not None else ""
    if not identifier:
        raise EnvelopeError("record header missing identifier")
    stamp = first_child(header, "datestamp")
    datestamp = (stamp.text or "").strip() if stamp is not None else ""
    set_specs = tuple(
        (spec.text or "").strip() for spec in children(header, "setSpec") if (spec.text or "").strip()
    )
    deleted = header.get("status") == "deleted"
    payload = None
    if not deleted:
        metadata = first_child(elem, "metadata")
        if metadata is not None:
            inner = next(iter(metadata), None)
            if inner is not None:
                payload = ET.tostring(inner, encoding="unicode")
    try:
        return OaiRecord(
            identifier=identifier,
            datestamp=datestamp,
            set_specs=set_specs,
            payload=payload,
            deleted=deleted,
        )
    except ValueError as exc:
        raise EnvelopeError(str(exc)) from exc


def parse_oai_envelope(data) -> list[OaiRecord]:
    """Extract every ``<record>`` from an OAI-PMH response or fixture file.

    Accepts a full ListRecords envelope, a bare record element, or any
    wrapper containing record elements; namespaces are ignored.
    """
    root = _parse_xml(data)
    if local_name(root.tag) == "record":
        elems = [root]
    else:
        elems = descendants(root, "record")
    return [_record_from_element(elem) for elem in elems]


def _serialize_record(rec: OaiRecord) -> str:
    status = ' status="deleted"' if rec.deleted else ""
    parts = [
        f"<record><header{status}>",
        f"<identifier>{escape(rec.identifier)}</identifier>",
        f"<datestamp>{escape(rec.datestamp)}</datestamp>",
    ]
    parts.extend(f"<setSpec>{escape(spec)}</setSpec>" for spec in rec.set_specs)
    parts.append("</header>")
    if rec.payload is not None:
        parts.append(f"<metadata>{rec.payload}</metadata>")
    parts.append("</record>")
    return "".join(parts)


def serialize_envelope(records, resumption_token: str | None = None, response_date: str | None = None) -> str:
    """Render records as a ListRecords response envelope.

    ``response_date=None`` omits the element so spooled envelopes stay
    byte-identical across reruns.
    """
    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<OAI-PMH xmlns="{OAI_NS}">',
    ]
    if response_date:
        parts.append(f"<responseDate>{escape(response_date)}</responseDate>")
    parts.append("<ListRecords>")
    parts.extend(_serialize_record(rec) for rec in records)
    if resumption_token:
        parts.append(f"<resumptionToken>{escape(resumption_token)}</resumptionToken>")
    parts.append("</ListRecords></OAI-PMH>")
    return "".join(parts)


class HttpTransport:
    """Thin HTTP GET wrapper, one instance per harvested endpoint.

    ``delay`` is the politeness pause between consecutive requests; leave
    it at 0 for local fixture endpoints.
    """

    def __init__(self, timeout: float = 30.0, delay: float = 0.0, session=None):
        self.timeout = timeout
        self.delay = delay
        self._session = session or requests.Session()
        self._fetched = False

    def get(self, url: str, params: dict) -> bytes:
        if self._fetched and self.delay > 0:
            time.sleep(self.delay)
        self._fetched = True
        response = self._session.get(url, params=params, timeout=self.timeout)
        response.raise_for_status()
        return response.content


def list_records(endpoint: EndpointConfig, transport: HttpTransport | None = None, retries: int = 2) -> list[OaiRecord]:
    """Harvest every record the endpoint exposes, following resumption tokens.

    Duplicate identifiers across pages are deduplicated keeping the latest
    datestamp (the first occurrence keeps its position). ``noRecordsMatch``
    yields an empty list; a rejected resumption token triggers one full
    re-harvest before giving up.
    """
    transport = transport or HttpTransport()
    try:
        return _harvest_once(endpoint, transport, retries)
    except OaiProtocolError as exc:
        if exc.code == "badResumptionToken":
            return _harvest_once(endpoint, transport, retries)
        raise


def _harvest_once(endpoint: EndpointConfig, transport, retries: int) -> list[OaiRecord]:
    merged: dict[str, OaiRecord] = {}
    token: str | None = None
    page = 1
    while True:
        params = {"verb": "ListRecords"}
        if token is None:
            params["metadataPrefix"] = endpoint.metadata_prefix
            if endpoint.set_spec:
                params["set"] = endpoint.set_spec
            if endpoint.from_date:
                params["from"] = endpoint.from_date
            if endpoint.until_date:
                params["until"] = endpoint.until_date
        else:
            params["resumptionToken"] = token
        data = _fetch(endpoint, transport, params, page, retries)
        root = _parse_xml(data)
        error = next(iter(descendants(root, "error")), None)
        if error is not None:
            code = error.get("code", "")
            if code == "noRecordsMatch":
                return list(merged.values())
            raise OaiProtocolError(code, (error.text or "").strip())
        for rec in parse_oai_envelope(data):
            previous = merged.get(rec.identifier)
            if previous is None or parse_datestamp(rec.datestamp) >= parse_datestamp(previous.datestamp):
                merged[rec.identifier] = rec
        token_elem = next(iter(descendants(root, "resumptionToken")), None)
        token = (token_elem.text or "").strip() if token_elem is not None else ""
        if not token:
            return list(merged.values())
        page += 1


def _fetch(endpoint, transport, params, page, retries) -> bytes:
    last_error = None
    for _ in range(retries + 1):
        try:
            return transport.get(endpoint.base_url, params)
        except (requests.RequestException, OSError) as exc:
            last_error = exc
    raise HarvestError(
        f"endpoint {endpoint.name!r} page {page}: {last_error}"
    ) from last_error
