"""Local OAI-PMH endpoint serving fixture record files, with paging.

Stands in for live repositories so harvests can be tested hermetically.
Fixture files are served in lexicographic filename order.
"""

from __future__ import annotations

import threading
from datetime import datetime, timezone
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, urlparse
from xml.sax.saxutils import escape

from .oai_client import OaiRecord, parse_oai_envelope, serialize_envelope

_TOKEN_SEP = ";"


def _error_body(code: str, message: str) -> str:
    return (
        '<?xml version="1.0" encoding="UTF-8"?>'
        '<OAI-PMH xmlns="http://www.openarchives.org/OAI/2.0/">'
        f'<error code="{code}">{escape(message)}</error></OAI-PMH>'
    )


class FixtureServer:
    """ListRecords over a directory of record XML files."""

    def __init__(self, directory, page_size: int = 100, port: int = 0):
        if page_size < 1:
            raise ValueError("page_size must be >= 1")
        self.directory = Path(directory)
        self.page_size = page_size
        self.records: list[OaiRecord] = []
        for path in sorted(self.directory.glob("*.xml")):
            self.records.extend(parse_oai_envelope(path.read_bytes()))
        state = self

        class Handler(BaseHTTPRequestHandler):
            def do_GET(self):
                query = {k: v[0] for k, v in parse_qs(urlparse(self.path).query).items()}
                body = state.respond(query).encode("utf-8")
                self.send_response(200)
                self.send_header("Content-Type", "text/xml; charset=utf-8")
                self.send_header("Content-Length", str(len(body)))
                self.end_headers()
                self.wfile.write(body)

            def log_message(self, *args):  # keep test output quiet
                pass

        self._server = ThreadingHTTPServer(("127.0.0.1", port), Handler)
        self.port = self._server.server_address[1]
        self.base_url = f"http://127.0.0.1:{self.port}/oai"
        self._thread = threading.Thread(target=self._server.serve_forever, daemon=True)
        self._thread.start()

    def respond(self, params: dict) -> str:
        if params.get("verb") != "ListRecords":
            return _error_body("badVerb", "only ListRecords is supported")
        token = params.get("resumptionToken")
        if token:
            parts = token.split(_TOKEN_SEP)
            if len(parts) != 4 or not parts[0].isdigit():
                return _error_body("badResumptionToken", f"unknown token {token!r}")
            offset = int(parts[0])
            set_spec, from_date, until_date = parts[1], parts[2], parts[3]
        else:
            if "metadataPrefix" not in params:
                return _error_body("badArgument", "metadataPrefix is required")
            offset = 0
            set_spec = params.get("set", "")
            from_date = params.get("from", "")
            until_date = params.get("until", "")
        selection = self._select(set_spec, from_date, until_date)
        if not selection:
            return _error_body("noRecordsMatch", "no fixture records match the request")
        page = selection[offset : offset + self.page_size]
        next_offset = offset + self.page_size
        token_out = None
        if next_offset < len(selection):
            token_out = _TOKEN_SEP.join([str(next_offset), set_spec, from_date, until_date])
        stamp = datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")
        return serialize_envelope(page, resumption_token=token_out, response_date=stamp)

    def _select(self, set_spec: str, from_date: str, until_date: str) -> list[OaiRecord]:
        records = self.records
        if set_spec:
            records = [r for r in records if set_spec in r.set_specs]
        if from_date:
            records = [r for r in records if r.datestamp[:10] >= from_date[:10]]
        if until_date:
            records = [r for r in records if r.datestamp[:10] <= until_date[:10]]
        return records

    def wait(self, timeout: float | None = None):
        """Block until the server thread exits (or the timeout elapses)."""
        self._thread.join(timeout)

    def close(self):
        self._server.shutdown()
        self._server.server_close()
        self._thread.join(timeout=5)

    def __enter__(self):
        return self

    def __exit__(self, *exc_info):
        self.close()


def serve_fixtures(directory, page_size: int = 100, port: int = 0) -> FixtureServer:
    """Start a fixture endpoint and return its handle (use as context manager)."""
    return FixtureServer(directory, page_size=page_size, port=port)
