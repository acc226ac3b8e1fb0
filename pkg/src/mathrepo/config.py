"""Pipeline configuration: endpoint roster and file locations (JSON)."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import MathRepoError
from .oai_client import EndpointConfig


class ConfigError(MathRepoError):
    """Configuration file missing, malformed, or inconsistent."""


@dataclass
class PipelineConfig:
    endpoints: list[EndpointConfig] = field(default_factory=list)
    store_path: str = "records.jsonl"
    spool_dir: str = "spool"
    mr_table_path: str = ""
    totals_path: str = ""
    output_dir: str = "out"


def load_config(path) -> PipelineConfig:
    """Load a JSON pipeline configuration.

    Expected shape::

        {
          "store": "data/records.jsonl",
          "spool_dir": "data/spool",
          "mr_table": "data/mr_table.tsv",
          "totals": "data/totals.tsv",
          "output_dir": "out",
          "endpoints": [
            {"name": "local", "base_url": "http://127.0.0.1:8901/oai",
             "metadata_prefix": "oai_dc", "set_spec": null,
             "from_date": null, "until_date": null}
          ]
        }
    """
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"config {path} must be a JSON object")
    endpoints = []
    for i, entry in enumerate(data.get("endpoints", [])):
        try:
            endpoints.append(
                EndpointConfig(
                    name=entry["name"],
                    base_url=entry["base_url"],
                    metadata_prefix=entry["metadata_prefix"],
                    set_spec=entry.get("set_spec"),
                    from_date=entry.get("from_date"),
                    until_date=entry.get("until_date"),
                )
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"config {path}: endpoint #{i}: {exc}") from exc
    return PipelineConfig(
        endpoints=endpoints,
        store_path=data.get("store", "records.jsonl"),
        spool_dir=data.get("spool_dir", "spool"),
        mr_table_path=data.get("mr_table", ""),
        totals_path=data.get("totals", ""),
        output_dir=data.get("output_dir", "out"),
    )
