"""Namespace-agnostic helpers for element-tree access.

Harvested XML arrives with and without namespaces (and with varying
prefixes), so all structural matching is done on local names.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET


def local_name(tag) -> str:
    if not isinstance(tag, str):
        return ""  # comments / processing instructions
    return tag.rsplit("}", 1)[-1]


def children(elem: ET.Element, name: str) -> list[ET.Element]:
    """Direct children whose local name is ``name``."""
    return [child for child in elem if local_name(child.tag) == name]


def first_child(elem: ET.Element, name: str) -> ET.Element | None:
    for child in elem:
        if local_name(child.tag) == name:
            return child
    return None


def descendants(elem: ET.Element, name: str) -> list[ET.Element]:
    """All descendants (including ``elem`` itself) with local name ``name``."""
    return [node for node in elem.iter() if local_name(node.tag) == name]


def collapse_ws(text: str | None) -> str:
    """Trim and collapse runs of whitespace to single spaces."""
    if not text:
        return ""
    return " ".join(text.split())
