"""Field-activity statistics: share table, classification co-occurrence
graphs, hub/authority scoring, and sliding-window ranking series."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import MathRepoError
from .msc import msc_top_level
from .records import CanonicalRecord

CONVENTIONS = ("source_authority", "target_authority")


class AnalyticsError(MathRepoError):
    """Statistics input incomplete or inconsistent."""


# ---------------------------------------------------------------------------
# Field share table

@dataclass(frozen=True)
class FieldShareRow:
    msc2: str
    count: int
    total: int
    percent: float


def truncated_percent(count: int, total: int) -> float:
    """100*count/total floored to two decimals, in integer arithmetic.

    Truncation (not rounding) is the pinned rule: 1852/18506 -> 10.00.
    """
    if total <= 0:
        raise AnalyticsError(f"world total must be positive, got {total}")
    if count < 0 or count > total:
        raise AnalyticsError(f"count {count} out of range for total {total}")
    return (10000 * count // total) / 100.0


def share_rows_from_counts(
    counts: Mapping[str, int], totals: Mapping[str, int]
) -> list[FieldShareRow]:
    """Build share rows from per-field article counts and world totals,
    sorted by percent descending (ties by field code)."""
    rows = []
    for msc2, count in counts.items():
        if count <= 0:
            continue
        if msc2 not in totals:
            raise AnalyticsError(f"no world total supplied for field {msc2!r}")
        total = totals[msc2]
        rows.append(FieldShareRow(msc2, count, total, truncated_percent(count, total)))
    rows.sort(key=lambda row: (-row.percent, row.msc2))
    return rows


def field_share_table(
    records: Iterable[CanonicalRecord], totals: Mapping[str, int]
) -> list[FieldShareRow]:
    """Article share per top-level field, counting primary classifications."""
    counts: dict[str, int] = {}
    for rec in records:
        if rec.msc_primary:
            top = msc_top_level(rec.msc_primary)
            counts[top] = counts.get(top, 0) + 1
    return share_rows_from_counts(counts, totals)


def load_totals(path) -> dict[str, int]:
    """Load the world-totals file: tab-separated msc2, world_count."""
    totals: dict[str, int] = {}
    with open(path, encoding="utf-8", newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh, delimiter="\t"), start=1):
            if not row or row[0].startswith("#"):
                continue
            if len(row) != 2:
                raise AnalyticsError(f"{path}:{lineno}: expected 2 columns")
            try:
                totals[row[0].strip()] = int(row[1])
            except ValueError as exc:
                raise AnalyticsError(f"{path}:{lineno}: bad count {row[1]!r}") from exc
    return totals


# ---------------------------------------------------------------------------
# Classification co-occurrence graph

@dataclass
class MscGraph:
    """Weighted directed graph over two-digit fields.

    ``weights[i, j]`` is the accumulated weight of the edge from
    ``nodes[i]`` (primary field) to ``nodes[j]`` (secondary field).
    """

    nodes: list[str]
    weights: np.ndarray

    @property
    def size(self) -> int:
        return len(self.nodes)

    def index(self, node: str) -> int:
        return self.nodes.index(node)

    def weight(self, src: str, dst: str) -> int:
        return int(self.weights[self.index(src), self.index(dst)])

    def total_weight(self) -> int:
        return int(self.weights.sum())


def build_msc_graph(
    records: Iterable[CanonicalRecord],
    year_range: tuple[int, int] | None = None,
    include_self_loops: bool = True,
) -> MscGraph:
    """Accumulate one unit of weight per (primary, secondary) code pair.

    An article with primary p and secondaries s1..sk adds weight 1 to each
    edge top(p) -> top(si); articles lacking a primary or having no
    secondaries contribute nothing. With ``year_range`` only records whose
    publication year falls inside the closed range participate.
    """
    pairs: list[tuple[str, str]] = []
    for rec in records:
        if not rec.msc_primary or not rec.msc_secondary:
            continue
        if year_range is not None:
            year = rec.year
            if year is None or not (year_range[0] <= year <= year_range[1]):
                continue
        src = msc_top_level(rec.msc_primary)
        for code in rec.msc_secondary:
            dst = msc_top_level(code)
            if not include_self_loops and src == dst:
                continue
            pairs.append((src, dst))
    nodes = sorted({node for pair in pairs for node in pair})
    index = {node: i for i, node in enumerate(nodes)}
    weights = np.zeros((len(nodes), len(nodes)), dtype=np.int64)
    for src, dst in pairs:
        weights[index[src], index[dst]] += 1
    return MscGraph(nodes=nodes, weights=weights)


# ---------------------------------------------------------------------------
# Hub / authority scores

@dataclass
class HitsResult:
    """Hub and authority vectors aligned with the graph's node list."""

    hub: np.ndarray
    authority: np.ndarray
    iterations: int
    residual: float
    converged: bool = True
    degenerate: bool = False


def _dominant_gap_degenerate(m: np.ndarray, rel_gap: float = 1e-9) -> bool:
    values = np.linalg.eigvalsh(m.T @ m)
    if values.size < 2:
        return False
    lead, second = values[-1], values[-2]
    if lead <= 0:
        return True
    return (lead - second) <= rel_gap * lead


def hits(
    graph: MscGraph,
    tol: float = 1e-10,
    max_iter: int = 10000,
    convention: str = "source_authority",
) -> HitsResult:
    """Alternating power iteration for hub/authority scores.

    One vector tracks the dominant eigenvector of M'M, the other of MM',
    both started uniform positive and normalized each sweep; convergence is
    successive-iterate Euclidean distance < tol on both vectors.

    The default ``source_authority`` convention assigns hub = dominant
    eigenvector of M'M and authority = dominant eigenvector of MM', so a
    single edge A->B yields hub mass on B and authority mass on A. This is
    the reverse of the usual link-analysis assignment, which
    ``target_authority`` selects instead.
    """
    if convention not in CONVENTIONS:
        raise AnalyticsError(f"unknown convention {convention!r}; expected one of {CONVENTIONS}")
    if tol <= 0:
        raise AnalyticsError("tol must be positive")
    n = graph.size
    if n == 0:
        return HitsResult(np.zeros(0), np.zeros(0), 0, 0.0)
    m = graph.weights.astype(np.float64)
    if not m.any():
        return HitsResult(np.zeros(n), np.zeros(n), 0, 0.0)
    x = np.full(n, 1.0 / np.sqrt(n))  # tracks dominant eigenvector of M'M
    y = np.full(n, 1.0 / np.sqrt(n))  # tracks dominant eigenvector of MM'
    converged = False
    residual = float("inf")
    iterations = 0
    for iterations in range(1, max_iter + 1):
        x_new = m.T @ (m @ x)
        x_new /= np.linalg.norm(x_new)
        y_new = m @ (m.T @ y)
        y_new /= np.linalg.norm(y_new)
        residual = max(
            float(np.linalg.norm(x_new - x)), float(np.linalg.norm(y_new - y))
        )
        x, y = x_new, y_new
        if residual < tol:
            converged = True
            break
    hub, authority = (x, y) if convention == "source_authority" else (y, x)
    return HitsResult(
        hub=hub,
        authority=authority,
        iterations=iterations,
        residual=residual,
        converged=converged,
        degenerate=_dominant_gap_degenerate(m),
    )


def rank(scores: Mapping[str, float]) -> dict[str, int]:
    """Dense 1-based ranking, largest score first; ties broken by ascending
    node code (ties consume consecutive ranks)."""
    for node, value in scores.items():
        if not np.isfinite(value):
            raise AnalyticsError(f"non-finite score for node {node!r}")
    ordered = sorted(scores, key=lambda node: (-scores[node], node))
    return {node: position for position, node in enumerate(ordered, start=1)}


# ---------------------------------------------------------------------------
# Sliding-window series

@dataclass
class WindowEntry:
    year: int
    nodes: list[str]
    hits: HitsResult
    hub_rank: dict[str, int]
    auth_rank: dict[str, int]


@dataclass
class WindowSeries:
    start_year: int
    end_year: int
    window: int
    entries: list[WindowEntry] = field(default_factory=list)


def sliding_window_series(
    records: Iterable[CanonicalRecord],
    start_year: int,
    end_year: int,
    window: int = 10,
    tol: float = 1e-10,
    max_iter: int = 10000,
    convention: str = "source_authority",
) -> WindowSeries:
    """Score and rank each year's window.

    The entry for year Y is computed from the graph over articles published
    in [Y, Y+window-1]; nodes absent from a window get no rank that year.
    """
    if start_year > end_year:
        raise AnalyticsError(f"start_year {start_year} > end_year {end_year}")
    if window < 1:
        raise AnalyticsError("window must be >= 1")
    records = list(records)
    series = WindowSeries(start_year=start_year, end_year=end_year, window=window)
    for year in range(start_year, end_year + 1):
        graph = build_msc_graph(records, year_range=(year, year + window - 1))
        result = hits(graph, tol=tol, max_iter=max_iter, convention=convention)
        hub_scores = dict(zip(graph.nodes, result.hub.tolist()))
        auth_scores = dict(zip(graph.nodes, result.authority.tolist()))
        series.entries.append(
            WindowEntry(
                year=year,
                nodes=graph.nodes,
                hits=result,
                hub_rank=rank(hub_scores),
                auth_rank=rank(auth_scores),
            )
        )
    return series


# ---------------------------------------------------------------------------
# Series export: CSV plus one SVG line chart per node

_SERIES_STYLE = (
    ("hub", "H-score", "#1f77b4", None),
    ("authority", "A-score", "#d62728", "6,3"),
    ("hub_rank", "H-score rank", "#2ca02c", "2,3"),
    ("auth_rank", "A-score rank", "#9467bd", "8,3,2,3"),
)


def export_series(series: WindowSeries, out_dir, nodes: Sequence[str] | None = None) -> dict:
    """Write the series as CSV and one SVG chart per node.

    The CSV has one row per (year, node) over the union of nodes (or the
    requested subset); cells stay empty for windows the node is absent
    from. Returns the written paths.
    """
    if not series.entries:
        raise AnalyticsError("cannot export an empty series")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    all_nodes = list(nodes) if nodes else sorted({n for e in series.entries for n in e.nodes})

    csv_path = out / "hits_series.csv"
    with open(csv_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["year", "node", "hub", "authority", "hub_rank", "auth_rank"])
        for entry in series.entries:
            index = {node: i for i, node in enumerate(entry.nodes)}
            for node in all_nodes:
                if node in index:
                    i = index[node]
                    writer.writerow(
                        [
                            entry.year,
                            node,
                            repr(float(entry.hits.hub[i])),
                            repr(float(entry.hits.authority[i])),
                            entry.hub_rank[node],
                            entry.auth_rank[node],
                        ]
                    )
                else:
                    writer.writerow([entry.year, node, "", "", "", ""])

    svg_paths: dict[str, Path] = {}
    for node in all_nodes:
        svg_path = out / f"hits_{node}.svg"
        svg_path.write_text(_node_chart_svg(series, node), encoding="utf-8")
        svg_paths[node] = svg_path
    return {"csv": csv_path, "svg": svg_paths}


def _node_chart_svg(series: WindowSeries, node: str) -> str:
    years = [entry.year for entry in series.entries]
    data: dict[str, list[float | None]] = {key: [] for key, *_ in _SERIES_STYLE}
    max_rank = 1
    for entry in series.entries:
        if node in entry.nodes:
            i = entry.nodes.index(node)
            data["hub"].append(float(entry.hits.hub[i]))
            data["authority"].append(float(entry.hits.authority[i]))
            data["hub_rank"].append(float(entry.hub_rank[node]))
            data["auth_rank"].append(float(entry.auth_rank[node]))
            max_rank = max(max_rank, len(entry.nodes))
        else:
            for key, *_ in _SERIES_STYLE:
                data[key].append(None)

    width, height = 640, 360
    left, right, top, bottom = 60, 60, 50, 40
    plot_w, plot_h = width - left - right, height - top - bottom

    def x_pos(idx: int) -> float:
        if len(years) == 1:
            return left + plot_w / 2
        return left + plot_w * idx / (len(years) - 1)

    def y_score(value: float) -> float:
        return top + plot_h * (1.0 - value)  # scores live in [0, 1]

    def y_rank(value: float) -> float:
        if max_rank == 1:
            return top
        return top + plot_h * (value - 1) / (max_rank - 1)  # rank 1 at the top

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:.1f}" y="20" text-anchor="middle" font-size="14" '
        f'font-family="sans-serif">Field {node}: scores and ranks per window start year</text>',
        f'<line x1="{left}" y1="{top}" x2="{left}" y2="{top + plot_h}" stroke="black"/>',
        f'<line x1="{left}" y1="{top + plot_h}" x2="{left + plot_w}" y2="{top + plot_h}" '
        f'stroke="black"/>',
    ]
    for idx, year in enumerate(years):
        parts.append(
            f'<text x="{x_pos(idx):.1f}" y="{height - 18}" text-anchor="middle" '
            f'font-size="10" font-family="sans-serif">{year}</text>'
        )
    parts.append(
        f'<text x="14" y="{top + plot_h / 2:.1f}" font-size="10" font-family="sans-serif" '
        f'transform="rotate(-90 14 {top + plot_h / 2:.1f})" text-anchor="middle">score / rank</text>'
    )
    for key, label, color, dash in _SERIES_STYLE:
        scale = y_rank if key.endswith("_rank") else y_score
        for segment in _segments(data[key]):
            points = " ".join(f"{x_pos(i):.1f},{scale(v):.1f}" for i, v in segment)
            dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
            parts.append(
                f'<polyline fill="none" stroke="{color}" stroke-width="1.5"'
                f'{dash_attr} points="{points}"/>'
            )
    for pos, (key, label, color, dash) in enumerate(_SERIES_STYLE):
        x0 = left + pos * 140
        dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
        parts.append(
            f'<line x1="{x0}" y1="34" x2="{x0 + 24}" y2="34" stroke="{color}" '
            f'stroke-width="1.5"{dash_attr}/>'
        )
        parts.append(
            f'<text x="{x0 + 28}" y="38" font-size="10" font-family="sans-serif">{label}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts)


def _segments(values: list[float | None]) -> list[list[tuple[int, float]]]:
    """Contiguous runs of present values, as (index, value) lists."""
    segments: list[list[tuple[int, float]]] = []
    current: list[tuple[int, float]] = []
    for idx, value in enumerate(values):
        if value is None:
            if current:
                segments.append(current)
                current = []
        else:
            current.append((idx, value))
    if current:
        segments.append(current)
    return segments
