"""Weighted directed copy graph: construction, filtering, statistics, export.

Each copy event contributes directed edges from the source account to each
distinct copying account (never between copiers); multi-edges collapse
into integer weights. Nodes carry the account's tweet total for the period
and its count of distinct copied tweets, which drive the two-stage filter:
copy percentage at least T, then at least ``min_tweets`` per period.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence
from xml.sax.saxutils import escape

import networkx as nx

from .corpus import CorpusIndex, Period
from .detector import CopyEvent

__all__ = [
    "NodeStats",
    "CopyGraph",
    "FilterConfig",
    "GraphStats",
    "build_graph",
    "filter_graph",
    "graph_stats",
    "export_graph",
    "import_graph",
]

FORMATS = ("tsv", "graphml")


@dataclass(frozen=True)
class NodeStats:
    """Per-account annotations; ``total_tweets`` is None when the account
    posted nothing in the graph's period (activity unknown)."""

    total_tweets: int | None = None
    copied_tweets: int = 0

    @property
    def copy_pct(self) -> float | None:
        if self.total_tweets is None or self.total_tweets == 0:
            return None
        return 100.0 * self.copied_tweets / self.total_tweets


@dataclass
class CopyGraph:
    period: str
    nodes: dict[str, NodeStats] = field(default_factory=dict)
    edges: dict[tuple[str, str], int] = field(default_factory=dict)

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def total_weight(self) -> int:
        return sum(self.edges.values())

    def degrees(self) -> dict[str, int]:
        deg: dict[str, int] = dict.fromkeys(self.nodes, 0)
        for a, b in self.edges:
            deg[a] += 1
            deg[b] += 1
        return deg

    def to_networkx(self) -> "nx.DiGraph":
        g = nx.DiGraph()
        g.add_nodes_from(self.nodes)
        for (a, b), w in self.edges.items():
            g.add_edge(a, b, weight=w)
        return g


@dataclass(frozen=True)
class FilterConfig:
    copy_pct: float = 5.0
    min_tweets: int = 100

    def __post_init__(self):
        if not 0.0 <= self.copy_pct <= 100.0:
            raise ValueError(f"copy_pct must be in [0, 100], got {self.copy_pct}")
        if self.min_tweets < 0:
            raise ValueError(f"min_tweets must be >= 0, got {self.min_tweets}")


def build_graph(
    events: Sequence[CopyEvent], index: CorpusIndex, period: Period | None = None
) -> CopyGraph:
    """Aggregate deduplicated events into the weighted directed copy graph.

    When a period is given, only events whose source falls inside it are
    used and tweet totals come from the corresponding corpus slice. An
    edge gains weight 1 per event per distinct copying account. The count
    of copied tweets per node is over distinct tweet ids, so repeated
    events never inflate a copier's percentage.
    """
    if period is not None:
        sub = index.slice(period.start, period.end)
        events = [e for e in events if period.contains(e.source_timestamp)]
        label = period.label
    else:
        sub = index
        label = "all"
    totals = Counter(t.author_id for t in sub)

    copied_sets: dict[str, set[int]] = defaultdict(set)
    edges: dict[tuple[str, str], int] = defaultdict(int)
    accounts: set[str] = set()
    for ev in events:
        accounts.add(ev.source_author)
        for c in ev.copies:
            accounts.add(c.author_id)
            copied_sets[c.author_id].add(c.tweet_id)
        for author in ev.copier_authors:
            if author != ev.source_author:
                edges[(ev.source_author, author)] += 1

    nodes = {
        a: NodeStats(totals.get(a), len(copied_sets.get(a, ())))
        for a in sorted(accounts)
    }
    return CopyGraph(label, nodes, dict(sorted(edges.items())))


def _node_passes(stats: NodeStats, cfg: FilterConfig) -> bool:
    if cfg.min_tweets > 0 and (stats.total_tweets is None or stats.total_tweets < cfg.min_tweets):
        return False
    if cfg.copy_pct > 0:
        pct = stats.copy_pct
        if pct is None or pct < cfg.copy_pct:
            return False
    return True


def filter_graph(g: CopyGraph, cfg: FilterConfig) -> CopyGraph:
    """Drop nodes below the copy-percentage or activity threshold.

    Incident edges go with them, and nodes left without any edge by the
    removal are dropped too. Nodes that were already isolated in the input
    are only subject to the thresholds, which keeps zero thresholds a true
    no-op and the filter idempotent.
    """
    had_edges = {a for ab in g.edges for a in ab}
    kept = {a for a, stats in g.nodes.items() if _node_passes(stats, cfg)}
    edges = {(a, b): w for (a, b), w in g.edges.items() if a in kept and b in kept}
    still_has_edges = {a for ab in edges for a in ab}
    nodes = {
        a: g.nodes[a]
        for a in sorted(kept)
        if a in still_has_edges or a not in had_edges
    }
    return CopyGraph(g.period, nodes, edges)


@dataclass(frozen=True)
class GraphStats:
    n_nodes: int
    n_edges: int
    total_weight: int
    n_weak_components: int
    n_strong_components: int
    largest_weak_component: int
    weight_histogram: dict[int, int]

    def as_dict(self) -> dict:
        return {
            "n_nodes": self.n_nodes,
            "n_edges": self.n_edges,
            "total_weight": self.total_weight,
            "n_weak_components": self.n_weak_components,
            "n_strong_components": self.n_strong_components,
            "largest_weak_component": self.largest_weak_component,
            "weight_histogram": {str(k): v for k, v in sorted(self.weight_histogram.items())},
        }


def graph_stats(g: CopyGraph) -> GraphStats:
    """Size, component and weight-distribution summary of a copy graph.

    Component counts follow the usual conventions: weak components on the
    undirected projection, strong components including singletons.
    """
    if g.n_nodes == 0:
        return GraphStats(0, 0, 0, 0, 0, 0, {})
    nxg = g.to_networkx()
    weak = list(nx.weakly_connected_components(nxg))
    return GraphStats(
        n_nodes=g.n_nodes,
        n_edges=g.n_edges,
        total_weight=g.total_weight,
        n_weak_components=len(weak),
        n_strong_components=nx.number_strongly_connected_components(nxg),
        largest_weak_component=max(len(c) for c in weak),
        weight_histogram=dict(Counter(g.edges.values())),
    )


# --- serialization ---------------------------------------------------------

_TSV_HEADER = "source_id\ttarget_id\tweight"
_NODES_HEADER = "account_id\ttotal_tweets\tcopied_count\tcommunity"
_GRAPHML_NS = "http://graphml.graphdrawing.org/xmlns"


def _nodes_sidecar(path: Path) -> Path:
    return path.with_name(path.stem + ".nodes.tsv")


def export_graph(
    g: CopyGraph,
    path: str | Path,
    fmt: str = "tsv",
    communities: Mapping[str, int] | None = None,
) -> None:
    """Write a copy graph as an edge-list TSV or as GraphML.

    TSV keeps node annotations in a ``<stem>.nodes.tsv`` sidecar so the
    percentage filter can run on re-imported graphs; GraphML carries them
    as node attributes. Output bytes are deterministic (sorted nodes and
    edges).
    """
    if fmt not in FORMATS:
        raise ValueError(f"unsupported format {fmt!r}; expected one of {FORMATS}")
    path = Path(path)
    if fmt == "tsv":
        _write_tsv(g, path, communities)
    else:
        _write_graphml(g, path, communities)


def _fmt_opt(value) -> str:
    return "" if value is None else str(value)


def _write_tsv(g: CopyGraph, path: Path, communities: Mapping[str, int] | None) -> None:
    lines = [_TSV_HEADER]
    for (a, b), w in sorted(g.edges.items()):
        lines.append(f"{a}\t{b}\t{w}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")

    node_lines = [_NODES_HEADER, f"# period\t{g.period}"]
    for a in sorted(g.nodes):
        stats = g.nodes[a]
        comm = communities.get(a) if communities else None
        node_lines.append(
            f"{a}\t{_fmt_opt(stats.total_tweets)}\t{stats.copied_tweets}\t{_fmt_opt(comm)}"
        )
    _nodes_sidecar(path).write_text("\n".join(node_lines) + "\n", encoding="utf-8")


def _write_graphml(g: CopyGraph, path: Path, communities: Mapping[str, int] | None) -> None:
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<graphml xmlns="{_GRAPHML_NS}">',
        '  <key id="period" for="graph" attr.name="period" attr.type="string"/>',
        '  <key id="total_tweets" for="node" attr.name="total_tweets" attr.type="long"/>',
        '  <key id="copied_count" for="node" attr.name="copied_count" attr.type="long"/>',
        '  <key id="community" for="node" attr.name="community" attr.type="long"/>',
        '  <key id="weight" for="edge" attr.name="weight" attr.type="long"/>',
        '  <graph edgedefault="directed">',
        f'    <data key="period">{escape(g.period)}</data>',
    ]
    for a in sorted(g.nodes):
        stats = g.nodes[a]
        out.append(f'    <node id="{escape(a)}">')
        if stats.total_tweets is not None:
            out.append(f'      <data key="total_tweets">{stats.total_tweets}</data>')
        out.append(f'      <data key="copied_count">{stats.copied_tweets}</data>')
        if communities is not None and a in communities:
            out.append(f'      <data key="community">{communities[a]}</data>')
        out.append("    </node>")
    for (a, b), w in sorted(g.edges.items()):
        out.append(f'    <edge source="{escape(a)}" target="{escape(b)}">')
        out.append(f'      <data key="weight">{w}</data>')
        out.append("    </edge>")
    out.extend(["  </graph>", "</graphml>"])
    path.write_text("\n".join(out) + "\n", encoding="utf-8")


def import_graph(path: str | Path, fmt: str | None = None) -> tuple[CopyGraph, dict[str, int] | None]:
    """Read a graph written by :func:`export_graph`.

    Returns the graph and the community assignment if one was stored.
    Format is inferred from the suffix when not given.
    """
    path = Path(path)
    if fmt is None:
        fmt = "graphml" if path.suffix.lower() == ".graphml" else "tsv"
    if fmt not in FORMATS:
        raise ValueError(f"unsupported format {fmt!r}; expected one of {FORMATS}")
    if fmt == "tsv":
        return _read_tsv(path)
    return _read_graphml(path)


def _read_tsv(path: Path) -> tuple[CopyGraph, dict[str, int] | None]:
    lines = path.read_text(encoding="utf-8").splitlines()
    if not lines or lines[0] != _TSV_HEADER:
        raise ValueError(f"{path}: missing edge-list header {_TSV_HEADER!r}")
    edges: dict[tuple[str, str], int] = {}
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise ValueError(f"{path}:{lineno}: expected 3 columns, got {len(parts)}")
        edges[(parts[0], parts[1])] = int(parts[2])

    nodes: dict[str, NodeStats] = {}
    communities: dict[str, int] = {}
    period = "all"
    sidecar = _nodes_sidecar(path)
    if sidecar.exists():
        node_lines = sidecar.read_text(encoding="utf-8").splitlines()
        for line in node_lines[1:]:
            if line.startswith("# period\t"):
                period = line.split("\t", 1)[1]
                continue
            if not line.strip():
                continue
            a, total, copied, comm = line.split("\t")
            nodes[a] = NodeStats(int(total) if total else None, int(copied))
            if comm:
                communities[a] = int(comm)
    for a, b in edges:
        nodes.setdefault(a, NodeStats())
        nodes.setdefault(b, NodeStats())
    graph = CopyGraph(period, dict(sorted(nodes.items())), dict(sorted(edges.items())))
    return graph, (communities or None)


def _read_graphml(path: Path) -> tuple[CopyGraph, dict[str, int] | None]:
    tree = ET.parse(path)
    root = tree.getroot()

    def tag(name: str) -> str:
        return f"{{{_GRAPHML_NS}}}{name}"

    key_names = {}
    for key in root.findall(tag("key")):
        key_names[key.get("id")] = key.get("attr.name")
    graph_el = root.find(tag("graph"))
    if graph_el is None:
        raise ValueError(f"{path}: no <graph> element")

    def data_of(el) -> dict[str, str]:
        return {
            key_names.get(d.get("key"), d.get("key")): (d.text or "")
            for d in el.findall(tag("data"))
        }

    period = data_of(graph_el).get("period", "all")
    nodes: dict[str, NodeStats] = {}
    communities: dict[str, int] = {}
    for node in graph_el.findall(tag("node")):
        data = data_of(node)
        total = data.get("total_tweets")
        nodes[node.get("id")] = NodeStats(
            int(total) if total not in (None, "") else None,
            int(data.get("copied_count", "0") or 0),
        )
        if data.get("community") not in (None, ""):
            communities[node.get("id")] = int(data["community"])
    edges: dict[tuple[str, str], int] = {}
    for edge in graph_el.findall(tag("edge")):
        data = data_of(edge)
        edges[(edge.get("source"), edge.get("target"))] = int(data.get("weight", "1") or 1)
    for a, b in edges:
        nodes.setdefault(a, NodeStats())
        nodes.setdefault(b, NodeStats())
    graph = CopyGraph(period, dict(sorted(nodes.items())), dict(sorted(edges.items())))
    return graph, (communities or None)
