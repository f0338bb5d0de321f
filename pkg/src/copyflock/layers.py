"""Interaction-layer graphs: loading, clustering and exemplar classification.

Seven layers situate the detected bots among ordinary user communities:
follow (directed, unweighted), retweet / favorite / mention / reply /
quote (directed, weighted) and list co-membership (undirected, weighted
by the number of shared lists). Clusters found on each layer are labeled
by how many hand-curated exemplar accounts of each category they contain
and by how many bots.
"""

from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from typing import AbstractSet, Iterable, Mapping

from .community import CommunityAssignment, greedy_modularity, undirected_weights
from .corpus import LoadError

logger = logging.getLogger(__name__)

__all__ = [
    "LayerGraph",
    "ExemplarSet",
    "ClusterInfo",
    "ClusterReport",
    "LAYER_KINDS",
    "EXEMPLAR_CATEGORIES",
    "load_layer",
    "load_exemplars",
    "cluster_layer",
    "classify_clusters",
    "bot_engagement",
]

# kind -> (directed, weighted)
LAYER_KINDS: dict[str, tuple[bool, bool]] = {
    "follow": (True, False),
    "retweet": (True, True),
    "favorite": (True, True),
    "mention": (True, True),
    "reply": (True, True),
    "quote": (True, True),
    "list": (False, True),
}

EXEMPLAR_CATEGORIES = ("politics", "celebrities", "news_media", "brands")


@dataclass(frozen=True)
class LayerGraph:
    kind: str
    directed: bool
    weighted: bool
    edges: Mapping[tuple[str, str], float]
    load_errors: tuple[LoadError, ...] = ()

    @property
    def nodes(self) -> frozenset[str]:
        return frozenset(a for ab in self.edges for a in ab)

    @property
    def n_edges(self) -> int:
        return len(self.edges)


def _layer_flags(kind: str) -> tuple[bool, bool]:
    if kind not in LAYER_KINDS:
        raise ValueError(f"unknown layer kind {kind!r}; expected one of {sorted(LAYER_KINDS)}")
    return LAYER_KINDS[kind]


def load_layer(path: str | Path, kind: str) -> LayerGraph:
    """Load one layer's edge file.

    follow files have two columns (src, dst); the weighted kinds require
    a third numeric weight column; the list layer takes (account_id,
    list_id) membership rows and converts them to co-listing edges
    weighted by the number of shared lists. A row with the wrong number
    of columns is fatal (the file has the wrong shape for the kind);
    rows with unparseable values are skipped and reported.
    """
    directed, weighted = _layer_flags(kind)
    path = Path(path)
    rows = path.read_text(encoding="utf-8").splitlines()
    errors: list[LoadError] = []

    if kind == "list":
        memberships: set[tuple[str, str]] = set()
        for lineno, row in enumerate(rows, start=1):
            if not row.strip() or row.startswith("#"):
                continue
            parts = row.split("\t")
            if len(parts) != 2:
                raise ValueError(f"{path}:{lineno}: list memberships need 2 columns, got {len(parts)}")
            account, list_id = parts
            if not account or not list_id:
                errors.append(LoadError(lineno, "empty field"))
                continue
            memberships.add((account, list_id))
        by_list: dict[str, list[str]] = defaultdict(list)
        for account, list_id in sorted(memberships):
            by_list[list_id].append(account)
        edges: dict[tuple[str, str], float] = defaultdict(float)
        for list_id in sorted(by_list):
            for a, b in combinations(sorted(by_list[list_id]), 2):
                edges[(a, b)] += 1.0
        _log_errors(path, errors)
        return LayerGraph(kind, directed, weighted, dict(sorted(edges.items())), tuple(errors))

    want = 3 if weighted else 2
    edges = defaultdict(float)
    for lineno, row in enumerate(rows, start=1):
        if not row.strip() or row.startswith("#"):
            continue
        parts = row.split("\t")
        if len(parts) != want:
            raise ValueError(f"{path}:{lineno}: {kind} layer needs {want} columns, got {len(parts)}")
        src, dst = parts[0], parts[1]
        if not src or not dst:
            errors.append(LoadError(lineno, "empty endpoint"))
            continue
        if weighted:
            try:
                w = float(parts[2])
            except ValueError:
                errors.append(LoadError(lineno, f"bad weight {parts[2]!r}"))
                continue
            if w <= 0:
                errors.append(LoadError(lineno, f"non-positive weight {parts[2]!r}"))
                continue
        else:
            w = 1.0
        if not directed and src > dst:
            src, dst = dst, src
        if weighted:
            edges[(src, dst)] += w
        else:
            edges[(src, dst)] = 1.0
    _log_errors(path, errors)
    return LayerGraph(kind, directed, weighted, dict(sorted(edges.items())), tuple(errors))


def _log_errors(path: Path, errors: list[LoadError]) -> None:
    for err in errors:
        logger.warning("%s:%d skipped: %s", path, err.line, err.reason)


@dataclass(frozen=True)
class ExemplarSet:
    """Hand-curated accounts per category; overlaps are kept but reported."""

    categories: Mapping[str, frozenset[str]]
    overlaps: tuple[str, ...] = ()

    def category_of(self, account: str) -> list[str]:
        return [cat for cat, members in self.categories.items() if account in members]

    @property
    def all_accounts(self) -> frozenset[str]:
        out: set[str] = set()
        for members in self.categories.values():
            out |= members
        return frozenset(out)


def load_exemplars(path: str | Path) -> ExemplarSet:
    """TSV rows (category, account_id); unknown categories are fatal."""
    path = Path(path)
    sets: dict[str, set[str]] = {cat: set() for cat in EXEMPLAR_CATEGORIES}
    for lineno, row in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        if not row.strip() or row.startswith("#"):
            continue
        parts = row.split("\t")
        if len(parts) != 2:
            raise ValueError(f"{path}:{lineno}: expected 2 columns, got {len(parts)}")
        category, account = parts
        if category not in sets:
            raise ValueError(f"{path}:{lineno}: unknown category {category!r}")
        sets[category].add(account)
    seen: dict[str, str] = {}
    overlaps = set()
    for cat in EXEMPLAR_CATEGORIES:
        for account in sets[cat]:
            if account in seen and seen[account] != cat:
                overlaps.add(account)
            seen.setdefault(account, cat)
    if overlaps:
        logger.warning("%d exemplar account(s) appear in multiple categories", len(overlaps))
    return ExemplarSet({cat: frozenset(m) for cat, m in sets.items()}, tuple(sorted(overlaps)))


def cluster_layer(g: LayerGraph, seed: int = 0, resolution: float = 1.0) -> CommunityAssignment:
    """Cluster a layer with the same engine used on the copy graph."""
    nodes = sorted(g.nodes)
    if not nodes:
        return CommunityAssignment({}, 0.0, seed, resolution, g.weighted)
    weights = undirected_weights(g.edges, weighted=g.weighted)
    assignment, q = greedy_modularity(nodes, weights, resolution=resolution)
    return CommunityAssignment(assignment, q, seed, resolution, g.weighted)


@dataclass(frozen=True)
class ClusterInfo:
    cluster_id: int
    size: int
    bot_count: int
    exemplar_counts: Mapping[str, int]
    interesting: bool

    def as_dict(self) -> dict:
        return {
            "cluster_id": self.cluster_id,
            "size": self.size,
            "bot_count": self.bot_count,
            "exemplar_counts": dict(self.exemplar_counts),
            "interesting": self.interesting,
        }


@dataclass(frozen=True)
class ClusterReport:
    clusters: tuple[ClusterInfo, ...]
    top: tuple[ClusterInfo, ...]

    def as_dict(self) -> dict:
        return {
            "clusters": [c.as_dict() for c in self.clusters],
            "top": [c.as_dict() for c in self.top],
        }


def classify_clusters(
    assignment: CommunityAssignment | Mapping[str, int],
    exemplars: ExemplarSet,
    bots: AbstractSet[str],
    k: int = 3,
) -> ClusterReport:
    """Tally bots and per-category exemplars inside each cluster.

    A cluster is "interesting" when it contains at least one bot and at
    least one exemplar; the top-k selection ranks by bot count with the
    cluster id as tie-break.
    """
    mapping = assignment.communities if isinstance(assignment, CommunityAssignment) else assignment
    members: dict[int, set[str]] = defaultdict(set)
    for account, cid in mapping.items():
        members[cid].add(account)
    infos = []
    for cid in sorted(members):
        cluster = members[cid]
        counts = {cat: len(cluster & exemplars.categories.get(cat, frozenset()))
                  for cat in EXEMPLAR_CATEGORIES}
        bot_count = len(cluster & bots)
        infos.append(
            ClusterInfo(
                cluster_id=cid,
                size=len(cluster),
                bot_count=bot_count,
                exemplar_counts=counts,
                interesting=bot_count > 0 and any(counts.values()),
            )
        )
    top = tuple(sorted(infos, key=lambda c: (-c.bot_count, c.cluster_id))[:k])
    return ClusterReport(tuple(infos), top)


def bot_engagement(layers: Iterable[LayerGraph], bots: AbstractSet[str]) -> dict[str, float]:
    """Fraction of the bot set present as a node in each layer."""
    bots = set(bots)
    if not bots:
        raise ValueError("bot set is empty; engagement fraction is undefined")
    return {g.kind: len(bots & g.nodes) / len(bots) for g in layers}
