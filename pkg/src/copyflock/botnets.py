"""Botnet extraction: communities on the merged copy graph and their
evolution across periods.

Communities are detected once on the merged multi-period graph and then
projected onto each period, so an account keeps the same community id
wherever it appears; the projected slices drive per-period size, internal
weight and a born/active/grew/shrank/disappeared status per community.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

from .community import CommunityAssignment, greedy_modularity, undirected_weights
from .copygraph import CopyGraph, NodeStats
from .tokens import jaccard

__all__ = [
    "merge_graphs",
    "detect_communities",
    "project_communities",
    "evolution_metrics",
    "BotnetTimeline",
    "TimelineEntry",
    "write_assignment",
    "read_assignment",
    "write_timeline",
]

STATUSES = ("born", "active", "grew", "shrank", "disappeared")


def merge_graphs(graphs: Sequence[CopyGraph]) -> CopyGraph:
    """Union the nodes and sum the edge weights of per-period graphs.

    Period labels must be distinct (the periods are assumed disjoint).
    Tweet totals sum over the periods where they are known; a node whose
    total is unknown everywhere stays unknown.
    """
    labels = [g.period for g in graphs]
    if len(set(labels)) != len(labels):
        raise ValueError(f"overlapping periods in merge: {labels}")
    nodes: dict[str, NodeStats] = {}
    edges: dict[tuple[str, str], int] = {}
    for g in graphs:
        for a, stats in g.nodes.items():
            prev = nodes.get(a)
            if prev is None:
                nodes[a] = stats
            else:
                if prev.total_tweets is None:
                    total = stats.total_tweets
                elif stats.total_tweets is None:
                    total = prev.total_tweets
                else:
                    total = prev.total_tweets + stats.total_tweets
                nodes[a] = NodeStats(total, prev.copied_tweets + stats.copied_tweets)
        for key, w in g.edges.items():
            edges[key] = edges.get(key, 0) + w
    label = "+".join(labels) if labels else "empty"
    return CopyGraph(label, dict(sorted(nodes.items())), dict(sorted(edges.items())))


def detect_communities(
    g: CopyGraph, seed: int = 0, resolution: float = 1.0, weighted: bool = True
) -> CommunityAssignment:
    """Communities of the copy graph's undirected weighted projection.

    Deterministic for a fixed graph; the seed is recorded in the result
    for provenance. An empty graph gives an empty assignment.
    """
    if g.n_nodes == 0:
        return CommunityAssignment({}, 0.0, seed, resolution, weighted)
    weights = undirected_weights(g.edges, weighted=weighted)
    assignment, q = greedy_modularity(sorted(g.nodes), weights, resolution=resolution)
    return CommunityAssignment(assignment, q, seed, resolution, weighted)


def project_communities(total: CommunityAssignment, yearly: CopyGraph) -> dict[str, int]:
    """Restrict the merged-graph assignment to one period's node set."""
    missing = sorted(a for a in yearly.nodes if a not in total.communities)
    if missing:
        raise ValueError(
            f"{len(missing)} node(s) of period {yearly.period!r} absent from the "
            f"merged assignment (first: {missing[0]!r})"
        )
    return {a: total.communities[a] for a in sorted(yearly.nodes)}


@dataclass(frozen=True)
class TimelineEntry:
    community: int
    period: str
    size: int
    members: tuple[str, ...]
    internal_weight: int
    status: str
    overlap: float


@dataclass(frozen=True)
class BotnetTimeline:
    periods: tuple[str, ...]
    entries: tuple[TimelineEntry, ...]

    def for_community(self, community: int) -> list[TimelineEntry]:
        return [e for e in self.entries if e.community == community]


def _internal_weight(g: CopyGraph, members: set[str]) -> int:
    return sum(w for (a, b), w in g.edges.items() if a in members and b in members)


def evolution_metrics(
    period_labels: Sequence[str],
    graphs: Sequence[CopyGraph],
    assignments: Sequence[Mapping[str, int]],
    min_delta: int = 1,
    relative: bool = False,
    relative_threshold: float = 0.0,
) -> BotnetTimeline:
    """Track each community's membership across consecutive periods.

    Statuses: present in the first observed period or unchanged later is
    "active"; absent then present is "born"; present then absent is
    "disappeared" (one final zero-size row); size deltas at or beyond the
    threshold are "grew"/"shrank". ``overlap`` is the Jaccard similarity
    of the member sets of consecutive periods.
    """
    if len(period_labels) < 2:
        raise ValueError("evolution needs at least two periods")
    if not (len(period_labels) == len(graphs) == len(assignments)):
        raise ValueError("period_labels, graphs and assignments must align")

    members_by_period: list[dict[int, set[str]]] = []
    for assignment in assignments:
        slot: dict[int, set[str]] = {}
        for node, cid in assignment.items():
            slot.setdefault(cid, set()).add(node)
        members_by_period.append(slot)

    all_cids = sorted({cid for slot in members_by_period for cid in slot})
    entries: list[TimelineEntry] = []
    for cid in all_cids:
        prev: set[str] = set()
        prev_present = False
        for k, label in enumerate(period_labels):
            cur = members_by_period[k].get(cid, set())
            present = bool(cur)
            if not present and not prev_present:
                prev = cur
                continue
            if present and not prev_present:
                status = "born" if k > 0 else "active"
            elif not present:
                status = "disappeared"
            else:
                delta = len(cur) - len(prev)
                if relative:
                    rel = delta / len(prev)
                    if rel > relative_threshold:
                        status = "grew"
                    elif rel < -relative_threshold:
                        status = "shrank"
                    else:
                        status = "active"
                else:
                    if delta >= min_delta:
                        status = "grew"
                    elif delta <= -min_delta:
                        status = "shrank"
                    else:
                        status = "active"
            overlap = jaccard(prev, cur) if (prev or cur) else 0.0
            entries.append(
                TimelineEntry(
                    community=cid,
                    period=label,
                    size=len(cur),
                    members=tuple(sorted(cur)),
                    internal_weight=_internal_weight(graphs[k], cur),
                    status=status,
                    overlap=overlap,
                )
            )
            prev = cur
            prev_present = present
    return BotnetTimeline(tuple(period_labels), tuple(entries))


# --- serialization ---------------------------------------------------------

_ASSIGNMENT_HEADER = "account_id\tcommunity_id"
_TIMELINE_HEADER = "community_id\tperiod\tsize\tstatus\toverlap"


def write_assignment(assignment: Mapping[str, int], path) -> None:
    lines = [_ASSIGNMENT_HEADER]
    for account in sorted(assignment):
        lines.append(f"{account}\t{assignment[account]}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_assignment(path) -> dict[str, int]:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines or lines[0] != _ASSIGNMENT_HEADER:
        raise ValueError(f"{path}: missing header {_ASSIGNMENT_HEADER!r}")
    out = {}
    for line in lines[1:]:
        if not line.strip():
            continue
        account, cid = line.split("\t")
        out[account] = int(cid)
    return out


def write_timeline(timeline: BotnetTimeline, path) -> None:
    lines = [_TIMELINE_HEADER]
    for e in timeline.entries:
        lines.append(f"{e.community}\t{e.period}\t{e.size}\t{e.status}\t{e.overlap:.6f}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
