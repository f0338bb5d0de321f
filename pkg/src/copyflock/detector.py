"""Sliding-window detection of concurrent copy events.

The corpus is segmented into epoch-aligned windows of ``window_seconds``
that advance by ``slide_seconds`` (half the window by default), so every
tweet is seen in ``window/slide`` windows and a copy pair up to a full
window apart is always caught by one of them. Within a window all tweet
pairs are compared by Jaccard similarity of their token sets; groups of
above-threshold tweets become copy events whose earliest tweet is the
source. Events found in overlapping windows are deduplicated by source
tweet id, keeping the union of copiers.

Window tasks are independent, so detection can fan out over a process
pool; the merge is a sequential reduction in window order which makes the
result identical for any worker count.
"""

from __future__ import annotations

import json
import time
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .corpus import CorpusIndex, Tweet
from .tokens import jaccard, tokenize
from .util import ecdf

__all__ = [
    "DetectorConfig",
    "WindowTask",
    "Copy",
    "CopyEvent",
    "TokenizedTweet",
    "EventStats",
    "make_windows",
    "tokenize_corpus",
    "detect_window",
    "detect_all",
    "dedupe_events",
    "event_stats",
    "similar_pairs",
    "sweep_jaccard",
    "sweep_window",
    "write_events",
    "read_events",
]

GROUPING_MODES = ("component", "clique")


@dataclass(frozen=True)
class DetectorConfig:
    """Operating point of the detector.

    Defaults correspond to a 0.70 similarity threshold over 10-minute
    windows sliding by 5 minutes.
    """

    jaccard_threshold: float = 0.70
    window_seconds: int = 600
    slide_seconds: int = 300
    grouping: str = "component"
    min_tokens: int = 2
    include_retweets: bool = False
    allow_self_copies: bool = False
    lowercase: bool = True
    length_prefilter: bool = True

    def __post_init__(self):
        if not 0.0 < self.jaccard_threshold <= 1.0:
            raise ValueError(f"jaccard_threshold must be in (0, 1], got {self.jaccard_threshold}")
        if self.window_seconds <= 0 or self.slide_seconds <= 0:
            raise ValueError("window_seconds and slide_seconds must be positive")
        if self.window_seconds % self.slide_seconds != 0:
            raise ValueError(
                f"slide ({self.slide_seconds}s) must divide window ({self.window_seconds}s)"
            )
        if self.grouping not in GROUPING_MODES:
            raise ValueError(f"grouping must be one of {GROUPING_MODES}, got {self.grouping!r}")
        if self.min_tokens < 0:
            raise ValueError("min_tokens must be >= 0")

    @classmethod
    def from_minutes(cls, window_minutes: float = 10.0, slide_minutes: float | None = None, **kwargs):
        if slide_minutes is None:
            slide_minutes = window_minutes / 2
        window = window_minutes * 60
        slide = slide_minutes * 60
        if window != int(window) or slide != int(slide):
            raise ValueError("window and slide must be whole seconds")
        return cls(window_seconds=int(window), slide_seconds=int(slide), **kwargs)

    @property
    def windows_per_tweet(self) -> int:
        return self.window_seconds // self.slide_seconds


@dataclass(frozen=True)
class WindowTask:
    """One detection task: all tweets whose timestamp falls in [start, end)."""

    window_index: int
    start: int
    end: int
    tweet_ids: tuple[int, ...]


@dataclass(frozen=True)
class TokenizedTweet:
    tweet_id: int
    author_id: str
    timestamp: int
    tokens: frozenset[str]


@dataclass(frozen=True)
class Copy:
    tweet_id: int
    author_id: str
    timestamp: int
    similarity: float


@dataclass(frozen=True)
class CopyEvent:
    """A source tweet plus the tweets that copied it inside one window.

    ``similarity`` on each copy is measured against the source tweet. Under
    ``component`` grouping a chain of near-duplicates is one event, so a
    copy is guaranteed to sit above the threshold with respect to at least
    one group member, not necessarily the source itself; ``clique``
    grouping guarantees the threshold against every member.
    """

    source_tweet_id: int
    source_author: str
    source_timestamp: int
    window_index: int
    copies: tuple[Copy, ...]

    @property
    def copier_authors(self) -> set[str]:
        return {c.author_id for c in self.copies}


def _covering_windows(timestamp: int, config: DetectorConfig) -> range:
    """Indices m of the aligned windows [m*slide, m*slide + window) containing a time."""
    s, n = config.slide_seconds, config.window_seconds
    return range((timestamp - n) // s + 1, timestamp // s + 1)


def _windows_from_pairs(pairs: Sequence[tuple[int, int]], config: DetectorConfig) -> list[WindowTask]:
    """Window tasks over (timestamp, tweet_id) pairs, pre-sorted ascending."""
    buckets: dict[int, list[int]] = defaultdict(list)
    for ts, tid in pairs:
        for m in _covering_windows(ts, config):
            buckets[m].append(tid)
    s, n = config.slide_seconds, config.window_seconds
    return [
        WindowTask(m, m * s, m * s + n, tuple(buckets[m]))
        for m in sorted(buckets)
    ]


def make_windows(index: CorpusIndex, config: DetectorConfig) -> list[WindowTask]:
    """Epoch-aligned sliding windows over the corpus.

    Windows start at every multiple of the slide and only non-empty windows
    are emitted, so each tweet appears in exactly ``window/slide`` tasks.
    An empty corpus yields no tasks.
    """
    return _windows_from_pairs([(t.timestamp, t.tweet_id) for t in index], config)


def tokenize_corpus(index: CorpusIndex, config: DetectorConfig) -> dict[int, TokenizedTweet]:
    """Token sets for every tweet eligible for comparison.

    Native retweets are excluded by default (they are legitimate
    duplicates), as are tweets that yield fewer than ``min_tokens`` tokens,
    for which Jaccard is degenerate.
    """
    out: dict[int, TokenizedTweet] = {}
    for t in index:
        if t.is_retweet and not config.include_retweets:
            continue
        tokens = tokenize(t.text, t.hashtags, t.urls, t.tweet_id, lowercase=config.lowercase).tokens
        if len(tokens) < config.min_tokens:
            continue
        out[t.tweet_id] = TokenizedTweet(t.tweet_id, t.author_id, t.timestamp, tokens)
    return out


def _window_pairs(
    members: Sequence[TokenizedTweet], config: DetectorConfig, threshold: float | None = None
) -> list[tuple[int, int, float]]:
    """Above-threshold (i, j, similarity) member-index pairs, i earlier than j.

    The length-ratio prefilter is lossless: Jaccard is bounded above by
    min(|A|,|B|) / max(|A|,|B|).
    """
    theta = config.jaccard_threshold if threshold is None else threshold
    pairs = []
    n = len(members)
    for i in range(n):
        ti = members[i].tokens
        li = len(ti)
        for j in range(i + 1, n):
            tj = members[j].tokens
            lj = len(tj)
            if config.length_prefilter and min(li, lj) < theta * max(li, lj):
                continue
            sim = jaccard(ti, tj)
            if sim >= theta:
                pairs.append((i, j, sim))
    return pairs


def _component_groups(n: int, pairs: Iterable[tuple[int, int, float]]) -> list[list[int]]:
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, j, _ in pairs:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)
    groups: dict[int, list[int]] = defaultdict(list)
    for i in range(n):
        groups[find(i)].append(i)
    return [sorted(g) for _, g in sorted(groups.items()) if len(g) >= 2]


def _clique_groups(n: int, pairs: Iterable[tuple[int, int, float]]) -> list[list[int]]:
    """Greedy clique cover in time order: join the first group similar to all members."""
    simset = {(i, j) for i, j, _ in pairs}
    linked = {i for ij in simset for i in ij}
    groups: list[list[int]] = []
    for i in range(n):
        if i not in linked:
            continue
        for grp in groups:
            if all((j, i) in simset for j in grp):
                grp.append(i)
                break
        else:
            groups.append([i])
    return [g for g in groups if len(g) >= 2]


def _events_from_pairs(
    members: Sequence[TokenizedTweet],
    pairs: Sequence[tuple[int, int, float]],
    window_index: int,
    config: DetectorConfig,
) -> list[CopyEvent]:
    if config.grouping == "component":
        groups = _component_groups(len(members), pairs)
    else:
        groups = _clique_groups(len(members), pairs)
    events = []
    for grp in groups:
        src = members[grp[0]]
        copies = []
        for idx in grp[1:]:
            t = members[idx]
            if not config.allow_self_copies and t.author_id == src.author_id:
                continue
            copies.append(Copy(t.tweet_id, t.author_id, t.timestamp, jaccard(src.tokens, t.tokens)))
        if copies:
            events.append(
                CopyEvent(src.tweet_id, src.author_id, src.timestamp, window_index, tuple(copies))
            )
    return events


def detect_window(
    task: WindowTask, tokenized: Mapping[int, TokenizedTweet], config: DetectorConfig
) -> list[CopyEvent]:
    """Copy events found within a single window task.

    ``tokenized`` must cover the eligible tweets of the task (ids missing
    from it are treated as ineligible and skipped).
    """
    members = [tokenized[tid] for tid in task.tweet_ids if tid in tokenized]
    members.sort(key=lambda t: (t.timestamp, t.tweet_id))
    pairs = _window_pairs(members, config)
    return _events_from_pairs(members, pairs, task.window_index, config)


def _detect_task(payload) -> list[CopyEvent]:
    members_raw, window_index, config = payload
    members = [TokenizedTweet(*m) for m in members_raw]
    pairs = _window_pairs(members, config)
    return _events_from_pairs(members, pairs, window_index, config)


def dedupe_events(events: Iterable[CopyEvent]) -> list[CopyEvent]:
    """Merge events sharing a source tweet id, keeping the union of copiers.

    The same source seen in two overlapping windows is one injection; the
    earliest window index is kept and copies are re-sorted by
    (timestamp, tweet_id). Output is sorted by source tweet id.
    """
    merged: dict[int, dict] = {}
    for ev in events:
        slot = merged.get(ev.source_tweet_id)
        if slot is None:
            merged[ev.source_tweet_id] = {
                "author": ev.source_author,
                "timestamp": ev.source_timestamp,
                "window": ev.window_index,
                "copies": {c.tweet_id: c for c in ev.copies},
            }
        else:
            slot["window"] = min(slot["window"], ev.window_index)
            slot["copies"].update({c.tweet_id: c for c in ev.copies})
    out = []
    for src_id in sorted(merged):
        slot = merged[src_id]
        copies = tuple(sorted(slot["copies"].values(), key=lambda c: (c.timestamp, c.tweet_id)))
        out.append(CopyEvent(src_id, slot["author"], slot["timestamp"], slot["window"], copies))
    return out


def detect_all(index: CorpusIndex, config: DetectorConfig, workers: int = 1) -> list[CopyEvent]:
    """Run detection over every window and return deduplicated events.

    The result is deterministic and independent of ``workers``: tasks are
    merged in window order before deduplication.
    """
    tokenized = tokenize_corpus(index, config)
    pairs = sorted((t.timestamp, t.tweet_id) for t in tokenized.values())
    windows = _windows_from_pairs(pairs, config)
    if workers <= 1:
        raw: list[CopyEvent] = []
        for task in windows:
            raw.extend(detect_window(task, tokenized, config))
    else:
        payloads = []
        for task in windows:
            members = tuple(
                (m.tweet_id, m.author_id, m.timestamp, m.tokens)
                for m in (tokenized[tid] for tid in task.tweet_ids)
            )
            payloads.append((members, task.window_index, config))
        raw = []
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for events in pool.map(_detect_task, payloads, chunksize=16):
                raw.extend(events)
    return dedupe_events(raw)


@dataclass(frozen=True)
class EventStats:
    """Involvement statistics over a deduplicated event list.

    ``n_events`` counts groups, ``n_copy_tweets`` counts copied tweets and
    ``n_author_pairs`` counts (event, copier author) incidences; the three
    are reported separately because "number of events" is ambiguous
    between them.
    """

    n_events: int
    n_copy_tweets: int
    n_author_pairs: int
    involved_users: int
    source_users: int
    copier_users: int
    source_only_users: int

    def as_dict(self) -> dict:
        return {
            "n_events": self.n_events,
            "n_copy_tweets": self.n_copy_tweets,
            "n_author_pairs": self.n_author_pairs,
            "involved_users": self.involved_users,
            "source_users": self.source_users,
            "copier_users": self.copier_users,
            "source_only_users": self.source_only_users,
        }


def event_stats(events: Sequence[CopyEvent]) -> EventStats:
    sources = {e.source_author for e in events}
    copiers = {c.author_id for e in events for c in e.copies}
    return EventStats(
        n_events=len(events),
        n_copy_tweets=sum(len(e.copies) for e in events),
        n_author_pairs=sum(len(e.copier_authors) for e in events),
        involved_users=len(sources | copiers),
        source_users=len(sources),
        copier_users=len(copiers),
        source_only_users=len(sources - copiers),
    )


def similar_pairs(index: CorpusIndex, config: DetectorConfig) -> set[tuple[int, int]]:
    """All (earlier, later) tweet-id pairs above threshold that share a window."""
    tokenized = tokenize_corpus(index, config)
    ordered = sorted((t.timestamp, t.tweet_id) for t in tokenized.values())
    found: set[tuple[int, int]] = set()
    for task in _windows_from_pairs(ordered, config):
        members = [tokenized[tid] for tid in task.tweet_ids]
        for i, j, _ in _window_pairs(members, config):
            found.add((members[i].tweet_id, members[j].tweet_id))
    return found


@dataclass(frozen=True)
class ThresholdStats:
    """Distributions produced by one step of the Jaccard threshold sweep."""

    threshold: float
    copied_tweets_per_user: dict[str, int]
    events_per_user_pair: dict[tuple[str, str], int]
    similar_pairs_per_user_pair: dict[tuple[str, str], int]
    n_similar_tweet_pairs: int
    n_events: int

    def user_cdf(self) -> list[tuple[float, float]]:
        return ecdf(self.copied_tweets_per_user.values())

    def pair_cdf(self) -> list[tuple[float, float]]:
        return ecdf(self.events_per_user_pair.values())


def sweep_jaccard(
    index: CorpusIndex, thresholds: Sequence[float], config: DetectorConfig | None = None
) -> list[ThresholdStats]:
    """Re-run detection at several thresholds and collect distributions.

    Window pair similarities are computed once at the lowest threshold and
    filtered per step, which is equivalent to a fresh run at each
    threshold.
    """
    if not thresholds:
        raise ValueError("no thresholds given")
    if any(not 0.0 < t <= 1.0 for t in thresholds):
        raise ValueError(f"thresholds must be in (0, 1]: {thresholds}")
    config = config or DetectorConfig()
    base = min(thresholds)
    tokenized = tokenize_corpus(index, config)
    ordered = sorted((t.timestamp, t.tweet_id) for t in tokenized.values())
    windows = _windows_from_pairs(ordered, config)
    per_window = []
    for task in windows:
        members = [tokenized[tid] for tid in task.tweet_ids]
        per_window.append((task.window_index, members, _window_pairs(members, config, threshold=base)))

    results = []
    for theta in sorted(thresholds):
        raw = []
        pair_ids: set[tuple[int, int]] = set()
        for window_index, members, pairs in per_window:
            kept = [p for p in pairs if p[2] >= theta]
            raw.extend(_events_from_pairs(members, kept, window_index, config))
            for i, j, _ in kept:
                pair_ids.add((members[i].tweet_id, members[j].tweet_id))
        events = dedupe_events(raw)

        copied_sets: dict[str, set[int]] = defaultdict(set)
        events_per_pair: dict[tuple[str, str], int] = defaultdict(int)
        for ev in events:
            for c in ev.copies:
                copied_sets[c.author_id].add(c.tweet_id)
            for author in sorted(ev.copier_authors):
                key = tuple(sorted((ev.source_author, author)))
                events_per_pair[key] += 1
        sim_per_pair: dict[tuple[str, str], int] = defaultdict(int)
        for i, j in pair_ids:
            a, b = tokenized[i].author_id, tokenized[j].author_id
            if a != b:
                sim_per_pair[tuple(sorted((a, b)))] += 1
        results.append(
            ThresholdStats(
                threshold=theta,
                copied_tweets_per_user={u: len(s) for u, s in sorted(copied_sets.items())},
                events_per_user_pair=dict(sorted(events_per_pair.items())),
                similar_pairs_per_user_pair=dict(sorted(sim_per_pair.items())),
                n_similar_tweet_pairs=len(pair_ids),
                n_events=len(events),
            )
        )
    return results


@dataclass(frozen=True)
class WindowSweepRow:
    window_minutes: float
    window_seconds: int
    slide_seconds: int
    n_similar_pairs: int
    elapsed_seconds: float


def sweep_window(
    index: CorpusIndex, window_minutes: Sequence[float], config: DetectorConfig | None = None
) -> list[WindowSweepRow]:
    """Count detected similar pairs for each window size (slide = half window)."""
    if any(w <= 0 for w in window_minutes):
        raise ValueError(f"window sizes must be positive: {window_minutes}")
    config = config or DetectorConfig()
    rows = []
    for minutes in window_minutes:
        window = minutes * 60
        if window != int(window) or int(window) % 2:
            raise ValueError(f"window of {minutes} minutes is not an even number of seconds")
        cfg = replace(config, window_seconds=int(window), slide_seconds=int(window) // 2)
        t0 = time.perf_counter()
        pairs = similar_pairs(index, cfg)
        rows.append(
            WindowSweepRow(minutes, cfg.window_seconds, cfg.slide_seconds, len(pairs), time.perf_counter() - t0)
        )
    return rows


def write_events(events: Iterable[CopyEvent], path: str | Path) -> None:
    """One JSON record per event, key-sorted for reproducible bytes."""
    with Path(path).open("w", encoding="utf-8") as fh:
        for ev in events:
            record = {
                "source_tweet_id": ev.source_tweet_id,
                "source_author": ev.source_author,
                "source_timestamp": ev.source_timestamp,
                "window_index": ev.window_index,
                "copies": [
                    {
                        "tweet_id": c.tweet_id,
                        "author_id": c.author_id,
                        "timestamp": c.timestamp,
                        "similarity": c.similarity,
                    }
                    for c in ev.copies
                ],
            }
            fh.write(json.dumps(record, sort_keys=True, separators=(",", ":")) + "\n")


def read_events(path: str | Path) -> list[CopyEvent]:
    events = []
    with Path(path).open("r", encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            obj = json.loads(line)
            copies = tuple(
                Copy(c["tweet_id"], c["author_id"], c["timestamp"], c["similarity"])
                for c in obj["copies"]
            )
            events.append(
                CopyEvent(
                    obj["source_tweet_id"],
                    obj["source_author"],
                    obj["source_timestamp"],
                    obj["window_index"],
                    copies,
                )
            )
    return events
