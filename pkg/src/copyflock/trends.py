"""Interaction of bot accounts with trending topics.

For every hashtag a bot posted, trend snapshots are searched within a
horizon (24 hours by default) on both sides of the tweet: the "before"
interval is [t - horizon, t), the "after" interval is (t, t + horizon],
and a snapshot exactly at t counts on both sides. Flags are per-account
disjunctions over all of the account's hashtag tweets, so an account can
be both trending-before and trending-after via different hashtags without
being before-only or after-only.
"""

from __future__ import annotations

import logging
from bisect import bisect_left, bisect_right
from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .corpus import Tweet

logger = logging.getLogger(__name__)

__all__ = [
    "TrendSnapshot",
    "AccountTrendFlags",
    "TrendInteractionReport",
    "load_snapshots",
    "trend_interaction",
    "normalize_topic",
]


def normalize_topic(topic: str) -> str:
    return topic.strip().lstrip("#").lower()


@dataclass(frozen=True)
class TrendSnapshot:
    timestamp: int
    topics: frozenset[str]


def load_snapshots(path: str | Path) -> list[TrendSnapshot]:
    """TSV rows (timestamp, topic), grouped per timestamp and time-sorted."""
    path = Path(path)
    grouped: dict[int, set[str]] = defaultdict(set)
    for lineno, row in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        if not row.strip() or row.startswith("#"):
            continue
        parts = row.split("\t")
        if len(parts) != 2:
            raise ValueError(f"{path}:{lineno}: expected 2 columns, got {len(parts)}")
        try:
            ts = int(parts[0])
        except ValueError:
            raise ValueError(f"{path}:{lineno}: bad timestamp {parts[0]!r}") from None
        topic = normalize_topic(parts[1])
        if topic:
            grouped[ts].add(topic)
    return [TrendSnapshot(ts, frozenset(grouped[ts])) for ts in sorted(grouped)]


@dataclass(frozen=True)
class AccountTrendFlags:
    posted_hashtags: bool
    trending_before: bool
    trending_after: bool

    @property
    def before_only(self) -> bool:
        return self.trending_before and not self.trending_after

    @property
    def after_only(self) -> bool:
        return self.trending_after and not self.trending_before

    def as_dict(self) -> dict:
        return {
            "posted_hashtags": self.posted_hashtags,
            "trending_before": self.trending_before,
            "trending_after": self.trending_after,
            "before_only": self.before_only,
            "after_only": self.after_only,
        }


@dataclass(frozen=True)
class TrendInteractionReport:
    per_account: Mapping[str, AccountTrendFlags]
    horizon_seconds: int
    no_snapshots: bool

    def aggregates(self) -> dict[str, int]:
        flags = self.per_account.values()
        return {
            "accounts": len(self.per_account),
            "posted_hashtags": sum(f.posted_hashtags for f in flags),
            "trending_any": sum(f.trending_before or f.trending_after for f in flags),
            "trending_before": sum(f.trending_before for f in flags),
            "before_only": sum(f.before_only for f in flags),
            "trending_after": sum(f.trending_after for f in flags),
            "after_only": sum(f.after_only for f in flags),
        }

    def as_dict(self) -> dict:
        return {
            "horizon_seconds": self.horizon_seconds,
            "no_snapshots": self.no_snapshots,
            "aggregates": self.aggregates(),
            "accounts": {a: f.as_dict() for a, f in sorted(self.per_account.items())},
        }


def trend_interaction(
    tweets: Iterable[Tweet],
    snapshots: Sequence[TrendSnapshot],
    horizon: int = 86_400,
) -> TrendInteractionReport:
    """Flag accounts whose posted hashtags were trending around their tweets.

    Matching is exact on normalized topics (case- and '#'-insensitive).
    With no snapshots the report carries all trend flags false plus a
    warning marker.
    """
    if horizon <= 0:
        raise ValueError(f"horizon must be positive, got {horizon}")
    times = [s.timestamp for s in snapshots]
    if any(times[i] > times[i + 1] for i in range(len(times) - 1)):
        raise ValueError("snapshots must be sorted by timestamp")
    if not snapshots:
        logger.warning("no trend snapshots given; all trend flags will be false")

    # topic -> sorted timestamps at which it was trending
    topic_times: dict[str, list[int]] = defaultdict(list)
    for snap in snapshots:
        for topic in snap.topics:
            topic_times[normalize_topic(topic)].append(snap.timestamp)

    def trending_in(topic: str, lo: int, hi: int) -> bool:
        """Any snapshot of this topic with lo <= timestamp <= hi."""
        ts = topic_times.get(topic)
        if not ts:
            return False
        i = bisect_left(ts, lo)
        return i < len(ts) and ts[i] <= hi

    posted: dict[str, bool] = {}
    before: dict[str, bool] = {}
    after: dict[str, bool] = {}
    for tweet in tweets:
        account = tweet.author_id
        posted.setdefault(account, False)
        before.setdefault(account, False)
        after.setdefault(account, False)
        if not tweet.hashtags:
            continue
        posted[account] = True
        for tag in tweet.hashtags:
            topic = normalize_topic(tag)
            if not topic:
                continue
            # a snapshot exactly at the tweet time counts on both sides
            if not before[account] and trending_in(topic, tweet.timestamp - horizon, tweet.timestamp):
                before[account] = True
            if not after[account] and trending_in(topic, tweet.timestamp, tweet.timestamp + horizon):
                after[account] = True

    per_account = {
        a: AccountTrendFlags(posted[a], before[a], after[a]) for a in sorted(posted)
    }
    return TrendInteractionReport(per_account, horizon, no_snapshots=not snapshots)
