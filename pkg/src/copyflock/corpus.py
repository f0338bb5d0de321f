"""Tweet corpus ingestion, validation and time indexing.

The corpus is a newline-delimited file of JSON records, one tweet per line.
Loading is strict per record but forgiving per file: malformed lines are
reported with their line number and skipped, duplicate tweet ids keep the
first occurrence. The resulting index is immutable and sorted by
(timestamp, tweet_id), so it can be shared read-only across workers.
"""

from __future__ import annotations

import json
import logging
import math
from bisect import bisect_left
from collections import Counter
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, Iterator, Mapping

logger = logging.getLogger(__name__)

__all__ = [
    "Tweet",
    "Account",
    "Period",
    "LoadError",
    "CorpusIndex",
    "load_corpus",
    "load_accounts",
    "load_account_set",
    "slice_period",
    "calendar_year_periods",
]


@dataclass(frozen=True)
class Tweet:
    tweet_id: int
    author_id: str
    timestamp: int
    text: str
    hashtags: tuple[str, ...] = ()
    urls: tuple[str, ...] = ()
    source_app: str | None = None
    is_retweet: bool = False


@dataclass(frozen=True)
class Account:
    account_id: str
    created_at: int | None = None
    screen_name: str = ""
    yearly_tweet_counts: Mapping[str, int] = field(default_factory=dict)


@dataclass(frozen=True)
class Period:
    """Half-open time range [start, end), with a stable label."""

    label: str
    start: int
    end: int

    def __post_init__(self):
        if self.start >= self.end:
            raise ValueError(f"inverted period {self.label!r}: start {self.start} >= end {self.end}")

    def contains(self, timestamp: int) -> bool:
        return self.start <= timestamp < self.end


@dataclass(frozen=True)
class LoadError:
    line: int
    reason: str


class CorpusIndex:
    """Immutable view of a tweet corpus, sorted by (timestamp, tweet_id)."""

    __slots__ = ("tweets", "load_errors", "_by_id", "_timestamps")

    def __init__(self, tweets: Iterable[Tweet], load_errors: Iterable[LoadError] = ()):
        ordered = sorted(tweets, key=lambda t: (t.timestamp, t.tweet_id))
        by_id: dict[int, Tweet] = {}
        for t in ordered:
            if t.tweet_id in by_id:
                raise ValueError(f"duplicate tweet_id {t.tweet_id}")
            by_id[t.tweet_id] = t
        self.tweets: tuple[Tweet, ...] = tuple(ordered)
        self.load_errors: tuple[LoadError, ...] = tuple(load_errors)
        self._by_id = by_id
        self._timestamps = [t.timestamp for t in ordered]

    @classmethod
    def from_tweets(cls, tweets: Iterable[Tweet]) -> "CorpusIndex":
        return cls(tweets)

    def __len__(self) -> int:
        return len(self.tweets)

    def __iter__(self) -> Iterator[Tweet]:
        return iter(self.tweets)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CorpusIndex):
            return NotImplemented
        return self.tweets == other.tweets

    def tweet(self, tweet_id: int) -> Tweet:
        return self._by_id[tweet_id]

    def __contains__(self, tweet_id: int) -> bool:
        return tweet_id in self._by_id

    def author_counts(self) -> Counter:
        return Counter(t.author_id for t in self.tweets)

    @property
    def min_timestamp(self) -> int | None:
        return self._timestamps[0] if self._timestamps else None

    @property
    def max_timestamp(self) -> int | None:
        return self._timestamps[-1] if self._timestamps else None

    def slice(self, start: int, end: int) -> "CorpusIndex":
        """Sub-index of tweets with start <= timestamp < end."""
        if start >= end:
            raise ValueError(f"inverted range: start {start} >= end {end}")
        lo = bisect_left(self._timestamps, start)
        hi = bisect_left(self._timestamps, end)
        return CorpusIndex(self.tweets[lo:hi])


def _parse_tweet(obj) -> Tweet:
    if not isinstance(obj, dict):
        raise ValueError("record is not an object")
    for key in ("tweet_id", "author_id", "timestamp", "text"):
        if key not in obj:
            raise ValueError(f"missing required key {key!r}")
    tweet_id = obj["tweet_id"]
    if isinstance(tweet_id, bool) or not isinstance(tweet_id, int):
        raise ValueError(f"tweet_id must be an integer, got {tweet_id!r}")
    author = obj["author_id"]
    if isinstance(author, bool) or not isinstance(author, (str, int)):
        raise ValueError(f"author_id must be a string or integer, got {author!r}")
    author = str(author)
    if not author:
        raise ValueError("author_id is empty")
    ts = obj["timestamp"]
    if isinstance(ts, bool) or not isinstance(ts, (int, float)) or not math.isfinite(ts):
        raise ValueError(f"timestamp must be a finite number, got {ts!r}")
    if ts < 0:
        raise ValueError(f"timestamp is negative: {ts!r}")
    text = obj["text"]
    if not isinstance(text, str):
        raise ValueError(f"text must be a string, got {type(text).__name__}")

    def str_list(key) -> tuple[str, ...]:
        raw = obj.get(key, [])
        if not isinstance(raw, list) or any(not isinstance(x, str) for x in raw):
            raise ValueError(f"{key} must be a list of strings")
        return tuple(raw)

    hashtags = tuple(h.lstrip("#") for h in str_list("hashtags") if h.lstrip("#"))
    urls = tuple(u for u in str_list("urls") if u)
    source_app = obj.get("source_app")
    if source_app is not None and not isinstance(source_app, str):
        raise ValueError("source_app must be a string or null")
    is_retweet = obj.get("is_retweet", False)
    if not isinstance(is_retweet, bool):
        raise ValueError("is_retweet must be a boolean")
    return Tweet(tweet_id, author, int(ts), text, hashtags, urls, source_app, is_retweet)


def load_corpus(path: str | Path) -> CorpusIndex:
    """Load a newline-delimited tweet file into a sorted index.

    Unreadable files raise; malformed records and duplicate tweet ids are
    skipped and reported in ``CorpusIndex.load_errors`` with 1-based line
    numbers (first occurrence of a duplicate id wins).
    """
    path = Path(path)
    tweets: list[Tweet] = []
    seen: set[int] = set()
    errors: list[LoadError] = []
    with path.open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                if line.strip("\r\n"):
                    errors.append(LoadError(lineno, "blank record"))
                continue
            try:
                tweet = _parse_tweet(json.loads(line))
            except (json.JSONDecodeError, ValueError) as exc:
                errors.append(LoadError(lineno, str(exc)))
                continue
            if tweet.tweet_id in seen:
                errors.append(LoadError(lineno, f"duplicate tweet_id {tweet.tweet_id}"))
                continue
            seen.add(tweet.tweet_id)
            tweets.append(tweet)
    for err in errors:
        logger.warning("%s:%d skipped: %s", path, err.line, err.reason)
    logger.info("loaded %d tweets from %s (%d skipped)", len(tweets), path, len(errors))
    return CorpusIndex(tweets, errors)


def _parse_account(obj) -> Account:
    if not isinstance(obj, dict):
        raise ValueError("record is not an object")
    if "account_id" not in obj:
        raise ValueError("missing required key 'account_id'")
    account_id = obj["account_id"]
    if isinstance(account_id, bool) or not isinstance(account_id, (str, int)):
        raise ValueError(f"account_id must be a string or integer, got {account_id!r}")
    created = obj.get("created_at")
    if created is not None:
        if isinstance(created, bool) or not isinstance(created, (int, float)) or not math.isfinite(created):
            raise ValueError(f"created_at must be a finite number or null, got {created!r}")
        created = int(created)
    screen_name = obj.get("screen_name", "")
    if not isinstance(screen_name, str):
        raise ValueError("screen_name must be a string")
    counts = obj.get("yearly_tweet_counts", {})
    if not isinstance(counts, dict):
        raise ValueError("yearly_tweet_counts must be an object")
    parsed_counts = {}
    for k, v in counts.items():
        if isinstance(v, bool) or not isinstance(v, int) or v < 0:
            raise ValueError(f"yearly_tweet_counts[{k!r}] must be a non-negative integer")
        parsed_counts[str(k)] = v
    return Account(str(account_id), created, screen_name, parsed_counts)


def load_accounts(path: str | Path) -> tuple[dict[str, Account], list[LoadError]]:
    """Load an accounts file; duplicates keep the first occurrence."""
    path = Path(path)
    accounts: dict[str, Account] = {}
    errors: list[LoadError] = []
    with path.open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                acct = _parse_account(json.loads(line))
            except (json.JSONDecodeError, ValueError) as exc:
                errors.append(LoadError(lineno, str(exc)))
                continue
            if acct.account_id in accounts:
                errors.append(LoadError(lineno, f"duplicate account_id {acct.account_id}"))
                continue
            accounts[acct.account_id] = acct
    for err in errors:
        logger.warning("%s:%d skipped: %s", path, err.line, err.reason)
    return accounts, errors


def load_account_set(path: str | Path) -> set[str]:
    """One account id per line; blank lines ignored."""
    out = set()
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if line:
            out.add(line)
    return out


def slice_period(index: CorpusIndex, period: Period) -> CorpusIndex:
    """Tweets with period.start <= timestamp < period.end, order preserved."""
    return index.slice(period.start, period.end)


def _year_start(year: int) -> int:
    return int(datetime(year, 1, 1, tzinfo=timezone.utc).timestamp())


def calendar_year_periods(index: CorpusIndex) -> list[Period]:
    """One period per UTC calendar year spanned by the corpus."""
    if len(index) == 0:
        return []
    first = datetime.fromtimestamp(index.min_timestamp, tz=timezone.utc).year
    last = datetime.fromtimestamp(index.max_timestamp, tz=timezone.utc).year
    return [Period(str(y), _year_start(y), _year_start(y + 1)) for y in range(first, last + 1)]
