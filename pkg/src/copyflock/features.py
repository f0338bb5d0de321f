"""Per-account features and distribution comparison between account sets.

Content features come from the corpus, graph features from whichever
interaction layers were supplied. Distributions of a feature over two
account populations (typically bots vs clear accounts) are compared as
empirical CDFs with the Kolmogorov-Smirnov statistic, which also drives
the feature ranking.

Several definitions have no canonical form; the ones used here are
spelled out in ``FEATURE_DEFINITIONS`` and exported next to the table.
"""

from __future__ import annotations

import re
import statistics
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import AbstractSet, Mapping

import numpy as np

from .corpus import Account, CorpusIndex
from .layers import LayerGraph
from .tokens import is_emoji, word_tokens
from .util import ecdf

__all__ = [
    "FEATURE_DEFINITIONS",
    "CdfComparison",
    "Histogram",
    "compute_features",
    "compare_cdf",
    "rank_features",
    "creation_histogram",
    "write_feature_table",
]

_DIGIT_TOKEN = re.compile(r"[0-9]+(?:[.,:][0-9]+)*")

FEATURE_DEFINITIONS = {
    "capital_words_count": "tokens of length >= 2 whose alphabetic characters are all uppercase, counted over raw word tokens (artifact-defined)",
    "capital_words_pct": "capital_words_count as a percentage of all word tokens (artifact-defined)",
    "digits_count": "word tokens that are purely numeric, allowing .,: separators (artifact-defined)",
    "digits_pct": "digits_count as a percentage of all word tokens (artifact-defined)",
    "emoji_count": "codepoints inside the emoji blocks, counted over the raw text",
    "emoticon_count": "whitespace chunks exactly matching the shipped ASCII emoticon lexicon",
    "urls_per_tweet_avg": "mean number of structured urls per tweet",
    "words_per_tweet_stddev": "population standard deviation of the word-token count per tweet",
    "unique_retweet_hashtags": "distinct normalized hashtags over the account's retweets",
    "favorited_out_count": "favorite layer out-degree (distinct accounts favorited)",
    "favorited_out_pct": "favorited_out_count as a percentage of the favorite layer's node count (artifact-defined denominator)",
    "favoriters_in_count": "favorite layer in-degree (distinct favoriters)",
    "favoriters_in_pct": "favoriters_in_count as a percentage of the favorite layer's node count (artifact-defined denominator)",
    "mentions_out_count": "mention layer out-degree",
    "mentions_in_count": "mention layer in-degree",
    "quotes_out_degree": "quote layer out-degree",
    "quotes_in_degree": "quote layer in-degree",
    "quotes_out_weight": "summed weights of outgoing quote edges",
    "quotes_in_weight": "summed weights of incoming quote edges",
    "retweets_out_degree": "retweet layer out-degree",
    "retweets_in_degree": "retweet layer in-degree",
    "retweets_out_weight": "summed weights of outgoing retweet edges",
    "retweets_in_weight": "summed weights of incoming retweet edges",
    "friends_followers_jaccard": "Jaccard similarity of followee and follower account sets on the follow layer",
    "created_at": "account creation time (epoch seconds), where known",
}


def _load_emoticons() -> frozenset[str]:
    text = resources.files("copyflock").joinpath("data/emoticons.txt").read_text("utf-8")
    return frozenset(
        line.strip() for line in text.splitlines() if line.strip() and not line.startswith("#")
    )


_EMOTICONS = _load_emoticons()


def _is_capital_word(token: str) -> bool:
    if len(token) < 2:
        return False
    alpha = [ch for ch in token if ch.isalpha()]
    return bool(alpha) and all(ch.isupper() for ch in alpha)


def _content_features(tweets) -> dict[str, float]:
    n_capital = 0
    n_digit = 0
    n_words_total = 0
    n_emoji = 0
    n_emoticon = 0
    words_per_tweet = []
    url_counts = []
    rt_hashtags: set[str] = set()
    for t in tweets:
        words = word_tokens(t.text)
        words_per_tweet.append(len(words))
        n_words_total += len(words)
        n_capital += sum(_is_capital_word(w) for w in words)
        n_digit += sum(bool(_DIGIT_TOKEN.fullmatch(w)) for w in words)
        n_emoji += sum(is_emoji(ch) for ch in t.text)
        n_emoticon += sum(chunk in _EMOTICONS for chunk in t.text.split())
        url_counts.append(len(t.urls))
        if t.is_retweet:
            rt_hashtags.update(h.lstrip("#").lower() for h in t.hashtags)
    return {
        "capital_words_count": float(n_capital),
        "capital_words_pct": 100.0 * n_capital / n_words_total if n_words_total else 0.0,
        "digits_count": float(n_digit),
        "digits_pct": 100.0 * n_digit / n_words_total if n_words_total else 0.0,
        "emoji_count": float(n_emoji),
        "emoticon_count": float(n_emoticon),
        "urls_per_tweet_avg": statistics.fmean(url_counts),
        "words_per_tweet_stddev": statistics.pstdev(words_per_tweet),
        "unique_retweet_hashtags": float(len(rt_hashtags)),
    }


def _degree_maps(layer: LayerGraph) -> tuple[dict, dict, dict, dict]:
    out_deg: dict[str, int] = {}
    in_deg: dict[str, int] = {}
    out_w: dict[str, float] = {}
    in_w: dict[str, float] = {}
    for (a, b), w in layer.edges.items():
        out_deg[a] = out_deg.get(a, 0) + 1
        in_deg[b] = in_deg.get(b, 0) + 1
        out_w[a] = out_w.get(a, 0.0) + w
        in_w[b] = in_w.get(b, 0.0) + w
    return out_deg, in_deg, out_w, in_w


def compute_features(
    index: CorpusIndex,
    accounts: Mapping[str, Account] | None = None,
    layers: Mapping[str, LayerGraph] | None = None,
) -> dict[str, dict[str, float | None]]:
    """Feature table over all accounts seen in the corpus or accounts file.

    Accounts without tweets get null content features (and are excluded
    from CDFs downstream); graph features only appear for layers that
    were supplied.
    """
    accounts = accounts or {}
    layers = layers or {}

    by_author: dict[str, list] = {}
    for t in index:
        by_author.setdefault(t.author_id, []).append(t)
    universe = sorted(set(by_author) | set(accounts))

    content_names = [
        "capital_words_count", "capital_words_pct", "digits_count", "digits_pct",
        "emoji_count", "emoticon_count", "urls_per_tweet_avg",
        "words_per_tweet_stddev", "unique_retweet_hashtags",
    ]
    table: dict[str, dict[str, float | None]] = {}
    for account in universe:
        tweets = by_author.get(account)
        if tweets:
            row: dict[str, float | None] = dict(_content_features(tweets))
        else:
            row = {name: None for name in content_names}
        acct = accounts.get(account)
        row["created_at"] = float(acct.created_at) if acct and acct.created_at is not None else None
        table[account] = row

    if "favorite" in layers:
        fav = layers["favorite"]
        out_deg, in_deg, _, _ = _degree_maps(fav)
        n_nodes = len(fav.nodes)
        for account in universe:
            o, i = out_deg.get(account, 0), in_deg.get(account, 0)
            table[account]["favorited_out_count"] = float(o)
            table[account]["favoriters_in_count"] = float(i)
            table[account]["favorited_out_pct"] = 100.0 * o / n_nodes if n_nodes else 0.0
            table[account]["favoriters_in_pct"] = 100.0 * i / n_nodes if n_nodes else 0.0
    if "mention" in layers:
        out_deg, in_deg, _, _ = _degree_maps(layers["mention"])
        for account in universe:
            table[account]["mentions_out_count"] = float(out_deg.get(account, 0))
            table[account]["mentions_in_count"] = float(in_deg.get(account, 0))
    for kind, prefix in (("quote", "quotes"), ("retweet", "retweets")):
        if kind not in layers:
            continue
        out_deg, in_deg, out_w, in_w = _degree_maps(layers[kind])
        for account in universe:
            table[account][f"{prefix}_out_degree"] = float(out_deg.get(account, 0))
            table[account][f"{prefix}_in_degree"] = float(in_deg.get(account, 0))
            table[account][f"{prefix}_out_weight"] = float(out_w.get(account, 0.0))
            table[account][f"{prefix}_in_weight"] = float(in_w.get(account, 0.0))
    if "follow" in layers:
        followees: dict[str, set[str]] = {}
        followers: dict[str, set[str]] = {}
        for (a, b), _ in layers["follow"].edges.items():
            followees.setdefault(a, set()).add(b)
            followers.setdefault(b, set()).add(a)
        for account in universe:
            fe = followees.get(account, set())
            fo = followers.get(account, set())
            union = fe | fo
            table[account]["friends_followers_jaccard"] = (
                len(fe & fo) / len(union) if union else 0.0
            )
    return table


@dataclass(frozen=True)
class CdfComparison:
    feature: str
    cdf_a: tuple[tuple[float, float], ...]
    cdf_b: tuple[tuple[float, float], ...]
    ks: float


def _values(
    table: Mapping[str, Mapping[str, float | None]], feature: str, accounts: AbstractSet[str]
) -> np.ndarray:
    vals = [
        table[a][feature]
        for a in accounts
        if a in table and table[a].get(feature) is not None
    ]
    return np.asarray(sorted(vals), dtype=float)


def compare_cdf(
    table: Mapping[str, Mapping[str, float | None]],
    feature: str,
    set_a: AbstractSet[str],
    set_b: AbstractSet[str],
) -> CdfComparison:
    """Empirical CDFs of one feature over two account sets and their KS gap."""
    a = _values(table, feature, set_a)
    b = _values(table, feature, set_b)
    if a.size == 0 or b.size == 0:
        raise ValueError(f"feature {feature!r}: empty side after null exclusion")
    grid = np.union1d(a, b)
    fa = np.searchsorted(a, grid, side="right") / a.size
    fb = np.searchsorted(b, grid, side="right") / b.size
    ks = float(np.max(np.abs(fa - fb)))
    return CdfComparison(feature, tuple(ecdf(a)), tuple(ecdf(b)), ks)


def rank_features(
    table: Mapping[str, Mapping[str, float | None]],
    set_a: AbstractSet[str],
    set_b: AbstractSet[str],
) -> list[tuple[str, float]]:
    """Features sorted by KS statistic, descending; name breaks ties."""
    names = sorted({name for row in table.values() for name in row})
    ranked = [(name, compare_cdf(table, name, set_a, set_b).ks) for name in names]
    return sorted(ranked, key=lambda item: (-item[1], item[0]))


@dataclass(frozen=True)
class Histogram:
    bin_days: int
    bins: tuple[tuple[int, int, int], ...]  # (start, end, count), end exclusive

    @property
    def total(self) -> int:
        return sum(count for _, _, count in self.bins)


def creation_histogram(
    accounts: Mapping[str, Account], bots: AbstractSet[str], bin_days: int = 7
) -> Histogram:
    """Histogram of bot account creation dates in fixed-width day bins.

    Bins start at the earliest known creation date; counts sum to the
    number of bots with a known date. Unknown dates are skipped.
    """
    if bin_days <= 0:
        raise ValueError(f"bin_days must be positive, got {bin_days}")
    dates = sorted(
        accounts[a].created_at
        for a in bots
        if a in accounts and accounts[a].created_at is not None
    )
    if not dates:
        return Histogram(bin_days, ())
    width = bin_days * 86_400
    start = dates[0]
    n_bins = (dates[-1] - start) // width + 1
    counts = [0] * n_bins
    for d in dates:
        counts[(d - start) // width] += 1
    bins = tuple(
        (start + i * width, start + (i + 1) * width, counts[i]) for i in range(n_bins)
    )
    return Histogram(bin_days, bins)


def write_feature_table(
    table: Mapping[str, Mapping[str, float | None]], path
) -> None:
    """TSV with one row per account; null features are left empty."""
    names = sorted({name for row in table.values() for name in row})
    lines = ["account_id\t" + "\t".join(names)]
    for account in sorted(table):
        row = table[account]
        cells = []
        for name in names:
            v = row.get(name)
            cells.append("" if v is None else format(v, "g"))
        lines.append(account + "\t" + "\t".join(cells))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
