"""Independent reference implementations used to validate the fast paths.

The detector oracle re-derives copy events the straightforward way: walk
every aligned window over the time axis, membership by linear scan,
similarity by a literal Jaccard formula, grouping by BFS. No indexing, no
prefilters, no parallelism. The community oracle enumerates partitions
outright.
"""

from __future__ import annotations

import random
from collections import deque

from copyflock.community import modularity_score
from copyflock.corpus import Tweet
from copyflock.detector import DetectorConfig
from copyflock.tokens import tokenize


def oracle_events(tweets, config: DetectorConfig):
    """Reference detection result as {source_id: (author, frozenset of copies)}.

    Copies are (tweet_id, author_id, timestamp, similarity) tuples, merged
    across windows by source tweet id exactly like the real pipeline.
    """
    eligible = []
    for t in tweets:
        if t.is_retweet and not config.include_retweets:
            continue
        toks = tokenize(t.text, t.hashtags, t.urls, lowercase=config.lowercase).tokens
        if len(toks) >= config.min_tokens:
            eligible.append((t, toks))
    if not eligible:
        return {}

    s, n = config.slide_seconds, config.window_seconds
    lo = min(t.timestamp for t, _ in eligible)
    hi = max(t.timestamp for t, _ in eligible)
    merged: dict[int, dict] = {}

    for m in range((lo - n) // s + 1, hi // s + 1):
        start, end = m * s, m * s + n
        members = [(t, toks) for t, toks in eligible if start <= t.timestamp < end]
        members.sort(key=lambda p: (p[0].timestamp, p[0].tweet_id))
        k = len(members)
        adjacency = {i: [] for i in range(k)}
        for i in range(k):
            for j in range(i + 1, k):
                ta, tb = members[i][1], members[j][1]
                union = ta | tb
                sim = len(ta & tb) / len(union) if union else 0.0
                if sim >= config.jaccard_threshold:
                    adjacency[i].append(j)
                    adjacency[j].append(i)
        seen = set()
        for i in range(k):
            if i in seen:
                continue
            queue = deque([i])
            comp = []
            seen.add(i)
            while queue:
                x = queue.popleft()
                comp.append(x)
                for y in adjacency[x]:
                    if y not in seen:
                        seen.add(y)
                        queue.append(y)
            if len(comp) < 2:
                continue
            comp.sort()
            src, src_toks = members[comp[0]]
            copies = {}
            for idx in comp[1:]:
                t, toks = members[idx]
                if not config.allow_self_copies and t.author_id == src.author_id:
                    continue
                union = src_toks | toks
                sim = len(src_toks & toks) / len(union) if union else 0.0
                copies[t.tweet_id] = (t.tweet_id, t.author_id, t.timestamp, sim)
            if not copies:
                continue
            slot = merged.setdefault(src.tweet_id, {"author": src.author_id, "copies": {}})
            slot["copies"].update(copies)

    return {
        src: (slot["author"], frozenset(slot["copies"].values()))
        for src, slot in merged.items()
    }


def events_as_oracle_view(events):
    """Project the detector's output into the oracle's comparison shape."""
    return {
        ev.source_tweet_id: (
            ev.source_author,
            frozenset(
                (c.tweet_id, c.author_id, c.timestamp, c.similarity) for c in ev.copies
            ),
        )
        for ev in events
    }


def tumbling_window_pairs(tweets, config: DetectorConfig) -> set[tuple[int, int]]:
    """Similar pairs found with non-overlapping windows of the same length."""
    eligible = []
    for t in tweets:
        if t.is_retweet and not config.include_retweets:
            continue
        toks = tokenize(t.text, t.hashtags, t.urls, lowercase=config.lowercase).tokens
        if len(toks) >= config.min_tokens:
            eligible.append((t, toks))
    n = config.window_seconds
    found = set()
    buckets: dict[int, list] = {}
    for t, toks in eligible:
        buckets.setdefault(t.timestamp // n, []).append((t, toks))
    for bucket in buckets.values():
        bucket.sort(key=lambda p: (p[0].timestamp, p[0].tweet_id))
        for i in range(len(bucket)):
            for j in range(i + 1, len(bucket)):
                ta, tb = bucket[i][1], bucket[j][1]
                union = ta | tb
                sim = len(ta & tb) / len(union) if union else 0.0
                if sim >= config.jaccard_threshold:
                    found.add((bucket[i][0].tweet_id, bucket[j][0].tweet_id))
    return found


def best_partition_upto_two(nodes, weights, resolution=1.0):
    """Exhaustive best modularity over all 1- and 2-partitions of the nodes."""
    order = sorted(nodes)
    k = len(order)
    best_q = modularity_score({n: 0 for n in order}, order, weights, resolution)
    best = {n: 0 for n in order}
    for mask in range(1, 2 ** (k - 1)):
        part = {n: (mask >> i) & 1 for i, n in enumerate(order)}
        q = modularity_score(part, order, weights, resolution)
        if q > best_q:
            best_q, best = q, part
    return best, best_q


def random_corpus(seed: int, n_tweets: int | None = None, span: int | None = None) -> list[Tweet]:
    """Adversarial random corpus: tiny shared vocabulary, planted copy chains
    with mutations, short tweets, retweets, self-copies and timestamp ties."""
    rng = random.Random(seed)
    n = n_tweets if n_tweets is not None else rng.randint(40, 400)
    n_users = max(3, n // 8)
    span = span if span is not None else rng.choice([1_800, 7_200, 86_400])
    vocab = [f"t{k}" for k in range(rng.choice([8, 15, 40, 120]))]
    tweets: list[Tweet] = []
    tid = 1
    for _ in range(n):
        ts = rng.randrange(span)
        author = f"u{rng.randrange(n_users)}"
        length = rng.randint(1, 8)
        words = rng.choices(vocab, k=length)
        hashtags = [f"h{rng.randrange(5)}"] if rng.random() < 0.15 else []
        urls = [f"http://x.co/{rng.randrange(9)}"] if rng.random() < 0.1 else []
        tweets.append(
            Tweet(tid, author, ts, " ".join(words), tuple(hashtags), tuple(urls),
                  None, rng.random() < 0.1)
        )
        tid += 1
    # planted near-duplicate chains, some crossing window boundaries
    for _ in range(max(2, n // 10)):
        base = rng.choice(tweets)
        words = base.text.split()
        chain = rng.randint(1, 4)
        ts = base.timestamp
        for _ in range(chain):
            mutated = list(words)
            if mutated and rng.random() < 0.5:
                mutated[rng.randrange(len(mutated))] = f"m{rng.randrange(1000)}"
            ts += rng.choice([0, 1, 30, 299, 300, 301, 599, 600, 601])
            author = base.author_id if rng.random() < 0.2 else f"u{rng.randrange(n_users)}"
            tweets.append(
                Tweet(tid, author, ts, " ".join(mutated), base.hashtags, base.urls,
                      None, rng.random() < 0.05)
            )
            tid += 1
            words = mutated
    return tweets
