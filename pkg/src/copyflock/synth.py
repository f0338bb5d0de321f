"""Synthetic labeled corpora with planted botnets.

Generates everything the pipeline consumes: a tweet corpus where botnet
members copy each other's campaign tweets within a bounded delay, an
accounts file with clustered bot creation dates, trend snapshots, the
seven interaction-layer edge files, an exemplar list and ground-truth
labels. All randomness flows from one ``random.Random(seed)`` (Mersenne
Twister, stable across platforms), so a seed fixes every output byte.

Campaign vocabularies are disjoint from each other and from the
background vocabulary, which makes the expected copy-to-source Jaccard
exactly (n - r) / (n + r) for n word tokens and r mutated tokens; the
value is recorded in the manifest per botnet. Background collisions are
ruled out analytically (union bound recorded in the manifest) and spot
checked on sampled pairs at generation time.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import asdict, dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Sequence

from .tokens import jaccard, tokenize
from .util import stable_json

__all__ = ["BotnetSpec", "ScenarioSpec", "SynthOutput", "generate"]


@dataclass(frozen=True)
class BotnetSpec:
    name: str
    size: int
    campaigns: int
    max_delay_seconds: int = 120
    mutation_rate: float = 0.0
    creation_date: int = 1_420_070_400  # 2015-01-01
    campaign_tokens: int = 9
    with_hashtags: bool = True

    def __post_init__(self):
        if self.size < 2:
            raise ValueError(f"botnet {self.name!r}: size must be >= 2")
        if self.campaigns < 1:
            raise ValueError(f"botnet {self.name!r}: needs at least one campaign")
        if not 0.0 <= self.mutation_rate <= 1.0:
            raise ValueError(f"botnet {self.name!r}: mutation_rate must be in [0, 1]")
        if self.max_delay_seconds < 1:
            raise ValueError(f"botnet {self.name!r}: max_delay_seconds must be >= 1")
        if self.campaign_tokens < 2:
            raise ValueError(f"botnet {self.name!r}: campaign_tokens must be >= 2")

    @property
    def mutated_tokens(self) -> int:
        return math.ceil(self.mutation_rate * self.campaign_tokens)

    @property
    def expected_copy_jaccard(self) -> float:
        n, r = self.campaign_tokens, self.mutated_tokens
        return (n - r) / (n + r)


@dataclass(frozen=True)
class ScenarioSpec:
    seed: int = 0
    start: int = 1_451_606_400  # 2016-01-01
    duration_seconds: int = 30 * 86_400
    background_users: int = 100
    background_tweets: int = 2_000
    background_hashtag_prob: float = 0.2
    vocab_size: int = 50_000
    tweet_tokens_min: int = 6
    tweet_tokens_max: int = 12
    botnets: tuple[BotnetSpec, ...] = ()
    snapshot_interval: int = 6 * 3_600
    trending_topics_per_snapshot: int = 5
    with_layers: bool = True
    detection_threshold: float = 0.70  # used only for feasibility warnings

    def __post_init__(self):
        if self.duration_seconds <= 0:
            raise ValueError("duration must be positive")
        if self.background_users < 1:
            raise ValueError("need at least one background user")
        if not 2 <= self.tweet_tokens_min <= self.tweet_tokens_max:
            raise ValueError("tweet token bounds must satisfy 2 <= min <= max")
        names = [b.name for b in self.botnets]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate botnet names: {names}")

    @classmethod
    def from_json(cls, path: str | Path) -> "ScenarioSpec":
        obj = json.loads(Path(path).read_text(encoding="utf-8"))
        botnets = tuple(BotnetSpec(**b) for b in obj.pop("botnets", []))
        return cls(botnets=botnets, **obj)

    def as_dict(self) -> dict:
        d = asdict(self)
        d["botnets"] = [asdict(b) for b in self.botnets]
        return d


@dataclass(frozen=True)
class SynthOutput:
    out_dir: Path
    corpus: Path
    accounts: Path
    bots: Path
    ground_truth: Path
    snapshots: Path
    exemplars: Path
    layer_files: dict[str, Path]
    manifest: Path


def _background_text(rng: random.Random, spec: ScenarioSpec) -> tuple[str, list[str]]:
    n = rng.randint(spec.tweet_tokens_min, spec.tweet_tokens_max)
    words = [f"w{idx}" for idx in rng.sample(range(spec.vocab_size), n)]
    hashtags = []
    if rng.random() < spec.background_hashtag_prob:
        hashtags = [f"bgtag{rng.randrange(500)}"]
    text = " ".join(words + ["#" + h for h in hashtags])
    return text, hashtags


def _collision_bound(spec: ScenarioSpec) -> float:
    """Union bound on P(jaccard >= threshold) for two random background tweets."""
    n = spec.tweet_tokens_max
    theta = spec.detection_threshold
    needed = math.ceil(theta * 2 * spec.tweet_tokens_min / (1 + theta))
    if needed <= 0:
        return 1.0
    return math.comb(n, needed) * (n / spec.vocab_size) ** needed


def generate(spec: ScenarioSpec, out_dir: str | Path) -> SynthOutput:
    """Write a full labeled scenario under ``out_dir``.

    Deterministic per seed; re-running with the same spec produces
    byte-identical files.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    layers_dir = out_dir / "layers"
    if spec.with_layers:
        layers_dir.mkdir(exist_ok=True)
    rng = random.Random(spec.seed)
    warnings: list[str] = []

    background_ids = [f"user{i:05d}" for i in range(spec.background_users)]
    bot_ids: dict[str, list[str]] = {
        b.name: [f"bot_{b.name}_{i:02d}" for i in range(b.size)] for b in spec.botnets
    }

    # --- tweets -------------------------------------------------------------
    pending = []  # (timestamp, author, text, hashtags, kind, campaign_slot)
    for _ in range(spec.background_tweets):
        ts = spec.start + rng.randrange(spec.duration_seconds)
        author = rng.choice(background_ids)
        text, hashtags = _background_text(rng, spec)
        pending.append([ts, author, text, hashtags, "background", None])

    campaigns: list[dict] = []
    for b in spec.botnets:
        members = bot_ids[b.name]
        if b.expected_copy_jaccard < spec.detection_threshold:
            warnings.append(
                f"botnet {b.name!r}: expected copy jaccard "
                f"{b.expected_copy_jaccard:.3f} is below the detection threshold "
                f"{spec.detection_threshold:.2f}; copies will likely go undetected"
            )
        for c in range(b.campaigns):
            t0 = spec.start + rng.randrange(max(1, spec.duration_seconds - b.max_delay_seconds - 1))
            src = rng.choice(members)
            words = [f"c_{b.name}_{c}_{k}" for k in range(b.campaign_tokens)]
            hashtags = [f"camp_{b.name}_{c}"] if b.with_hashtags else []
            text = " ".join(words + ["#" + h for h in hashtags])
            slot = {"botnet": b.name, "campaign": c, "source": None, "copies": []}
            campaigns.append(slot)
            pending.append([t0, src, text, list(hashtags), "source", slot])
            r = b.mutated_tokens
            for member in members:
                if member == src:
                    continue
                delay = rng.randint(1, b.max_delay_seconds)
                mutated = list(words)
                if r:
                    positions = rng.sample(range(b.campaign_tokens), r)
                    for p in positions:
                        mutated[p] = f"d{rng.randrange(10 ** 9)}"
                copy_text = " ".join(mutated + ["#" + h for h in hashtags])
                pending.append([t0 + delay, member, copy_text, list(hashtags), "copy", slot])

    pending.sort(key=lambda rec: (rec[0], rec[1], rec[2]))
    corpus_path = out_dir / "corpus.ndjson"
    with corpus_path.open("w", encoding="utf-8") as fh:
        for tweet_id, rec in enumerate(pending, start=1):
            ts, author, text, hashtags, kind, slot = rec
            if kind == "source":
                slot["source"] = tweet_id
            elif kind == "copy":
                slot["copies"].append(tweet_id)
            record = {
                "tweet_id": tweet_id,
                "author_id": author,
                "timestamp": ts,
                "text": text,
                "hashtags": hashtags,
                "urls": [],
                "source_app": "synth",
                "is_retweet": False,
            }
            fh.write(json.dumps(record, sort_keys=True, separators=(",", ":")) + "\n")

    # --- spot check background collisions ------------------------------------
    bg_tokens = [
        tokenize(rec[2], rec[3], ()).tokens for rec in pending if rec[4] == "background"
    ]
    max_seen = 0.0
    n_sampled = 0
    if len(bg_tokens) >= 2:
        n_sampled = min(2_000, len(bg_tokens) * (len(bg_tokens) - 1) // 2)
        for _ in range(n_sampled):
            a, b_ = rng.sample(range(len(bg_tokens)), 2)
            max_seen = max(max_seen, jaccard(bg_tokens[a], bg_tokens[b_]))
    if max_seen >= spec.detection_threshold:
        warnings.append(
            f"sampled background pair reached jaccard {max_seen:.3f} at or above the "
            f"detection threshold; enlarge vocab_size"
        )

    # --- accounts -------------------------------------------------------------
    accounts_path = out_dir / "accounts.ndjson"
    account_rows = []
    for b in spec.botnets:
        for member in bot_ids[b.name]:
            created = b.creation_date + rng.randrange(3 * 86_400)
            account_rows.append((member, created))
    for user in background_ids:
        created = spec.start - rng.randrange(5 * 365 * 86_400)
        account_rows.append((user, created))
    account_rows.sort()
    with accounts_path.open("w", encoding="utf-8") as fh:
        for account_id, created in account_rows:
            record = {"account_id": account_id, "created_at": created, "screen_name": account_id}
            fh.write(json.dumps(record, sort_keys=True, separators=(",", ":")) + "\n")

    # --- ground truth ---------------------------------------------------------
    all_bots = sorted(m for members in bot_ids.values() for m in members)
    bots_path = out_dir / "bots.txt"
    bots_path.write_text("\n".join(all_bots) + ("\n" if all_bots else ""), encoding="utf-8")
    truth_path = out_dir / "ground_truth.json"
    truth = {
        "botnets": {name: sorted(members) for name, members in sorted(bot_ids.items())},
        "campaigns": [
            {
                "botnet": c["botnet"],
                "campaign": c["campaign"],
                "source_tweet_id": c["source"],
                "copier_tweet_ids": sorted(c["copies"]),
            }
            for c in campaigns
        ],
    }
    truth_path.write_text(stable_json(truth), encoding="utf-8")

    # --- trend snapshots --------------------------------------------------------
    snapshots_path = out_dir / "trends.tsv"
    campaign_by_time = sorted(
        (rec[0], rec[5]) for rec in pending if rec[4] == "source" and rec[3]
    )
    snap_rows = []
    t = spec.start
    while t <= spec.start + spec.duration_seconds:
        topics = {f"topic{rng.randrange(200)}" for _ in range(spec.trending_topics_per_snapshot)}
        # trend roughly half of the campaign hashtags whose source tweet
        # falls within a day of this snapshot
        for ts_c, slot in campaign_by_time:
            if abs(ts_c - t) <= 86_400 and rng.random() < 0.5:
                topics.add(f"camp_{slot['botnet']}_{slot['campaign']}")
        for topic in sorted(topics):
            snap_rows.append(f"{t}\t{topic}")
        t += spec.snapshot_interval
    snapshots_path.write_text("\n".join(snap_rows) + "\n", encoding="utf-8")

    # --- exemplars ---------------------------------------------------------------
    exemplars_path = out_dir / "exemplars.tsv"
    quota = {"politics": 12, "news_media": 8, "celebrities": 4, "brands": 3}
    ex_rows = []
    pool = list(background_ids)
    for category in sorted(quota):
        take = min(quota[category], len(pool))
        chosen = [pool.pop(rng.randrange(len(pool))) for _ in range(take)]
        for account in sorted(chosen):
            ex_rows.append(f"{category}\t{account}")
    exemplars_path.write_text("\n".join(ex_rows) + "\n", encoding="utf-8")

    # --- layer graphs ---------------------------------------------------------------
    layer_files: dict[str, Path] = {}
    if spec.with_layers:
        layer_files = _write_layers(layers_dir, rng, spec, bot_ids, background_ids)

    # --- manifest ----------------------------------------------------------------------
    manifest = {
        "spec": spec.as_dict(),
        "seed": spec.seed,
        "prng": "python random.Random (Mersenne Twister)",
        "n_tweets": len(pending),
        "n_background_tweets": sum(1 for rec in pending if rec[4] == "background"),
        "n_bots": len(all_bots),
        "n_campaigns": len(campaigns),
        "expected_copy_jaccard": {
            b.name: b.expected_copy_jaccard for b in spec.botnets
        },
        "background_collision": {
            "analytic_bound": _collision_bound(spec),
            "pairs_sampled": n_sampled,
            "max_jaccard_seen": max_seen,
        },
        "warnings": warnings,
    }
    manifest_path = out_dir / "manifest.json"
    manifest_path.write_text(stable_json(manifest), encoding="utf-8")

    return SynthOutput(
        out_dir=out_dir,
        corpus=corpus_path,
        accounts=accounts_path,
        bots=bots_path,
        ground_truth=truth_path,
        snapshots=snapshots_path,
        exemplars=exemplars_path,
        layer_files=layer_files,
        manifest=manifest_path,
    )


def _write_layers(
    layers_dir: Path,
    rng: random.Random,
    spec: ScenarioSpec,
    bot_ids: dict[str, list[str]],
    background_ids: Sequence[str],
) -> dict[str, Path]:
    everyone = sorted(background_ids) + sorted(m for ms in bot_ids.values() for m in ms)
    files: dict[str, Path] = {}

    follow_edges: set[tuple[str, str]] = set()
    for members in bot_ids.values():
        for a, b in combinations(sorted(members), 2):
            if rng.random() < 0.85:
                follow_edges.add((a, b))
            if rng.random() < 0.85:
                follow_edges.add((b, a))
    for user in everyone:
        for _ in range(4):
            other = rng.choice(everyone)
            if other != user:
                follow_edges.add((user, other))
    files["follow"] = layers_dir / "follow.tsv"
    files["follow"].write_text(
        "\n".join(f"{a}\t{b}" for a, b in sorted(follow_edges)) + "\n", encoding="utf-8"
    )

    for kind in ("retweet", "favorite", "mention", "reply", "quote"):
        edges: dict[tuple[str, str], int] = {}
        for members in bot_ids.values():
            ordered = sorted(members)
            for a in ordered:
                for _ in range(3):
                    b = rng.choice(ordered)
                    if b != a:
                        edges[(a, b)] = edges.get((a, b), 0) + rng.randint(1, 5)
        for user in everyone:
            for _ in range(2):
                other = rng.choice(everyone)
                if other != user:
                    edges[(user, other)] = edges.get((user, other), 0) + rng.randint(1, 3)
        files[kind] = layers_dir / f"{kind}.tsv"
        files[kind].write_text(
            "\n".join(f"{a}\t{b}\t{w}" for (a, b), w in sorted(edges.items())) + "\n",
            encoding="utf-8",
        )

    memberships: set[tuple[str, str]] = set()
    for name in sorted(bot_ids):
        members = sorted(bot_ids[name])
        for li in range(2):
            list_id = f"list_{name}_{li}"
            for member in members:
                if rng.random() < 0.8:
                    memberships.add((member, list_id))
    for li in range(20):
        list_id = f"list_bg_{li}"
        for member in rng.sample(list(background_ids), min(5, len(background_ids))):
            memberships.add((member, list_id))
    files["list"] = layers_dir / "list_memberships.tsv"
    files["list"].write_text(
        "\n".join(f"{a}\t{b}" for a, b in sorted(memberships)) + "\n", encoding="utf-8"
    )
    return files
