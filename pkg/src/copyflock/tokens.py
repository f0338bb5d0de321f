"""Tweet tokenization and Jaccard similarity between token sets.

URLs, hashtags and @-mentions stay atomic, ordinary words are lowercased
and stripped of surrounding punctuation, emoji become single-character
tokens. Two tweets are compared by the Jaccard ratio of their token sets.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import AbstractSet, Iterable

__all__ = ["TokenSet", "tokenize", "jaccard", "word_tokens", "is_emoji"]

_URL_RE = re.compile(r"(?:https?://|www\.)\S+", re.IGNORECASE)
_URL_TRAIL = ".,;:!?)]}>'\""
_LEAD_PUNCT = re.compile(r"^[^\w#@]+")
_TRAIL_PUNCT = re.compile(r"\W+$")
_EDGE_PUNCT = re.compile(r"^\W+|\W+$")

# Coarse emoji blocks; every codepoint inside one of them becomes its own token.
_EMOJI_RANGES = (
    (0x1F1E6, 0x1F1FF),
    (0x1F300, 0x1F5FF),
    (0x1F600, 0x1F64F),
    (0x1F680, 0x1F6FF),
    (0x1F900, 0x1F9FF),
    (0x1FA70, 0x1FAFF),
    (0x2600, 0x26FF),
    (0x2700, 0x27BF),
)


def is_emoji(ch: str) -> bool:
    cp = ord(ch)
    return any(lo <= cp <= hi for lo, hi in _EMOJI_RANGES)


@dataclass(frozen=True)
class TokenSet:
    """Bag-of-words of one tweet, with set semantics."""

    tokens: frozenset[str]
    source_tweet_id: int | None = None

    def __len__(self) -> int:
        return len(self.tokens)

    def __iter__(self):
        return iter(self.tokens)


def _split_emoji(chunk: str) -> tuple[list[str], str]:
    """Pull emoji codepoints out of a whitespace chunk."""
    emoji = [ch for ch in chunk if is_emoji(ch)]
    if not emoji:
        return [], chunk
    rest = "".join(ch for ch in chunk if not is_emoji(ch))
    return emoji, rest


def tokenize(
    text: str,
    hashtags: Iterable[str] = (),
    urls: Iterable[str] = (),
    source_tweet_id: int | None = None,
    lowercase: bool = True,
) -> TokenSet:
    """Build the token set for one tweet.

    ``hashtags`` and ``urls`` come from the tweet's structured fields and are
    added as atomic tokens; inline occurrences in the text are detected as
    well, so either source is sufficient. URLs keep their case (paths are
    case-sensitive), everything else is lowercased unless ``lowercase`` is
    off. Word tokens lose leading/trailing punctuation but keep internal
    apostrophes and hyphens.
    """
    out: set[str] = set()

    for url in urls:
        url = url.strip()
        if url:
            out.add(url)
    for tag in hashtags:
        tag = tag.strip().lstrip("#")
        if tag:
            out.add("#" + (tag.lower() if lowercase else tag))

    def grab_url(match: re.Match) -> str:
        out.add(match.group(0).rstrip(_URL_TRAIL))
        return " "

    text = _URL_RE.sub(grab_url, text)

    for chunk in text.split():
        emoji, chunk = _split_emoji(chunk)
        out.update(emoji)
        chunk = _LEAD_PUNCT.sub("", chunk)
        if not chunk:
            continue
        if chunk[0] in "#@":
            marker, body = chunk[0], chunk[1:].lstrip("#@")
            body = _TRAIL_PUNCT.sub("", body)
            if body:
                out.add(marker + (body.lower() if lowercase else body))
            continue
        word = _EDGE_PUNCT.sub("", chunk)
        if word:
            out.add(word.lower() if lowercase else word)

    return TokenSet(frozenset(out), source_tweet_id)


def word_tokens(text: str) -> list[str]:
    """Plain word tokens of a text, in order and with case preserved.

    URLs, hashtags, mentions and emoji are dropped; this list feeds the
    per-account content features (capital words, digits, words per tweet),
    where multiplicity matters and entities would only add noise.
    """
    text = _URL_RE.sub(" ", text)
    words = []
    for chunk in text.split():
        _, chunk = _split_emoji(chunk)
        chunk = _LEAD_PUNCT.sub("", chunk)
        if not chunk or chunk[0] in "#@":
            continue
        word = _EDGE_PUNCT.sub("", chunk)
        if word:
            words.append(word)
    return words


def _as_set(value: TokenSet | AbstractSet[str]) -> frozenset[str] | AbstractSet[str]:
    return value.tokens if isinstance(value, TokenSet) else value


def jaccard(a: TokenSet | AbstractSet[str], b: TokenSet | AbstractSet[str]) -> float:
    """|a ∩ b| / |a ∪ b|, with the both-empty case pinned to 0.0.

    The zero convention keeps empty tweets from ever forming copy events.
    """
    sa, sb = _as_set(a), _as_set(b)
    if not sa and not sb:
        return 0.0
    inter = len(sa & sb)
    if inter == 0:
        return 0.0
    return inter / len(sa | sb)
