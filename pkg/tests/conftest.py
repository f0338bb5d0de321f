import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from copyflock.corpus import CorpusIndex, Tweet


def make_tweet(tweet_id, author, ts, text, hashtags=(), urls=(), is_retweet=False):
    return Tweet(tweet_id, author, ts, text, tuple(hashtags), tuple(urls), None, is_retweet)


@pytest.fixture
def simple_copy_corpus():
    """Three users posting near-identical six-token tweets within a minute."""
    text = "alpha beta gamma delta epsilon"
    tweets = [
        make_tweet(1, "u1", 0, text, urls=["http://a.co"]),
        make_tweet(2, "u2", 60, text, urls=["http://b.co"]),
        make_tweet(3, "u3", 120, text, urls=["http://c.co"]),
        make_tweet(4, "u4", 180, "completely unrelated words go here now"),
    ]
    return CorpusIndex.from_tweets(tweets)
