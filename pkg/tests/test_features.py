import numpy as np
import pytest
from scipy import stats as scipy_stats

from copyflock.corpus import Account, CorpusIndex
from copyflock.features import (
    compare_cdf,
    compute_features,
    creation_histogram,
    rank_features,
)
from copyflock.layers import LayerGraph
from conftest import make_tweet


def index_for(author_texts):
    tweets = []
    tid = 1
    for author, texts in author_texts.items():
        for text, extra in texts:
            tweets.append(make_tweet(tid, author, tid * 10, text, **extra))
            tid += 1
    return CorpusIndex.from_tweets(tweets)


class TestContentFeatures:
    def test_capital_words(self):
        index = index_for({"a": [("GO NOW", {}), ("ok", {})]})
        row = compute_features(index)["a"]
        assert row["capital_words_count"] == 2
        assert row["capital_words_pct"] == pytest.approx(200 / 3)

    def test_single_letter_not_capital_word(self):
        index = index_for({"a": [("I A m", {})]})
        assert compute_features(index)["a"]["capital_words_count"] == 0

    def test_digits(self):
        # 7 word tokens, of which 555 / 10:30 / 1,5 are numeric
        index = index_for({"a": [("call 555 at 10:30 or 1,5 ok", {})]})
        row = compute_features(index)["a"]
        assert row["digits_count"] == 3
        assert row["digits_pct"] == pytest.approx(300 / 7)

    def test_urls_per_tweet_avg(self):
        index = index_for(
            {"a": [("x y", {"urls": ["http://1"]}) for _ in range(4)]}
        )
        assert compute_features(index)["a"]["urls_per_tweet_avg"] == 1.0

    def test_words_per_tweet_stddev(self):
        index = index_for({"a": [("one", {}), ("one two three", {})]})
        assert compute_features(index)["a"]["words_per_tweet_stddev"] == pytest.approx(1.0)

    def test_emoji_and_emoticons(self):
        index = index_for({"a": [("hi \U0001F600\U0001F680 :) :-( xx", {})]})
        row = compute_features(index)["a"]
        assert row["emoji_count"] == 2
        assert row["emoticon_count"] == 2

    def test_unique_retweet_hashtags(self):
        index = index_for(
            {
                "a": [
                    ("rt", {"hashtags": ["One", "two"], "is_retweet": True}),
                    ("rt", {"hashtags": ["one"], "is_retweet": True}),
                    ("not rt", {"hashtags": ["three"]}),
                ]
            }
        )
        assert compute_features(index)["a"]["unique_retweet_hashtags"] == 2

    def test_account_without_tweets_gets_nulls(self):
        index = index_for({"a": [("x y", {})]})
        accounts = {"ghost": Account("ghost", created_at=123)}
        table = compute_features(index, accounts)
        assert table["ghost"]["capital_words_count"] is None
        assert table["ghost"]["created_at"] == 123.0

    def test_permutation_invariance(self):
        texts = [("alpha Beta", {}), ("GAMMA 42", {}), ("x :) y", {})]
        t1 = compute_features(index_for({"a": texts}))["a"]
        t2 = compute_features(index_for({"a": list(reversed(texts))}))["a"]
        assert t1 == t2


class TestGraphFeatures:
    def follow_layer(self, edges):
        return LayerGraph("follow", True, False, {e: 1.0 for e in edges})

    def test_friends_followers_jaccard_identical(self):
        layer = self.follow_layer([("a", "x"), ("a", "y"), ("x", "a"), ("y", "a")])
        index = index_for({"a": [("t t", {})]})
        table = compute_features(index, layers={"follow": layer})
        assert table["a"]["friends_followers_jaccard"] == 1.0

    def test_friends_followers_jaccard_partial(self):
        layer = self.follow_layer([("a", "x"), ("a", "y"), ("x", "a")])
        index = index_for({"a": [("t t", {})]})
        table = compute_features(index, layers={"follow": layer})
        assert table["a"]["friends_followers_jaccard"] == pytest.approx(0.5)

    def test_weighted_degrees(self):
        quote = LayerGraph("quote", True, True, {("a", "b"): 3.0, ("c", "a"): 2.0})
        index = index_for({"a": [("t t", {})]})
        table = compute_features(index, layers={"quote": quote})
        row = table["a"]
        assert row["quotes_out_degree"] == 1
        assert row["quotes_in_degree"] == 1
        assert row["quotes_out_weight"] == 3.0
        assert row["quotes_in_weight"] == 2.0

    def test_features_absent_without_layer(self):
        index = index_for({"a": [("t t", {})]})
        assert "quotes_out_degree" not in compute_features(index)["a"]


class TestCompareCdf:
    def table_from(self, values):
        return {f"acct{i}": {"f": float(v)} for i, v in enumerate(values)}

    def sets(self, n_a, n_b):
        return (
            {f"acct{i}" for i in range(n_a)},
            {f"acct{i}" for i in range(n_a, n_a + n_b)},
        )

    def test_identical_sets_ks_zero(self):
        table = self.table_from([1, 2, 3])
        accounts = set(table)
        cmp = compare_cdf(table, "f", accounts, accounts)
        assert cmp.ks == 0.0

    def test_full_separation_ks_one(self):
        table = self.table_from([0, 0, 0, 1, 1, 1])
        a, b = self.sets(3, 3)
        assert compare_cdf(table, "f", a, b).ks == 1.0

    def test_known_one_third(self):
        table = self.table_from([1, 2, 3, 2, 3, 4])
        a, b = self.sets(3, 3)
        assert compare_cdf(table, "f", a, b).ks == pytest.approx(1 / 3)

    def test_matches_scipy(self):
        rng = np.random.default_rng(0)
        xs = rng.normal(size=40)
        ys = rng.normal(loc=0.7, size=25)
        table = {f"a{i}": {"f": float(v)} for i, v in enumerate(xs)}
        table.update({f"b{i}": {"f": float(v)} for i, v in enumerate(ys)})
        a = {k for k in table if k.startswith("a")}
        b = {k for k in table if k.startswith("b")}
        ours = compare_cdf(table, "f", a, b).ks
        ref = scipy_stats.ks_2samp(xs, ys).statistic
        assert ours == pytest.approx(ref)

    def test_symmetry(self):
        table = self.table_from([1, 5, 2, 8, 3, 9])
        a, b = self.sets(3, 3)
        assert compare_cdf(table, "f", a, b).ks == compare_cdf(table, "f", b, a).ks

    def test_cdf_shape(self):
        table = self.table_from([3, 1, 2, 2, 5, 4])
        a, b = self.sets(3, 3)
        cmp = compare_cdf(table, "f", a, b)
        for cdf in (cmp.cdf_a, cmp.cdf_b):
            fracs = [f for _, f in cdf]
            values = [v for v, _ in cdf]
            assert values == sorted(values)
            assert all(y >= x for x, y in zip(fracs, fracs[1:]))
            assert fracs[-1] == pytest.approx(1.0)

    def test_empty_side_rejected(self):
        table = self.table_from([1, 2])
        with pytest.raises(ValueError):
            compare_cdf(table, "f", {"acct0"}, {"nope"})

    def test_nulls_excluded(self):
        table = {"a": {"f": 1.0}, "b": {"f": None}, "c": {"f": 2.0}}
        cmp = compare_cdf(table, "f", {"a", "b"}, {"c"})
        assert cmp.cdf_a == ((1.0, 1.0),)


class TestRankFeatures:
    def test_order_and_tiebreak(self):
        table = {
            "a1": {"sep": 0.0, "same": 1.0, "alsosame": 1.0},
            "a2": {"sep": 0.0, "same": 2.0, "alsosame": 2.0},
            "b1": {"sep": 1.0, "same": 1.0, "alsosame": 1.0},
            "b2": {"sep": 1.0, "same": 2.0, "alsosame": 2.0},
        }
        ranked = rank_features(table, {"a1", "a2"}, {"b1", "b2"})
        assert ranked[0] == ("sep", 1.0)
        assert [name for name, _ in ranked[1:]] == ["alsosame", "same"]

    def test_single_feature(self):
        table = {"a": {"f": 1.0}, "b": {"f": 2.0}}
        assert len(rank_features(table, {"a"}, {"b"})) == 1

    def test_error_propagates(self):
        table = {"a": {"f": 1.0}, "b": {"f": None}}
        with pytest.raises(ValueError):
            rank_features(table, {"a"}, {"b"})


class TestCreationHistogram:
    def accounts(self, dates):
        return {f"u{i}": Account(f"u{i}", created_at=d) for i, d in enumerate(dates)}

    def test_same_day_single_bin(self):
        accounts = self.accounts([1000, 1500, 2000])
        hist = creation_histogram(accounts, set(accounts), bin_days=7)
        assert len(hist.bins) == 1
        assert hist.total == 3

    def test_empty_bots(self):
        assert creation_histogram(self.accounts([1000]), set(), bin_days=7).bins == ()

    def test_two_spikes_400_days_apart(self):
        day = 86_400
        dates = [0, day, 2 * day] + [400 * day, 401 * day]
        accounts = self.accounts(dates)
        hist = creation_histogram(accounts, set(accounts), bin_days=7)
        nonzero = [b for b in hist.bins if b[2] > 0]
        assert len(nonzero) == 2
        assert nonzero[0][2] == 3 and nonzero[1][2] == 2
        assert hist.total == 5

    def test_conservation_with_unknown_dates(self):
        accounts = self.accounts([100, 200])
        accounts["nodate"] = Account("nodate", created_at=None)
        hist = creation_histogram(accounts, set(accounts), bin_days=1)
        assert hist.total == 2

    def test_bad_bin_width(self):
        with pytest.raises(ValueError):
            creation_histogram({}, set(), bin_days=0)
