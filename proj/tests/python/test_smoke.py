"""End-to-end checks of the python bindings against a tiny in-memory corpus."""

import math

import pytest

import engage


def two_topic_corpus():
    kinds = engage.InteractionKindSet(["like", "retweet"], 0)
    corpus = engage.RawCorpus()
    corpus.kinds = kinds
    corpus.topics = [
        engage.TopicMeta("A", "2021-01-04", "Topic A"),
        engage.TopicMeta("B", "2021-01-06", "Topic B"),
    ]
    corpus.users = [
        engage.UserProfile("ua", 1000, 0.2),
        engage.UserProfile("ub", 500, 0.6),
    ]
    posts = [engage.Post("A", "ua", "2021-01-05T00:00:00Z", [40, 12])]
    posts += [
        engage.Post("A", "ua", "2021-01-05T01:00:00Z", [0, 0]) for _ in range(9)
    ]
    posts += [engage.Post("B", "ub", "2021-01-07T00:00:00Z", [5, 3])]
    posts += [
        engage.Post("B", "ub", "2021-01-07T01:00:00Z", [0, 0]) for _ in range(3)
    ]
    corpus.posts = posts
    corpus.prices = {
        "A": engage.PriceSeries(
            "A", [("2021-02-03", 100.0), ("2021-03-05", 110.0)]
        ),
        "B": engage.PriceSeries(
            "B", [("2021-02-05", 50.0), ("2021-03-07", 45.0)]
        ),
    }
    return corpus


def test_closed_form_fit_matches_hand_computation():
    dataset = engage.build_dataset(two_topic_corpus())
    assert dataset.n() == 60
    report = engage.fit_closed_form(dataset)
    assert report.model.beta["retweet"] == pytest.approx(1.0 / 3.0, abs=1e-15)
    assert report.model.beta["like"] == 1.0
    assert report.model.alpha["A"] == pytest.approx(0.0039, abs=1e-15)
    assert report.model.alpha["B"] == pytest.approx(0.003, abs=1e-15)
    assert report.method == "closed_form"
    assert report.excluded_topics == []


def test_numeric_fit_agrees_with_closed_form():
    dataset = engage.build_dataset(two_topic_corpus())
    closed = engage.fit_closed_form(dataset)
    numeric = engage.fit_numeric(dataset)
    assert numeric.converged
    for topic, alpha in closed.model.alpha.items():
        assert numeric.model.alpha[topic] == pytest.approx(alpha, rel=1e-8)


def test_log_likelihood_and_json_round_trip():
    dataset = engage.build_dataset(two_topic_corpus())
    report = engage.fit_closed_form(dataset)
    value, impossible = engage.log_likelihood(dataset, report.model)
    assert not impossible
    assert value < 0
    text = report.model.to_json()
    assert '"reference_kind": "like"' in text
    assert '"retweet"' in text


def test_features_and_returns():
    corpus = two_topic_corpus()
    table = engage.build_feature_table(corpus, "in_sample")
    assert table.mode == "in_sample"
    row = table.rows["A"]
    assert row.tweet_volume == 10
    assert row.mean_bot_probability == pytest.approx(0.2)
    ret = engage.compute_return(corpus.prices["A"], "2021-01-04", 1)
    assert ret == pytest.approx(10.0)
    assert engage.compute_return(corpus.prices["B"], "2021-01-06", 1) == pytest.approx(-10.0)


def test_rank_statistics():
    assert engage.roc_auc([1.0, 2.0, 3.0, 4.0], [0, 0, 1, 1]) == 1.0
    assert engage.spearman([1.0, 2.0, 3.0], [10.0, 20.0, 30.0]) == 1.0
    assert engage.spearman([1.0, 2.0, 3.0], [30.0, 20.0, 10.0]) == -1.0


def test_sampling_round_trip():
    model = engage.EngagementModel(
        "like", {"like": 1.0, "retweet": 0.4}, {"T": 0.001}
    )
    profiles = [engage.UserProfile(f"u{i}", 1000, None) for i in range(50)]
    plan = {"T": {p.user_id: 20 for p in profiles}}
    dataset = engage.sample_synthetic(model, profiles, plan, 7)
    report = engage.fit_closed_form(dataset)
    assert report.model.alpha["T"] == pytest.approx(0.001, rel=0.2)
    again = engage.sample_synthetic(model, profiles, plan, 7)
    assert again.n() == dataset.n()


def test_errors_surface_as_engage_error():
    with pytest.raises(engage.EngageError):
        engage.quartile_thresholds([1.0, 2.0])  # needs at least 4
    with pytest.raises(engage.EngageError):
        engage.spearman([1.0, 1.0, 1.0], [1.0, 2.0, 3.0])  # constant input
    with pytest.raises(engage.EngageError):
        engage.Date("2021-02-30")


def test_date_arithmetic():
    d = engage.Date("2021-03-06")
    assert str(d.plus_days(30)) == "2021-04-05"
    assert engage.Date("2021-03-06") == engage.Date("2021-03-06")
