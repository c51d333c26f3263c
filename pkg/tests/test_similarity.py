import datetime as dt
import random
import statistics

import numpy as np
import pytest

from factlens.config import AnalysisConfig
from factlens.embedding import cosine
from factlens.providers import HashedEmbeddingProvider
from factlens.similarity import DatedVector, bootstrap_median_ci, windowed_max_similarity

CFG = AnalysisConfig(seed=123)

_WORDS = (
    "election vote ballot tally recount fraud rumor claim video photo"
    " minister senate party rally speech poll result court order appeal"
).split()


def naive_windowed_max(xs, ys, window_days):
    """Independent O(|X||Y|) oracle for maxima and argmax ids."""
    out = {}
    for x in xs:
        if x.vector is None:
            continue
        best, best_id = None, None
        for y in ys:
            if y.vector is None:
                continue
            if abs((x.date - y.date).days) > window_days:
                continue
            sim = cosine(x.vector, y.vector)
            if best is None or sim > best or (sim == best and y.article_id < best_id):
                best, best_id = sim, y.article_id
        out[x.article_id] = (best_id, best)
    return out


def random_vectors(prefix, n, day_span, seed, provider):
    rnd = random.Random(seed)
    base = dt.date(2021, 3, 1)
    texts = [
        " ".join(rnd.choice(_WORDS) for _ in range(rnd.randint(3, 8))) for _ in range(n)
    ]
    matrix = provider.embed(texts)
    out = []
    for i in range(n):
        date = base + dt.timedelta(days=rnd.randint(0, day_span))
        out.append(DatedVector(f"{prefix}{i:04d}", date, matrix[i]))
    return out


def test_identity_fixture_all_match(hashed_provider):
    """Same-day copies of every X article give max_sim 1 everywhere."""
    xs = random_vectors("x", 12, 20, 5, hashed_provider)
    ys = [DatedVector(f"y{i:04d}", x.date, x.vector.copy()) for i, x in enumerate(xs)]
    res = windowed_max_similarity(xs, ys, CFG)
    # A unit vector's self-similarity is 1 up to rounding of the dot product.
    assert all(m.max_sim == pytest.approx(1.0, abs=1e-12) for m in res.per_article)
    assert res.match_rate == 1.0
    assert res.median_matched == pytest.approx(1.0, abs=1e-12)


def test_window_exclusion():
    v = np.zeros(4)
    v[0] = 1.0
    xs = [DatedVector("x1", dt.date(2021, 6, 1), v)]
    ys = [
        DatedVector("y1", dt.date(2021, 6, 17), v),
        DatedVector("y2", dt.date(2021, 5, 15), v),
    ]
    res = windowed_max_similarity(xs, ys, CFG)
    assert res.per_article[0].best_match_id is None
    assert res.per_article[0].max_sim is None
    assert res.matched_values == ()
    assert res.median_matched is None


def test_window_is_inclusive_at_fifteen_days():
    v = np.zeros(4)
    v[0] = 1.0
    xs = [DatedVector("x1", dt.date(2021, 6, 16), v)]
    ys = [DatedVector("y1", dt.date(2021, 6, 1), v)]
    res = windowed_max_similarity(xs, ys, CFG)
    assert res.per_article[0].best_match_id == "y1"
    assert res.per_article[0].max_sim == 1.0


def test_matches_brute_force_oracle_50x50(hashed_provider):
    xs = random_vectors("x", 50, 45, 11, hashed_provider)
    ys = random_vectors("y", 50, 45, 22, hashed_provider)
    res = windowed_max_similarity(xs, ys, CFG)
    oracle = naive_windowed_max(xs, ys, CFG.window_days)
    assert len(res.per_article) == len(oracle)
    for record in res.per_article:
        expected_id, expected_sim = oracle[record.article_id]
        assert record.best_match_id == expected_id
        assert record.max_sim == expected_sim  # exact float equality


def test_tie_break_smallest_id():
    v = np.zeros(4)
    v[0] = 1.0
    xs = [DatedVector("x1", dt.date(2021, 6, 1), v)]
    ys = [
        DatedVector("y9", dt.date(2021, 6, 2), v.copy()),
        DatedVector("y1", dt.date(2021, 6, 3), v.copy()),
    ]
    res = windowed_max_similarity(xs, ys, CFG)
    assert res.per_article[0].best_match_id == "y1"


def test_absent_embeddings_counted_out(hashed_provider):
    xs = random_vectors("x", 6, 10, 3, hashed_provider)
    xs.append(DatedVector("x9998", dt.date(2021, 3, 4), None))
    ys = [DatedVector(f"y{i}", x.date, x.vector.copy()) for i, x in enumerate(xs[:6])]
    res = windowed_max_similarity(xs, ys, CFG)
    assert res.n_embedded == 6
    assert len(res.per_article) == 6
    assert res.match_rate == 1.0


def test_monotone_in_y(hashed_provider):
    xs = random_vectors("x", 20, 30, 31, hashed_provider)
    ys = random_vectors("y", 20, 30, 32, hashed_provider)
    before = {
        m.article_id: m.max_sim
        for m in windowed_max_similarity(xs, ys, CFG).per_article
    }
    extra = DatedVector("y9999", dt.date(2021, 3, 15), xs[0].vector.copy())
    after = {
        m.article_id: m.max_sim
        for m in windowed_max_similarity(xs, ys + [extra], CFG).per_article
    }
    for article_id, sim_before in before.items():
        sim_after = after[article_id]
        if sim_before is None:
            continue
        assert sim_after is not None and sim_after >= sim_before


def test_empty_inputs_flagged():
    res = windowed_max_similarity([], [], CFG)
    assert res.per_article == ()
    assert "empty:no_embedded_articles" in res.flags


# -- bootstrap ---------------------------------------------------------------


def independent_bootstrap(values, resamples, fraction, level, seed):
    """Oracle: a from-scratch bootstrap on Python's stdlib RNG."""
    rnd = random.Random(seed)
    n = len(values)
    m = max(1, -(-n * fraction // 1))
    m = int(m)
    medians = sorted(
        statistics.median(rnd.choices(values, k=m)) for _ in range(resamples)
    )
    alpha = 1.0 - level
    lo = medians[int(alpha / 2 * resamples)]
    hi = medians[min(resamples - 1, int((1 - alpha / 2) * resamples))]
    return lo, hi


def test_bootstrap_constant_data_zero_width():
    lo, hi = bootstrap_median_ci([0.8] * 100, CFG)
    assert (lo, hi) == (0.8, 0.8)


def test_bootstrap_deterministic_given_seed():
    values = [i / 250 for i in range(250)]
    a = bootstrap_median_ci(values, CFG)
    b = bootstrap_median_ci(values, CFG)
    assert a == b  # bit-identical


def test_bootstrap_seed_changes_interval():
    values = list(np.random.default_rng(0).normal(size=300))
    a = bootstrap_median_ci(values, CFG, seed=1)
    b = bootstrap_median_ci(values, CFG, seed=2)
    assert a != b


def test_bootstrap_contains_analytic_median():
    values = [i / 1000 for i in range(1, 1001)]
    analytic = statistics.median(values)  # 0.5005
    lo, hi = bootstrap_median_ci(values, CFG)
    assert lo <= analytic <= hi
    # Width frozen from the independent oracle: resamples of size 200 from
    # a uniform grid put the 95% band of the median near 0.14 wide.
    assert hi - lo < 0.15
    olo, ohi = independent_bootstrap(values, 2000, 0.2, 0.95, seed=77)
    assert olo <= analytic <= ohi
    assert ohi - olo < 0.15
    assert abs((ohi - olo) - (hi - lo)) < 0.03  # both RNGs agree on the scale


def test_bootstrap_empty_is_error():
    with pytest.raises(ValueError):
        bootstrap_median_ci([], CFG)


def test_bootstrap_resample_size_floor():
    # ceil(0.2 * 2) = 1, still a valid resample.
    lo, hi = bootstrap_median_ci([0.1, 0.9], AnalysisConfig(seed=5, bootstrap_resamples=500))
    assert {lo, hi} <= {0.1, 0.9}


def test_full_result_ci_populated(hashed_provider):
    xs = random_vectors("x", 30, 10, 41, hashed_provider)
    ys = [DatedVector(f"y{i}", x.date, x.vector.copy()) for i, x in enumerate(xs)]
    res = windowed_max_similarity(xs, ys, CFG)
    assert res.ci is not None
    lo, hi = res.ci
    assert lo <= res.median_matched <= hi
